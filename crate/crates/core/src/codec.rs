//! The 22-bit binary substitution, its decoder, and the conjugacy map `h`.
//!
//! Every symbol is replaced by a 22-bit block:
//!
//! ```text
//! a_i  ->  110100 (00)^(7-i) 11 (00)^i
//! t_i  ->  11010011 (00)^(6-i) 11 (00)^i
//! #    ->  (11)^5 01 (11)^5
//! ```
//!
//! No block occurs at a nonzero offset inside the concatenation of two
//! blocks, so a long enough binary window fixes the block grid (its
//! *phase*). `h` rewrites each block `ρ(b)` followed by `ρ(c)` into
//! `ρ(g_i(b c))`, using one block of lookahead.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alphabet::{try_for_each_word, BinaryWord, Symbol, Word, ALPHABET_SIZE};
use crate::blockcode::{apply_rule_into, generator};
use crate::error::{precondition, Error, Result};
use crate::par::{map_tasks, sweep, sweep_words, Exec};
use crate::report::Report;
use crate::subshift::{is_admissible, ForbiddenSet, DEFAULT_BUDGET};

/// Length of every code block.
pub const BLOCK: usize = 22;

const FULL: u32 = (1 << BLOCK) - 1;
const ALL_ENTRIES: u16 = (1 << ALPHABET_SIZE) - 1;

/// Offset of a binary window relative to the block grid: bit 0 of a window
/// at phase `n` is bit `n` of some block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Phase(u8);

impl Phase {
    pub fn new(n: usize) -> Result<Phase> {
        if n < BLOCK {
            Ok(Phase(n as u8))
        } else {
            precondition(format!("phase {n} outside 0..{BLOCK}"))
        }
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    /// Length of the partial block before the first grid boundary.
    pub fn lead(self) -> usize {
        (BLOCK - self.value()) % BLOCK
    }

    pub fn all() -> impl Iterator<Item = Phase> {
        (0..BLOCK as u8).map(Phase)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The 13 code blocks, stored most-significant-bit first (bit 21 of the
/// integer is position 0 of the block).
#[derive(Clone, PartialEq, Eq)]
pub struct RhoTable {
    entries: [u32; ALPHABET_SIZE],
    /// `columns[pos][bit]`: entries having `bit` at position `pos`.
    columns: [[u16; 2]; BLOCK],
}

fn bits_of(text: &str) -> u32 {
    debug_assert_eq!(text.len(), BLOCK);
    text.bytes().fold(0, |acc, b| acc << 1 | (b == b'1') as u32)
}

/// The printed substitution table.
pub fn make_rho() -> RhoTable {
    let mut entries = [0u32; ALPHABET_SIZE];
    for i in 1..=6usize {
        let plain = format!("110100{}11{}", "00".repeat(7 - i), "00".repeat(i));
        let tilde = format!("11010011{}11{}", "00".repeat(6 - i), "00".repeat(i));
        entries[Symbol::plain(i as u8).code()] = bits_of(&plain);
        entries[Symbol::tilde(i as u8).code()] = bits_of(&tilde);
    }
    entries[Symbol::HASH.code()] = bits_of(&format!("{}01{}", "11".repeat(5), "11".repeat(5)));
    RhoTable::from_bits(entries).expect("printed table is valid")
}

#[inline]
fn word_value(bits: &[u8]) -> u32 {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as u32)
}

/// One decoding of a binary window at a consistent phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub phase: Phase,
    /// Symbols of the complete blocks.
    pub word: Word,
    /// Bits before the first complete block.
    pub lead: usize,
    /// Bits after the last complete block.
    pub trail: usize,
}

/// Result of the synchronization-window search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncWindow {
    /// Least `L` such that every length-`L` factor has exactly one phase.
    pub length: usize,
    /// A factor of length `L - 1` admitting at least two phases.
    pub certificate: BinaryWord,
    /// Word whose encoding contains the certificate, and its start offset.
    pub source: Word,
    pub offset: usize,
    /// Number of encoded words swept.
    pub words: u64,
}

impl RhoTable {
    /// Builds a table from 22-bit integers; entries must be distinct.
    pub fn from_bits(entries: [u32; ALPHABET_SIZE]) -> Result<RhoTable> {
        if let Some(e) = entries.iter().find(|&&e| e > FULL) {
            return precondition(format!("entry {e:#x} is longer than {BLOCK} bits"));
        }
        for a in 0..ALPHABET_SIZE {
            for b in a + 1..ALPHABET_SIZE {
                if entries[a] == entries[b] {
                    return precondition(format!(
                        "entries for {} and {} coincide",
                        Symbol::from_code(a),
                        Symbol::from_code(b)
                    ));
                }
            }
        }
        let mut columns = [[0u16; 2]; BLOCK];
        for (code, &e) in entries.iter().enumerate() {
            for (pos, col) in columns.iter_mut().enumerate() {
                let bit = (e >> (BLOCK - 1 - pos)) & 1;
                col[bit as usize] |= 1 << code;
            }
        }
        Ok(RhoTable { entries, columns })
    }

    pub fn from_words(entries: &[BinaryWord]) -> Result<RhoTable> {
        if entries.len() != ALPHABET_SIZE {
            return precondition(format!("expected {ALPHABET_SIZE} entries, got {}", entries.len()));
        }
        let mut bits = [0u32; ALPHABET_SIZE];
        for (k, e) in entries.iter().enumerate() {
            if e.len() != BLOCK {
                return precondition(format!("entry {k} has length {}, not {BLOCK}", e.len()));
            }
            bits[k] = word_value(e);
        }
        RhoTable::from_bits(bits)
    }

    /// The same table with bit `pos` of the entry for `symbol` flipped.
    pub fn with_flipped_bit(&self, symbol: Symbol, pos: usize) -> Result<RhoTable> {
        if pos >= BLOCK {
            return precondition(format!("bit position {pos} outside 0..{BLOCK}"));
        }
        let mut entries = self.entries;
        entries[symbol.code()] ^= 1 << (BLOCK - 1 - pos);
        RhoTable::from_bits(entries)
    }

    pub fn entry(&self, s: Symbol) -> BinaryWord {
        let e = self.entries[s.code()];
        BinaryWord::from_bits_unchecked((0..BLOCK).map(|p| ((e >> (BLOCK - 1 - p)) & 1) as u8).collect())
    }

    /// `entry(s)[start, start + len)` as an integer.
    #[inline]
    fn slice(&self, code: usize, start: usize, len: usize) -> u32 {
        if len == 0 {
            return 0;
        }
        (self.entries[code] >> (BLOCK - start - len)) & ((1u32 << len) - 1)
    }

    /// Symbol whose block equals `bits` exactly.
    fn block_symbol(&self, bits: &[u8]) -> Option<Symbol> {
        let v = word_value(bits);
        self.entries.iter().position(|&e| e == v).map(Symbol::from_code)
    }

    pub fn encode(&self, w: &[Symbol]) -> BinaryWord {
        let mut bits = Vec::with_capacity(BLOCK * w.len());
        for s in w {
            let e = self.entries[s.code()];
            bits.extend((0..BLOCK).map(|p| ((e >> (BLOCK - 1 - p)) & 1) as u8));
        }
        BinaryWord::from_bits_unchecked(bits)
    }

    /// Checks that no block equals `(ρ(a') ρ(a''))[n, n + 22)` for
    /// `1 <= n < 22`, over all triples `(a, a', a'')`.
    pub fn check_unique_readability(&self) -> Report {
        let mut comparisons = 0u64;
        for a in 0..ALPHABET_SIZE {
            for b in 0..ALPHABET_SIZE {
                for c in 0..ALPHABET_SIZE {
                    let pair = (self.entries[b] as u64) << BLOCK | self.entries[c] as u64;
                    for n in 1..BLOCK {
                        comparisons += 1;
                        let window = (pair >> (BLOCK - n)) as u32 & FULL;
                        if window == self.entries[a] {
                            return Report::fail(
                                "unique-readability",
                                comparisons,
                                format!(
                                    "ρ({}) = (ρ({})ρ({}))[{n},{})",
                                    Symbol::from_code(a),
                                    Symbol::from_code(b),
                                    Symbol::from_code(c),
                                    n + BLOCK
                                ),
                            );
                        }
                    }
                }
            }
        }
        Report::pass(
            "unique-readability",
            comparisons,
            format!("{comparisons} comparisons, no block at a nonzero offset"),
        )
    }

    /// Checks `ρ(a_i)[m,22) = ρ(t_i)[m,22)` for every `i` and `8 <= m < 22`.
    pub fn check_suffix_agreement(&self) -> Report {
        let mut checked = 0;
        for i in 1..=6u8 {
            let (p, t) = (Symbol::plain(i).code(), Symbol::tilde(i).code());
            for m in 8..BLOCK {
                checked += 1;
                if self.slice(p, m, BLOCK - m) != self.slice(t, m, BLOCK - m) {
                    return Report::fail(
                        "suffix-agreement",
                        checked,
                        format!("ρ(a{i})[{m},22) = {} but ρ(t{i})[{m},22) = {}",
                            self.entry(Symbol::plain(i)).factor(m, BLOCK),
                            self.entry(Symbol::tilde(i)).factor(m, BLOCK)),
                    );
                }
            }
        }
        Report::pass("suffix-agreement", checked, format!("{checked} suffix pairs agree"))
    }

    /// Checks that `ρ(a_i)` and `ρ(t_i)` differ at both positions 6 and 7.
    pub fn check_prefix_discrimination(&self) -> Report {
        for i in 1..=6u8 {
            let (p, t) = (Symbol::plain(i).code(), Symbol::tilde(i).code());
            for pos in [6, 7] {
                if self.slice(p, pos, 1) == self.slice(t, pos, 1) {
                    return Report::fail(
                        "prefix-discrimination",
                        i as u64,
                        format!("ρ(a{i}) and ρ(t{i}) agree at position {pos}"),
                    );
                }
            }
        }
        Report::pass("prefix-discrimination", 6, "positions 6 and 7 separate a_i from t_i for every i")
    }

    /// Checks that for `1 <= n < 8` the suffixes `ρ(b)[n,22)` of all 13
    /// blocks are pairwise distinct, so a leading partial block at such a
    /// phase names its symbol.
    pub fn check_leading_uniqueness(&self) -> Report {
        let mut checked = 0;
        for n in 1..8 {
            for a in 0..ALPHABET_SIZE {
                for b in a + 1..ALPHABET_SIZE {
                    checked += 1;
                    if self.slice(a, n, BLOCK - n) == self.slice(b, n, BLOCK - n) {
                        return Report::fail(
                            "leading-uniqueness",
                            checked,
                            format!(
                                "ρ({})[{n},22) = ρ({})[{n},22)",
                                Symbol::from_code(a),
                                Symbol::from_code(b)
                            ),
                        );
                    }
                }
            }
        }
        Report::pass("leading-uniqueness", checked, format!("{checked} suffix pairs distinct for phases 1..7"))
    }

    /// Whether `y` fits the grid at phase `n`: every piece between grid
    /// boundaries equals the corresponding slice of some block.
    fn fits_phase(&self, y: &[u8], n: usize) -> bool {
        let mut start = 0;
        let mut offset = n;
        while start < y.len() {
            let len = (BLOCK - offset).min(y.len() - start);
            let piece = word_value(&y[start..start + len]);
            if !(0..ALPHABET_SIZE).any(|c| self.slice(c, offset, len) == piece) {
                return false;
            }
            start += len;
            offset = 0;
        }
        true
    }

    /// All phases at which `y` parses (boundary pieces are matched against
    /// any block).
    pub fn phases(&self, y: &[u8]) -> Vec<Phase> {
        Phase::all().filter(|p| self.fits_phase(y, p.value())).collect()
    }

    pub fn decode(&self, y: &[u8]) -> Vec<Decoded> {
        self.phases(y)
            .into_iter()
            .map(|phase| {
                let lead = phase.lead().min(y.len());
                let full = (y.len() - lead) / BLOCK;
                let word = (0..full)
                    .map(|k| {
                        let at = lead + k * BLOCK;
                        self.block_symbol(&y[at..at + BLOCK]).expect("phase fits, so blocks decode")
                    })
                    .collect();
                Decoded { phase, word, lead, trail: y.len() - lead - full * BLOCK }
            })
            .collect()
    }

    /// Length of the longest window of `y` starting at `start` that fits the
    /// grid whose block position at `start` is `pos`.
    fn fitting_run(&self, y: &[u8], start: usize, mut pos: usize) -> usize {
        let mut alive = ALL_ENTRIES;
        for (t, &bit) in y.iter().enumerate().skip(start) {
            alive &= self.columns[pos][bit as usize];
            if alive == 0 {
                return t - start;
            }
            pos += 1;
            if pos == BLOCK {
                pos = 0;
                alive = ALL_ENTRIES;
            }
        }
        y.len() - start
    }

    /// Least `L` such that every length-`L` factor of every encoding of a
    /// word of length 4 has exactly one phase, with a length-`(L - 1)`
    /// factor that has two.
    pub fn sync_window(&self) -> SyncWindow {
        self.sync_window_with(Exec::default(), 4)
    }

    pub fn sync_window_with(&self, exec: Exec, word_len: usize) -> SyncWindow {
        let letters: Vec<Symbol> = Symbol::all().collect();
        // (ambiguous length, source word, offset); ties keep the first found.
        let per_first = map_tasks(exec, ALPHABET_SIZE, |first| {
            let mut best: (usize, Vec<Symbol>, usize) = (0, Vec::new(), 0);
            let mut words = 0u64;
            let prefix = [Symbol::from_code(first)];
            let _ = crate::alphabet::try_for_each_extension::<()>(
                &letters,
                &prefix[..word_len.min(1)],
                word_len.saturating_sub(1),
                &mut |u| {
                    words += 1;
                    let y = self.encode(u);
                    for start in 0..y.len() {
                        for pos in 0..BLOCK {
                            if pos == start % BLOCK {
                                continue;
                            }
                            let run = self.fitting_run(&y, start, pos);
                            if run > best.0 {
                                best = (run, u.to_vec(), start);
                            }
                        }
                    }
                    Ok(())
                },
            );
            (best, words)
        });
        let words = per_first.iter().map(|(_, w)| w).sum();
        let ((ambiguous, source, offset), _) = per_first
            .into_iter()
            .fold(((0, Vec::new(), 0), 0), |acc, cur| if cur.0 .0 > acc.0 .0 { cur } else { acc });
        let source = Word::new(source);
        let encoded = self.encode(&source);
        SyncWindow {
            length: ambiguous + 1,
            certificate: encoded.factor(offset, offset + ambiguous),
            source,
            offset,
            words,
        }
    }

    /// Checks by direct phase computation that every length-`len` factor of
    /// every encoding of a length-`word_len` word has exactly one phase.
    pub fn check_phase_uniqueness(&self, exec: Exec, len: usize, word_len: usize) -> Report {
        let letters: Vec<Symbol> = Symbol::all().collect();
        let name = format!("phase-uniqueness len={len}");
        if len > BLOCK * word_len {
            return Report::skip(name, format!("encodings of length-{word_len} words are shorter than {len}"));
        }
        let outcome = sweep_words(exec, &letters, word_len, word_len, |u| {
            let y = self.encode(u);
            for s in 0..=y.len() - len {
                let ps = self.phases(&y[s..s + len]);
                if ps.len() != 1 {
                    return Err(format!(
                        "factor {} of encode([{}]) at offset {s} has phases {ps:?}",
                        y.factor(s, s + len),
                        Word::from(u)
                    ));
                }
            }
            Ok(())
        });
        let windows = (BLOCK * word_len + 1 - len) as u64;
        Report::from_sweep(name, outcome.map(|n| n * windows), |n| format!("{n} factors, each with one phase"))
    }

    /// The map `h` built from `g_i` on a window at phase `phase` that ends on
    /// a block boundary and contains at least two complete blocks. The last
    /// block is lookahead only, so the output is 22 bits shorter.
    pub fn apply_h(&self, y: &[u8], phase: Phase, i: u8) -> Result<BinaryWord> {
        if !(1..=6).contains(&i) {
            return precondition(format!("generator index {i} outside 1..6"));
        }
        let n = phase.value();
        let lead = phase.lead();
        if y.len() < lead || !(y.len() - lead).is_multiple_of(BLOCK) {
            return precondition(format!(
                "window of length {} at phase {n} does not end on a block boundary",
                y.len()
            ));
        }
        let full = (y.len() - lead) / BLOCK;
        if full < 2 {
            return precondition(format!("need at least 2 complete blocks, found {full}"));
        }
        let blocks: Vec<Symbol> = (0..full)
            .map(|k| {
                let at = lead + k * BLOCK;
                self.block_symbol(&y[at..at + BLOCK])
                    .ok_or_else(|| Error::Decode(format!("bits [{at},{}) are not a code block", at + BLOCK)))
            })
            .collect::<Result<_>>()?;
        let rule = generator(i);
        let mut out = Vec::with_capacity(y.len() - BLOCK);
        if lead > 0 {
            let head = word_value(&y[..lead]);
            let candidates: Vec<usize> =
                (0..ALPHABET_SIZE).filter(|&c| self.slice(c, n, lead) == head).collect();
            if candidates.is_empty() {
                return Err(Error::Decode(format!("leading {lead} bits are not the tail of a code block")));
            }
            if n < 8 {
                let [b] = candidates[..] else {
                    return Err(Error::Decode(format!(
                        "leading {lead} bits at phase {n} fit {} blocks",
                        candidates.len()
                    )));
                };
                let image = self.entry(rule.apply(Symbol::from_code(b), blocks[0]));
                out.extend_from_slice(&image[n..]);
            } else {
                // a_i and t_i share these tails, and g_i only swaps a_i with t_i
                out.extend_from_slice(&y[..lead]);
            }
        }
        for pair in blocks.windows(2) {
            out.extend_from_slice(&self.entry(rule.apply(pair[0], pair[1])));
        }
        Ok(BinaryWord::from_bits_unchecked(out))
    }

    /// `h(ρ(u)) = ρ(g_i(u))` at phase 0 for every word `u` with
    /// `2 <= |u| <= max_len`.
    pub fn verify_intertwining(&self, i: u8, max_len: usize) -> Result<Report> {
        self.verify_intertwining_with(Exec::default(), i, max_len)
    }

    pub fn verify_intertwining_with(&self, exec: Exec, i: u8, max_len: usize) -> Result<Report> {
        if max_len < 2 {
            return precondition("max_len must be at least 2");
        }
        let rule = generator(i);
        let letters: Vec<Symbol> = Symbol::all().collect();
        let outcome = sweep_words(exec, &letters, 2, max_len, |u| {
            let mut image = Vec::new();
            apply_rule_into(rule, u, &mut image);
            let expected = self.encode(&image);
            match self.apply_h(&self.encode(u), Phase(0), i) {
                Ok(got) if got == expected => Ok(()),
                Ok(got) => Err(format!("u = [{}]: h(ρ(u)) = {got}, ρ(g{i}(u)) = {expected}", Word::from(u))),
                Err(e) => Err(format!("u = [{}]: {e}", Word::from(u))),
            }
        });
        Ok(Report::from_sweep(format!("intertwining g{i}"), outcome, |n| {
            format!("{n} words, 2 <= |u| <= {max_len}")
        }))
    }

    /// `h(h(y)) = y[0, |y| - 44)` on phase-`n` tails of encodings of seeded
    /// random words of length 4..=8, for every phase.
    pub fn verify_h_inverse(&self, i: u8, samples: usize, seed: u64) -> Result<Report> {
        if samples == 0 {
            return precondition("samples must be at least 1");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let name = format!("h-inverse g{i}");
        let (mut checked, mut skipped) = (0u64, 0u64);
        for _ in 0..samples {
            let len = rng.gen_range(4..=8);
            let u: Word = (0..len).map(|_| Symbol::from_code(rng.gen_range(0..ALPHABET_SIZE))).collect();
            let encoded = self.encode(&u);
            for phase in Phase::all() {
                let y = &encoded[phase.value()..];
                let full = (y.len() - phase.lead()) / BLOCK;
                if full < 3 {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let twice = self.apply_h(y, phase, i).and_then(|once| self.apply_h(&once, phase, i));
                match twice {
                    Ok(back) if back[..] == y[..y.len() - 2 * BLOCK] => {}
                    Ok(back) => {
                        return Ok(Report::fail(
                            name,
                            checked,
                            format!("u = [{u}], phase {phase}: h(h(y)) = {back}"),
                        ))
                    }
                    Err(e) => return Ok(Report::fail(name, checked, format!("u = [{u}], phase {phase}: {e}"))),
                }
            }
        }
        Ok(Report::pass(
            name,
            checked,
            format!("{samples} samples (seed {seed}), {checked} phase windows, {skipped} skipped with < 3 blocks"),
        )
        .with_skipped(skipped))
    }

    /// `h` commutes with the one-bit shift: dropping the first bit of a
    /// phase-`n` window and applying `h` at phase `n + 1` gives the image at
    /// phase `n` without its first bit. Swept over all words of length
    /// `word_len` and phases `0..21`.
    pub fn verify_shift_equivariance(&self, exec: Exec, i: u8, word_len: usize) -> Result<Report> {
        let letters: Vec<Symbol> = Symbol::all().collect();
        let outcome = sweep_words(exec, &letters, word_len, word_len, |u| {
            let encoded = self.encode(u);
            for n in 0..BLOCK - 1 {
                let y = &encoded[n..];
                if (y.len() - Phase(n as u8).lead()) / BLOCK < 3 {
                    continue;
                }
                let base = self.apply_h(y, Phase(n as u8), i).map_err(|e| e.to_string())?;
                let shifted = self.apply_h(&y[1..], Phase(n as u8 + 1), i).map_err(|e| e.to_string())?;
                if shifted[..] != base[1..] {
                    return Err(format!("u = [{}], phase {n}: h(Sy) = {shifted}, S h(y) = {}", Word::from(u), base.factor(1, base.len())));
                }
            }
            Ok(())
        });
        Ok(Report::from_sweep(format!("shift-equivariance g{i}"), outcome, |n| {
            format!("{n} words of length {word_len}, phases 0..20")
        }))
    }

    /// `decode(encode(w))` contains the phase-0 reading of `w` for every word
    /// with `|w| <= max_len`.
    pub fn verify_round_trip(&self, exec: Exec, max_len: usize) -> Report {
        let letters: Vec<Symbol> = Symbol::all().collect();
        let outcome = sweep_words(exec, &letters, 0, max_len, |w| {
            let expected = Decoded { phase: Phase(0), word: Word::from(w), lead: 0, trail: 0 };
            if self.decode(&self.encode(w)).contains(&expected) {
                Ok(())
            } else {
                Err(format!("decode(encode([{}])) misses the phase-0 reading", expected.word))
            }
        });
        Report::from_sweep("decode-round-trip", outcome, |n| format!("{n} words, |w| <= {max_len}"))
    }

    /// Length-`n` factors of the one-sided shift generated by encodings of
    /// points of `X(R)`.
    pub fn phi_language(&self, r: &ForbiddenSet, n: usize) -> Result<BTreeSet<BinaryWord>> {
        if n == 0 {
            return precondition("window length must be at least 1");
        }
        let blocks = n.div_ceil(BLOCK) + 1;
        let requested = (ALPHABET_SIZE as u128).checked_pow(blocks as u32).unwrap_or(u128::MAX);
        if requested > DEFAULT_BUDGET {
            return Err(Error::Budget { requested, budget: DEFAULT_BUDGET });
        }
        let mut out = BTreeSet::new();
        for u in crate::subshift::language(r, blocks)? {
            let y = self.encode(&u);
            for s in 0..=y.len() - n {
                out.insert(y.factor(s, s + n));
            }
        }
        Ok(out)
    }

    /// Whether `y` is a factor of the encoded shift of `X(R)`: some phase
    /// and some admissible word whose blocks match every piece of `y`.
    pub fn phi_contains(&self, r: &ForbiddenSet, y: &[u8]) -> bool {
        if y.is_empty() {
            return true;
        }
        for phase in self.phases(y) {
            let mut candidates: Vec<Vec<Symbol>> = Vec::new();
            let mut start = 0;
            let mut offset = phase.value();
            while start < y.len() {
                let len = (BLOCK - offset).min(y.len() - start);
                let piece = word_value(&y[start..start + len]);
                candidates.push(
                    (0..ALPHABET_SIZE)
                        .filter(|&c| self.slice(c, offset, len) == piece)
                        .map(Symbol::from_code)
                        .collect(),
                );
                start += len;
                offset = 0;
            }
            if admissible_choice(r, &candidates, &mut Vec::with_capacity(candidates.len())) {
                return true;
            }
        }
        false
    }

    /// `# v #` is forbidden in `X(R)` exactly when `ρ(# v #)` is not a factor
    /// of the encoded shift, for every `#`-free odd `v` with `|v| <= max_len`.
    pub fn verify_forbidden_correspondence(&self, r: &ForbiddenSet, max_len: usize) -> Result<Report> {
        self.verify_forbidden_correspondence_with(Exec::default(), r, max_len)
    }

    pub fn verify_forbidden_correspondence_with(
        &self,
        exec: Exec,
        r: &ForbiddenSet,
        max_len: usize,
    ) -> Result<Report> {
        let requested = (ALPHABET_SIZE as u128).pow(max_len as u32 + 2);
        if requested > DEFAULT_BUDGET {
            return Err(Error::Budget { requested, budget: DEFAULT_BUDGET });
        }
        let letters: Vec<Symbol> = Symbol::hash_free().collect();
        let lengths: Vec<usize> = (1..=max_len).step_by(2).collect();
        let outcome = sweep(exec, lengths.len(), |k| {
            let mut count = 0u64;
            try_for_each_word(&letters, lengths[k], |v| {
                count += 1;
                let mut framed = vec![Symbol::HASH];
                framed.extend_from_slice(v);
                framed.push(Symbol::HASH);
                let forbidden = !is_admissible(r, &framed);
                let present = self.phi_contains(r, &self.encode(&framed));
                if forbidden == present {
                    return Err(format!(
                        "v = [{}]: # v # {} but its encoding is {}",
                        Word::from(v),
                        if forbidden { "is forbidden" } else { "is admissible" },
                        if present { "present" } else { "absent" }
                    ));
                }
                Ok(())
            })?;
            Ok(count)
        });
        Ok(Report::from_sweep(format!("forbidden-correspondence R={r}"), outcome, |n| {
            format!("{n} odd #-free words v with |v| <= {max_len}")
        }))
    }
}

fn admissible_choice(r: &ForbiddenSet, candidates: &[Vec<Symbol>], chosen: &mut Vec<Symbol>) -> bool {
    if chosen.len() == candidates.len() {
        return true;
    }
    for &s in &candidates[chosen.len()] {
        chosen.push(s);
        if is_admissible(r, chosen) && admissible_choice(r, candidates, chosen) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

impl fmt::Debug for RhoTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for s in Symbol::all() {
            m.entry(&s, &self.entry(s).to_string());
        }
        m.finish()
    }
}

impl Default for RhoTable {
    fn default() -> RhoTable {
        make_rho()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_word;
    use crate::blockcode::{apply_windowed, SlidingBlockCode};
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    fn b(text: &str) -> BinaryWord {
        text.parse().unwrap()
    }

    fn rho() -> RhoTable {
        make_rho()
    }

    #[test]
    fn printed_entries() {
        let t = rho();
        assert_eq!(t.entry(Symbol::plain(1)).to_string(), "1101000000000000001100");
        assert_eq!(t.entry(Symbol::HASH).to_string(), "1111111111011111111111");
        assert_eq!(t.entry(Symbol::tilde(6)).to_string(), "1101001111000000000000");
        for s in Symbol::all() {
            assert_eq!(t.entry(s).len(), BLOCK);
        }
        let distinct: BTreeSet<_> = Symbol::all().map(|s| t.entry(s)).collect();
        assert_eq!(distinct.len(), 13);
    }

    #[test]
    fn table_validation() {
        let t = rho();
        let mut entries: Vec<BinaryWord> = Symbol::all().map(|s| t.entry(s)).collect();
        assert_eq!(RhoTable::from_words(&entries).unwrap(), t);
        entries[1] = entries[0].clone();
        assert!(RhoTable::from_words(&entries).is_err());
        entries[1] = b("1");
        assert!(RhoTable::from_words(&entries).is_err());
        assert!(t.with_flipped_bit(Symbol::HASH, 22).is_err());
        let flipped = t.with_flipped_bit(Symbol::HASH, 0).unwrap();
        assert_eq!(flipped.entry(Symbol::HASH).to_string(), "0111111111011111111111");
    }

    #[test]
    fn encode_examples() {
        let t = rho();
        assert_eq!(t.encode(&[]), BinaryWord::empty());
        assert_eq!(t.encode(&w("a1")), t.entry(Symbol::plain(1)));
        let two = t.encode(&w("a1 #"));
        assert_eq!(two.len(), 44);
        assert_eq!(two, t.entry(Symbol::plain(1)).concat(&t.entry(Symbol::HASH)));
    }

    #[test]
    fn unique_readability() {
        let r = rho().check_unique_readability();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 46137);
        let h = rho().entry(Symbol::HASH);
        let hh = h.concat(&h);
        assert_ne!(hh.factor(1, 23), h);
        let a = rho().entry(Symbol::plain(1));
        assert_eq!(a.concat(&a).factor(22, 44), a);
    }

    #[test]
    fn block_facts() {
        let t = rho();
        assert!(t.check_suffix_agreement().passed());
        assert_eq!(t.check_suffix_agreement().checked, 84);
        assert!(t.check_prefix_discrimination().passed());
        assert!(t.check_leading_uniqueness().passed());
        for i in 1..=6 {
            let (p, q) = (t.entry(Symbol::plain(i)), t.entry(Symbol::tilde(i)));
            for m in 8..BLOCK {
                assert_eq!(p.factor(m, BLOCK), q.factor(m, BLOCK));
            }
            assert_ne!(p[6], q[6]);
            assert_ne!(p[7], q[7]);
        }
    }

    // Independent phase oracle: a phase fits iff the window is a factor of
    // some concatenation of blocks starting at that offset.
    fn phases_oracle(t: &RhoTable, y: &BinaryWord) -> Vec<usize> {
        let entries: Vec<String> = Symbol::all().map(|s| t.entry(s).to_string()).collect();
        let text = y.to_string();
        (0..BLOCK)
            .filter(|&n| {
                let blocks = (n + text.len()).div_ceil(BLOCK).max(1);
                let mut frontier: Vec<String> = vec![String::new()];
                for _ in 0..blocks {
                    let mut next = Vec::new();
                    for f in &frontier {
                        for e in &entries {
                            let cand = format!("{f}{e}");
                            let upto = cand.len().min(n + text.len());
                            let visible = &cand[n.min(upto)..upto];
                            if text.starts_with(visible) {
                                next.push(cand);
                            }
                        }
                    }
                    frontier = next;
                }
                !frontier.is_empty()
            })
            .collect()
    }

    #[test]
    fn phases_examples() {
        let t = rho();
        assert!(t.phases(&t.entry(Symbol::plain(1))).contains(&Phase(0)));
        assert_eq!(t.phases(&[]).len(), 22);
        let y = t.encode(&w("a1 # t3 a5"));
        for s in 0..40 {
            let window = y.factor(s, s + 48);
            let ps: Vec<usize> = t.phases(&window).iter().map(|p| p.value()).collect();
            assert_eq!(ps, vec![s % BLOCK]);
        }
    }

    #[test]
    fn phases_match_oracle_on_windows() {
        let t = rho();
        let y = t.encode(&w("a1 t1 # a6 t4 a2 #"));
        for s in (0..y.len()).step_by(5) {
            for len in [0, 1, 3, 7, 15, 22, 30] {
                if s + len <= y.len() {
                    let window = y.factor(s, s + len);
                    let ours: Vec<usize> = t.phases(&window).iter().map(|p| p.value()).collect();
                    assert_eq!(ours, phases_oracle(&t, &window), "window {window}");
                }
            }
        }
        for text in ["0000000000", "1111111111111111111111", "0101", "110100"] {
            let y = b(text);
            let ours: Vec<usize> = t.phases(&y).iter().map(|p| p.value()).collect();
            assert_eq!(ours, phases_oracle(&t, &y), "{text}");
        }
    }

    #[test]
    fn round_trip_sweep() {
        let r = rho().verify_round_trip(Exec::Sequential, 3);
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 1 + 13 + 169 + 2197);
    }

    #[test]
    fn decode_examples() {
        let t = rho();
        let word = w("a1 #");
        let decoded = t.decode(&t.encode(&word));
        assert!(decoded.contains(&Decoded { phase: Phase(0), word: word.clone(), lead: 0, trail: 0 }));
        assert!(t.decode(&[0; 22]).is_empty());
        let empty = t.decode(&[]);
        assert_eq!(empty.len(), 22);
        assert!(empty.iter().all(|d| d.word.is_empty() && d.lead == 0 && d.trail == 0));
        // a phase-5 window: 17 lead bits, one block, 4 trailing bits
        let y = t.encode(&w("t2 a3 a4")).factor(5, 48);
        let d = t.decode(&y);
        assert_eq!(d, vec![Decoded { phase: Phase(5), word: w("a3"), lead: 17, trail: 4 }]);
    }

    #[test]
    fn sync_window_is_small_and_certified() {
        let t = rho();
        let sync = t.sync_window_with(Exec::default(), 3);
        assert!(sync.length <= 43, "{sync:?}");
        assert_eq!(sync.certificate.len(), sync.length - 1);
        assert!(t.phases(&sync.certificate).len() >= 2);
        let full = t.encode(&sync.source);
        assert_eq!(full.factor(sync.offset, sync.offset + sync.length - 1), sync.certificate);
        assert!(t.check_phase_uniqueness(Exec::default(), sync.length, 3).passed());
    }

    #[test]
    fn apply_h_examples() {
        let t = rho();
        let y = t.encode(&w("a1 a2"));
        assert_eq!(t.apply_h(&y, Phase(0), 1).unwrap(), t.entry(Symbol::tilde(1)));
        let y = t.encode(&w("a2 a3"));
        assert_eq!(t.apply_h(&y, Phase(0), 1).unwrap(), t.entry(Symbol::plain(2)));
        let head = t.entry(Symbol::plain(1)).factor(8, 22);
        let y = head.concat(&t.encode(&w("a2 a3")));
        let out = t.apply_h(&y, Phase(8), 1).unwrap();
        assert_eq!(out.len(), 36);
        assert_eq!(out.factor(0, 14), head);
        assert_eq!(out.factor(14, 36), t.entry(Symbol::plain(2)));
        // phase 3: the leading a1 sees a2 next, so it becomes t1
        let y = t.encode(&w("a1 a2 a3")).factor(3, 66);
        let out = t.apply_h(&y, Phase(3), 1).unwrap();
        assert_eq!(out, t.encode(&w("t1 a2")).factor(3, 44));
    }

    #[test]
    fn apply_h_errors() {
        let t = rho();
        let one = t.encode(&w("a1"));
        assert!(matches!(t.apply_h(&one, Phase(0), 1), Err(Error::Precondition(_))));
        let trailing = t.encode(&w("a1 a2 a3")).factor(0, 60);
        assert!(matches!(t.apply_h(&trailing, Phase(0), 1), Err(Error::Precondition(_))));
        let junk = vec![0u8; 44];
        assert!(matches!(t.apply_h(&junk, Phase(0), 1), Err(Error::Decode(_))));
        let mut bad_head = vec![0u8; 14];
        bad_head.extend_from_slice(&t.encode(&w("a2 a3")));
        assert!(matches!(t.apply_h(&bad_head, Phase(8), 1), Err(Error::Decode(_))));
        assert!(t.apply_h(&t.encode(&w("a1 a2")), Phase(0), 7).is_err());
        assert!(Phase::new(22).is_err());
    }

    #[test]
    fn intertwining_and_inverse() {
        let t = rho();
        for (i, len) in [(1, 4), (6, 3), (2, 2)] {
            let r = t.verify_intertwining(i, len).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert_eq!(t.verify_intertwining(2, 2).unwrap().checked, 169);
        for (i, samples, seed) in [(1, 100, 42), (3, 1, 0)] {
            let r = t.verify_h_inverse(i, samples, seed).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(r.skipped, 0);
        }
        assert!(t.verify_h_inverse(1, 0, 0).is_err());
    }

    #[test]
    fn two_block_input_cannot_be_inverted() {
        let t = rho();
        let y = t.encode(&w("a1 a2"));
        let once = t.apply_h(&y, Phase(0), 1).unwrap();
        assert!(matches!(t.apply_h(&once, Phase(0), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn shift_equivariance_small() {
        let t = rho();
        for i in [1, 4] {
            let r = t.verify_shift_equivariance(Exec::default(), i, 3).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn phi_language_examples() {
        let t = rho();
        assert_eq!(t.phi_language(&ForbiddenSet::empty(), 1).unwrap(), [b("0"), b("1")].into());
        let r = ForbiddenSet::new([w("a1")]).unwrap();
        let l22 = t.phi_language(&r, 22).unwrap();
        for s in Symbol::all() {
            assert!(l22.contains(&t.entry(s)));
        }
        let l66 = t.phi_language(&r, 66).unwrap();
        assert!(!l66.contains(&t.encode(&w("# a1 #"))));
        assert!(l66.contains(&t.encode(&w("# a2 #"))));
        assert!(t.phi_language(&r, 200).is_err());
    }

    #[test]
    fn phi_contains_agrees_with_window_scan() {
        let t = rho();
        let r = ForbiddenSet::new([w("a1"), w("t2")]).unwrap();
        for n in [1, 5, 23, 30] {
            let lang = t.phi_language(&r, n).unwrap();
            // everything enumerated is recognized
            for y in &lang {
                assert!(t.phi_contains(&r, y), "{y}");
            }
            // and windows of forbidden encodings are not, unless enumerated
            let forbidden = t.encode(&w("a3 # a1 # t2 # a4"));
            for s in 0..=forbidden.len() - n {
                let y = forbidden.factor(s, s + n);
                assert_eq!(t.phi_contains(&r, &y), lang.contains(&y), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn forbidden_correspondence_examples() {
        let t = rho();
        let a1 = ForbiddenSet::new([w("a1")]).unwrap();
        assert!(t.verify_forbidden_correspondence(&a1, 1).unwrap().passed());
        assert!(t.verify_forbidden_correspondence(&ForbiddenSet::empty(), 1).unwrap().passed());
        let two = ForbiddenSet::new([w("a1"), w("a2 a3 a2")]).unwrap();
        let r = t.verify_forbidden_correspondence(&two, 3).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 12 + 12 * 12 * 12);
    }

    proptest! {
        #[test]
        fn round_trip(codes in proptest::collection::vec(0usize..13, 0..=5)) {
            let t = rho();
            let word: Word = codes.into_iter().map(Symbol::from_code).collect();
            let y = t.encode(&word);
            prop_assert_eq!(y.len(), 22 * word.len());
            let d = Decoded { phase: Phase(0), word: word.clone(), lead: 0, trail: 0 };
            prop_assert!(t.decode(&y).contains(&d));
        }

        #[test]
        fn intertwining_random(i in 1u8..=6, codes in proptest::collection::vec(0usize..13, 2..=9)) {
            let t = rho();
            let word: Word = codes.into_iter().map(Symbol::from_code).collect();
            let image = apply_windowed(&SlidingBlockCode::generator(i).unwrap(), &word).unwrap();
            prop_assert_eq!(t.apply_h(&t.encode(&word), Phase(0), i).unwrap(), t.encode(&image));
        }
    }
}
