//! Forbidden-word subshifts `X(R)` through their finite languages.
//!
//! `X(R)` is the set of bi-infinite sequences avoiding every pattern `# w #`
//! with `w ∈ R`, where `R` is a finite set of odd-length `#`-free words.
//!
//! A finite word `u` lies in the language of `X(R)` exactly when it has no
//! factor `# w #` with `w ∈ R`: padding `u` on both sides with `a1` creates no
//! new `#`, hence no new forbidden factor, and yields a point of `X(R)`. Only
//! consecutive `#` pairs can delimit a forbidden pattern, so the check is a
//! scan over the `#`-free segments between consecutive `#`s.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{is_hash_free_odd, parse_word_lines, Symbol, Word, ALPHABET_SIZE};
use crate::blockcode::generator;
use crate::error::{precondition, Error, Result};
use crate::group::{act, GroupElement};
use crate::par::{map_tasks, Exec};
use crate::report::Report;

/// Default cap on the number of candidate words an enumeration may touch.
pub const DEFAULT_BUDGET: u128 = 62_748_517; // 13^7

/// A finite set of odd-length `#`-free words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ForbiddenSet {
    members: BTreeSet<Word>,
    longest: usize,
}

impl ForbiddenSet {
    pub fn empty() -> ForbiddenSet {
        ForbiddenSet::default()
    }

    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<ForbiddenSet> {
        let mut set = ForbiddenSet::default();
        for w in words {
            if !is_hash_free_odd(&w) {
                return precondition(format!("forbidden word [{w}] must be #-free with odd length"));
            }
            set.longest = set.longest.max(w.len());
            set.members.insert(w);
        }
        Ok(set)
    }

    /// Parses the one-word-per-line file format. Blank lines and `//` lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<ForbiddenSet> {
        let mut words = Vec::new();
        for (line, w) in parse_word_lines(text)? {
            let problem = if w.contains_hash() {
                Some("contains #")
            } else if w.len() % 2 == 0 {
                Some("has even length")
            } else {
                None
            };
            if let Some(p) = problem {
                return Err(Error::Line {
                    line,
                    message: format!("forbidden word `{w}` {p}"),
                });
            }
            words.push(w);
        }
        ForbiddenSet::new(words)
    }

    /// `size` distinct random members of length 1 or 3.
    pub fn random(seed: u64, size: usize) -> ForbiddenSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = BTreeSet::new();
        while members.len() < size {
            let len = if rng.gen_bool(0.5) { 1 } else { 3 };
            let w: Word = (0..len).map(|_| Symbol::from_code(rng.gen_range(0..12))).collect();
            members.insert(w);
        }
        ForbiddenSet::new(members).expect("generated words are #-free and odd")
    }

    pub fn members(&self) -> impl Iterator<Item = &Word> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, w: &[Symbol]) -> bool {
        w.len() <= self.longest && w.len() % 2 == 1 && self.members.contains(w)
    }

    pub fn is_subset(&self, other: &ForbiddenSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{w}]")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ForbiddenSet{self}")
    }
}

/// True iff `u` contains no factor `# w #` with `w ∈ R`.
pub fn is_admissible(r: &ForbiddenSet, u: &[Symbol]) -> bool {
    let mut last_hash = None;
    for (k, s) in u.iter().enumerate() {
        if s.is_hash() {
            if let Some(p) = last_hash {
                if r.contains(&u[p + 1..k]) {
                    return false;
                }
            }
            last_hash = Some(k);
        }
    }
    true
}

fn check_budget(n: usize, budget: u128) -> Result<()> {
    let requested = (ALPHABET_SIZE as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if requested > budget {
        return Err(Error::Budget { requested, budget });
    }
    Ok(())
}

/// Depth-first enumeration of admissible words of length `n` starting with
/// `prefix`, threading a per-symbol state. `step(state, previous, next)`
/// runs on every extension; rejected branches are pruned as soon as a
/// forbidden `# w #` closes.
fn for_each_admissible<S: Copy>(
    r: &ForbiddenSet,
    prefix: &[Symbol],
    n: usize,
    init: S,
    step: &impl Fn(S, Option<Symbol>, Symbol) -> S,
    visit: &mut impl FnMut(&[Symbol], S),
) {
    if prefix.len() > n || !is_admissible(r, prefix) {
        return;
    }
    let mut state = init;
    let mut prev = None;
    for &s in prefix {
        state = step(state, prev, s);
        prev = Some(s);
    }
    let last_hash = prefix.iter().rposition(|s| s.is_hash());
    let mut buf = prefix.to_vec();
    buf.reserve(n - prefix.len());
    descend(r, n, &mut buf, last_hash, state, step, visit);
}

fn descend<S: Copy>(
    r: &ForbiddenSet,
    n: usize,
    buf: &mut Vec<Symbol>,
    last_hash: Option<usize>,
    state: S,
    step: &impl Fn(S, Option<Symbol>, Symbol) -> S,
    visit: &mut impl FnMut(&[Symbol], S),
) {
    if buf.len() == n {
        visit(buf, state);
        return;
    }
    let prev = buf.last().copied();
    for s in Symbol::all() {
        let mut hash_at = last_hash;
        if s.is_hash() {
            if let Some(p) = last_hash {
                if r.contains(&buf[p + 1..]) {
                    continue;
                }
            }
            hash_at = Some(buf.len());
        }
        let next = step(state, prev, s);
        buf.push(s);
        descend(r, n, buf, hash_at, next, step, visit);
        buf.pop();
    }
}

/// The admissible words of length `n`, sorted.
pub fn language(r: &ForbiddenSet, n: usize) -> Result<BTreeSet<Word>> {
    language_with_budget(r, n, DEFAULT_BUDGET)
}

pub fn language_with_budget(r: &ForbiddenSet, n: usize, budget: u128) -> Result<BTreeSet<Word>> {
    check_budget(n, budget)?;
    let mut out = BTreeSet::new();
    for_each_admissible(r, &[], n, (), &|_, _, _| (), &mut |u, _| {
        out.insert(Word::from(u));
    });
    Ok(out)
}

/// Number of admissible words of length `n`, without materializing them.
pub fn language_size(exec: Exec, r: &ForbiddenSet, n: usize) -> Result<u64> {
    check_budget(n, DEFAULT_BUDGET)?;
    if n == 0 {
        return Ok(1);
    }
    let counts = map_tasks(exec, ALPHABET_SIZE, |first| {
        let mut count = 0u64;
        for_each_admissible(r, &[Symbol::from_code(first)], n, (), &|_, _, _| (), &mut |_, _| count += 1);
        count
    });
    Ok(counts.into_iter().sum())
}

/// Applies `g` to every member of `R`.
pub fn act_on_r(g: &GroupElement, r: &ForbiddenSet) -> ForbiddenSet {
    ForbiddenSet::new(r.members().map(|w| act(g, w).expect("members are #-free")))
        .expect("the action preserves length and #-freeness")
}

/// Membership bitset over all `13^n` words, indexed big-endian in base 13.
#[derive(Clone, PartialEq, Eq)]
struct WordBits {
    len: usize,
    blocks: Vec<u64>,
}

impl WordBits {
    fn new(len: usize) -> WordBits {
        let size = ALPHABET_SIZE.pow(len as u32);
        WordBits { len, blocks: vec![0; size.div_ceil(64)] }
    }

    #[inline]
    fn insert(&mut self, idx: usize) {
        self.blocks[idx / 64] |= 1 << (idx % 64);
    }

    fn union(mut self, other: &WordBits) -> WordBits {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
        self
    }

    fn count(&self) -> u64 {
        self.blocks.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// First index present in exactly one of the two sets, with the side
    /// that has it (`true` for `self`).
    fn first_difference(&self, other: &WordBits) -> Option<(usize, bool)> {
        self.blocks.iter().zip(&other.blocks).enumerate().find_map(|(k, (a, b))| {
            let diff = a ^ b;
            (diff != 0).then(|| {
                let bit = diff.trailing_zeros() as usize;
                (k * 64 + bit, a >> bit & 1 == 1)
            })
        })
    }

    fn word(&self, mut idx: usize) -> Word {
        let mut v = vec![Symbol::HASH; self.len];
        for slot in v.iter_mut().rev() {
            *slot = Symbol::from_code(idx % ALPHABET_SIZE);
            idx /= ALPHABET_SIZE;
        }
        Word::new(v)
    }
}

/// Bitset of `{ state(u) : u admissible of length word_len }` where the state
/// is folded by `step`, split over first symbols.
fn collect_bits(
    exec: Exec,
    r: &ForbiddenSet,
    word_len: usize,
    image_len: usize,
    step: impl Fn(usize, Option<Symbol>, Symbol) -> usize + Sync + Send,
) -> WordBits {
    if word_len == 0 {
        let mut bits = WordBits::new(image_len);
        bits.insert(0);
        return bits;
    }
    let parts = map_tasks(exec, ALPHABET_SIZE, |first| {
        let mut bits = WordBits::new(image_len);
        for_each_admissible(r, &[Symbol::from_code(first)], word_len, 0usize, &step, &mut |_, idx| {
            bits.insert(idx)
        });
        bits
    });
    parts
        .iter()
        .fold(WordBits::new(image_len), |acc, part| acc.union(part))
}

/// Compares the window-2 image of the length-`n + 1` language of `X(R)`
/// under `g_i` with the length-`n` language of `X(f*_i(R))`.
pub fn verify_equivariance(i: u8, r: &ForbiddenSet, n: usize) -> Result<Report> {
    verify_equivariance_with(Exec::default(), i, r, n)
}

pub fn verify_equivariance_with(exec: Exec, i: u8, r: &ForbiddenSet, n: usize) -> Result<Report> {
    if n == 0 {
        return precondition("window length must be at least 1");
    }
    let g = GroupElement::generator(i)?;
    check_budget(n + 1, DEFAULT_BUDGET)?;
    let rule = generator(i);
    let moved = act_on_r(&g, r);

    let windowed = collect_bits(exec, r, n + 1, n, |idx, prev, s| match prev {
        Some(p) => idx * ALPHABET_SIZE + rule.apply(p, s).code(),
        None => idx,
    });
    let target = collect_bits(exec, &moved, n, n, |idx, _, s| idx * ALPHABET_SIZE + s.code());

    let name = format!("equivariance g{i} R={r} n={n}");
    Ok(match windowed.first_difference(&target) {
        None => Report::pass(
            name,
            windowed.count(),
            format!("{} words of length {n} on both sides", windowed.count()),
        ),
        Some((idx, in_image)) => {
            let w = windowed.word(idx);
            let side = if in_image {
                format!("[{w}] is in the g{i}-image of L_{}(X(R)) but not in L_{n}(X(f*R)), f*R = {moved}", n + 1)
            } else {
                format!("[{w}] is in L_{n}(X(f*R)) but not in the g{i}-image of L_{}(X(R)), f*R = {moved}", n + 1)
            };
            Report::fail(name, windowed.count(), side)
        }
    })
}
