//! Local rules, sliding block codes on finite words, and the star maps.
//!
//! A sliding block code with window `m` maps a word `w` with `|w| >= m` to
//! the word whose `k`-th symbol is `rule(w[k, k + m))` (left-aligned), so the
//! output is `m - 1` symbols shorter. The six generator rules `g_1..g_6` are
//! window-2 codes; each one swaps `a_i` and `t_i` when the next symbol is `#`
//! or another plain letter of the same triple, and fixes everything else.
//!
//! The star map `f*_i` is the length-preserving version used on `#`-delimited
//! words: it evaluates `g_i` on `w #`, i.e. with a virtual trailing `#`.

use std::fmt;
use std::sync::OnceLock;

use crate::alphabet::{Symbol, Word, ALPHABET_SIZE};
use crate::error::{precondition, Result};
use crate::par::{sweep_words, Exec};
use crate::report::Report;

const PAIRS: usize = ALPHABET_SIZE * ALPHABET_SIZE;

/// Largest window for which a code table is materialized (13^6 entries).
pub const MAX_WINDOW: usize = 6;

/// A total map from ordered symbol pairs to symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalRule {
    table: [Symbol; PAIRS],
    label: Option<u8>,
}

impl LocalRule {
    pub fn from_fn(f: impl Fn(Symbol, Symbol) -> Symbol) -> LocalRule {
        let mut table = [Symbol::HASH; PAIRS];
        for b in Symbol::all() {
            for c in Symbol::all() {
                table[b.code() * ALPHABET_SIZE + c.code()] = f(b, c);
            }
        }
        LocalRule { table, label: None }
    }

    #[inline]
    pub fn apply(&self, b: Symbol, c: Symbol) -> Symbol {
        self.table[b.code() * ALPHABET_SIZE + c.code()]
    }

    /// Generator index when this rule is one of the `g_i`.
    pub fn label(&self) -> Option<u8> {
        self.label
    }

    pub fn to_code(&self) -> SlidingBlockCode {
        SlidingBlockCode {
            window: 2,
            table: self.table.to_vec(),
        }
    }
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(i) => write!(f, "LocalRule(g{i})"),
            None => f.write_str("LocalRule(..)"),
        }
    }
}

/// The three generator indices sharing a triple with `i`.
pub fn triple_of(i: u8) -> [u8; 3] {
    if i <= 3 {
        [1, 2, 3]
    } else {
        [4, 5, 6]
    }
}

/// Builds `g_i`. The flip context of `i` is `#` together with the plain
/// letters of the other two members of its triple.
pub fn make_generator_rule(i: u8) -> Result<LocalRule> {
    if !(1..=6).contains(&i) {
        return precondition(format!("generator index {i} outside 1..6"));
    }
    let plain = Symbol::plain(i);
    let tilde = Symbol::tilde(i);
    let in_context = |c: Symbol| {
        c.is_hash()
            || triple_of(i)
                .iter()
                .any(|&j| j != i && c == Symbol::plain(j))
    };
    let mut rule = LocalRule::from_fn(|b, c| {
        if b == tilde && in_context(c) {
            plain
        } else if b == plain && in_context(c) {
            tilde
        } else {
            b
        }
    });
    rule.label = Some(i);
    Ok(rule)
}

/// Cached `g_i`. Panics if `i` is outside `1..=6`.
pub fn generator(i: u8) -> &'static LocalRule {
    static RULES: OnceLock<Vec<LocalRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        (1..=6)
            .map(|i| make_generator_rule(i).expect("index in range"))
            .collect()
    });
    assert!((1..=6).contains(&i), "generator index {i} outside 1..6");
    &rules[i as usize - 1]
}

/// A sliding block code: a total map from `window`-tuples of symbols to
/// symbols, indexed big-endian in base 13.
#[derive(Clone, PartialEq, Eq)]
pub struct SlidingBlockCode {
    window: usize,
    table: Vec<Symbol>,
}

impl fmt::Debug for SlidingBlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlidingBlockCode(window {})", self.window)
    }
}

fn tuple_index(t: &[Symbol]) -> usize {
    t.iter().fold(0, |acc, s| acc * ALPHABET_SIZE + s.code())
}

impl SlidingBlockCode {
    pub fn from_fn(window: usize, f: impl Fn(&[Symbol]) -> Symbol) -> Result<SlidingBlockCode> {
        if window == 0 || window > MAX_WINDOW {
            return precondition(format!("window {window} outside 1..={MAX_WINDOW}"));
        }
        let size = ALPHABET_SIZE.pow(window as u32);
        let mut table = Vec::with_capacity(size);
        let mut tuple = vec![Symbol::from_code(0); window];
        for idx in 0..size {
            let mut rest = idx;
            for slot in tuple.iter_mut().rev() {
                *slot = Symbol::from_code(rest % ALPHABET_SIZE);
                rest /= ALPHABET_SIZE;
            }
            table.push(f(&tuple));
        }
        Ok(SlidingBlockCode { window, table })
    }

    pub fn identity() -> SlidingBlockCode {
        SlidingBlockCode {
            window: 1,
            table: Symbol::all().collect(),
        }
    }

    pub fn generator(i: u8) -> Result<SlidingBlockCode> {
        Ok(make_generator_rule(i)?.to_code())
    }

    pub fn window(&self) -> usize {
        self.window
    }

    #[inline]
    pub fn rule(&self, tuple: &[Symbol]) -> Symbol {
        debug_assert_eq!(tuple.len(), self.window);
        self.table[tuple_index(tuple)]
    }
}

/// Applies `code` at every position with a full window.
pub fn apply_windowed(code: &SlidingBlockCode, w: &[Symbol]) -> Result<Word> {
    if w.len() < code.window {
        return precondition(format!(
            "word of length {} is shorter than window {}",
            w.len(),
            code.window
        ));
    }
    Ok(w.windows(code.window).map(|t| code.rule(t)).collect())
}

/// Window-2 application of a local rule into `out` (cleared first).
#[inline]
pub(crate) fn apply_rule_into(rule: &LocalRule, w: &[Symbol], out: &mut Vec<Symbol>) {
    out.clear();
    out.extend(w.windows(2).map(|p| rule.apply(p[0], p[1])));
}

/// `f*` for an arbitrary rule: `rule` evaluated on `w #`, written into `out`.
#[inline]
pub(crate) fn star_into(rule: &LocalRule, w: &[Symbol], out: &mut Vec<Symbol>) {
    out.clear();
    if let Some(&last) = w.last() {
        out.extend(w.windows(2).map(|p| rule.apply(p[0], p[1])));
        out.push(rule.apply(last, Symbol::HASH));
    }
}

/// The star map `f*_i` on a `#`-free word.
pub fn star_map(i: u8, w: &[Symbol]) -> Result<Word> {
    if !(1..=6).contains(&i) {
        return precondition(format!("generator index {i} outside 1..6"));
    }
    if w.iter().any(|s| s.is_hash()) {
        return precondition("star map input contains #");
    }
    let mut out = Vec::with_capacity(w.len());
    star_into(generator(i), w, &mut out);
    Ok(Word::new(out))
}

/// The code of `c1 ∘ c2`: window `m1 + m2 - 1`.
pub fn compose_codes(c1: &SlidingBlockCode, c2: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    let window = c1.window + c2.window - 1;
    SlidingBlockCode::from_fn(window, |t| {
        let inner: Vec<Symbol> = t.windows(c2.window).map(|p| c2.rule(p)).collect();
        c1.rule(&inner)
    })
}

fn check_index(i: u8) -> Result<()> {
    if (1..=6).contains(&i) {
        Ok(())
    } else {
        precondition(format!("generator index {i} outside 1..6"))
    }
}

fn hash_free_letters() -> Vec<Symbol> {
    Symbol::hash_free().collect()
}

fn all_letters() -> Vec<Symbol> {
    Symbol::all().collect()
}

/// Checks `apply_windowed(g_i, # w # x) = # f*_i(w) #` for every `#`-free
/// `w` with `|w| <= max_len` and every trailing symbol `x`.
pub fn verify_star_consistency(i: u8, max_len: usize) -> Result<Report> {
    verify_star_consistency_with(Exec::default(), i, max_len)
}

pub fn verify_star_consistency_with(exec: Exec, i: u8, max_len: usize) -> Result<Report> {
    check_index(i)?;
    if max_len == 0 {
        return precondition("max_len must be at least 1");
    }
    let rule = generator(i);
    let name = format!("star-consistency g{i}");
    let outcome = sweep_words(exec, &hash_free_letters(), 0, max_len, |w| {
        let mut framed = Vec::with_capacity(w.len() + 3);
        framed.push(Symbol::HASH);
        framed.extend_from_slice(w);
        framed.push(Symbol::HASH);
        let mut expected = vec![Symbol::HASH];
        let mut star = Vec::new();
        star_into(rule, w, &mut star);
        expected.extend_from_slice(&star);
        expected.push(Symbol::HASH);
        let mut image = Vec::new();
        for x in Symbol::all() {
            framed.push(x);
            apply_rule_into(rule, &framed, &mut image);
            framed.pop();
            if image != expected {
                return Err(format!(
                    "w = [{}], x = {x}: windowed image [{}] != [{}]",
                    Word::from(w),
                    Word::new(image),
                    Word::new(expected)
                ));
            }
        }
        Ok(())
    });
    Ok(Report::from_sweep(name, outcome.map(|n| n * ALPHABET_SIZE as u64), |n| {
        format!("{n} windowed evaluations, |w| <= {max_len}")
    }))
}

/// Checks that `f*_i` is a length-preserving, `#`-free involution on all
/// `#`-free words of length `<= max_len`.
pub fn verify_star_involution(exec: Exec, i: u8, max_len: usize) -> Result<Report> {
    check_index(i)?;
    let rule = generator(i);
    let outcome = sweep_words(exec, &hash_free_letters(), 0, max_len, |w| {
        let mut once = Vec::with_capacity(w.len());
        let mut twice = Vec::with_capacity(w.len());
        star_into(rule, w, &mut once);
        if once.len() != w.len() || once.iter().any(|s| s.is_hash()) {
            return Err(format!("f*{i}([{}]) = [{}] changes length or adds #", Word::from(w), Word::new(once)));
        }
        star_into(rule, &once, &mut twice);
        if twice != w {
            return Err(format!("f*{i}(f*{i}([{}])) = [{}]", Word::from(w), Word::new(twice)));
        }
        Ok(())
    });
    Ok(Report::from_sweep(format!("star-involution g{i}"), outcome, |n| {
        format!("{n} words, |w| <= {max_len}")
    }))
}

/// Checks `apply_windowed(g_i, apply_windowed(g_i, w)) = w[0, |w| - 2)` for
/// every word over the full alphabet with `2 <= |w| <= max_len`.
pub fn verify_windowed_involution(exec: Exec, i: u8, max_len: usize) -> Result<Report> {
    check_index(i)?;
    let rule = generator(i);
    let outcome = sweep_words(exec, &all_letters(), 2, max_len.max(1), |w| {
        let mut once = Vec::new();
        let mut twice = Vec::new();
        apply_rule_into(rule, w, &mut once);
        apply_rule_into(rule, &once, &mut twice);
        if twice[..] != w[..w.len() - 2] {
            return Err(format!("g{i}∘g{i} on [{}] gives [{}]", Word::from(w), Word::new(twice)));
        }
        Ok(())
    });
    Ok(Report::from_sweep(format!("windowed-involution g{i}"), outcome, |n| {
        format!("{n} words, 2 <= |w| <= {max_len}")
    }))
}

/// Checks that `f_i` and `f_j` commute, both as star maps on `#`-free words
/// and as window-2 codes on the full alphabet, up to length `max_len`.
pub fn verify_commutation(exec: Exec, i: u8, j: u8, max_len: usize) -> Result<Report> {
    check_index(i)?;
    check_index(j)?;
    let (gi, gj) = (generator(i), generator(j));
    let name = format!("commutation g{i} g{j}");
    let star = sweep_words(exec, &hash_free_letters(), 0, max_len, |w| {
        let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        star_into(gj, w, &mut a);
        star_into(gi, &a, &mut b);
        star_into(gi, w, &mut c);
        star_into(gj, &c, &mut d);
        if b != d {
            return Err(format!(
                "star: w = [{}], f*{i}f*{j} = [{}], f*{j}f*{i} = [{}]",
                Word::from(w),
                Word::new(b),
                Word::new(d)
            ));
        }
        Ok(())
    });
    let windowed = sweep_words(exec, &all_letters(), 2, max_len.max(1), |w| {
        let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        apply_rule_into(gj, w, &mut a);
        apply_rule_into(gi, &a, &mut b);
        apply_rule_into(gi, w, &mut c);
        apply_rule_into(gj, &c, &mut d);
        if b != d {
            return Err(format!(
                "windowed: w = [{}], g{i}g{j} = [{}], g{j}g{i} = [{}]",
                Word::from(w),
                Word::new(b),
                Word::new(d)
            ));
        }
        Ok(())
    });
    Ok(match (star, windowed) {
        (Ok(s), Ok(wn)) => Report::pass(
            name,
            s + wn,
            format!("{s} star words, {wn} windowed words, |w| <= {max_len}"),
        ),
        (Err(cx), _) | (_, Err(cx)) => Report::fail(name, 0, cx),
    })
}

/// Shortest-first search for a `#`-free word on which two distinct star maps
/// of the triple containing `i` fail to commute. Returns `(i, i', w)`.
pub fn find_noncommuting_witness(triple_member: u8, max_len: usize) -> Result<Option<(u8, u8, Word)>> {
    check_index(triple_member)?;
    let triple = triple_of(triple_member);
    let letters = hash_free_letters();
    for len in 1..=max_len {
        for &i in &triple {
            for &k in &triple {
                if i >= k {
                    continue;
                }
                let (gi, gk) = (generator(i), generator(k));
                let mut found = None;
                let _ = crate::alphabet::try_for_each_word(&letters, len, |w| {
                    let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
                    star_into(gk, w, &mut a);
                    star_into(gi, &a, &mut b);
                    star_into(gi, w, &mut c);
                    star_into(gk, &c, &mut d);
                    if b != d {
                        found = Some(Word::from(w));
                        return Err(());
                    }
                    Ok(())
                });
                if let Some(w) = found {
                    return Ok(Some((i, k, w)));
                }
            }
        }
    }
    Ok(None)
}
