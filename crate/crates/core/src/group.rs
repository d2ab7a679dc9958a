//! The group generated by the six block-code involutions, in normal form.
//!
//! Generators `1, 2, 3` commute with `4, 5, 6`, and every generator has
//! order two, so an element is a pair of reduced words: one over `{1,2,3}`
//! and one over `{4,5,6}`, neither with two equal adjacent letters. The pair
//! `(i_1..i_n, j_1..j_m)` stands for `f_{i_1} ⋯ f_{i_n} f_{j_1} ⋯ f_{j_m}`.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{try_for_each_word, Symbol, Word};
use crate::blockcode::{generator, star_into};
use crate::error::{precondition, Error, Result};
use crate::par::{sweep, sweep_words, Exec};
use crate::report::Report;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    left: Vec<u8>,
    right: Vec<u8>,
}

fn is_reduced(letters: &[u8]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1])
}

/// Appends `letters` to an already reduced word, cancelling `x x` pairs.
fn push_reduced(acc: &mut Vec<u8>, letters: impl IntoIterator<Item = u8>) {
    for x in letters {
        if acc.last() == Some(&x) {
            acc.pop();
        } else {
            acc.push(x);
        }
    }
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement::default()
    }

    /// The generator `f_i`.
    pub fn generator(i: u8) -> Result<GroupElement> {
        match i {
            1..=3 => Ok(GroupElement { left: vec![i], right: vec![] }),
            4..=6 => Ok(GroupElement { left: vec![], right: vec![i] }),
            _ => precondition(format!("generator index {i} outside 1..6")),
        }
    }

    /// Builds an element from factors already in normal form.
    pub fn new(left: Vec<u8>, right: Vec<u8>) -> Result<GroupElement> {
        if let Some(x) = left.iter().find(|x| !(1..=3).contains(*x)) {
            return precondition(format!("left factor letter {x} outside 1..3"));
        }
        if let Some(x) = right.iter().find(|x| !(4..=6).contains(*x)) {
            return precondition(format!("right factor letter {x} outside 4..6"));
        }
        if !is_reduced(&left) || !is_reduced(&right) {
            return precondition("factor has two equal adjacent letters");
        }
        Ok(GroupElement { left, right })
    }

    /// Like [`GroupElement::new`] but reduces the factors first.
    pub fn reduced(left: Vec<u8>, right: Vec<u8>) -> Result<GroupElement> {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        push_reduced(&mut l, left);
        push_reduced(&mut r, right);
        GroupElement::new(l, r)
    }

    pub fn left_factor(&self) -> &[u8] {
        &self.left
    }

    pub fn right_factor(&self) -> &[u8] {
        &self.right
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn total_len(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u8]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        match (self.left.is_empty(), self.right.is_empty()) {
            (true, true) => f.write_str("|"),
            (false, true) => write!(f, "{} |", join(&self.left)),
            (true, false) => write!(f, "| {}", join(&self.right)),
            (false, false) => write!(f, "{} | {}", join(&self.left), join(&self.right)),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({self})")
    }
}

/// Parses `"1 2 1 | 4 5"`. The bar is mandatory; non-reduced input such as
/// `"1 1 2 |"` is reduced.
impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(text: &str) -> Result<GroupElement> {
        let (l, r) = text.split_once('|').ok_or_else(|| Error::Parse {
            token: text.trim().to_string(),
            position: 0,
        })?;
        let letters = |part: &str, offset: usize| -> Result<Vec<u8>> {
            part.split_whitespace()
                .enumerate()
                .map(|(k, tok)| {
                    tok.parse::<u8>().map_err(|_| Error::Parse {
                        token: tok.to_string(),
                        position: offset + k,
                    })
                })
                .collect()
        };
        let left = letters(l, 0)?;
        let right = letters(r, left.len() + 1)?;
        GroupElement::reduced(left, right)
    }
}

pub fn multiply(g: &GroupElement, h: &GroupElement) -> GroupElement {
    let mut left = g.left.clone();
    let mut right = g.right.clone();
    push_reduced(&mut left, h.left.iter().copied());
    push_reduced(&mut right, h.right.iter().copied());
    GroupElement { left, right }
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    GroupElement {
        left: g.left.iter().rev().copied().collect(),
        right: g.right.iter().rev().copied().collect(),
    }
}

/// Letters of `g` in the order their star maps are applied: the right factor
/// from its last letter to its first, then the left factor likewise.
fn application_order(g: &GroupElement) -> impl Iterator<Item = u8> + '_ {
    g.right.iter().rev().chain(g.left.iter().rev()).copied()
}

pub(crate) fn act_into(g: &GroupElement, w: &[Symbol], out: &mut Vec<Symbol>, scratch: &mut Vec<Symbol>) {
    out.clear();
    out.extend_from_slice(w);
    for i in application_order(g) {
        star_into(generator(i), out, scratch);
        std::mem::swap(out, scratch);
    }
}

/// The action of `g` on a `#`-free word through the star maps.
pub fn act(g: &GroupElement, w: &[Symbol]) -> Result<Word> {
    if w.iter().any(|s| s.is_hash()) {
        return precondition("group action input contains #");
    }
    let (mut out, mut scratch) = (Vec::with_capacity(w.len()), Vec::with_capacity(w.len()));
    act_into(g, w, &mut out, &mut scratch);
    Ok(Word::new(out))
}

/// The Claim-1 word `prefix · t_{k_1} ⋯ t_{k_r}`, where `k_1..k_r` is the
/// left factor of `g` (or the right factor when the left one is empty).
/// The returned word is checked by evaluation: `g` moves it, and the symbol
/// at position `|prefix|` of its image is `a_{k_1}`.
pub fn claim1_witness(g: &GroupElement, prefix: &[Symbol]) -> Result<Word> {
    if g.is_identity() {
        return precondition("identity has no moved-word witness");
    }
    let factor = if g.left.is_empty() { &g.right } else { &g.left };
    let triple = if g.left.is_empty() { 4..=6 } else { 1..=3 };
    if let Some(s) = prefix
        .iter()
        .find(|s| !(s.kind() == crate::SymbolKind::Plain && triple.contains(&s.index().unwrap())))
    {
        return precondition(format!(
            "prefix symbol {s} is not a plain letter of the triple {triple:?}"
        ));
    }
    let mut v = prefix.to_vec();
    v.extend(factor.iter().map(|&k| Symbol::tilde(k)));
    let image = act(g, &v)?;
    let expected = Symbol::plain(factor[0]);
    if image[prefix.len()] != expected || image.as_slice() == v.as_slice() {
        return Err(Error::Invariant(format!(
            "g = {g}: image of [{}] is [{image}], expected {expected} at position {}",
            Word::from(v.as_slice()),
            prefix.len()
        )));
    }
    Ok(Word::new(v))
}

/// `count` distinct words moved by `g`, built from Claim-1 witnesses with
/// prefixes of increasing length.
pub fn moved_words(g: &GroupElement, count: usize) -> Result<Vec<Word>> {
    if g.is_identity() {
        return precondition("identity moves no word");
    }
    if count == 0 {
        return precondition("count must be at least 1");
    }
    let letters: Vec<Symbol> = if g.left.is_empty() { 4..=6 } else { 1..=3 }
        .map(Symbol::plain)
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut len = 0;
    while out.len() < count {
        let r = try_for_each_word(&letters, len, |prefix| {
            if out.len() == count {
                return Err(None);
            }
            match claim1_witness(g, prefix) {
                Ok(v) => {
                    out.push(v);
                    Ok(())
                }
                Err(e) => Err(Some(e)),
            }
        });
        if let Err(Some(e)) = r {
            return Err(e);
        }
        len += 1;
    }
    Ok(out)
}

/// All reduced words of length exactly `len` over a triple.
fn reduced_words(triple: [u8; 3], len: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 2 + 1);
        for w in &out {
            for &x in triple.iter().filter(|&&x| w.last() != Some(&x)) {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Every normal form with total factor length at most `max_total`, ordered by
/// total length, then left length, then lexicographically.
pub fn normal_forms(max_total: usize) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        for l in 0..=total {
            let lefts = reduced_words([1, 2, 3], l);
            let rights = reduced_words([4, 5, 6], total - l);
            for left in &lefts {
                for right in &rights {
                    out.push(GroupElement { left: left.clone(), right: right.clone() });
                }
            }
        }
    }
    out
}

/// Associativity, identity and inverse laws over all normal forms of total
/// length `<= max_total`.
pub fn verify_group_axioms(exec: Exec, max_total: usize) -> Report {
    let elems = normal_forms(max_total);
    let id = GroupElement::identity();
    let n = elems.len();
    let outcome = sweep(exec, n, |a| {
        let g = &elems[a];
        if multiply(&id, g) != *g || multiply(g, &id) != *g {
            return Err(format!("identity law fails for {g}"));
        }
        if !multiply(g, &inverse(g)).is_identity() || !multiply(&inverse(g), g).is_identity() {
            return Err(format!("inverse law fails for {g}"));
        }
        let mut checked = 2;
        for h in &elems {
            let gh = multiply(g, h);
            if !is_reduced(&gh.left) || !is_reduced(&gh.right) {
                return Err(format!("{g} * {h} = {gh} is not reduced"));
            }
            for k in &elems {
                if multiply(&gh, k) != multiply(g, &multiply(h, k)) {
                    return Err(format!("associativity fails for ({g}), ({h}), ({k})"));
                }
            }
            checked += elems.len() as u64;
        }
        Ok(checked)
    });
    Report::from_sweep("group-axioms", outcome, |c| {
        format!("{n} normal forms of total length <= {max_total}, {c} law instances")
    })
}

/// `act(gh, w) = act(g, act(h, w))` for all normal forms `g, h` of total
/// length `<= max_total` and all `#`-free `w` with `|w| <= max_len`.
pub fn verify_action_homomorphism(exec: Exec, max_total: usize, max_len: usize) -> Report {
    let elems = normal_forms(max_total);
    let products: Vec<Vec<GroupElement>> = elems
        .iter()
        .map(|g| elems.iter().map(|h| multiply(g, h)).collect())
        .collect();
    let letters: Vec<Symbol> = Symbol::hash_free().collect();
    let outcome = sweep_words(exec, &letters, 0, max_len, |w| {
        let (mut a, mut b, mut c, mut s) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (x, g) in elems.iter().enumerate() {
            for (y, h) in elems.iter().enumerate() {
                act_into(h, w, &mut a, &mut s);
                act_into(g, &a, &mut b, &mut s);
                act_into(&products[x][y], w, &mut c, &mut s);
                if b != c {
                    return Err(format!(
                        "g = {g}, h = {h}, w = [{}]: g(h(w)) = [{}] but (gh)(w) = [{}]",
                        Word::from(w),
                        Word::new(b),
                        Word::new(c)
                    ));
                }
            }
        }
        Ok(())
    });
    let pairs = (elems.len() * elems.len()) as u64;
    Report::from_sweep("action-homomorphism", outcome.map(|n| n * pairs), |c| {
        format!("{c} (g, h, w) triples, total length <= {max_total}, |w| <= {max_len}")
    })
}

/// Claim-1 witnesses for every non-identity normal form of total length
/// `<= max_total`, each verified by evaluation.
pub fn verify_freeness(exec: Exec, max_total: usize) -> Report {
    let elems: Vec<GroupElement> = normal_forms(max_total).into_iter().filter(|g| !g.is_identity()).collect();
    let outcome = sweep(exec, elems.len(), |k| {
        claim1_witness(&elems[k], &[]).map(|_| 1).map_err(|e| e.to_string())
    });
    Report::from_sweep("bounded-freeness", outcome, |n| {
        format!("{n} non-identity normal forms of total length <= {max_total} each move their witness")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::parse_word;
    use proptest::prelude::*;

    fn g(text: &str) -> GroupElement {
        text.parse().unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(g("|"), GroupElement::identity());
        assert_eq!(g("1 2 1 | 4 5").to_string(), "1 2 1 | 4 5");
        assert_eq!(g("1 |").to_string(), "1 |");
        assert_eq!(g("| 4").to_string(), "| 4");
        assert_eq!(g("1 1 2 |"), g("2 |"));
        assert!("1 2".parse::<GroupElement>().is_err());
        assert!("4 |".parse::<GroupElement>().is_err());
        assert!("| 1".parse::<GroupElement>().is_err());
        assert!("x |".parse::<GroupElement>().is_err());
        assert!(GroupElement::new(vec![1, 1], vec![]).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert!(multiply(&g("1 |"), &g("1 |")).is_identity());
        assert_eq!(multiply(&g("1 2 |"), &g("2 | 4")), g("1 | 4"));
        let x = g("1 3 | 5 6 5");
        assert_eq!(multiply(&GroupElement::identity(), &x), x);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&g("1 2 1 |")), g("1 2 1 |"));
        assert_eq!(inverse(&g("1 2 | 4 5")), g("2 1 | 5 4"));
        assert!(inverse(&GroupElement::identity()).is_identity());
    }

    #[test]
    fn act_examples() {
        assert_eq!(act(&g("1 |"), &w("t1")).unwrap(), w("a1"));
        assert_eq!(act(&g("1 2 |"), &w("t1 t2")).unwrap(), w("a1 a2"));
        let word = w("a3 t5 a1");
        assert_eq!(act(&GroupElement::identity(), &word).unwrap(), word);
        assert!(act(&g("1 |"), &w("a1 #")).is_err());
    }

    #[test]
    fn witness_examples() {
        let v = claim1_witness(&g("1 |"), &[]).unwrap();
        assert_eq!(v, w("t1"));
        assert_eq!(act(&g("1 |"), &v).unwrap(), w("a1"));
        let v = claim1_witness(&g("1 2 |"), &[]).unwrap();
        assert_eq!(v, w("t1 t2"));
        assert_eq!(act(&g("1 2 |"), &v).unwrap(), w("a1 a2"));
        let v = claim1_witness(&g("| 4"), &[]).unwrap();
        assert_eq!(v, w("t4"));
        assert_eq!(act(&g("| 4"), &v).unwrap(), w("a4"));
        let v = claim1_witness(&g("3 1 | 6"), &w("a2 a2")).unwrap();
        assert_eq!(v, w("a2 a2 t3 t1"));
        assert!(matches!(claim1_witness(&GroupElement::identity(), &[]), Err(Error::Precondition(_))));
        assert!(claim1_witness(&g("1 |"), &w("a4")).is_err());
        assert!(claim1_witness(&g("| 4"), &w("a1")).is_err());
    }

    #[test]
    fn moved_words_examples() {
        let words = moved_words(&g("1 |"), 3).unwrap();
        assert_eq!(words, vec![w("t1"), w("a1 t1"), w("a2 t1")]);
        assert_eq!(moved_words(&g("1 | 4"), 1).unwrap().len(), 1);
        for x in normal_forms(3).iter().filter(|x| !x.is_identity()) {
            let words = moved_words(x, 13).unwrap();
            let distinct: std::collections::BTreeSet<_> = words.iter().collect();
            assert_eq!(distinct.len(), 13);
            for v in &words {
                assert_ne!(&act(x, v).unwrap(), v);
            }
        }
        assert!(moved_words(&GroupElement::identity(), 1).is_err());
        assert!(moved_words(&g("1 |"), 0).is_err());
    }

    #[test]
    fn normal_form_counts() {
        // 3 * 2^(l-1) reduced words of length l >= 1 per factor
        let per_factor = |l: usize| if l == 0 { 1 } else { 3 << (l - 1) };
        for max in 0..=5 {
            let expected: usize = (0..=max)
                .flat_map(|t| (0..=t).map(move |l| per_factor(l) * per_factor(t - l)))
                .sum();
            assert_eq!(normal_forms(max).len(), expected);
        }
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(verify_group_axioms(Exec::Sequential, 2).passed());
        assert!(verify_action_homomorphism(Exec::Parallel, 2, 2).passed());
        assert!(verify_freeness(Exec::Sequential, 4).passed());
    }

    #[test]
    fn generators_have_order_two() {
        let letters: Vec<Symbol> = Symbol::hash_free().collect();
        for i in 1..=6u8 {
            let gi = GroupElement::generator(i).unwrap();
            assert!(multiply(&gi, &gi).is_identity());
            let mut moved = false;
            try_for_each_word::<()>(&letters, 3, |u| {
                let once = act(&gi, u).unwrap();
                assert_eq!(act(&gi, &once).unwrap().as_slice(), u);
                moved |= once.as_slice() != u;
                Ok(())
            })
            .unwrap();
            assert!(moved, "g{i} acts trivially");
        }
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        (
            proptest::collection::vec(1u8..=3, 0..6),
            proptest::collection::vec(4u8..=6, 0..6),
        )
            .prop_map(|(l, r)| GroupElement::reduced(l, r).unwrap())
    }

    fn arb_hash_free() -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..12, 0..8)
            .prop_map(|v| v.into_iter().map(Symbol::from_code).collect())
    }

    proptest! {
        #[test]
        fn factor_order_does_not_matter(x in arb_element(), word in arb_hash_free()) {
            // left factor first, then right factor
            let mut cur = word.as_slice().to_vec();
            let mut scratch = Vec::new();
            for &i in x.left_factor().iter().rev().chain(x.right_factor().iter().rev()) {
                star_into(generator(i), &cur, &mut scratch);
                std::mem::swap(&mut cur, &mut scratch);
            }
            let image = act(&x, &word).unwrap();
            prop_assert_eq!(image.as_slice(), &cur[..]);
        }

        #[test]
        fn inverse_undoes_action(x in arb_element(), word in arb_hash_free()) {
            let moved = act(&x, &word).unwrap();
            prop_assert_eq!(act(&inverse(&x), &moved).unwrap(), word);
            prop_assert!(multiply(&x, &inverse(&x)).is_identity());
        }

        #[test]
        fn parse_display_round_trip(x in arb_element()) {
            prop_assert_eq!(x.to_string().parse::<GroupElement>().unwrap(), x);
        }
    }
}
