//! The 13-letter alphabet `a1..a6`, `t1..t6` (the tilde letters) and `#`,
//! finite words over it, and binary words.
//!
//! Words are written as whitespace-separated tokens: `a1 t2 #`.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

/// Number of symbols in the alphabet.
pub const ALPHABET_SIZE: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Plain,
    Tilde,
    Hash,
}

/// One letter of the alphabet, stored as a dense code in `0..13`:
/// `a_i` is `i - 1`, `t_i` is `i + 5`, `#` is `12`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(u8);

impl Symbol {
    pub const HASH: Symbol = Symbol(12);

    /// `a_i` for `1 <= i <= 6`.
    pub fn plain(i: u8) -> Symbol {
        assert!((1..=6).contains(&i), "plain index {i} outside 1..6");
        Symbol(i - 1)
    }

    /// `ã_i` for `1 <= i <= 6`.
    pub fn tilde(i: u8) -> Symbol {
        assert!((1..=6).contains(&i), "tilde index {i} outside 1..6");
        Symbol(i + 5)
    }

    pub fn from_code(code: usize) -> Symbol {
        assert!(code < ALPHABET_SIZE);
        Symbol(code as u8)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn kind(self) -> SymbolKind {
        match self.0 {
            0..=5 => SymbolKind::Plain,
            6..=11 => SymbolKind::Tilde,
            _ => SymbolKind::Hash,
        }
    }

    /// Index `1..=6` for plain and tilde letters, `None` for `#`.
    pub fn index(self) -> Option<u8> {
        match self.kind() {
            SymbolKind::Plain => Some(self.0 + 1),
            SymbolKind::Tilde => Some(self.0 - 5),
            SymbolKind::Hash => None,
        }
    }

    #[inline]
    pub fn is_hash(self) -> bool {
        self.0 == 12
    }

    /// All 13 symbols in code order.
    pub fn all() -> impl Iterator<Item = Symbol> + Clone {
        (0..ALPHABET_SIZE as u8).map(Symbol)
    }

    /// The 12 symbols other than `#`.
    pub fn hash_free() -> impl Iterator<Item = Symbol> + Clone {
        (0..12u8).map(Symbol)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SymbolKind::Plain => write!(f, "a{}", self.0 + 1),
            SymbolKind::Tilde => write!(f, "t{}", self.0 - 5),
            SymbolKind::Hash => f.write_str("#"),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(token: &str) -> Result<Symbol> {
        let bad = || Error::Parse {
            token: token.to_string(),
            position: 0,
        };
        if token == "#" {
            return Ok(Symbol::HASH);
        }
        let mut chars = token.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        if rest.len() != 1 {
            return Err(bad());
        }
        let index: u8 = rest.parse().map_err(|_| bad())?;
        if !(1..=6).contains(&index) {
            return Err(bad());
        }
        match head {
            'a' => Ok(Symbol::plain(index)),
            't' => Ok(Symbol::tilde(index)),
            _ => Err(bad()),
        }
    }
}

/// A finite word over the 13-letter alphabet. The empty word is allowed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn contains_hash(&self) -> bool {
        self.0.iter().any(|s| s.is_hash())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The factor `self[start, end)`.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Word {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Word {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word> {
        parse_word(text)
    }
}

/// Parses whitespace-separated tokens into a word. Positions in errors are
/// zero-based token indices.
pub fn parse_word(text: &str) -> Result<Word> {
    text.split_whitespace()
        .enumerate()
        .map(|(position, token)| {
            token.parse::<Symbol>().map_err(|_| Error::Parse {
                token: token.to_string(),
                position,
            })
        })
        .collect()
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

/// Drops the first symbol.
pub fn shift_word(w: &Word) -> Result<Word> {
    match w.split_first() {
        Some((_, rest)) => Ok(Word::from(rest)),
        None => precondition("shift of the empty word"),
    }
}

/// True iff `w` has odd length and contains no `#`.
pub fn is_hash_free_odd(w: &[Symbol]) -> bool {
    w.len() % 2 == 1 && !w.iter().any(|s| s.is_hash())
}

/// Parses a file of words, one per line. Blank lines and lines starting with
/// `//` are skipped; errors carry the one-based line number.
pub fn parse_word_lines(text: &str) -> Result<Vec<(usize, Word)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let w = parse_word(trimmed).map_err(|e| Error::Line {
            line: k + 1,
            message: e.to_string(),
        })?;
        out.push((k + 1, w));
    }
    Ok(out)
}

/// Calls `visit` on every word of length `len` over `letters`, in
/// lexicographic order of `letters`, reusing a single buffer. Stops at the
/// first error.
pub fn try_for_each_word<E>(
    letters: &[Symbol],
    len: usize,
    mut visit: impl FnMut(&[Symbol]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    try_for_each_extension(letters, &[], len, &mut visit)
}

/// Like [`try_for_each_word`] but every visited word starts with `prefix`
/// and has total length `prefix.len() + extra`.
pub fn try_for_each_extension<E>(
    letters: &[Symbol],
    prefix: &[Symbol],
    extra: usize,
    visit: &mut impl FnMut(&[Symbol]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    let mut buf = prefix.to_vec();
    if extra == 0 {
        return visit(&buf);
    }
    if letters.is_empty() {
        return Ok(());
    }
    let base = prefix.len();
    let mut digits = vec![0usize; extra];
    buf.extend(std::iter::repeat_n(letters[0], extra));
    loop {
        visit(&buf)?;
        // odometer increment from the right
        let mut pos = extra;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < letters.len() {
                buf[base + pos] = letters[digits[pos]];
                break;
            }
            digits[pos] = 0;
            buf[base + pos] = letters[0];
        }
    }
}

/// A finite word over `{0, 1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(bits: Vec<u8>) -> Result<BinaryWord> {
        if let Some(p) = bits.iter().position(|&b| b > 1) {
            return precondition(format!("bit {p} is not 0 or 1"));
        }
        Ok(BinaryWord(bits))
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> BinaryWord {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BinaryWord(bits)
    }

    pub fn empty() -> BinaryWord {
        BinaryWord(Vec::new())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn factor(&self, start: usize, end: usize) -> BinaryWord {
        BinaryWord(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BinaryWord(v)
    }
}

impl Deref for BinaryWord {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<BinaryWord> {
        text.trim()
            .chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    token: c.to_string(),
                    position,
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BinaryWord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            w("a1 t2 #").as_slice(),
            &[Symbol::plain(1), Symbol::tilde(2), Symbol::HASH]
        );
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("  \t "), Word::empty());
        assert_eq!(
            parse_word("a1 a7"),
            Err(Error::Parse {
                token: "a7".into(),
                position: 1
            })
        );
        for bad in ["a0", "t7", "b1", "a", "a11", "##", "A1"] {
            assert!(parse_word(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_word(&Word::new(vec![Symbol::plain(1), Symbol::HASH])), "a1 #");
        assert_eq!(format_word(&Word::empty()), "");
        assert_eq!(format_word(&Word::new(vec![Symbol::tilde(6)])), "t6");
    }

    #[test]
    fn symbol_table() {
        let all: Vec<Symbol> = Symbol::all().collect();
        assert_eq!(all.len(), 13);
        assert_eq!(Symbol::hash_free().count(), 12);
        for i in 1..=6 {
            assert_eq!(Symbol::plain(i).index(), Some(i));
            assert_eq!(Symbol::tilde(i).index(), Some(i));
            assert_eq!(Symbol::plain(i).kind(), SymbolKind::Plain);
            assert_eq!(Symbol::tilde(i).kind(), SymbolKind::Tilde);
        }
        assert_eq!(Symbol::HASH.index(), None);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_word(&w("a1 a2 #")).unwrap(), w("a2 #"));
        assert_eq!(shift_word(&w("#")).unwrap(), Word::empty());
        assert!(matches!(shift_word(&Word::empty()), Err(Error::Precondition(_))));
    }

    #[test]
    fn hash_free_odd_examples() {
        assert!(is_hash_free_odd(&w("a1")));
        assert!(!is_hash_free_odd(&w("a1 a2")));
        assert!(!is_hash_free_odd(&w("a1 # a2")));
        assert!(!is_hash_free_odd(&w("")));
    }

    #[test]
    fn word_lines_skip_comments() {
        let parsed = parse_word_lines("// header\n\na1 t1\n  \n#\n").unwrap();
        assert_eq!(parsed, vec![(3, w("a1 t1")), (5, w("#"))]);
        let err = parse_word_lines("a1\nq9\n").unwrap_err();
        assert!(matches!(err, Error::Line { line: 2, .. }));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let letters: Vec<Symbol> = Symbol::all().collect();
        let mut seen = Vec::new();
        try_for_each_word::<()>(&letters, 2, |u| {
            seen.push(Word::from(u));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 169);
        assert!(seen.windows(2).all(|p| p[0] < p[1]));
        let mut n = 0;
        try_for_each_word::<()>(&letters, 0, |u| {
            assert!(u.is_empty());
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn binary_word_parse() {
        let b: BinaryWord = "0110".parse().unwrap();
        assert_eq!(b.bits(), &[0, 1, 1, 0]);
        assert_eq!(b.to_string(), "0110");
        assert!("012".parse::<BinaryWord>().is_err());
        assert!(BinaryWord::new(vec![2]).is_err());
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..13, 0..=max)
            .prop_map(|v| v.into_iter().map(Symbol::from_code).collect())
    }

    proptest! {
        #[test]
        fn parse_format_round_trip(word in arb_word(8)) {
            prop_assert_eq!(parse_word(&format_word(&word)).unwrap(), word);
        }

        #[test]
        fn repeated_shift_drops_prefix(word in arb_word(8), k in 0usize..=8) {
            let k = k.min(word.len());
            let mut cur = word.clone();
            for _ in 0..k {
                cur = shift_word(&cur).unwrap();
            }
            prop_assert_eq!(cur, word.factor(k, word.len()));
        }
    }
}
