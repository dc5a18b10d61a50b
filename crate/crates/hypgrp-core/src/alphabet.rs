//! Letters, words and the short-lex order.
//!
//! A letter is an index into an [`Alphabet`]; the declared order of the
//! letters is the order used by short-lex comparisons everywhere in the
//! crate. Inverse letters are ordinary letters related by an involution.

use crate::error::Error;
use std::cmp::Ordering;
use std::fmt;

/// A letter: an index into the owning [`Alphabet`].
pub type Letter = u8;

/// A word over an [`Alphabet`], stored as letter indices.
pub type Word = Vec<Letter>;

/// An ordered alphabet closed under formal inversion.
///
/// Letter order is the declared order, which is the order short-lex uses for
/// tie-breaking. Every letter has an inverse letter (possibly itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    inv: Vec<Letter>,
}

impl Alphabet {
    /// Build an alphabet from letter names and an involution pairing each
    /// letter with its inverse, given as indices into `names`.
    pub fn new(names: Vec<String>, inv: Vec<Letter>) -> Result<Self, Error> {
        if names.len() > 250 {
            return Err(Error::InvalidWord(format!(
                "alphabet has {} letters; at most 250 supported",
                names.len()
            )));
        }
        if names.len() != inv.len() {
            return Err(Error::InvalidWord(
                "inverse table length differs from letter count".into(),
            ));
        }
        for (i, &j) in inv.iter().enumerate() {
            if j as usize >= names.len() || inv[j as usize] as usize != i {
                return Err(Error::InvalidWord(format!(
                    "inverse table is not an involution at letter {i}"
                )));
            }
        }
        Ok(Alphabet { names, inv })
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True when the alphabet has no letters.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Name of a letter.
    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    /// All letter names in declared order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The inverse of a letter.
    pub fn inverse(&self, l: Letter) -> Letter {
        self.inv[l as usize]
    }

    /// Look up a letter by name.
    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }

    /// The formal inverse of a word: reverse it and invert each letter.
    pub fn invert_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }

    /// Parse a word written as a string of single-character letter names.
    pub fn parse_word(&self, text: &str) -> Result<Word, Error> {
        let mut w = Word::with_capacity(text.len());
        for ch in text.chars() {
            let name = ch.to_string();
            match self.letter(&name) {
                Some(l) => w.push(l),
                None => {
                    return Err(Error::InvalidWord(format!(
                        "unknown letter '{ch}' in word \"{text}\""
                    )))
                }
            }
        }
        Ok(w)
    }

    /// Render a word using the letter names; the empty word prints as "".
    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.name(l)).collect()
    }

    /// Free reduction: cancel adjacent inverse pairs until none remain.
    pub fn free_reduce(&self, w: &[Letter]) -> Word {
        let mut out = Word::with_capacity(w.len());
        for &l in w {
            if out.last().is_some_and(|&t| self.inverse(t) == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }
}

/// Short-lex comparison: first by length, then lexicographically by letter
/// index in the declared order.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A displayable word borrowed from an alphabet, for diagnostics.
pub struct DisplayWord<'a>(pub &'a Alphabet, pub &'a [Letter]);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_word(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> Alphabet {
        // a A b B with a<->A, b<->B
        Alphabet::new(
            vec!["a".into(), "A".into(), "b".into(), "B".into()],
            vec![1, 0, 3, 2],
        )
        .unwrap()
    }

    #[test]
    fn shortlex_orders_by_length_then_lex() {
        let ab = free2();
        let a = ab.parse_word("a").unwrap();
        let bb = ab.parse_word("bb").unwrap();
        let ba = ab.parse_word("ba").unwrap();
        assert_eq!(shortlex_cmp(&a, &bb), Ordering::Less);
        assert_eq!(shortlex_cmp(&ba, &bb), Ordering::Less);
        assert_eq!(shortlex_cmp(&ba, &ba), Ordering::Equal);
    }

    #[test]
    fn invert_word_reverses_and_inverts() {
        let ab = free2();
        let w = ab.parse_word("abA").unwrap();
        assert_eq!(ab.format_word(&ab.invert_word(&w)), "aBA");
    }

    #[test]
    fn free_reduce_cancels_adjacent_inverses() {
        let ab = free2();
        let w = ab.parse_word("abBAba").unwrap();
        assert_eq!(ab.format_word(&ab.free_reduce(&w)), "ba");
    }

    #[test]
    fn involution_validated() {
        assert!(Alphabet::new(vec!["a".into(), "A".into()], vec![1, 1]).is_err());
    }
}
