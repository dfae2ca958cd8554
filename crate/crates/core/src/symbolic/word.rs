use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::map_model::Digit;

/// Outcome of comparing two words by their first differing digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrefixOrdering {
    Less,
    /// One word is a prefix of the other (or they are identical).
    EqualPrefix,
    Greater,
}

impl PrefixOrdering {
    /// `self ⪯ other` with undecided comparisons counted as satisfied.
    pub fn at_most(self) -> bool {
        self != PrefixOrdering::Greater
    }

    /// `self ⪰ other` with undecided comparisons counted as satisfied.
    pub fn at_least(self) -> bool {
        self != PrefixOrdering::Less
    }
}

/// A finite binary word, the finite stand-in for a point of `{0,1}^ℕ`.
///
/// The derived `Ord` is lexicographic and agrees with the sequence order on
/// words of equal length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Digit>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_digits(digits: Vec<Digit>) -> Self {
        debug_assert!(digits.iter().all(|d| *d <= 1));
        Word(digits)
    }

    /// `dᵏ`.
    pub fn constant(d: Digit, k: usize) -> Self {
        Word(vec![d; k])
    }

    /// The `len` low bits of `bits`, most significant first.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Word(
            (0..len)
                .map(|i| ((bits >> (len - 1 - i)) & 1) as Digit)
                .collect(),
        )
    }

    /// Inverse of [`Word::from_bits`]; `None` beyond 64 digits.
    pub fn to_bits(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, d| (acc << 1) | *d as u64))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<Digit> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, d: Digit) {
        self.0.push(d)
    }

    /// First `n` digits (the whole word when shorter).
    pub fn truncate(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Digitwise flip `σ ↦ σ*`.
    pub fn star(&self) -> Word {
        Word(self.0.iter().map(|d| 1 - d).collect())
    }

    /// Left shift `S`; `None` on the empty word.
    pub fn shift(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[1..].to_vec()))
        }
    }

    /// `S^j`, saturating at the empty word.
    pub fn shift_by(&self, j: usize) -> Word {
        Word(self.0[j.min(self.0.len())..].to_vec())
    }

    /// `s_i(σ) = iσ`.
    pub fn prepend(&self, d: Digit) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(d);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// Comparison by first differing digit over the common length.
    pub fn lex_compare(&self, other: &Word) -> PrefixOrdering {
        lex_compare_digits(&self.0, &other.0)
    }

    /// Index of the first differing digit over the common length.
    pub fn first_difference(&self, other: &Word) -> Option<usize> {
        self.0.iter().zip(&other.0).position(|(x, y)| x != y)
    }

    /// `2^{-k}` for the least differing index `k`, 0 when one word is a
    /// prefix of the other.
    pub fn metric(&self, other: &Word) -> f64 {
        match self.first_difference(other) {
            Some(k) => (-(k as f64)).exp2(),
            None => 0.0,
        }
    }
}

pub(crate) fn lex_compare_digits(u: &[Digit], v: &[Digit]) -> PrefixOrdering {
    for (x, y) in u.iter().zip(v) {
        if x != y {
            return if x < y {
                PrefixOrdering::Less
            } else {
                PrefixOrdering::Greater
            };
        }
    }
    PrefixOrdering::EqualPrefix
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            f.write_str(if *d == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("word text must consist of '0' and '1' (found {0:?})")]
pub struct ParseWordError(pub char);

impl FromStr for Word {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(ParseWordError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
