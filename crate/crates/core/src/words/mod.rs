//! Finite binary words, exact rationals and the standard dyadic intervals that
//! words address.

mod interval;
mod rational;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use interval::{
    interval_precedes, standard_decomposition, word_interval, word_interval_half_open, Interval,
};
pub use rational::{Dyadic, Rational};

/// A finite word over `{0,1}`.
///
/// The derived ordering is lexicographic, so a word sorts before each of its
/// extensions and pairwise incomparable words sort left to right by the
/// position of their dyadic intervals.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryWord(Vec<u8>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixRelation {
    Equal,
    UPrefixOfV,
    VPrefixOfU,
    Incomparable,
}

impl BinaryWord {
    pub fn empty() -> Self {
        BinaryWord(Vec::new())
    }

    /// Panics if a digit is not 0 or 1.
    pub fn from_digits(digits: impl IntoIterator<Item = u8>) -> Self {
        let digits: Vec<u8> = digits.into_iter().collect();
        assert!(
            digits.iter().all(|&d| d <= 1),
            "binary digits must be 0 or 1"
        );
        BinaryWord(digits)
    }

    pub fn zeros(n: usize) -> Self {
        BinaryWord(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        BinaryWord(vec![1; n])
    }

    /// The word of length `len` whose digits are the binary expansion of `value`.
    pub fn from_value(value: &BigInt, len: usize) -> Self {
        let mut digits = vec![0u8; len];
        for (i, d) in digits.iter_mut().enumerate() {
            if value.bit((len - 1 - i) as u64) {
                *d = 1;
            }
        }
        BinaryWord(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, digit: u8) -> Self {
        assert!(digit <= 1);
        let mut d = self.0.clone();
        d.push(digit);
        BinaryWord(d)
    }

    pub fn concat(&self, suffix: &BinaryWord) -> Self {
        let mut d = self.0.clone();
        d.extend_from_slice(&suffix.0);
        BinaryWord(d)
    }

    pub fn parent(&self) -> Option<Self> {
        (!self.is_empty()).then(|| BinaryWord(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn last_digit(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other = self · s` gives `Some(s)`.
    pub fn suffix_after(&self, prefix: &BinaryWord) -> Option<BinaryWord> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|s| BinaryWord(s.to_vec()))
    }

    pub fn prefix(&self, len: usize) -> BinaryWord {
        BinaryWord(self.0[..len].to_vec())
    }

    /// Membership in the set of words containing both digits, i.e. words whose
    /// interval lies inside `(0,1)`.
    pub fn is_inner(&self) -> bool {
        self.0.contains(&0) && self.0.contains(&1)
    }

    pub fn is_all_zeros(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&d| d == 1)
    }

    /// Swaps every digit; the image of `[u]` under `t ↦ 1 - t` is `[mirror(u)]`.
    pub fn mirror(&self) -> Self {
        BinaryWord(self.0.iter().map(|d| 1 - d).collect())
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::zero();
        for &d in &self.0 {
            v <<= 1;
            if d == 1 {
                v += 1;
            }
        }
        v
    }

    /// `.u` as a rational.
    pub fn left_endpoint(&self) -> Rational {
        Rational::new(self.value(), BigInt::one() << self.len())
    }

    /// `.u111...` as a rational.
    pub fn right_endpoint(&self) -> Rational {
        Rational::new(self.value() + 1, BigInt::one() << self.len())
    }

    pub fn width(&self) -> Rational {
        Rational::pow2(-(self.len() as i64))
    }

    /// The word addressing the standard dyadic interval `[lo, hi]`, if it is one.
    pub fn from_interval(lo: &Rational, hi: &Rational) -> Option<Self> {
        let width = hi - lo;
        let k = width.log2_exact()?;
        if k > 0 || lo.is_negative() || hi > &Rational::one() {
            return None;
        }
        let len = (-k) as usize;
        let scaled = lo * Rational::pow2(len as i64);
        if !scaled.denom().is_one() {
            return None;
        }
        Some(BinaryWord::from_value(scaled.numer(), len))
    }

    /// The first `len` digits of the binary expansion of `t ∈ [0,1)`, so that
    /// `t ∈ [.w, .w1^∞)`.
    pub fn floor_word(t: &Rational, len: usize) -> Self {
        let scaled = (t * Rational::pow2(len as i64)).floor();
        BinaryWord::from_value(&scaled, len)
    }
}

pub fn is_inner(w: &BinaryWord) -> bool {
    w.is_inner()
}

pub fn prefix_relation(u: &BinaryWord, v: &BinaryWord) -> PrefixRelation {
    match (u.is_prefix_of(v), v.is_prefix_of(u)) {
        (true, true) => PrefixRelation::Equal,
        (true, false) => PrefixRelation::UPrefixOfV,
        (false, true) => PrefixRelation::VPrefixOfU,
        (false, false) => PrefixRelation::Incomparable,
    }
}

pub fn are_incomparable(u: &BinaryWord, v: &BinaryWord) -> bool {
    prefix_relation(u, v) == PrefixRelation::Incomparable
}

/// True iff all words are pairwise incomparable.
pub fn is_antichain(words: &[BinaryWord]) -> bool {
    let mut sorted: Vec<&BinaryWord> = words.iter().collect();
    sorted.sort();
    // after sorting, a comparable pair is always adjacent to a comparable pair
    sorted.windows(2).all(|w| are_incomparable(w[0], w[1]))
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            f.write_str(if *d == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => digits.push(0),
                '1' => digits.push(1),
                _ => {
                    return Err(Error::Syntax {
                        position,
                        message: format!("unexpected character {c:?} in binary word"),
                    })
                }
            }
        }
        Ok(BinaryWord(digits))
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn inner_words() {
        assert!(is_inner(&w("01")));
        assert!(!is_inner(&w("000")));
        assert!(!is_inner(&w("")));
        assert!(is_inner(&w("1110")));
    }

    #[test]
    fn prefix_relations() {
        assert_eq!(
            prefix_relation(&w("01"), &w("0110")),
            PrefixRelation::UPrefixOfV
        );
        assert_eq!(
            prefix_relation(&w("0110"), &w("01")),
            PrefixRelation::VPrefixOfU
        );
        assert_eq!(
            prefix_relation(&w("01"), &w("10")),
            PrefixRelation::Incomparable
        );
        assert_eq!(prefix_relation(&w("1"), &w("1")), PrefixRelation::Equal);
        assert_eq!(prefix_relation(&w(""), &w("1")), PrefixRelation::UPrefixOfV);
    }

    #[test]
    fn endpoints() {
        assert_eq!(w("01").left_endpoint(), Rational::new(1, 4));
        assert_eq!(w("01").right_endpoint(), Rational::new(1, 2));
        assert_eq!(w("").right_endpoint(), Rational::one());
    }

    #[test]
    fn words_from_intervals() {
        let q = |a: i64, b: i64| Rational::new(a, b);
        assert_eq!(BinaryWord::from_interval(&q(1, 4), &q(1, 2)), Some(w("01")));
        assert_eq!(BinaryWord::from_interval(&q(0, 1), &q(1, 1)), Some(w("")));
        assert_eq!(BinaryWord::from_interval(&q(1, 4), &q(3, 4)), None);
        assert_eq!(BinaryWord::from_interval(&q(1, 8), &q(3, 8)), None);
        assert_eq!(BinaryWord::floor_word(&q(1, 3), 4), w("0101"));
        assert_eq!(BinaryWord::floor_word(&q(1, 2), 3), w("100"));
    }

    #[test]
    fn antichains() {
        assert!(is_antichain(&[w("00"), w("01"), w("1")]));
        assert!(!is_antichain(&[w("0"), w("1"), w("01")]));
        assert!(!is_antichain(&[w("1"), w("1")]));
        assert!(!is_antichain(&[w("0"), w("00"), w("1")]));
    }

    #[test]
    fn incomparable_words_order_left_to_right() {
        let mut ws = [w("1"), w("0110"), w("00"), w("010")];
        ws.sort();
        let lefts: Vec<Rational> = ws.iter().map(BinaryWord::left_endpoint).collect();
        assert!(lefts.windows(2).all(|p| p[0] < p[1]));
    }
}
