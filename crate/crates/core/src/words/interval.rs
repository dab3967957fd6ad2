use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BinaryWord, Rational};
use crate::error::{Error, Result};

/// An interval of `ℝ` with exact endpoints and independent open/closed flags.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(Error::InvalidInterval(format!(
                "{}{lo},{hi}{} is empty",
                if lo_closed { "[" } else { "(" },
                if hi_closed { "]" } else { ")" }
            )));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// Panics if `lo > hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, true, true).expect("closed interval with lo > hi")
    }

    /// Panics if `lo >= hi`.
    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, false, false).expect("open interval with lo >= hi")
    }

    pub fn point(x: Rational) -> Self {
        Interval::closed(x.clone(), x)
    }

    pub fn unit() -> Self {
        Interval::closed(Rational::zero(), Rational::one())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok =
            other.lo > self.lo || (other.lo == self.lo && (self.lo_closed || !other.lo_closed));
        let hi_ok =
            other.hi < self.hi || (other.hi == self.hi && (self.hi_closed || !other.hi_closed));
        lo_ok && hi_ok
    }

    /// Every point of `self` is `≤` every point of `other`.
    pub fn precedes(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn has_dyadic_endpoints(&self) -> bool {
        self.lo.is_dyadic() && self.hi.is_dyadic()
    }

    pub fn closure(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    /// Nonempty intersection, if any.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[u] = [.u, .u1^∞]`.
pub fn word_interval(u: &BinaryWord) -> Result<Interval> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(Interval::closed(u.left_endpoint(), u.right_endpoint()))
}

/// `[u) = [.u, .u1^∞)`.
pub fn word_interval_half_open(u: &BinaryWord) -> Result<Interval> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    Interval::new(u.left_endpoint(), u.right_endpoint(), true, false)
}

pub fn interval_precedes(first: &Interval, second: &Interval) -> bool {
    first.precedes(second)
}

/// Minimal left-to-right tiling of a closed dyadic interval by standard dyadic
/// intervals, taking the largest admissible interval at each step.
///
/// `[0,1]` tiles as `["0", "1"]`; the empty word is never produced.
pub fn standard_decomposition(interval: &Interval) -> Result<Vec<BinaryWord>> {
    if interval.is_point() {
        return Err(Error::InvalidInterval(format!("{interval} is degenerate")));
    }
    for x in [&interval.lo, &interval.hi] {
        if !x.is_dyadic() {
            return Err(Error::NonDyadic(x.clone()));
        }
    }
    if interval.lo.is_negative() || interval.hi > Rational::one() {
        return Err(Error::InvalidInterval(format!(
            "{interval} is not inside [0,1]"
        )));
    }
    let e = interval
        .lo
        .dyadic_exponent()
        .unwrap()
        .max(interval.hi.dyadic_exponent().unwrap())
        .max(1);
    let scale = Rational::pow2(e as i64);
    let mut pos: BigInt = (&interval.lo * &scale).numer().clone();
    let end: BigInt = (&interval.hi * &scale).numer().clone();
    let mut words = Vec::new();
    while pos < end {
        // largest s with 2^s | pos, pos + 2^s <= end, and s <= e - 1
        let align = if pos.is_zero() {
            e - 1
        } else {
            pos.trailing_zeros().unwrap().min(e - 1)
        };
        let mut s = align;
        while &pos + (BigInt::one() << s) > end {
            s -= 1;
        }
        let len = (e - s) as usize;
        words.push(BinaryWord::from_value(&(&pos >> s), len));
        pos += BigInt::one() << s;
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn ws(list: &[&str]) -> Vec<BinaryWord> {
        list.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn word_intervals() {
        assert_eq!(
            word_interval(&w("01")).unwrap(),
            Interval::closed(q(1, 4), q(1, 2))
        );
        assert_eq!(
            word_interval(&w("1")).unwrap(),
            Interval::closed(q(1, 2), q(1, 1))
        );
        assert_eq!(
            word_interval(&w("001")).unwrap(),
            Interval::closed(q(1, 8), q(1, 4))
        );
        assert_eq!(word_interval(&w("")), Err(Error::EmptyWord));
        let half_open = word_interval_half_open(&w("01")).unwrap();
        assert!(half_open.contains(&q(1, 4)) && !half_open.contains(&q(1, 2)));
    }

    #[test]
    fn precedence() {
        let i = |a, b, c, d| Interval::closed(q(a, b), q(c, d));
        assert!(interval_precedes(&i(1, 8, 1, 4), &i(1, 4, 1, 2)));
        assert!(!interval_precedes(&i(1, 4, 1, 2), &i(1, 8, 1, 4)));
        assert!(!interval_precedes(&i(0, 1, 1, 2), &i(1, 4, 1, 1)));
    }

    #[test]
    fn decomposition_examples() {
        let d = |a, b, c, e| standard_decomposition(&Interval::closed(q(a, b), q(c, e))).unwrap();
        assert_eq!(d(1, 4, 1, 1), ws(&["01", "1"]));
        assert_eq!(d(1, 8, 1, 2), ws(&["001", "01"]));
        assert_eq!(d(0, 1, 1, 1), ws(&["0", "1"]));
        assert_eq!(d(3, 8, 5, 8), ws(&["011", "100"]));
        assert!(matches!(
            standard_decomposition(&Interval::closed(q(1, 3), q(1, 2))),
            Err(Error::NonDyadic(_))
        ));
    }

    #[test]
    fn intersections() {
        let a = Interval::open(q(0, 1), q(1, 2));
        let b = Interval::closed(q(1, 4), q(1, 1));
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Interval::new(q(1, 4), q(1, 2), true, false).unwrap());
        assert!(Interval::open(q(0, 1), q(1, 2))
            .intersect(&Interval::open(q(1, 2), q(1, 1)))
            .is_none());
        assert!(Interval::closed(q(0, 1), q(1, 2))
            .intersect(&Interval::closed(q(1, 2), q(1, 1)))
            .unwrap()
            .is_point());
    }

    #[test]
    fn containment_respects_flags() {
        let open = Interval::open(q(0, 1), q(1, 1));
        assert!(open.contains_interval(&Interval::closed(q(1, 4), q(1, 2))));
        assert!(!open.contains_interval(&Interval::closed(q(0, 1), q(1, 2))));
        assert!(Interval::unit().contains_interval(&open));
    }
}
