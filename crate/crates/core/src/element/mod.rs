//! Elements of Thompson's group F as reduced tree diagrams.
//!
//! Composition is left to right: `f.compose(&g)` is the map `t ↦ g(f(t))`,
//! and `g.conjugate(&s)` is `s⁻¹ g s`, i.e. `t ↦ s(g(s⁻¹(t)))`.

mod pairs;
mod parse;
mod pieces;

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{standard_decomposition, BinaryWord, Interval, Rational};

pub use pairs::BranchPair;
pub use parse::parse;
pub use pieces::AffinePiece;

pub(crate) use pairs::{compose_pairs, diagonal, is_leaf_sequence};
pub(crate) use pieces::{affine_pairs, interval_map_pairs};

/// A reduced tree diagram: the branch pairs `u_i → v_i` with the domain
/// leaves and range leaves each listed left to right.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    pairs: Vec<BranchPair>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    pairs: Vec<BranchPair>,
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        Element::from_branch_pairs(r.pairs)
    }
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        ElementRepr { pairs: e.pairs }
    }
}

/// `π(f) = (log₂ f′(0⁺), log₂ f′(1⁻))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AbelianImage {
    pub c: i64,
    pub d: i64,
}

impl AbelianImage {
    pub fn new(c: i64, d: i64) -> Self {
        AbelianImage { c, d }
    }
}

impl Add for AbelianImage {
    type Output = AbelianImage;
    fn add(self, rhs: AbelianImage) -> AbelianImage {
        AbelianImage::new(self.c + rhs.c, self.d + rhs.d)
    }
}

impl fmt::Display for AbelianImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c, self.d)
    }
}

fn word(s: &str) -> BinaryWord {
    s.parse().expect("static word")
}

impl Element {
    pub fn identity() -> Self {
        Element {
            pairs: vec![(BinaryWord::empty(), BinaryWord::empty())],
        }
    }

    /// `{00→0, 01→10, 1→11}`.
    pub fn x0() -> Self {
        Element {
            pairs: vec![
                (word("00"), word("0")),
                (word("01"), word("10")),
                (word("1"), word("11")),
            ],
        }
    }

    /// `{0→0, 100→10, 101→110, 11→111}`.
    pub fn x1() -> Self {
        Element {
            pairs: vec![
                (word("0"), word("0")),
                (word("100"), word("10")),
                (word("101"), word("110")),
                (word("11"), word("111")),
            ],
        }
    }

    /// Validates a tree diagram and reduces it to canonical form. Pairs may be
    /// given in any order; they are sorted by domain word first.
    pub fn from_branch_pairs(pairs: impl IntoIterator<Item = BranchPair>) -> Result<Self> {
        let mut pairs: Vec<BranchPair> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::InvalidElement(
                "a tree diagram needs at least one pair".into(),
            ));
        }
        pairs.sort();
        if !is_leaf_sequence(pairs.iter().map(|p| &p.0)) {
            return Err(Error::InvalidElement(
                "domain words are not the leaves of a full binary tree".into(),
            ));
        }
        if !is_leaf_sequence(pairs.iter().map(|p| &p.1)) {
            return Err(Error::InvalidElement(
                "range words are not the leaves of a full binary tree in order".into(),
            ));
        }
        Ok(Element::from_sorted_unchecked(pairs))
    }

    /// Caller guarantees both sides are ordered leaf sequences.
    pub(crate) fn from_sorted_unchecked(pairs: Vec<BranchPair>) -> Self {
        Element {
            pairs: pairs::reduce(pairs),
        }
    }

    pub fn pairs(&self) -> &[BranchPair] {
        &self.pairs
    }

    pub fn leaf_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 1
    }

    pub fn domain_leaves(&self) -> impl Iterator<Item = &BinaryWord> {
        self.pairs.iter().map(|p| &p.0)
    }

    pub fn range_leaves(&self) -> impl Iterator<Item = &BinaryWord> {
        self.pairs.iter().map(|p| &p.1)
    }

    /// `t ↦ other(self(t))`.
    pub fn compose(&self, other: &Element) -> Element {
        Element::from_sorted_unchecked(compose_pairs(&self.pairs, &other.pairs))
    }

    pub fn invert(&self) -> Element {
        Element {
            pairs: self
                .pairs
                .iter()
                .map(|(u, v)| (v.clone(), u.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Element {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut result = Element::identity();
        let mut square = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&square);
            }
            k >>= 1;
            if k > 0 {
                square = square.compose(&square);
            }
        }
        result
    }

    /// `σ⁻¹ g σ`, the map `t ↦ σ(g(σ⁻¹(t)))`.
    pub fn conjugate(&self, sigma: &Element) -> Element {
        sigma.invert().compose(self).compose(sigma)
    }

    /// The image of `t`. Points outside `[0,1]` are fixed.
    pub fn evaluate(&self, t: &Rational) -> Rational {
        if t.is_negative() || t > &Rational::one() {
            return t.clone();
        }
        let idx = self
            .pairs
            .partition_point(|(u, _)| &u.left_endpoint() <= t)
            .saturating_sub(1);
        let (u, v) = &self.pairs[idx];
        pieces::apply_pair(u, v, t)
    }

    pub fn abelianization(&self) -> AbelianImage {
        let slope = |(u, v): &BranchPair| u.len() as i64 - v.len() as i64;
        AbelianImage::new(slope(&self.pairs[0]), slope(self.pairs.last().unwrap()))
    }

    /// `Some(v)` iff this element maps `[u]` affinely onto the standard interval `[v]`.
    ///
    /// In a reduced diagram an affine pair `u → v` is always a refinement of a
    /// canonical pair, so only the canonical pair above `u` needs checking.
    pub fn image_word(&self, u: &BinaryWord) -> Option<BinaryWord> {
        let idx = self.pairs.partition_point(|(d, _)| d <= u).checked_sub(1)?;
        let (d, r) = &self.pairs[idx];
        let s = u.suffix_after(d)?;
        Some(r.concat(&s))
    }

    pub fn has_branch_pair(&self, u: &BinaryWord, v: &BinaryWord) -> bool {
        self.image_word(u).as_ref() == Some(v)
    }

    /// Left endpoints of the canonical domain leaves other than `0`.
    pub fn domain_breakpoints(&self) -> Vec<Rational> {
        self.pairs
            .iter()
            .skip(1)
            .map(|(u, _)| u.left_endpoint())
            .collect()
    }

    /// `log₂` of the slope just right of `t ∈ [0,1)`.
    pub fn right_log_slope(&self, t: &Rational) -> i64 {
        let idx = self
            .pairs
            .partition_point(|(u, _)| &u.left_endpoint() <= t)
            .saturating_sub(1);
        let (u, v) = &self.pairs[idx];
        u.len() as i64 - v.len() as i64
    }

    /// `log₂` of the slope just left of `t ∈ (0,1]`.
    pub fn left_log_slope(&self, t: &Rational) -> i64 {
        let idx = self
            .pairs
            .partition_point(|(u, _)| &u.left_endpoint() < t)
            .saturating_sub(1);
        let (u, v) = &self.pairs[idx];
        u.len() as i64 - v.len() as i64
    }

    pub fn to_pieces(&self) -> Vec<AffinePiece> {
        pieces::to_pieces(&self.pairs)
    }

    pub fn from_pieces(pieces: &[AffinePiece]) -> Result<Element> {
        pieces::from_pieces(pieces)
    }

    /// The branch pairs of this element whose domains tile the closed dyadic
    /// interval `interval`.
    pub fn restrict_pairs(&self, interval: &Interval) -> Result<Vec<BranchPair>> {
        let words = standard_decomposition(interval)?;
        Ok(compose_pairs(&diagonal(&words), &self.pairs))
    }

    /// Exact equality of the two maps on `interval`, checked at every
    /// breakpoint of either map and at the midpoint between consecutive ones.
    pub fn agrees_on(&self, other: &Element, interval: &Interval) -> bool {
        let mut points: Vec<Rational> = self
            .domain_breakpoints()
            .into_iter()
            .chain(other.domain_breakpoints())
            .filter(|p| p > &interval.lo && p < &interval.hi)
            .collect();
        points.push(interval.lo.clone());
        points.push(interval.hi.clone());
        points.sort();
        points.dedup();
        let mids: Vec<Rational> = points.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
        points
            .iter()
            .chain(mids.iter())
            .all(|t| self.evaluate(t) == other.evaluate(t))
    }

    /// The conjugate by the reflection `t ↦ 1 - t`, an automorphism of F that
    /// swaps the two ends of the interval.
    pub fn mirror(&self) -> Element {
        let mut pairs: Vec<BranchPair> = self
            .pairs
            .iter()
            .map(|(u, v)| (u.mirror(), v.mirror()))
            .collect();
        pairs.reverse();
        Element { pairs }
    }

    /// The element acting as `self` rescaled into `[w]` and as the identity
    /// outside it.
    pub fn supported_in(&self, w: &BinaryWord) -> Element {
        let mut pairs = Vec::with_capacity(self.pairs.len() + w.len());
        let mut prefix = BinaryWord::empty();
        let mut right = Vec::new();
        for &d in w.digits() {
            let sibling = prefix.child(1 - d);
            if d == 1 {
                pairs.push((sibling.clone(), sibling));
            } else {
                right.push((sibling.clone(), sibling));
            }
            prefix = prefix.child(d);
        }
        pairs.extend(self.pairs.iter().map(|(u, v)| (w.concat(u), w.concat(v))));
        pairs.extend(right.into_iter().rev());
        Element::from_sorted_unchecked(pairs)
    }
}

impl Mul for &Element {
    type Output = Element;
    /// `f * g` is `f` followed by `g`.
    fn mul(self, rhs: &Element) -> Element {
        self.compose(rhs)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (u, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Element {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
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

    fn el(list: &[(&str, &str)]) -> Element {
        Element::from_branch_pairs(list.iter().map(|(a, b)| (w(a), w(b)))).unwrap()
    }

    #[test]
    fn construction_and_reduction() {
        assert_eq!(el(&[("00", "0"), ("01", "10"), ("1", "11")]), Element::x0());
        assert_eq!(el(&[("0", "0"), ("1", "1")]), Element::identity());
        assert_eq!(
            el(&[("00", "00"), ("01", "01"), ("1", "1")]),
            Element::identity()
        );
        assert_eq!(el(&[("1", "11"), ("00", "0"), ("01", "10")]), Element::x0());
    }

    #[test]
    fn invalid_diagrams_are_rejected() {
        let bad = |list: &[(&str, &str)]| {
            Element::from_branch_pairs(list.iter().map(|(a, b)| (w(a), w(b))))
        };
        assert!(matches!(bad(&[("0", "0")]), Err(Error::InvalidElement(_))));
        assert!(matches!(
            bad(&[("0", "1"), ("1", "0")]),
            Err(Error::InvalidElement(_))
        ));
        assert!(matches!(
            bad(&[("0", "0"), ("1", "10")]),
            Err(Error::InvalidElement(_))
        ));
        assert!(matches!(bad(&[]), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn composition_examples() {
        let x0 = Element::x0();
        assert_eq!(
            x0.compose(&x0),
            el(&[("000", "0"), ("001", "10"), ("01", "110"), ("1", "111")])
        );
        let x1 = Element::x1();
        assert!(x1.compose(&x1.invert()).is_identity());
        assert_eq!(Element::identity().compose(&x1), x1);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(
            Element::x0().invert(),
            el(&[("0", "00"), ("10", "01"), ("11", "1")])
        );
        assert!(Element::identity().invert().is_identity());
        assert_eq!(Element::x1().invert().invert(), Element::x1());
    }

    #[test]
    fn conjugation_examples() {
        let (x0, x1) = (Element::x0(), Element::x1());
        assert_eq!(x0.conjugate(&Element::identity()), x0);
        let expected = x0.invert().compose(&x1).compose(&x0);
        assert_eq!(x1.conjugate(&x0), expected);
        for t in [q(1, 3), q(5, 7), q(9, 10)] {
            let direct = x0.evaluate(&x1.evaluate(&x0.invert().evaluate(&t)));
            assert_eq!(x1.conjugate(&x0).evaluate(&t), direct);
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(Element::x1().evaluate(&q(5, 8)), q(3, 4));
        assert_eq!(Element::x0().evaluate(&q(1, 3)), q(7, 12));
        assert_eq!(Element::x0().evaluate(&q(0, 1)), q(0, 1));
        assert_eq!(Element::x0().evaluate(&q(1, 1)), q(1, 1));
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(Element::x0().abelianization(), AbelianImage::new(1, -1));
        assert_eq!(Element::x1().abelianization(), AbelianImage::new(0, -1));
        assert_eq!(
            Element::identity().abelianization(),
            AbelianImage::new(0, 0)
        );
    }

    #[test]
    fn branch_pair_queries() {
        let x0 = Element::x0();
        assert!(x0.has_branch_pair(&w("010"), &w("100")));
        assert!(!x0.has_branch_pair(&w("0"), &w("0")));
        assert!(x0.has_branch_pair(&w("01"), &w("10")));
        assert!(Element::identity().has_branch_pair(&w("0110"), &w("0110")));
        assert_eq!(x0.image_word(&w("0")), None);
    }

    #[test]
    fn slopes_at_points() {
        let x0 = Element::x0();
        assert_eq!(x0.right_log_slope(&q(1, 4)), 0);
        assert_eq!(x0.left_log_slope(&q(1, 4)), 1);
        assert_eq!(x0.left_log_slope(&q(1, 1)), -1);
        assert_eq!(x0.right_log_slope(&q(0, 1)), 1);
    }

    #[test]
    fn restriction_and_agreement() {
        let x1 = Element::x1();
        let r = x1
            .restrict_pairs(&Interval::closed(q(0, 1), q(1, 2)))
            .unwrap();
        assert_eq!(r, vec![(w("0"), w("0"))]);
        assert!(x1.agrees_on(&Element::identity(), &Interval::closed(q(0, 1), q(1, 2))));
        assert!(!x1.agrees_on(&Element::identity(), &Interval::closed(q(0, 1), q(5, 8))));
    }

    #[test]
    fn mirror_swaps_abelian_coordinates() {
        let f = Element::x1();
        let m = f.mirror();
        assert_eq!(m.abelianization(), AbelianImage::new(-1, 0));
        assert_eq!(m.mirror(), f);
        let t = q(1, 3);
        assert_eq!(
            m.evaluate(&t),
            Rational::one() - f.evaluate(&(Rational::one() - &t))
        );
    }

    #[test]
    fn support_embedding() {
        let f = Element::x0().supported_in(&w("0"));
        assert_eq!(
            f,
            el(&[("000", "00"), ("001", "010"), ("01", "011"), ("1", "1")])
        );
        assert_eq!(f.abelianization(), AbelianImage::new(1, 0));
        let g = Element::x0().supported_in(&w("10"));
        assert!(g.agrees_on(&Element::identity(), &Interval::closed(q(0, 1), q(1, 2))));
        assert!(g.agrees_on(&Element::identity(), &Interval::closed(q(3, 4), q(1, 1))));
        assert_eq!(g.evaluate(&q(9, 16)), q(5, 8));
    }

    #[test]
    fn powers() {
        let x0 = Element::x0();
        assert_eq!(x0.pow(3), x0.compose(&x0).compose(&x0));
        assert_eq!(x0.pow(-2), x0.invert().compose(&x0.invert()));
        assert!(x0.pow(0).is_identity());
    }
}
