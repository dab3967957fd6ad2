//! Fixed sets, orbitals, fundamental domains and elements with prescribed
//! dynamics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::{interval_map_pairs, AbelianImage, Element};
use crate::error::{Error, Result};
use crate::words::{word_interval, BinaryWord, Interval, Rational};

/// Default bound on iterations in [`orbital_power`].
pub const DEFAULT_ITERATION_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "up")]
    PushUp,
    #[serde(rename = "down")]
    PushDown,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::PushUp => Direction::PushDown,
            Direction::PushDown => Direction::PushUp,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::PushUp => "up",
            Direction::PushDown => "down",
        })
    }
}

/// A maximal open interval `(a,b)` containing no fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orbital {
    pub a: Rational,
    pub b: Rational,
    #[serde(rename = "dir")]
    pub direction: Direction,
}

impl Orbital {
    pub fn new(a: Rational, b: Rational, direction: Direction) -> Self {
        assert!(a < b, "orbital endpoints out of order");
        Orbital { a, b, direction }
    }

    pub fn interval(&self) -> Interval {
        Interval::open(self.a.clone(), self.b.clone())
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.a < t && t < &self.b
    }

    pub fn contains_interval(&self, i: &Interval) -> bool {
        self.interval().contains_interval(i)
    }

    pub fn is_push_up(&self) -> bool {
        self.direction == Direction::PushUp
    }

    /// The corresponding orbital of `g^σ` when `self` is an orbital of `g`.
    pub fn transported(&self, sigma: &Element) -> Orbital {
        Orbital::new(
            sigma.evaluate(&self.a),
            sigma.evaluate(&self.b),
            self.direction,
        )
    }

    /// The orbital of the inverse element.
    pub fn reversed(&self) -> Orbital {
        Orbital::new(self.a.clone(), self.b.clone(), self.direction.reversed())
    }
}

impl fmt::Display for Orbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) {}", self.a, self.b, self.direction)
    }
}

/// Sorted, pairwise disjoint closed components; always contains 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSet {
    pub components: Vec<Interval>,
}

impl FixedSet {
    pub fn contains(&self, t: &Rational) -> bool {
        self.components.iter().any(|c| c.contains(t))
    }

    /// Some fixed point in `(0,1)`, if any.
    pub fn interior_point(&self) -> Option<Rational> {
        let open = Interval::open(Rational::zero(), Rational::one());
        self.components
            .iter()
            .find_map(|c| c.intersect(&open).map(|i| i.midpoint()))
    }

    pub fn meets_interior(&self) -> bool {
        self.interior_point().is_some()
    }

    /// A common point of the two sets inside `(0,1)`, found by exact interval
    /// intersection.
    pub fn common_interior_point(&self, other: &FixedSet) -> Option<Rational> {
        let open = Interval::open(Rational::zero(), Rational::one());
        for a in &self.components {
            for b in &other.components {
                if let Some(i) = a.intersect(b).and_then(|i| i.intersect(&open)) {
                    return Some(i.midpoint());
                }
            }
        }
        None
    }
}

impl fmt::Display for FixedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            if c.is_point() {
                write!(f, "{{{}}}", c.lo)?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

pub fn fixed_set(f: &Element) -> FixedSet {
    let mut pieces: Vec<Interval> = vec![
        Interval::point(Rational::zero()),
        Interval::point(Rational::one()),
    ];
    for p in f.to_pieces() {
        if p.log_slope == 0 {
            if p.offset.is_zero() {
                pieces.push(Interval::closed(p.lo, p.hi));
            }
        } else {
            let t = &p.offset / (Rational::one() - Rational::pow2(p.log_slope));
            if p.lo <= t && t <= p.hi {
                pieces.push(Interval::point(t));
            }
        }
    }
    pieces.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    let mut components: Vec<Interval> = Vec::new();
    for c in pieces {
        match components.last_mut() {
            Some(last) if c.lo <= last.hi => {
                if c.hi > last.hi {
                    last.hi = c.hi;
                }
            }
            _ => components.push(c),
        }
    }
    FixedSet { components }
}

pub fn orbitals(f: &Element) -> Vec<Orbital> {
    let fixed = fixed_set(f);
    fixed
        .components
        .windows(2)
        .filter(|w| w[0].hi < w[1].lo)
        .map(|w| {
            let (a, b) = (w[0].hi.clone(), w[1].lo.clone());
            let mid = a.midpoint(&b);
            let direction = if f.evaluate(&mid) > mid {
                Direction::PushUp
            } else {
                Direction::PushDown
            };
            Orbital::new(a, b, direction)
        })
        .collect()
}

/// The orbital of `f` containing `t`, if `t` is moved by `f`.
pub fn orbital_containing(f: &Element, t: &Rational) -> Option<Orbital> {
    orbitals(f).into_iter().find(|o| o.contains(t))
}

/// Smallest `n ≥ 1` with `fⁿ(x) > y` on a push-up orbital, or `fⁿ(x) < y` on a
/// push-down one.
pub fn orbital_power(
    f: &Element,
    orb: &Orbital,
    x: &Rational,
    y: &Rational,
    cap: u64,
) -> Result<u64> {
    if !orb.contains(x) || !orb.contains(y) {
        return Err(Error::precondition(format!(
            "{x} and {y} must lie in the orbital {orb}"
        )));
    }
    if cap == 0 {
        return Err(Error::precondition("iteration cap must be at least 1"));
    }
    let mut t = x.clone();
    for n in 1..=cap {
        t = f.evaluate(&t);
        let escaped = match orb.direction {
            Direction::PushUp => &t > y,
            Direction::PushDown => &t < y,
        };
        if escaped {
            return Ok(n);
        }
    }
    Err(Error::IterationCapExceeded { cap })
}

/// Whether `[u)` is a fundamental domain of `f` on `orb`, i.e. `f` carries one
/// endpoint of `[u]` to the other.
pub fn is_fundamental_domain(f: &Element, orb: &Orbital, u: &BinaryWord) -> Result<bool> {
    let i = word_interval(u)?;
    if !orb.contains_interval(&i) {
        return Err(Error::precondition(format!(
            "[{u}] is not inside the orbital {orb}"
        )));
    }
    Ok(match orb.direction {
        Direction::PushUp => f.evaluate(&i.lo) == i.hi,
        Direction::PushDown => f.evaluate(&i.hi) == i.lo,
    })
}

/// The open components of the intersection of the supports of all elements.
pub fn common_support(s: &[Element]) -> Vec<Interval> {
    let mut acc = vec![Interval::open(Rational::zero(), Rational::one())];
    for f in s {
        let support: Vec<Interval> = orbitals(f).iter().map(Orbital::interval).collect();
        let mut next = Vec::new();
        for a in &acc {
            for b in &support {
                if let Some(i) = a.intersect(b) {
                    next.push(i);
                }
            }
        }
        next.sort_by(|x, y| x.lo.cmp(&y.lo));
        acc = next;
    }
    acc
}

/// The midpoint of the leftmost component of the common support, or `None` if
/// every point of `(0,1)` is fixed by some element of `s`.
pub fn common_unfixed_point(s: &[Element]) -> Option<Rational> {
    common_support(s).first().map(Interval::midpoint)
}

/// An element with abelian image `(c,d)` whose only orbital is `(0,1)`.
///
/// For `c > 0 > d` the diagram is `0^{c+1} → 0`, a filler from
/// `[2^{-c-1}, 1/2]` onto `[1/2, 1 - 2^{-1-|d|}]`, and `1 → 1^{1+|d|}`; every
/// point of `(0,1)` moves right. The case `c < 0 < d` is the inverse of
/// `(-c,-d)`.
pub fn make_unfixed_element(c: i64, d: i64) -> Result<Element> {
    if c.checked_mul(d).is_none_or(|p| p >= 0) {
        return Err(Error::precondition(format!(
            "an element with abelian image ({c},{d}) must fix a point of (0,1)"
        )));
    }
    if c < 0 {
        return make_unfixed_element(-c, -d).map(|f| f.invert());
    }
    let (c, e) = (c as usize, d.unsigned_abs() as usize);
    let mut pairs = vec![(BinaryWord::zeros(c + 1), BinaryWord::zeros(1))];
    let source = Interval::closed(Rational::pow2(-(c as i64) - 1), Rational::half());
    let target = Interval::closed(
        Rational::half(),
        Rational::one() - Rational::pow2(-(e as i64) - 1),
    );
    pairs.extend(interval_map_pairs(&source, &target)?);
    pairs.push((BinaryWord::ones(1), BinaryWord::ones(1 + e)));
    let f = Element::from_branch_pairs(pairs)?;
    let orbs = orbitals(&f);
    if f.abelianization() != AbelianImage::new(c as i64, d)
        || orbs.len() != 1
        || orbs[0].a != Rational::zero()
        || orbs[0].b != Rational::one()
    {
        return Err(Error::internal(format!(
            "make_unfixed_element({c},{d}) produced {f}"
        )));
    }
    Ok(f)
}

/// Some element with abelian image `(c,d)`: [`make_unfixed_element`] when
/// `cd < 0`, otherwise a product of two such elements supported in `[0]` and
/// `[1]`.
pub fn realize_abelian(c: i64, d: i64) -> Result<Element> {
    if c.checked_mul(d).is_some_and(|p| p < 0) {
        return make_unfixed_element(c, d);
    }
    let left = if c == 0 {
        Element::identity()
    } else {
        make_unfixed_element(c, -c.signum())?.supported_in(&BinaryWord::zeros(1))
    };
    let right = if d == 0 {
        Element::identity()
    } else {
        make_unfixed_element(-d.signum(), d)?.supported_in(&BinaryWord::ones(1))
    };
    Ok(left.compose(&right))
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

    fn e13() -> Element {
        "{00->000, 0100->001, 0101->01, 011->10, 1->11}"
            .parse()
            .unwrap()
    }

    #[test]
    fn fixed_sets() {
        let x1 = fixed_set(&Element::x1());
        assert_eq!(
            x1.components,
            vec![Interval::closed(q(0, 1), q(1, 2)), Interval::point(q(1, 1))]
        );
        let x0 = fixed_set(&Element::x0());
        assert_eq!(
            x0.components,
            vec![Interval::point(q(0, 1)), Interval::point(q(1, 1))]
        );
        let e = fixed_set(&e13());
        assert_eq!(
            e.components,
            vec![
                Interval::point(q(0, 1)),
                Interval::point(q(1, 3)),
                Interval::point(q(1, 1))
            ]
        );
        assert_eq!(e.interior_point(), Some(q(1, 3)));
        assert_eq!(
            fixed_set(&Element::identity()).components,
            vec![Interval::unit()]
        );
    }

    #[test]
    fn orbital_lists() {
        assert_eq!(
            orbitals(&Element::x0()),
            vec![Orbital::new(q(0, 1), q(1, 1), Direction::PushUp)]
        );
        assert!(orbitals(&Element::identity()).is_empty());
        assert_eq!(
            orbitals(&e13()),
            vec![
                Orbital::new(q(0, 1), q(1, 3), Direction::PushDown),
                Orbital::new(q(1, 3), q(1, 1), Direction::PushUp)
            ]
        );
        assert_eq!(
            orbitals(&Element::x1()),
            vec![Orbital::new(q(1, 2), q(1, 1), Direction::PushUp)]
        );
    }

    #[test]
    fn orbital_powers() {
        let up = Orbital::new(q(0, 1), q(1, 1), Direction::PushUp);
        let x0 = Element::x0();
        assert_eq!(
            orbital_power(&x0, &up, &q(1, 4), &q(1, 2), DEFAULT_ITERATION_CAP),
            Ok(2)
        );
        assert_eq!(
            orbital_power(&x0, &up, &q(1, 4), &q(1, 4), DEFAULT_ITERATION_CAP),
            Ok(1)
        );
        assert_eq!(
            orbital_power(
                &x0.invert(),
                &up.reversed(),
                &q(1, 2),
                &q(1, 4),
                DEFAULT_ITERATION_CAP
            ),
            Ok(2)
        );
        let far = orbital_power(&x0, &up, &q(1, 1024), &q(1023, 1024), 3);
        assert_eq!(far, Err(Error::IterationCapExceeded { cap: 3 }));
    }

    #[test]
    fn fundamental_domains() {
        let up = Orbital::new(q(0, 1), q(1, 1), Direction::PushUp);
        let x0 = Element::x0();
        assert!(is_fundamental_domain(&x0, &up, &w("01")).unwrap());
        // x0(1/8) = 1/4 is the right endpoint of [001]
        assert!(is_fundamental_domain(&x0, &up, &w("001")).unwrap());
        assert!(!is_fundamental_domain(&x0.pow(2), &up, &w("01")).unwrap());
        assert!(!is_fundamental_domain(&x0, &up, &w("011")).unwrap());
        assert!(is_fundamental_domain(&x0, &up, &w("0")).is_err());
    }

    #[test]
    fn common_unfixed_points() {
        assert_eq!(
            common_unfixed_point(&[Element::x0(), Element::x1()]),
            Some(q(3, 4))
        );
        assert_eq!(common_unfixed_point(&[Element::identity()]), None);
        let f1 = Element::x0().supported_in(&w("0"));
        let f2 = f1.mirror();
        assert_eq!(common_unfixed_point(&[f1, f2]), None);
        assert_eq!(common_unfixed_point(&[e13()]), Some(q(1, 6)));
    }

    #[test]
    fn unfixed_elements() {
        assert_eq!(make_unfixed_element(1, -1).unwrap(), Element::x0());
        assert_eq!(make_unfixed_element(-1, 1).unwrap(), Element::x0().invert());
        for (c, d) in [(2, -1), (3, -5), (-4, 2), (1, -7)] {
            let f = make_unfixed_element(c, d).unwrap();
            assert_eq!(f.abelianization(), AbelianImage::new(c, d));
            assert!(!fixed_set(&f).meets_interior());
        }
        assert!(make_unfixed_element(1, 1).is_err());
        assert!(make_unfixed_element(0, -1).is_err());
    }

    #[test]
    fn abelian_realization() {
        for c in -3..=3 {
            for d in -3..=3 {
                assert_eq!(
                    realize_abelian(c, d).unwrap().abelianization(),
                    AbelianImage::new(c, d)
                );
            }
        }
        assert!(realize_abelian(0, 0).unwrap().is_identity());
    }

    #[test]
    fn transport_of_orbitals() {
        let g = e13();
        let sigma = Element::x1().compose(&Element::x0());
        let conj = g.conjugate(&sigma);
        let moved: Vec<Orbital> = orbitals(&g).iter().map(|o| o.transported(&sigma)).collect();
        assert_eq!(orbitals(&conj), moved);
    }

    #[test]
    fn json_shape() {
        let o = Orbital::new(q(0, 1), q(1, 3), Direction::PushDown);
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(s, r#"{"a":"0","b":"1/3","dir":"down"}"#);
    }
}
