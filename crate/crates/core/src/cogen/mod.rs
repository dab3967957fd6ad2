//! Conjugate co-generation: the abelian layer, the obstruction test, the three
//! constructions of a conjugator σ making `g^σ` a common co-generator of a
//! finite set `S`, and a search for some common co-generator of `S`.

mod certificate;
mod examples;
mod props;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::construct::Limits;
use crate::dynamics::{common_unfixed_point, fixed_set, make_unfixed_element, realize_abelian};
use crate::element::{AbelianImage, Element};
use crate::error::{Error, Result};
use crate::words::Rational;

pub use certificate::{CheckOutcome, CogenCertificate, Construction, Evidence, Frame, Subject};
pub use examples::{obstructed_pair, obstructed_triple};
pub use props::{prop_axis, prop_no_fixed, prop_two_orbitals};

/// Whether `p` and `q` generate `Z²`.
pub fn check_cogenerator_pair(p: AbelianImage, q: AbelianImage) -> bool {
    (p.c as i128 * q.d as i128 - p.d as i128 * q.c as i128).abs() == 1
}

/// The set of `(c,d)` co-generating every image of a list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CogenSet {
    /// Exactly these vectors, sorted.
    Finite {
        members: Vec<AbelianImage>,
    },
    /// The vectors `±(base + t·direction)` for `t ∈ Z`.
    Line {
        base: AbelianImage,
        direction: AbelianImage,
    },
    Empty,
}

impl CogenSet {
    pub fn contains(&self, v: AbelianImage) -> bool {
        match self {
            CogenSet::Finite { members } => members.contains(&v),
            // v = ±base + t·direction iff det(direction, v) = ±1
            CogenSet::Line { direction, .. } => check_cogenerator_pair(*direction, v),
            CogenSet::Empty => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CogenSet::Empty)
            || matches!(self, CogenSet::Finite { members } if members.is_empty())
    }

    /// Members with `|c|,|d| ≤ radius` on a line, or all members otherwise,
    /// ordered by `|c| + |d|`.
    pub fn candidates(&self, radius: i64) -> Vec<AbelianImage> {
        let mut out = match self {
            CogenSet::Finite { members } => members.clone(),
            CogenSet::Line { base, direction } => {
                let mut v = Vec::new();
                let steps = radius * 2 + 1;
                for t in -steps..=steps {
                    for e in [1, -1] {
                        let p = AbelianImage::new(
                            e * (base.c + t * direction.c),
                            e * (base.d + t * direction.d),
                        );
                        if p.c.abs() <= radius && p.d.abs() <= radius && !v.contains(&p) {
                            v.push(p);
                        }
                    }
                }
                v
            }
            CogenSet::Empty => Vec::new(),
        };
        out.sort_by_key(|p| (p.c.abs() + p.d.abs(), -p.c, -p.d));
        out
    }
}

/// All `(c,d)` with `|a_i d − b_i c| = 1` for every image `(a_i, b_i)`.
pub fn common_cogenerators(images: &[AbelianImage]) -> Result<CogenSet> {
    let Some(&first) = images.first() else {
        return Err(Error::precondition("common co-generators of an empty list"));
    };
    if images.iter().any(|p| p.c == 0 && p.d == 0) {
        return Ok(CogenSet::Empty);
    }
    let independent = images.iter().find(|q| first.c * q.d - first.d * q.c != 0);
    let Some(&second) = independent else {
        // every image is a multiple k·v of a primitive v; only k = ±1 works
        let g = first.c.gcd(&first.d);
        let dir = AbelianImage::new(first.c / g, first.d / g);
        if images
            .iter()
            .any(|p| p.c.abs() != dir.c.abs() || p.d.abs() != dir.d.abs())
        {
            return Ok(CogenSet::Empty);
        }
        let e = dir.c.extended_gcd(&dir.d);
        // dir.c·x + dir.d·y = 1 gives det(dir, (−y, x)) = 1
        let base = AbelianImage::new(-e.y * e.gcd.signum(), e.x * e.gcd.signum());
        return Ok(CogenSet::Line {
            base,
            direction: dir,
        });
    };
    // solve first×v = e1, second×v = e2 with v = (c,d) by Cramer's rule
    let det = first.c * second.d - first.d * second.c;
    let mut members = Vec::new();
    for e1 in [1i64, -1] {
        for e2 in [1i64, -1] {
            // -first.d·c + first.c·d = e1 ; -second.d·c + second.c·d = e2
            let num_c = e1 * second.c - e2 * first.c;
            let num_d = -first.d * e2 + second.d * e1;
            if num_c % det != 0 || num_d % det != 0 {
                continue;
            }
            let v = AbelianImage::new(num_c / det, num_d / det);
            if images.iter().all(|p| check_cogenerator_pair(*p, v)) && !members.contains(&v) {
                members.push(v);
            }
        }
    }
    members.sort_by_key(|p| (std::cmp::Reverse(p.c), std::cmp::Reverse(p.d)));
    Ok(CogenSet::Finite { members })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Constructible,
    Obstructed,
}

/// Whether some conjugate of `g` co-generates every element of `S`: it does
/// unless `g` fixes an interior point and no interior point is moved by all of
/// `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub g_fixes_interior: bool,
    pub common_unfixed: Option<Rational>,
    pub verdict: Verdict,
}

fn check_abelian(s: &[Element], g: &Element) -> Result<()> {
    if s.is_empty() {
        return Err(Error::precondition("the set S is empty"));
    }
    let pg = g.abelianization();
    for (i, f) in s.iter().enumerate() {
        let pf = f.abelianization();
        if !check_cogenerator_pair(pf, pg) {
            return Err(Error::precondition(format!(
                "π(g) = {pg} does not co-generate π(f{}) = {pf} for f{} = {f}",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

pub fn analyze_obstruction(s: &[Element], g: &Element) -> Result<ObstructionReport> {
    check_abelian(s, g)?;
    let g_fixes_interior = fixed_set(g).meets_interior();
    let common_unfixed = common_unfixed_point(s);
    let verdict = if g_fixes_interior && common_unfixed.is_none() {
        Verdict::Obstructed
    } else {
        Verdict::Constructible
    };
    Ok(ObstructionReport {
        g_fixes_interior,
        common_unfixed,
        verdict,
    })
}

pub(crate) const OBSTRUCTED_FOR_G: &str =
    "g fixes a point of (0,1) and every point of (0,1) is fixed by some element of S";

/// σ with `g^σ` co-generating every element of `S`, by whichever
/// construction applies to `g`.
pub fn cogenerator_conjugate(
    s: &[Element],
    g: &Element,
    limits: &Limits,
) -> Result<CogenCertificate> {
    let report = analyze_obstruction(s, g)?;
    if report.verdict == Verdict::Obstructed {
        return Err(Error::Obstructed(OBSTRUCTED_FOR_G.into()));
    }
    let AbelianImage { c, d } = g.abelianization();
    if !report.g_fixes_interior {
        prop_no_fixed(s, g, limits)
    } else if c != 0 && d != 0 {
        prop_two_orbitals(s, g, limits)
    } else {
        prop_axis(s, g, limits)
    }
}

/// Lattice radius searched for co-generators on an unbounded family.
const CANDIDATE_RADIUS: i64 = 8;

/// Some `g` with a certificate that it co-generates every element of `S`,
/// or [`Error::Obstructed`] when `S` has no common co-generator.
///
/// Abelian co-generators with `cd < 0` are preferred and realised without
/// interior fixed points; otherwise one with `|cd| ≠ 1` is used; only when
/// every candidate has `cd = 1` does the answer depend on `S` moving a common
/// point.
pub fn find_cogenerator(s: &[Element], limits: &Limits) -> Result<(Element, CogenCertificate)> {
    if s.is_empty() {
        return Err(Error::precondition("the set S is empty"));
    }
    if let Some(i) = s.iter().position(Element::is_identity) {
        return Err(Error::precondition(format!(
            "element f{} is the identity",
            i + 1
        )));
    }
    let images: Vec<AbelianImage> = s.iter().map(Element::abelianization).collect();
    let set = common_cogenerators(&images)?;
    let candidates = set.candidates(CANDIDATE_RADIUS);
    if candidates.is_empty() {
        return Err(Error::NoAbelianCogenerator);
    }
    if let Some(p) = candidates.iter().find(|p| p.c * p.d < 0) {
        let g = make_unfixed_element(p.c, p.d)?;
        let cert = prop_no_fixed(s, &g, limits)?;
        return Ok((g, cert));
    }
    if let Some(p) = candidates.iter().find(|p| (p.c * p.d).abs() != 1) {
        let g = realize_abelian(p.c, p.d)?;
        let cert = cogenerator_conjugate(s, &g, limits)?;
        return Ok((g, cert));
    }
    if common_unfixed_point(s).is_none() {
        return Err(Error::Obstructed(
            "every common abelian co-generator (c,d) has cd = 1, and every point of (0,1) is fixed by some element of S"
                .into(),
        ));
    }
    let p = candidates[0];
    let g = realize_abelian(p.c, p.d)?;
    let cert = prop_two_orbitals(s, &g, limits)?;
    Ok((g, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(c: i64, d: i64) -> AbelianImage {
        AbelianImage::new(c, d)
    }

    /// Brute-force oracle over a box.
    fn brute(images: &[AbelianImage], r: i64) -> Vec<AbelianImage> {
        let mut out = Vec::new();
        for c in -r..=r {
            for d in -r..=r {
                if images.iter().all(|p| check_cogenerator_pair(*p, a(c, d))) {
                    out.push(a(c, d));
                }
            }
        }
        out
    }

    #[test]
    fn pair_check_examples() {
        assert!(check_cogenerator_pair(a(0, -1), a(1, -1)));
        assert!(check_cogenerator_pair(a(3, 4), a(1, 1)));
        assert!(!check_cogenerator_pair(a(2, 4), a(1, 1)));
    }

    #[test]
    fn common_cogenerators_of_the_triple() {
        let set = common_cogenerators(&[a(1, 0), a(0, 1), a(2, 1)]).unwrap();
        assert_eq!(
            set,
            CogenSet::Finite {
                members: vec![a(1, 1), a(-1, -1)]
            }
        );
    }

    #[test]
    fn common_cogenerators_match_brute_force() {
        let cases: Vec<Vec<AbelianImage>> = vec![
            vec![a(1, 0), a(0, 1)],
            vec![a(1, -1), a(0, -1)],
            vec![a(2, 1), a(3, 1)],
            vec![a(1, 2), a(5, 3)],
            vec![a(1, -1)],
            vec![a(2, 3), a(-2, -3)],
            vec![a(2, 4)],
            vec![a(1, 1), a(1, 2), a(1, 3)],
        ];
        for images in cases {
            let set = common_cogenerators(&images).unwrap();
            let r = 6;
            let expected = brute(&images, r);
            let got: Vec<AbelianImage> = brute(&[], r)
                .into_iter()
                .filter(|v| set.contains(*v))
                .collect();
            assert_eq!(got, expected, "images {images:?} set {set:?}");
        }
    }

    #[test]
    fn zero_image_has_no_cogenerator() {
        assert_eq!(common_cogenerators(&[a(0, 0)]).unwrap(), CogenSet::Empty);
        assert!(common_cogenerators(&[]).is_err());
    }

    #[test]
    fn obstruction_reports() {
        let r = analyze_obstruction(&[Element::x1()], &Element::x0()).unwrap();
        assert_eq!(r.verdict, Verdict::Constructible);
        assert!(!r.g_fixes_interior);
        let r = analyze_obstruction(&[Element::x0()], &Element::x1()).unwrap();
        assert!(r.g_fixes_interior);
        assert_eq!(r.common_unfixed, Some(Rational::half()));
        assert_eq!(r.verdict, Verdict::Constructible);
        let e13: Element = "{00->000, 0100->001, 0101->01, 011->10, 1->11}"
            .parse()
            .unwrap();
        assert!(matches!(
            analyze_obstruction(&[e13], &Element::x0()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn obstructed_pair_is_obstructed() {
        let g = realize_abelian(1, 1).unwrap();
        let r = analyze_obstruction(&obstructed_pair(), &g).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert!(matches!(
            cogenerator_conjugate(&obstructed_pair(), &g, &Limits::default()),
            Err(Error::Obstructed(_))
        ));
    }

    #[test]
    fn triple_has_no_cogenerator() {
        assert!(matches!(
            find_cogenerator(&obstructed_triple(), &Limits::default()),
            Err(Error::Obstructed(_))
        ));
    }

    #[test]
    fn find_cogenerator_examples() {
        for s in [
            vec![Element::x0(), Element::x1()],
            vec![Element::x1()],
            vec![Element::x0()],
        ] {
            let (g, cert) = find_cogenerator(&s, &Limits::default()).unwrap();
            assert_eq!(cert.g, g);
            assert!(cert.verify(&s).iter().all(|c| c.passed), "{s:?}");
        }
        assert!(matches!(
            find_cogenerator(&[Element::x0().pow(2)], &Limits::default()),
            Err(Error::NoAbelianCogenerator)
        ));
    }
}
