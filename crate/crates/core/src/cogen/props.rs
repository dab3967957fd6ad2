//! The three constructions of σ.

use super::certificate::{CogenCertificate, Construction, Evidence, Frame, Subject};
use super::check_abelian;
use crate::construct::{
    anchored_pairs, conjugator_on_interval, incomparable_pairs, map_intervals, successor_shift,
    tree_with_branches, IntervalMapSpec, Limits,
};
use crate::dynamics::{
    common_unfixed_point, fixed_set, orbital_containing, orbitals, Direction, Orbital,
};
use crate::element::{AbelianImage, Element};
use crate::error::{Error, Result};
use crate::words::{word_interval, BinaryWord, Interval, Rational};

fn shift_orbital(h: &Element, x: &Rational) -> Result<Orbital> {
    orbital_containing(h, x).ok_or_else(|| Error::internal(format!("shift element {h} fixes {x}")))
}

fn position(tree: &[BinaryWord], w: &BinaryWord) -> Result<usize> {
    tree.iter()
        .position(|t| t == w)
        .ok_or_else(|| Error::internal(format!("{w} is not a leaf of the tree")))
}

/// Pairs `c_j → c_{j+1}` along the chain and a fundamental domain `[c_j)` in
/// `orbital` for every chain word.
fn chain_evidence(chain: &[BinaryWord], orbital: &Orbital) -> Vec<Evidence> {
    let mut out: Vec<Evidence> = chain
        .windows(2)
        .map(|w| Evidence::BranchPair {
            subject: Subject::Conjugate,
            u: w[0].clone(),
            v: w[1].clone(),
        })
        .collect();
    out.extend(chain.iter().map(|w| Evidence::FundamentalDomain {
        orbital: orbital.clone(),
        word: w.clone(),
    }));
    out
}

fn links(chain: &[BinaryWord], words: &[&BinaryWord]) -> Result<Vec<Evidence>> {
    words
        .iter()
        .map(|w| {
            Ok(Evidence::ChainLink {
                word: (*w).clone(),
                position: position(chain, w)?,
            })
        })
        .collect()
}

/// `u`, `v0`, `v1` for each pair.
fn required_branches<'a>(
    pairs: impl Iterator<Item = (&'a BinaryWord, &'a BinaryWord)>,
) -> Vec<BinaryWord> {
    pairs
        .flat_map(|(u, v)| [u.clone(), v.child(0), v.child(1)])
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn finish(
    construction: Construction,
    g: &Element,
    sigma: Element,
    frame: Frame,
    tree: Vec<BinaryWord>,
    chain: Vec<BinaryWord>,
    shared_evidence: Vec<Evidence>,
    per_element_evidence: Vec<Vec<Evidence>>,
    s: &[Element],
) -> Result<CogenCertificate> {
    let conjugated = g.conjugate(&sigma);
    let cert = CogenCertificate {
        construction,
        g: g.clone(),
        sigma,
        conjugated,
        frame,
        tree,
        chain,
        shared_evidence,
        per_element_evidence,
    };
    if let Some(bad) = cert.verify(s).into_iter().find(|c| !c.passed) {
        return Err(Error::internal(format!(
            "{construction} certificate fails: {}",
            bad.description
        )));
    }
    Ok(cert)
}

/// σ for a `g` without fixed points in `(0,1)`: `g^σ` (or its inverse when
/// `g` moves points left) shifts the inner leaves of a tree through every
/// `u_i, v_i0, v_i1` one step right.
pub fn prop_no_fixed(s: &[Element], g: &Element, limits: &Limits) -> Result<CogenCertificate> {
    check_abelian(s, g)?;
    if g.is_identity() || fixed_set(g).meets_interior() {
        return Err(Error::precondition(format!("{g} fixes a point of (0,1)")));
    }
    let inverted = !orbitals(g)[0].is_push_up();
    let work = if inverted { g.invert() } else { g.clone() };
    let unit = Orbital::new(Rational::zero(), Rational::one(), Direction::PushUp);

    let pairs = incomparable_pairs(s, limits)?;
    let tree = tree_with_branches(&required_branches(pairs.iter().map(|p| (&p.u, &p.v))))?;
    let n = tree.len();
    let h = successor_shift(&tree, 2, n - 1)?;
    let (x, y) = (tree[1].left_endpoint(), tree[n - 2].left_endpoint());
    let sigma = conjugator_on_interval(
        &h,
        &shift_orbital(&h, &x)?,
        &work,
        &unit,
        &x,
        &y,
        None,
        limits,
    )?;

    let chain = tree[1..n - 1].to_vec();
    let mut shared = vec![Evidence::Orbital {
        orbital: unit.clone(),
    }];
    shared.extend(chain_evidence(&chain, &unit));
    let mut per = Vec::with_capacity(s.len());
    for (i, p) in pairs.iter().enumerate() {
        let mut ev = vec![Evidence::BranchPair {
            subject: Subject::Member {
                index: i,
                power: p.power,
            },
            u: p.u.clone(),
            v: p.v.clone(),
        }];
        ev.extend(links(&chain, &[&p.u, &p.v.child(0), &p.v.child(1)])?);
        ev.push(Evidence::Abelian { index: i });
        per.push(ev);
    }
    let frame = Frame {
        mirrored: false,
        inverted,
    };
    finish(
        Construction::NoFixedPoint,
        g,
        sigma,
        frame,
        tree,
        chain,
        shared,
        per,
        s,
    )
}

/// σ for a `g` fixing an interior point with `π(g) = (c,d)`, `cd ≠ 0`, when
/// some point `β` is moved by every element of `S`.
///
/// With `(0,α)` the push-up end orbital of `g` (after inverting `g` if
/// needed), `g^σ` shifts the leaves left of `w00` on `(0,σ(α))` and carries
/// `w101` onto `w100` inside the right end orbital; when that orbital is
/// push-up the last pair is `w100 → w101` instead.
pub fn prop_two_orbitals(s: &[Element], g: &Element, limits: &Limits) -> Result<CogenCertificate> {
    check_abelian(s, g)?;
    let AbelianImage { c, d } = g.abelianization();
    if c == 0 || d == 0 {
        return Err(Error::precondition(format!(
            "π(g) = ({c},{d}) has a zero coordinate"
        )));
    }
    if !fixed_set(g).meets_interior() {
        return Err(Error::precondition(format!(
            "{g} has no fixed point in (0,1)"
        )));
    }
    let beta = common_unfixed_point(s)
        .ok_or_else(|| Error::precondition("every point of (0,1) is fixed by some element of S"))?;
    let orbs = orbitals(g);
    let inverted = !orbs[0].is_push_up();
    let work = if inverted { g.invert() } else { g.clone() };
    let orbs = orbitals(&work);
    let (first, last) = (orbs[0].clone(), orbs[orbs.len() - 1].clone());
    if !first.a.is_zero() || last.b != Rational::one() || orbs.len() < 2 {
        return Err(Error::internal(format!(
            "end orbitals of {work} are {first} and {last}"
        )));
    }
    let right_up = last.is_push_up();

    let anchored = anchored_pairs(s, &beta, limits)?;
    let w = anchored.w.clone();
    let w0 = w.child(0);
    let (w00, w01) = (w0.child(0), w0.child(1));
    let w10 = w.child(1).child(0);
    let (w100, w101) = (w10.child(0), w10.child(1));

    let mut required = vec![w00.clone()];
    required.extend(required_branches(
        anchored.pairs.iter().map(|p| (&p.u, &p.v)),
    ));
    let tree = tree_with_branches(&required)?;
    let m = position(&tree, &w00)? + 1;
    let h1 = successor_shift(&tree, 2, m)?;
    let x1 = tree[1].left_endpoint();
    let sigma1 = conjugator_on_interval(
        &h1,
        &shift_orbital(&h1, &x1)?,
        &work,
        &first,
        &x1,
        &w.left_endpoint(),
        None,
        limits,
    )?;
    let g1 = work.conjugate(&sigma1);
    let g1_last = orbitals(&g1)
        .pop()
        .expect("conjugate of a non-identity element has orbitals");

    let (src, tgt) = if right_up {
        (&w100, &w101)
    } else {
        (&w101, &w100)
    };
    let left = Interval::closed(Rational::zero(), w01.left_endpoint());
    let h2 = map_intervals(&IntervalMapSpec::linear(
        vec![left.clone(), word_interval(src)?],
        vec![left, word_interval(tgt)?],
    ))?;
    let src_i = word_interval(src)?;
    let orb_h2 = shift_orbital(&h2, &src_i.midpoint())?;
    // σ2 must fix both I and h1(I)
    let fix = Interval::closed(x1.clone(), w01.left_endpoint());
    let sigma2 = conjugator_on_interval(
        &h2,
        &orb_h2,
        &g1,
        &g1_last,
        &src_i.lo,
        &src_i.hi,
        Some(&fix),
        limits,
    )?;
    let sigma = sigma1.compose(&sigma2);

    let conj_orbs = orbitals(&work.conjugate(&sigma));
    let (left_orb, right_orb) = (conj_orbs[0].clone(), conj_orbs[conj_orbs.len() - 1].clone());
    let chain = tree[1..m].to_vec();
    let mut shared = vec![
        Evidence::Orbital {
            orbital: left_orb.clone(),
        },
        Evidence::Orbital {
            orbital: right_orb.clone(),
        },
        Evidence::Contains {
            orbital: left_orb.clone(),
            interval: fix.clone(),
        },
    ];
    shared.extend(chain_evidence(&chain, &left_orb));
    shared.push(Evidence::BranchPair {
        subject: Subject::Conjugate,
        u: src.clone(),
        v: tgt.clone(),
    });
    shared.push(Evidence::Contains {
        orbital: right_orb.clone(),
        interval: word_interval(&w10)?,
    });
    shared.push(Evidence::FundamentalDomain {
        orbital: right_orb,
        word: src.clone(),
    });

    let mut per = Vec::with_capacity(s.len());
    for (i, p) in anchored.pairs.iter().enumerate() {
        let mut ev = vec![
            Evidence::BranchPair {
                subject: Subject::Member {
                    index: i,
                    power: p.m,
                },
                u: w.clone(),
                v: p.u.clone(),
            },
            Evidence::BranchPair {
                subject: Subject::Member {
                    index: i,
                    power: p.n,
                },
                u: w.clone(),
                v: p.v.clone(),
            },
        ];
        ev.extend(links(&chain, &[&p.u, &p.v.child(0), &p.v.child(1)])?);
        ev.push(Evidence::Abelian { index: i });
        per.push(ev);
    }
    let frame = Frame {
        mirrored: false,
        inverted,
    };
    finish(
        Construction::TwoOrbitals,
        g,
        sigma,
        frame,
        tree,
        chain,
        shared,
        per,
        s,
    )
}

/// σ for `π(g) ∈ {(±1,0),(0,±1)}`.
///
/// For `(1,0)`: each `f_i^{±1}` has a pair `1^{n_i} → 1^{n_i+1}`, and `g^σ`
/// shifts the inner leaves of a tree with last leaf `1^m` (`m > max n_i`)
/// inside its push-up orbital at 0. `(-1,0)` is reduced to `(1,0)` by
/// inverting `g`, and `(0,±1)` by mirroring `S` and `g`.
pub fn prop_axis(s: &[Element], g: &Element, limits: &Limits) -> Result<CogenCertificate> {
    check_abelian(s, g)?;
    let AbelianImage { c, d } = g.abelianization();
    let frame = match (c, d) {
        (1, 0) => Frame {
            mirrored: false,
            inverted: false,
        },
        (-1, 0) => Frame {
            mirrored: false,
            inverted: true,
        },
        (0, 1) => Frame {
            mirrored: true,
            inverted: false,
        },
        (0, -1) => Frame {
            mirrored: true,
            inverted: true,
        },
        _ => {
            return Err(Error::precondition(format!(
                "π(g) = ({c},{d}) is not (±1,0) or (0,±1)"
            )))
        }
    };
    let work = frame.conjugate(g);
    let members: Vec<Element> = s.iter().map(|f| frame.member(f)).collect();

    let mut ends = Vec::with_capacity(members.len());
    for (i, f) in members.iter().enumerate() {
        let (u, v) = f.pairs().last().expect("diagrams are non-empty");
        let (p, q) = (u.len(), v.len());
        let (n_i, power) = if q == p + 1 {
            (p, 1)
        } else if q + 1 == p {
            (p - 1, -1)
        } else {
            return Err(Error::precondition(format!(
                "f{} does not have slope 2^±1 at the fixed end",
                i + 1
            )));
        };
        ends.push((n_i, power));
    }
    let n = ends.iter().map(|e| e.0).max().unwrap_or(0);

    let pairs = incomparable_pairs(&members, limits)?;
    let m = (n + 1..)
        .find(|&m| {
            pairs.iter().all(|p| {
                !BinaryWord::ones(m).is_prefix_of(&p.u) && !BinaryWord::ones(m).is_prefix_of(&p.v)
            })
        })
        .expect("long enough runs of 1 are prefixes of no word");
    let top = BinaryWord::ones(m);
    let mut required = vec![top.clone()];
    required.extend(required_branches(pairs.iter().map(|p| (&p.u, &p.v))));
    let tree = tree_with_branches(&required)?;
    let big_n = tree.len();
    if tree[big_n - 1] != top {
        return Err(Error::internal(format!(
            "last leaf of the tree is {}, not {top}",
            tree[big_n - 1]
        )));
    }
    let h = successor_shift(&tree, 2, big_n - 1)?;
    let first = orbitals(&work)[0].clone();
    if !first.a.is_zero() || !first.is_push_up() {
        return Err(Error::internal(format!(
            "{work} has no push-up orbital at 0"
        )));
    }
    let (x, y) = (tree[1].left_endpoint(), tree[big_n - 2].left_endpoint());
    let sigma_frame = conjugator_on_interval(
        &h,
        &shift_orbital(&h, &x)?,
        &work,
        &first,
        &x,
        &y,
        None,
        limits,
    )?;
    let sigma = if frame.mirrored {
        sigma_frame.mirror()
    } else {
        sigma_frame.clone()
    };

    let left_orb = orbitals(&work.conjugate(&sigma_frame))[0].clone();
    let chain = tree[1..big_n - 1].to_vec();
    let mut shared = vec![
        Evidence::Orbital {
            orbital: left_orb.clone(),
        },
        Evidence::Contains {
            orbital: left_orb.clone(),
            interval: Interval::closed(x, top.left_endpoint()),
        },
    ];
    shared.extend(chain_evidence(&chain, &left_orb));
    let mut per = Vec::with_capacity(s.len());
    for (i, (p, &(n_i, power))) in pairs.iter().zip(&ends).enumerate() {
        let mut ev = vec![
            Evidence::BranchPair {
                subject: Subject::Member { index: i, power },
                u: BinaryWord::ones(n_i),
                v: BinaryWord::ones(n_i + 1),
            },
            Evidence::BranchPair {
                subject: Subject::Member {
                    index: i,
                    power: p.power,
                },
                u: p.u.clone(),
                v: p.v.clone(),
            },
        ];
        ev.extend(links(&chain, &[&p.u, &p.v.child(0), &p.v.child(1)])?);
        ev.push(Evidence::Abelian { index: i });
        per.push(ev);
    }
    finish(
        Construction::Axis,
        g,
        sigma,
        frame,
        tree,
        chain,
        shared,
        per,
        s,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn half(w: &str) -> BinaryWord {
        w.parse().unwrap()
    }

    fn assert_valid(cert: &CogenCertificate, s: &[Element]) {
        for c in cert.verify(s) {
            assert!(c.passed, "failed: {}", c.description);
        }
    }

    #[test]
    fn no_fixed_point_case() {
        let s = [Element::x1()];
        let cert = prop_no_fixed(&s, &Element::x0(), &lim()).unwrap();
        assert_valid(&cert, &s);
        assert!(!cert.frame.inverted);
        let cert = prop_no_fixed(&s, &Element::x0().invert(), &lim()).unwrap();
        assert!(cert.frame.inverted);
        assert_valid(&cert, &s);
        assert!(prop_no_fixed(&[Element::x0()], &Element::x1(), &lim()).is_err());
    }

    #[test]
    fn two_orbital_cases() {
        let s = [Element::x1()];
        let up_left = Element::x0().supported_in(&half("0"));
        // right end orbital push-down
        let g = up_left.compose(&Element::x0().invert().supported_in(&half("1")));
        let cert = prop_two_orbitals(&s, &g, &lim()).unwrap();
        assert_valid(&cert, &s);
        // right end orbital push-up
        let g = up_left.compose(&Element::x0().supported_in(&half("1")));
        let cert = prop_two_orbitals(&s, &g, &lim()).unwrap();
        assert_valid(&cert, &s);
        // left end orbital push-down
        let cert = prop_two_orbitals(&s, &g.invert(), &lim()).unwrap();
        assert!(cert.frame.inverted);
        assert_valid(&cert, &s);
    }

    #[test]
    fn two_orbitals_with_mixed_slopes() {
        let s = [Element::x0()];
        let g = Element::x0().supported_in(&half("0")).compose(
            &crate::dynamics::make_unfixed_element(1, -2)
                .unwrap()
                .supported_in(&half("1")),
        );
        assert_eq!(g.abelianization(), AbelianImage::new(1, -2));
        let cert = prop_two_orbitals(&s, &g, &lim()).unwrap();
        assert_valid(&cert, &s);
    }

    #[test]
    fn axis_cases() {
        let s = [Element::x0()];
        let g = Element::x0().supported_in(&half("0"));
        for h in [g.clone(), g.invert(), g.mirror(), g.mirror().invert()] {
            let cert = prop_axis(&s, &h, &lim()).unwrap();
            assert_valid(&cert, &s);
        }
        assert!(prop_axis(&s, &Element::x0(), &lim()).is_err());
    }
}
