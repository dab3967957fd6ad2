//! Word families witnessing relations `u ~ v` under cyclic subgroups, trees
//! through prescribed branches, and shift elements along tree leaves.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{map_intervals, IntervalMapSpec, Limits};
use crate::dynamics::{orbitals, Orbital};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::{are_incomparable, is_antichain, word_interval, BinaryWord, Interval, Rational};

/// `f^power` has the branch pair `u → v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncomparablePair {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub power: i64,
}

/// `f^m` has the branch pair `w → u` and `f^n` has `w → v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredPair {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub m: i64,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredPairs {
    pub pairs: Vec<AnchoredPair>,
    pub w: BinaryWord,
}

/// Longest anchor word tried before giving up.
const MAX_WORD_DEPTH: usize = 256;
/// Largest denominator exponent of candidate base points.
const MAX_POINT_EXPONENT: i64 = 24;

fn powers(bound: u32) -> impl Iterator<Item = i64> {
    (1..=bound as i64).flat_map(|m| [m, -m])
}

/// Dyadics `j/2^k` in `(a,b)` in order of increasing `k`, then `j`; at most
/// 64 new points per level.
fn dyadics_in<'a>(a: &'a Rational, b: &'a Rational) -> impl Iterator<Item = Rational> + 'a {
    (1..=MAX_POINT_EXPONENT).flat_map(move |k| {
        let scale = Rational::pow2(k);
        let first = (a * &scale).floor() + 1;
        (0..128u32)
            .map(|i| Rational::new(&first + i, 1) / &scale)
            .take_while(|t| t < b)
            .filter(|t| t.dyadic_exponent() == Some(k as u64))
            .take(64)
            .collect::<Vec<_>>()
    })
}

fn in_used_half_open(t: &Rational, used: &[BinaryWord]) -> bool {
    used.iter()
        .any(|u| &u.left_endpoint() <= t && t < &u.right_endpoint())
}

/// Pairwise incomparable inner words `u_i, v_i` with `u_i ~ v_i` under `⟨f_i⟩`.
///
/// For each `f_i` in turn: a dyadic point `p` of its leftmost orbital and a
/// power `m` are chosen so that neither `p` nor `q = f_i^m(p)` lies in a word
/// already chosen, then `u_i` is the shortest word starting at `p` on which
/// `f_i^m` is affine with an inner image incomparable to every earlier word.
pub fn incomparable_pairs(s: &[Element], limits: &Limits) -> Result<Vec<IncomparablePair>> {
    let mut used: Vec<BinaryWord> = Vec::new();
    let mut out = Vec::with_capacity(s.len());
    for (idx, f) in s.iter().enumerate() {
        if f.is_identity() {
            return Err(Error::precondition(format!(
                "element {} of the set is the identity",
                idx + 1
            )));
        }
        let orb = orbitals(f)
            .into_iter()
            .next()
            .expect("non-identity element has an orbital");
        let pair = pair_for(f, &orb, &used, limits).ok_or_else(|| {
            Error::precondition(format!(
                "no incomparable pair found for element {} within the search bounds",
                idx + 1
            ))
        })?;
        used.push(pair.u.clone());
        used.push(pair.v.clone());
        out.push(pair);
    }
    for (f, p) in s.iter().zip(&out) {
        if !f.pow(p.power).has_branch_pair(&p.u, &p.v) {
            return Err(Error::internal(format!(
                "{} -> {} is not a branch pair of the chosen power",
                p.u, p.v
            )));
        }
    }
    if !is_antichain(&used) || !used.iter().all(BinaryWord::is_inner) {
        return Err(Error::internal(
            "incomparable_pairs produced comparable or non-inner words",
        ));
    }
    Ok(out)
}

fn pair_for(
    f: &Element,
    orb: &Orbital,
    used: &[BinaryWord],
    limits: &Limits,
) -> Option<IncomparablePair> {
    for p in dyadics_in(&orb.a, &orb.b) {
        if in_used_half_open(&p, used) {
            continue;
        }
        let k = p.dyadic_exponent().unwrap() as usize;
        for m in powers(limits.power_bound) {
            let fm = f.pow(m);
            let q = fm.evaluate(&p);
            if in_used_half_open(&q, used) {
                continue;
            }
            for d in k.max(1)..=MAX_WORD_DEPTH {
                let u = BinaryWord::floor_word(&p, d);
                let Some(v) = fm.image_word(&u) else { continue };
                if u.is_inner()
                    && v.is_inner()
                    && are_incomparable(&u, &v)
                    && used
                        .iter()
                        .all(|x| are_incomparable(x, &u) && are_incomparable(x, &v))
                {
                    return Some(IncomparablePair { u, v, power: m });
                }
            }
        }
    }
    None
}

fn image(f: &Element, i: &Interval) -> Interval {
    Interval::closed(f.evaluate(&i.lo), f.evaluate(&i.hi))
}

/// Incomparable inner words `u_i, v_i, w` with `[u_i],[v_i] ≺ [w]` and
/// `u_i ~ v_i ~ w` under `⟨f_i⟩`, for a point `β` moved by every `f_i`.
///
/// The orbitals of the `f_i` containing `β` are taken in order of decreasing
/// left endpoint; a standard interval `I` inside their intersection is pushed
/// left by powers `n_i`, `m_i` so that the images nest as
/// `J_k ≺ I_k ≺ … ≺ J_1 ≺ I_1 ≺ I`, and `w` is the shortest word `s0^j` in `I`
/// on which every chosen power is affine.
pub fn anchored_pairs(s: &[Element], beta: &Rational, limits: &Limits) -> Result<AnchoredPairs> {
    let mut orbs = Vec::with_capacity(s.len());
    for (idx, f) in s.iter().enumerate() {
        let orb = orbitals(f)
            .into_iter()
            .find(|o| o.contains(beta))
            .ok_or_else(|| {
                Error::precondition(format!("element {} of the set ({f}) fixes {beta}", idx + 1))
            })?;
        orbs.push((idx, orb));
    }
    orbs.sort_by(|x, y| y.1.a.cmp(&x.1.a));
    let a = orbs
        .iter()
        .map(|o| o.1.a.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let b = orbs
        .iter()
        .map(|o| o.1.b.clone())
        .min()
        .unwrap_or_else(Rational::one);

    let s_word = (1..=MAX_WORD_DEPTH)
        .map(|d| BinaryWord::floor_word(beta, d))
        .find(|w| w.left_endpoint() > a && w.right_endpoint() < b && w.is_inner())
        .ok_or_else(|| {
            Error::precondition(format!(
                "no standard interval around {beta} inside ({a},{b})"
            ))
        })?;
    let base = word_interval(&s_word)?;

    let n_bound = limits.power_bound;
    let mut prev = base.clone();
    let mut chosen: Vec<(usize, i64, i64)> = Vec::with_capacity(s.len());
    for (idx, _) in &orbs {
        let f = &s[*idx];
        let n = powers(n_bound)
            .find(|&n| image(&f.pow(n), &base).precedes(&prev))
            .ok_or_else(|| {
                Error::precondition(format!(
                    "no power of element {} within ±{n_bound} moves I left",
                    idx + 1
                ))
            })?;
        let i_n = image(&f.pow(n), &base);
        let m = powers(n_bound)
            .find(|&m| image(&f.pow(m), &base).precedes(&i_n))
            .ok_or_else(|| {
                Error::precondition(format!(
                    "no second power of element {} within ±{n_bound}",
                    idx + 1
                ))
            })?;
        prev = image(&f.pow(m), &base);
        chosen.push((*idx, m, n));
    }
    chosen.sort_by_key(|c| c.0);

    let maps: Vec<(Element, Element)> = chosen
        .iter()
        .map(|&(i, m, n)| (s[i].pow(m), s[i].pow(n)))
        .collect();
    let w = (0..=MAX_WORD_DEPTH)
        .map(|j| s_word.concat(&BinaryWord::zeros(j)))
        .find(|w| {
            maps.iter()
                .all(|(fm, fn_)| fm.image_word(w).is_some() && fn_.image_word(w).is_some())
        })
        .ok_or_else(|| Error::precondition("chosen powers are not affine on any anchor word"))?;
    let pairs: Vec<AnchoredPair> = chosen
        .iter()
        .zip(&maps)
        .map(|(&(_, m, n), (fm, fn_))| AnchoredPair {
            u: fm.image_word(&w).unwrap(),
            v: fn_.image_word(&w).unwrap(),
            m,
            n,
        })
        .collect();

    let mut all: Vec<BinaryWord> = pairs
        .iter()
        .flat_map(|p| [p.u.clone(), p.v.clone()])
        .collect();
    all.push(w.clone());
    let wi = word_interval(&w)?;
    let ordered = pairs.iter().all(|p| {
        word_interval(&p.u).unwrap().precedes(&wi) && word_interval(&p.v).unwrap().precedes(&wi)
    });
    if !is_antichain(&all) || !all.iter().all(BinaryWord::is_inner) || !ordered {
        return Err(Error::internal(
            "anchored_pairs produced words violating incomparability or order",
        ));
    }
    Ok(AnchoredPairs { pairs, w })
}

/// The leaves, left to right, of the smallest full binary tree having every
/// required word as a leaf.
pub fn tree_with_branches(required: &[BinaryWord]) -> Result<Vec<BinaryWord>> {
    if !is_antichain(required) {
        return Err(Error::precondition(
            "required branches must be pairwise incomparable",
        ));
    }
    let mut internal: BTreeSet<BinaryWord> = BTreeSet::new();
    for w in required {
        for len in 0..w.len() {
            internal.insert(w.prefix(len));
        }
    }
    if internal.is_empty() {
        return Ok(vec![BinaryWord::empty()]);
    }
    let mut leaves: Vec<BinaryWord> = internal
        .iter()
        .flat_map(|p| [p.child(0), p.child(1)])
        .filter(|c| !internal.contains(c))
        .collect();
    leaves.sort();
    Ok(leaves)
}

/// The element with branch pairs `w_i → w_{i+1}` for `i0 ≤ i < i1`
/// (1-based leaf indices).
pub fn successor_shift(leaves: &[BinaryWord], i0: usize, i1: usize) -> Result<Element> {
    let n = leaves.len();
    if i0 < 2 || i1 < i0 || i1 + 1 > n {
        return Err(Error::precondition(format!(
            "shift range {i0}..{i1} must satisfy 2 ≤ i0 ≤ i1 ≤ {}",
            n.saturating_sub(1)
        )));
    }
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for i in i0..i1 {
        sources.push(word_interval(&leaves[i - 1])?);
        targets.push(word_interval(&leaves[i])?);
    }
    let h = map_intervals(&IntervalMapSpec::linear(sources, targets))?;
    for i in i0..i1 {
        if !h.has_branch_pair(&leaves[i - 1], &leaves[i]) {
            return Err(Error::internal(format!(
                "shift lacks the pair {} -> {}",
                leaves[i - 1],
                leaves[i]
            )));
        }
    }
    Ok(h)
}
