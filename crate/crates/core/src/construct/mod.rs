//! Elements built to order: interval-mapping elements, patchworks of
//! restrictions, conjugators that reproduce a prescribed map on an interval,
//! and the word families used by the co-generation constructions.

mod conjugator;
mod words;

use serde::{Deserialize, Serialize};

use crate::element::{affine_pairs, interval_map_pairs, BranchPair, Element};
use crate::error::{Error, Result};
use crate::words::{Interval, Rational};

pub use conjugator::{conjugator_on_interval, simplest_dyadic};
pub use words::{
    anchored_pairs, incomparable_pairs, successor_shift, tree_with_branches, AnchoredPair,
    AnchoredPairs, IncomparablePair,
};

/// Search bounds shared by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Bound on iterations when escaping an interval inside an orbital.
    pub iteration_cap: u64,
    /// Bound on `|m|` when searching for a power with a required property.
    pub power_bound: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            iteration_cap: crate::dynamics::DEFAULT_ITERATION_CAP,
            power_bound: 64,
        }
    }
}

/// Sources mapped onto targets in order, affinely where `linear` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalMapSpec {
    pub sources: Vec<Interval>,
    pub targets: Vec<Interval>,
    pub linear: Vec<bool>,
}

impl IntervalMapSpec {
    pub fn new(sources: Vec<Interval>, targets: Vec<Interval>, linear: Vec<bool>) -> Self {
        IntervalMapSpec {
            sources,
            targets,
            linear,
        }
    }

    /// Every pair mapped affinely.
    pub fn linear(sources: Vec<Interval>, targets: Vec<Interval>) -> Self {
        let linear = vec![true; sources.len()];
        IntervalMapSpec {
            sources,
            targets,
            linear,
        }
    }
}

/// A closed source interval together with branch pairs tiling it and mapping it
/// onto `target`.
pub(crate) struct Segment {
    pub source: Interval,
    pub target: Interval,
    pub pairs: Vec<BranchPair>,
}

impl Segment {
    pub fn identity(interval: &Interval) -> Result<Segment> {
        let words = crate::words::standard_decomposition(interval)?;
        Ok(Segment {
            source: interval.clone(),
            target: interval.clone(),
            pairs: crate::element::diagonal(&words),
        })
    }
}

fn check_dyadic_closed(i: &Interval, what: &str) -> Result<()> {
    if !i.lo_closed || !i.hi_closed || i.is_point() {
        return Err(Error::InvalidElement(format!(
            "{what} {i} must be a non-degenerate closed interval"
        )));
    }
    for x in [&i.lo, &i.hi] {
        if !x.is_dyadic() {
            return Err(Error::NonDyadic(x.clone()));
        }
    }
    if i.lo.is_negative() || i.hi > Rational::one() {
        return Err(Error::InvalidElement(format!(
            "{what} {i} is not inside [0,1]"
        )));
    }
    Ok(())
}

/// Joins the segments into one element, filling each gap with a generic map.
///
/// Fails unless the sources and targets are ordered left to right, touch 0
/// together, touch 1 together and share boundary points in the same places.
pub(crate) fn assemble(segments: Vec<Segment>) -> Result<Element> {
    for s in &segments {
        check_dyadic_closed(&s.source, "source")?;
        check_dyadic_closed(&s.target, "target")?;
    }
    for (i, w) in segments.windows(2).enumerate() {
        if !w[0].source.precedes(&w[1].source) || !w[0].target.precedes(&w[1].target) {
            return Err(Error::InvalidElement(format!(
                "intervals {} and {} are not ordered left to right",
                i + 1,
                i + 2
            )));
        }
        let share_src = w[0].source.hi == w[1].source.lo;
        let share_tgt = w[0].target.hi == w[1].target.lo;
        if share_src != share_tgt {
            return Err(Error::InvalidElement(format!(
                "intervals {} and {} share a boundary point on one side only",
                i + 1,
                i + 2
            )));
        }
    }
    if let (Some(first), Some(last)) = (segments.first(), segments.last()) {
        if first.source.lo.is_zero() != first.target.lo.is_zero() {
            return Err(Error::InvalidElement(
                "0 lies in the first source or the first target but not both".into(),
            ));
        }
        if (last.source.hi == Rational::one()) != (last.target.hi == Rational::one()) {
            return Err(Error::InvalidElement(
                "1 lies in the last source or the last target but not both".into(),
            ));
        }
    }
    let mut pairs = Vec::new();
    let (mut s, mut t) = (Rational::zero(), Rational::zero());
    for seg in segments {
        if s < seg.source.lo {
            pairs.extend(interval_map_pairs(
                &Interval::closed(s, seg.source.lo.clone()),
                &Interval::closed(t, seg.target.lo.clone()),
            )?);
        }
        pairs.extend(seg.pairs);
        s = seg.source.hi;
        t = seg.target.hi;
    }
    if s < Rational::one() {
        pairs.extend(interval_map_pairs(
            &Interval::closed(s, Rational::one()),
            &Interval::closed(t, Rational::one()),
        )?);
    }
    Element::from_branch_pairs(pairs)
}

/// An element carrying each source onto the matching target.
pub fn map_intervals(spec: &IntervalMapSpec) -> Result<Element> {
    if spec.sources.len() != spec.targets.len() || spec.sources.len() != spec.linear.len() {
        return Err(Error::InvalidElement(
            "sources, targets and linear flags differ in length".into(),
        ));
    }
    let mut segments = Vec::with_capacity(spec.sources.len());
    for ((src, tgt), &linear) in spec.sources.iter().zip(&spec.targets).zip(&spec.linear) {
        check_dyadic_closed(src, "source")?;
        check_dyadic_closed(tgt, "target")?;
        let pairs = if linear {
            let ratio = tgt.length() / src.length();
            let log_slope = ratio.log2_exact().ok_or_else(|| {
                Error::InvalidElement(format!(
                    "{src} cannot be mapped linearly onto {tgt}: length ratio {ratio}"
                ))
            })?;
            let offset = &tgt.lo - Rational::pow2(log_slope) * &src.lo;
            affine_pairs(src, log_slope, &offset)?
        } else {
            interval_map_pairs(src, tgt)?
        };
        segments.push(Segment {
            source: src.clone(),
            target: tgt.clone(),
            pairs,
        });
    }
    let f = assemble(segments)?;
    for (src, tgt) in spec.sources.iter().zip(&spec.targets) {
        if f.evaluate(&src.lo) != tgt.lo || f.evaluate(&src.hi) != tgt.hi {
            return Err(Error::internal(format!(
                "map_intervals missed {src} -> {tgt}"
            )));
        }
    }
    Ok(f)
}

/// An element agreeing with each `g_i` on its interval.
pub fn patchwork(pieces: &[(Interval, Element)]) -> Result<Element> {
    let mut segments = Vec::with_capacity(pieces.len());
    for (i, g) in pieces {
        check_dyadic_closed(i, "piece")?;
        let target = Interval::closed(g.evaluate(&i.lo), g.evaluate(&i.hi));
        segments.push(Segment {
            source: i.clone(),
            target,
            pairs: g.restrict_pairs(i)?,
        });
    }
    let f = assemble(segments)?;
    for (i, g) in pieces {
        if !f.agrees_on(g, i) {
            return Err(Error::internal(format!(
                "patchwork does not agree with {g} on {i}"
            )));
        }
    }
    Ok(f)
}
