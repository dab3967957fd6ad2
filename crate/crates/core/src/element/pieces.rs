//! Affine-piece view of an element.

use serde::{Deserialize, Serialize};

use super::pairs::BranchPair;
use super::Element;
use crate::error::{Error, Result};
use crate::words::{standard_decomposition, BinaryWord, Interval, Rational};

/// `t ↦ 2^log_slope · t + offset` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub lo: Rational,
    pub hi: Rational,
    pub log_slope: i64,
    pub offset: Rational,
}

impl AffinePiece {
    pub fn slope(&self) -> Rational {
        Rational::pow2(self.log_slope)
    }

    pub fn apply(&self, t: &Rational) -> Rational {
        self.slope() * t + &self.offset
    }
}

/// Words deeper than this are treated as a malformed request.
const MAX_REFINEMENT_DEPTH: usize = 4096;

pub(crate) fn apply_pair(u: &BinaryWord, v: &BinaryWord, t: &Rational) -> Rational {
    let slope = Rational::pow2(u.len() as i64 - v.len() as i64);
    v.left_endpoint() + (t - u.left_endpoint()) * slope
}

/// Maximal affine pieces, adjacent collinear pairs merged.
pub(crate) fn to_pieces(pairs: &[BranchPair]) -> Vec<AffinePiece> {
    let mut out: Vec<AffinePiece> = Vec::new();
    for (u, v) in pairs {
        let log_slope = u.len() as i64 - v.len() as i64;
        let offset = v.left_endpoint() - u.left_endpoint() * Rational::pow2(log_slope);
        if let Some(last) = out.last_mut() {
            if last.log_slope == log_slope && last.offset == offset {
                last.hi = u.right_endpoint();
                continue;
            }
        }
        out.push(AffinePiece {
            lo: u.left_endpoint(),
            hi: u.right_endpoint(),
            log_slope,
            offset,
        });
    }
    out
}

pub(crate) fn from_pieces(pieces: &[AffinePiece]) -> Result<Element> {
    let mut pairs = Vec::new();
    for p in pieces {
        pairs.extend(affine_pairs(
            &Interval::closed(p.lo.clone(), p.hi.clone()),
            p.log_slope,
            &p.offset,
        )?);
    }
    Element::from_branch_pairs(pairs)
}

/// Branch pairs realising `t ↦ 2^log_slope · t + offset` on a closed dyadic
/// subinterval of `[0,1]`, each domain word refined until its image is a
/// standard dyadic interval.
pub(crate) fn affine_pairs(
    domain: &Interval,
    log_slope: i64,
    offset: &Rational,
) -> Result<Vec<BranchPair>> {
    let slope = Rational::pow2(log_slope);
    let image = |x: &Rational| &slope * x + offset;
    let (a, b) = (image(&domain.lo), image(&domain.hi));
    if !a.is_in_unit_interval() || !b.is_in_unit_interval() || !a.is_dyadic() {
        return Err(Error::InvalidElement(format!(
            "affine map with slope 2^{log_slope} and offset {offset} does not send {domain} to a dyadic subinterval of [0,1]"
        )));
    }
    let mut out = Vec::new();
    for w in standard_decomposition(domain)? {
        let mut stack = vec![w];
        while let Some(w) = stack.pop() {
            match BinaryWord::from_interval(&image(&w.left_endpoint()), &image(&w.right_endpoint()))
            {
                Some(v) => out.push((w, v)),
                None if w.len() >= MAX_REFINEMENT_DEPTH => {
                    return Err(Error::DepthExceeded {
                        length: w.len(),
                        bound: MAX_REFINEMENT_DEPTH,
                    })
                }
                None => {
                    stack.push(w.child(1));
                    stack.push(w.child(0));
                }
            }
        }
    }
    Ok(out)
}

/// Branch pairs of a PL homeomorphism from the closed dyadic interval `source`
/// onto `target`: both sides are tiled by standard intervals, the shorter tiling
/// is refined by halving its widest interval until the counts agree, and the
/// tiles are matched in order.
pub(crate) fn interval_map_pairs(source: &Interval, target: &Interval) -> Result<Vec<BranchPair>> {
    let mut a = standard_decomposition(source)?;
    let mut b = standard_decomposition(target)?;
    while a.len() != b.len() {
        let shorter = if a.len() < b.len() { &mut a } else { &mut b };
        split_widest(shorter);
    }
    Ok(a.into_iter().zip(b).collect())
}

fn split_widest(words: &mut Vec<BinaryWord>) {
    let (idx, _) = words
        .iter()
        .enumerate()
        .min_by_key(|(_, w)| w.len())
        .expect("non-empty tiling");
    let w = words.remove(idx);
    words.insert(idx, w.child(1));
    words.insert(idx, w.child(0));
}
