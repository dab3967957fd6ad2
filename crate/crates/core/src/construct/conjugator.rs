//! Conjugators that make `g^σ` coincide with a given `f` on an interval.

use num_bigint::BigInt;

use super::{assemble, Limits, Segment};
use crate::dynamics::{orbital_power, orbitals, Direction, Orbital};
use crate::element::{compose_pairs, interval_map_pairs, BranchPair, Element};
use crate::error::{Error, Result};
use crate::words::{Interval, Rational};

/// Precision first tried when replacing a non-dyadic left endpoint.
const DYADIC_APPROX_BITS: u64 = 20;

/// The dyadic with the smallest denominator in the open interval `(a,b)`,
/// leftmost among those.
pub fn simplest_dyadic(a: &Rational, b: &Rational) -> Rational {
    assert!(a < b, "empty interval");
    let mut k = 0i64;
    loop {
        let scale = Rational::pow2(k);
        let j = (a * &scale).floor() + 1;
        let t = Rational::new(j, BigInt::from(1)) / &scale;
        if &t < b {
            return t;
        }
        k += 1;
    }
}

/// `x` itself if dyadic, else the largest `j/2^k < x` with `k ≥ 20` minimal
/// such that the result still exceeds `a`.
fn dyadic_at_or_below(x: &Rational, a: &Rational) -> Rational {
    if x.is_dyadic() {
        return x.clone();
    }
    let mut k = DYADIC_APPROX_BITS as i64;
    loop {
        let scale = Rational::pow2(k);
        let t = Rational::new((x * &scale).floor(), BigInt::from(1)) / &scale;
        if &t > a {
            return t;
        }
        k += 1;
    }
}

/// σ with `g^σ = f` on `[x,y]` and `[x,y] ⊆ (σ(c),σ(d))` for `(c,d) = orb_g`;
/// if `fix` is given, σ is the identity on it.
///
/// `orb_f` and `orb_g` must be orbitals of `f` and `g` with the same direction,
/// `[x,y] ⊂ orb_f`, and `fix` a closed dyadic interval lying to the left of
/// both orbitals.
#[allow(clippy::too_many_arguments)]
pub fn conjugator_on_interval(
    f: &Element,
    orb_f: &Orbital,
    g: &Element,
    orb_g: &Orbital,
    x: &Rational,
    y: &Rational,
    fix: Option<&Interval>,
    limits: &Limits,
) -> Result<Element> {
    if orb_f.direction != orb_g.direction {
        return Err(Error::precondition(format!(
            "orbitals {orb_f} and {orb_g} have opposite directions"
        )));
    }
    if !orbitals(f).contains(orb_f) {
        return Err(Error::precondition(format!(
            "{orb_f} is not an orbital of {f}"
        )));
    }
    if !orbitals(g).contains(orb_g) {
        return Err(Error::precondition(format!(
            "{orb_g} is not an orbital of {g}"
        )));
    }
    if x > y || !orb_f.contains(x) || !orb_f.contains(y) {
        return Err(Error::precondition(format!(
            "[{x},{y}] is not a closed subinterval of {orb_f}"
        )));
    }
    if let Some(j) = fix {
        if !j.lo_closed
            || !j.hi_closed
            || j.is_point()
            || !j.has_dyadic_endpoints()
            || j.lo.is_negative()
        {
            return Err(Error::precondition(format!(
                "fix interval {j} must be closed, non-degenerate and dyadic"
            )));
        }
        if j.hi > orb_f.a || j.hi > orb_g.a {
            return Err(Error::precondition(format!(
                "fix interval {j} must lie left of {orb_f} and {orb_g}"
            )));
        }
    }
    let sigma = match orb_f.direction {
        Direction::PushUp => push_up(f, orb_f, g, orb_g, x, y, fix, limits)?,
        Direction::PushDown => {
            // (g⁻¹)^σ = f⁻¹ on f([x,y]) is the same condition
            let (fi, gi) = (f.invert(), g.invert());
            push_up(
                &fi,
                &orb_f.reversed(),
                &gi,
                &orb_g.reversed(),
                &f.evaluate(x),
                &f.evaluate(y),
                fix,
                limits,
            )?
        }
    };
    let target = Interval::closed(x.clone(), y.clone());
    if !g.conjugate(&sigma).agrees_on(f, &target) {
        return Err(Error::internal(format!(
            "conjugate does not coincide with {f} on {target}"
        )));
    }
    if !(sigma.evaluate(&orb_g.a) < *x && *y < sigma.evaluate(&orb_g.b)) {
        return Err(Error::internal(format!(
            "{target} escapes the transported orbital"
        )));
    }
    if let Some(j) = fix {
        if !sigma.agrees_on(&Element::identity(), j) {
            return Err(Error::internal(format!("conjugator moves points of {j}")));
        }
    }
    Ok(sigma)
}

#[allow(clippy::too_many_arguments)]
fn push_up(
    f: &Element,
    orb_f: &Orbital,
    g: &Element,
    orb_g: &Orbital,
    x: &Rational,
    y: &Rational,
    fix: Option<&Interval>,
    limits: &Limits,
) -> Result<Element> {
    let x = dyadic_at_or_below(x, &orb_f.a);
    let n = orbital_power(f, orb_f, &x, y, limits.iteration_cap)? as usize;
    let alpha = simplest_dyadic(&orb_g.a, &orb_g.b);

    let mut gp = vec![alpha];
    let mut fp = vec![x];
    for i in 0..=n {
        gp.push(g.evaluate(&gp[i]));
        fp.push(f.evaluate(&fp[i]));
    }
    let g_inv = g.invert();

    let mut segments = Vec::with_capacity(n + 2);
    if let Some(j) = fix {
        segments.push(Segment::identity(j)?);
    }
    let span = |pts: &[Rational], i: usize| Interval::closed(pts[i].clone(), pts[i + 1].clone());
    let mut prev: Vec<BranchPair> = interval_map_pairs(&span(&gp, 0), &span(&fp, 0))?;
    segments.push(Segment {
        source: span(&gp, 0),
        target: span(&fp, 0),
        pairs: prev.clone(),
    });
    for i in 1..=n {
        // σ_i = g⁻¹ σ_{i-1} f on [gⁱα, gⁱ⁺¹α]
        let step = compose_pairs(&g_inv.restrict_pairs(&span(&gp, i))?, &prev);
        let next = compose_pairs(&step, &f.restrict_pairs(&span(&fp, i - 1))?);
        segments.push(Segment {
            source: span(&gp, i),
            target: span(&fp, i),
            pairs: next.clone(),
        });
        prev = next;
    }
    assemble(segments)
}
