//! Escape rate by renormalized iteration and the potential `G - eta log|t|`.

use rug::Rational;

use crate::error::{DegenError, Result};
use crate::geometry::{normalize, ProjPoint};
use crate::numerics::{ExtendedComplex, ExtendedFloat};

use super::form::{EvaluatedMap, HomogeneousFamily};
use super::section::Section;

/// How the lower sphere constant in the tail bound is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    /// Cofactor bound from the resultant system.
    Certified,
    /// Smallest value over sampled sphere points; not a proof.
    Heuristic { samples: usize },
}

#[derive(Clone, Debug)]
pub struct EscapeRateResult {
    pub value: ExtendedFloat,
    pub depth: usize,
    pub tail_bound: ExtendedFloat,
    pub precision: u32,
    pub heuristic: bool,
}

/// One evaluation of the potential at a parameter value.
#[derive(Clone, Debug)]
pub struct PotentialSample {
    pub t: ExtendedComplex,
    pub value: ExtendedFloat,
    pub depth: usize,
    pub tail_bound: ExtendedFloat,
    pub precision: u32,
}

/// Escape rate `G(t, x)` with a certified tail.
pub fn escape_rate(fam: &HomogeneousFamily, t: &ExtendedComplex, x: &ProjPoint, depth: usize, prec: u32) -> Result<EscapeRateResult> {
    escape_trace(fam, t, x, depth, prec, TailMode::Certified).map(|(r, _)| r)
}

pub fn escape_rate_with(fam: &HomogeneousFamily, t: &ExtendedComplex, x: &ProjPoint, depth: usize, prec: u32, mode: TailMode) -> Result<EscapeRateResult> {
    escape_trace(fam, t, x, depth, prec, mode).map(|(r, _)| r)
}

/// Evaluated map at `t`, refusing degenerate parameters.
pub fn nondegenerate_map(fam: &HomogeneousFamily, t: &ExtendedComplex, prec: u32) -> Result<EvaluatedMap> {
    let map = fam.at(t, prec);
    map.check_nondegenerate(t)?;
    Ok(map)
}

/// Escape rate together with the per-step ratios `log |F(x_k)| - d log |x_k|`.
pub fn escape_trace(
    fam: &HomogeneousFamily,
    t: &ExtendedComplex,
    x: &ProjPoint,
    depth: usize,
    prec: u32,
    mode: TailMode,
) -> Result<(EscapeRateResult, Vec<ExtendedFloat>)> {
    if depth == 0 {
        return Err(DegenError::Precondition("escape rate depth must be at least 1".into()));
    }
    let map = nondegenerate_map(fam, t, prec)?;
    let d = fam.degree() as i64;
    let start = ProjPoint::new(x.z.round_to(prec), x.w.round_to(prec))?;
    let mut current = normalize(&start);
    let mut value = current.log_scale.clone();
    let mut weight = ExtendedFloat::one(prec);
    let mut steps = Vec::with_capacity(depth);
    for _ in 0..depth {
        weight = if d == 2 { weight.mul_2exp(-1) } else { weight.div_i64(d) };
        let img = map.apply(&current.point).map_err(|_| DegenError::IndeterminateImage { t: format!("{t}") })?;
        let next = normalize(&img);
        value = &value + &(&next.log_scale * &weight);
        steps.push(next.log_scale.clone());
        current = next;
    }
    let upper = map.c_plus();
    let (lower, heuristic) = match mode {
        TailMode::Certified => {
            let l = map.log_min_sphere().ok_or_else(|| DegenError::Degenerate { t: format!("{t}"), resultant: "singular Sylvester system".into() })?;
            (l, false)
        }
        TailMode::Heuristic { samples } => (map.empirical_log_min_sphere(samples, 0x7a11), true),
    };
    let tail_bound = (&upper.abs() + &lower.abs()).mul_prec(&weight, prec).div_i64(d - 1);
    Ok((EscapeRateResult { value, depth, tail_bound, precision: prec, heuristic }, steps))
}

pub fn rational_to_float(q: &Rational, prec: u32) -> ExtendedFloat {
    ExtendedFloat::from_integer(prec + 8, q.numer()).div_prec(&ExtendedFloat::from_integer(prec + 8, q.denom()), prec)
}

/// `G(t, a~(t)) - eta log |t|`.
pub fn potential(fam: &HomogeneousFamily, section: &dyn Section, t: &ExtendedComplex, eta: &Rational, depth: usize, prec: u32) -> Result<PotentialSample> {
    if t.is_zero() {
        return Err(DegenError::Precondition("the potential is defined on the punctured disk only".into()));
    }
    let x = section.lift(t, prec)?;
    let r = escape_rate(fam, t, &x, depth, prec)?;
    let mut value = r.value;
    if *eta != 0 {
        let log_t = t.round_to(prec).log_abs();
        value = &value - &(&rational_to_float(eta, prec) * &log_t);
    }
    Ok(PotentialSample { t: t.round_to(prec), value, depth, tail_bound: r.tail_bound, precision: prec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::section::ConstantSection;

    fn power_map(prec: u32) -> HomogeneousFamily {
        let c = |x: f64| ExtendedComplex::from_f64(prec, x, 0.0);
        HomogeneousFamily::constant(2, vec![c(0.0), c(0.0), c(1.0)], vec![c(1.0), c(0.0), c(0.0)]).unwrap()
    }

    #[test]
    fn power_map_escape_rate_is_log_max_norm() {
        let prec = 128;
        let f = power_map(prec);
        let t = ExtendedComplex::from_f64(prec, 0.1, 0.2);
        let r = escape_rate(&f, &t, &ProjPoint::from_f64(prec, (2.0, 0.0), (1.0, 0.0)).unwrap(), 64, prec).unwrap();
        let err = (&r.value - &ExtendedFloat::ln2(prec)).abs();
        assert!(err <= r.tail_bound.max_ref(&ExtendedFloat::one(prec).mul_2exp(-(prec as i64) + 16)).clone());
        assert!(r.tail_bound.to_f64() <= 1e-15);
        let r1 = escape_rate(&f, &t, &ProjPoint::from_f64(prec, (1.0, 0.0), (1.0, 0.0)).unwrap(), 64, prec).unwrap();
        assert!(r1.value.is_zero());
        assert!(escape_rate(&f, &t, &ProjPoint::from_f64(prec, (1.0, 0.0), (1.0, 0.0)).unwrap(), 0, prec).is_err());
    }

    #[test]
    fn potential_with_zero_eta_is_escape_rate() {
        let prec = 128;
        let f = power_map(prec);
        let s = ConstantSection::new(ExtendedComplex::from_f64(prec, 3.0, 0.0), ExtendedComplex::one(prec));
        let t = ExtendedComplex::from_f64(prec, 0.25, 0.0);
        let pot = potential(&f, &s, &t, &Rational::new(), 32, prec).unwrap();
        let esc = escape_rate(&f, &t, &s.lift(&t, prec).unwrap(), 32, prec).unwrap();
        assert_eq!(pot.value, esc.value);
        assert!(potential(&f, &s, &ExtendedComplex::zero(prec), &Rational::new(), 32, prec).is_err());
        let h = escape_rate_with(&f, &t, &s.lift(&t, prec).unwrap(), 32, prec, TailMode::Heuristic { samples: 64 }).unwrap();
        assert!(h.heuristic && h.value == esc.value);
    }
}
