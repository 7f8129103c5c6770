//! Orbit-closeness diagnostics for `phi^n(a0)` approaching `h`: the weighted
//! sums `S_N = sum_{n<=N} d^-n log [phi^n(a0), h]` and the normalized minima
//! that separate the polynomial-like regime from the unbounded one.

use crate::dynamics::EvaluatedMap;
use crate::error::{DegenError, Result};
use crate::geometry::{affine_embed, chordal, AffinePoint, ProjPoint};
use crate::numerics::{ExtendedComplex, ExtendedFloat, ParamPoly};

/// `phi = num / den` with the start point, target and weight degree, all at one precision.
#[derive(Clone, Debug)]
pub struct OrbitProblem {
    pub phi_num: ParamPoly,
    pub phi_den: ParamPoly,
    pub a0: AffinePoint,
    pub h: AffinePoint,
    pub d: u32,
    /// Term `n` uses `phi^(n - s)(a0)` for `n >= s`, so that a marked
    /// critical value `a0 = phi(c)` keeps the indexing of `c`.
    pub index_shift: usize,
    pub prec: u32,
}

#[derive(Clone, Debug)]
pub struct OrbitGaps {
    /// `log [phi^(n-s)(a0), h]` for `n = s..=N`, where `s = first_index`.
    pub log_gaps: Vec<ExtendedFloat>,
    pub first_index: usize,
    /// Largest number of bits lost to cancellation in a chordal cross term.
    pub cancellation_bits: f64,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct ClosenessSums {
    /// `S_s, ..., S_N` with `s` the index shift.
    pub sums: Vec<ExtendedFloat>,
    pub gaps: OrbitGaps,
}

#[derive(Clone, Debug)]
pub struct ClosenessMinima {
    /// `min_{s<=n<=N} log gap_n / (d-1)^n` and its index.
    pub min_power: ExtendedFloat,
    pub argmin_power: usize,
    /// `min_{max(s,1)<=n<=N} log gap_n / n` and its index.
    pub min_linear: ExtendedFloat,
    pub argmin_linear: usize,
    pub precision: u32,
}

impl OrbitProblem {
    fn map(&self) -> EvaluatedMap {
        let e = self.phi_num.degree().max(self.phi_den.degree());
        let pad = |f: &ParamPoly| -> Vec<ExtendedComplex> {
            (0..=e).map(|i| f.coeffs().get(i).map(|c| c.round_to(self.prec)).unwrap_or_else(|| ExtendedComplex::zero(self.prec))).collect()
        };
        EvaluatedMap { degree: e, p: pad(&self.phi_num), q: pad(&self.phi_den), prec: self.prec }
    }
}

/// Rescales so the larger coordinate is exactly one. Unlike
/// [`crate::geometry::normalize`] nothing is flushed, so super-attracting
/// orbits keep their doubly exponential smallness.
fn chart_normalize(p: &ProjPoint) -> Result<ProjPoint> {
    let prec = p.prec();
    if p.z.norm_sqr() >= p.w.norm_sqr() {
        ProjPoint::new(ExtendedComplex::one(prec), &p.w / &p.z)
    } else {
        ProjPoint::new(&p.z / &p.w, ExtendedComplex::one(prec))
    }
}

fn cancellation(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let a = (&p.z * &q.w).abs();
    let b = (&p.w * &q.z).abs();
    let cross = (&(&p.z * &q.w) - &(&p.w * &q.z)).abs();
    if cross.is_zero() {
        return f64::INFINITY;
    }
    let total = &a + &b;
    if total.is_zero() {
        return 0.0;
    }
    (total.log2_abs_f64() - cross.log2_abs_f64()).max(0.0)
}

/// Gaps along the orbit at the problem's own precision.
pub fn orbit_gaps(problem: &OrbitProblem, n_max: usize) -> Result<OrbitGaps> {
    let prec = problem.prec;
    let map = problem.map();
    let target = affine_embed(&problem.h, prec);
    let s = problem.index_shift;
    let mut x = affine_embed(&problem.a0, prec);
    let mut log_gaps = Vec::with_capacity(n_max + 1);
    let mut bits: f64 = 0.0;
    for n in s..=n_max {
        if n > s {
            x = chart_normalize(&map.apply(&x).map_err(|_| DegenError::Domain(format!("phi^{}(a0) is indeterminate", n - s)))?)?;
        }
        // a gap that only survives as cancellation noise is treated as a hit;
        // the adaptive driver retries those at higher precision first
        let lost = cancellation(&x, &target);
        if lost > (prec / 2) as f64 {
            return Err(DegenError::ExactHit(n));
        }
        bits = bits.max(lost);
        log_gaps.push(chordal(&x, &target).ln());
    }
    Ok(OrbitGaps { log_gaps, first_index: s, cancellation_bits: bits, precision: prec })
}

/// Runs [`orbit_gaps`] at `base_prec` and reruns with more bits while the
/// cancellation in any gap exceeds half the working precision, or while an
/// apparent exact hit might be a gap below resolution. Stops at `max_prec`.
pub fn orbit_gaps_adaptive<F>(build: F, n_max: usize, base_prec: u32, max_prec: u32) -> Result<OrbitGaps>
where
    F: Fn(u32) -> Result<OrbitProblem>,
{
    let mut prec = base_prec.max(128);
    loop {
        let attempt = orbit_gaps(&build(prec)?, n_max);
        let next = match &attempt {
            Ok(g) => {
                let needed = (2.0 * g.cancellation_bits).ceil() as u32 + 64;
                if needed <= prec {
                    return attempt;
                }
                needed
            }
            Err(DegenError::ExactHit(_)) => prec.saturating_mul(4),
            Err(_) => return attempt,
        };
        if prec >= max_prec {
            return match attempt {
                Ok(g) => Err(DegenError::PrecisionBudget { needed: (2.0 * g.cancellation_bits) as u64 + 64, available: max_prec as u64 }),
                other => other,
            };
        }
        prec = next.min(max_prec);
    }
}

fn weighted_sums(gaps: &OrbitGaps, d: u32) -> Vec<ExtendedFloat> {
    let prec = gaps.precision;
    let mut sums = Vec::with_capacity(gaps.log_gaps.len());
    let mut acc = ExtendedFloat::zero(prec);
    let mut weight = ExtendedFloat::one(prec);
    for _ in 0..gaps.first_index {
        weight = weight.div_i64(d as i64);
    }
    for g in &gaps.log_gaps {
        acc = &acc + &(g * &weight);
        sums.push(acc.clone());
        weight = weight.div_i64(d as i64);
    }
    sums
}

pub fn condition41_partial_sums<F>(build: F, n_max: usize, base_prec: u32, max_prec: u32) -> Result<ClosenessSums>
where
    F: Fn(u32) -> Result<OrbitProblem>,
{
    let d = build(base_prec.max(128))?.d;
    if d < 2 {
        return Err(DegenError::Precondition("weight degree must be at least 2".into()));
    }
    let gaps = orbit_gaps_adaptive(build, n_max, base_prec, max_prec)?;
    let sums = weighted_sums(&gaps, d);
    Ok(ClosenessSums { sums, gaps })
}

pub fn prop41_ratio_check<F>(build: F, n_max: usize, base_prec: u32, max_prec: u32) -> Result<ClosenessMinima>
where
    F: Fn(u32) -> Result<OrbitProblem>,
{
    let d = build(base_prec.max(128))?.d;
    if d < 2 {
        return Err(DegenError::Precondition("weight degree must be at least 2".into()));
    }
    let gaps = orbit_gaps_adaptive(build, n_max, base_prec, max_prec)?;
    let prec = gaps.precision;
    let mut min_power: Option<(ExtendedFloat, usize)> = None;
    let mut min_linear: Option<(ExtendedFloat, usize)> = None;
    let mut weight = ExtendedFloat::one(prec);
    for _ in 0..gaps.first_index {
        weight = weight.mul_i64(d as i64 - 1);
    }
    for (k, g) in gaps.log_gaps.iter().enumerate() {
        let n = gaps.first_index + k;
        let p = g.div_prec(&weight, prec);
        if min_power.as_ref().is_none_or(|(m, _)| p < *m) {
            min_power = Some((p, n));
        }
        if n >= 1 {
            let l = g.div_i64(n as i64);
            if min_linear.as_ref().is_none_or(|(m, _)| l < *m) {
                min_linear = Some((l, n));
            }
        }
        weight = weight.mul_i64(d as i64 - 1);
    }
    let (min_power, argmin_power) = min_power.ok_or_else(|| DegenError::Precondition("no terms: N is below the index shift".into()))?;
    let (min_linear, argmin_linear) = min_linear.unwrap_or((ExtendedFloat::zero(prec), 0));
    Ok(ClosenessMinima { min_power, argmin_power, min_linear, argmin_linear, precision: prec })
}
