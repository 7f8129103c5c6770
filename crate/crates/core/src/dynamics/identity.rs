//! Residual of the iteration identity for `F_0 = (H P, H Q)`:
//!
//! `log |F_0(F_0^n x)| / |F_0^n x|^d
//!     = log |H(Phi^n x)| / |Phi^n x| + log |Phi(Phi^n x)| / |Phi^n x|^e`,
//!
//! with both sides evaluated along independent orbits.

use crate::error::{DegenError, Result};
use crate::geometry::{normalize, NormalizedPoint, ProjPoint};
use crate::numerics::{ExtendedComplex, ExtendedFloat};

use super::form::EvaluatedMap;

/// Multiplies both forms of `phi` by the linear form `z - h w`.
pub fn times_linear_form(phi: &EvaluatedMap, h: &ExtendedComplex) -> EvaluatedMap {
    let e = phi.degree;
    let mul = |c: &[ExtendedComplex]| -> Vec<ExtendedComplex> {
        (0..=e + 1)
            .map(|i| {
                // (z - h w) * sum c_j z^j w^(e-j): z^i w^(e+1-i) gets c_{i-1} - h c_i
                let from_z = if i >= 1 { c[i - 1].clone() } else { ExtendedComplex::zero(phi.prec) };
                let from_w = if i <= e { h * &c[i] } else { ExtendedComplex::zero(phi.prec) };
                &from_z - &from_w
            })
            .collect()
    };
    EvaluatedMap { degree: e + 1, p: mul(&phi.p), q: mul(&phi.q), prec: phi.prec }
}

fn iterate(map: &EvaluatedMap, x: &ProjPoint, n: usize) -> Result<NormalizedPoint> {
    let mut cur = normalize(x);
    for _ in 0..n {
        let img = map.apply(&cur.point)?;
        cur = normalize(&img);
    }
    Ok(cur)
}

/// `|LHS - RHS|` of the iteration identity at `x`; fails when an orbit
/// reaches `(0, 0)` or `H` vanishes on `Phi^n x`.
pub fn iteration_identity_check(phi: &EvaluatedMap, h: &ExtendedComplex, n: usize, x: &ProjPoint) -> Result<ExtendedFloat> {
    let prec = phi.prec;
    let x = ProjPoint::new(x.z.round_to(prec), x.w.round_to(prec))?;
    let big = times_linear_form(phi, h);

    let q = iterate(&big, &x, n)?;
    let lhs = big.step_ratio(&q)?;

    let r = iterate(phi, &x, n)?;
    let h_val = &r.point.z - &(h * &r.point.w);
    if h_val.is_zero() {
        return Err(DegenError::Domain(format!("H vanishes on Phi^{n}(x): logarithmic singularity")));
    }
    let rhs = &h_val.log_abs() + &phi.step_ratio(&r)?;
    Ok((&lhs - &rhs).abs())
}
