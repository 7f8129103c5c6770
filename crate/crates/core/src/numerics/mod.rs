//! Scalars, parameter polynomials, truncated series and root finding.

pub mod complex;
pub mod float;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod series;

pub use complex::ExtendedComplex;
pub use float::ExtendedFloat;
pub use poly::ParamPoly;
pub use series::{TruncatedSeries, Valuation};

use crate::error::{DegenError, Result};

/// `log max(|v1|, |v2|)`.
pub fn log_max_norm(v1: &ExtendedComplex, v2: &ExtendedComplex) -> Result<ExtendedFloat> {
    if v1.is_zero() && v2.is_zero() {
        return Err(DegenError::Domain("log_max_norm of the zero vector".into()));
    }
    let (a, b) = (v1.norm_sqr(), v2.norm_sqr());
    if a >= b {
        Ok(v1.log_abs())
    } else {
        Ok(v2.log_abs())
    }
}

/// Default zero tolerance `2^(-p/2)` for valuations and exact-hit detection.
pub fn half_precision_tol(prec: u32) -> ExtendedFloat {
    ExtendedFloat::one(prec).mul_2exp(-(prec as i64) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_max_norm_examples() {
        let p = 128;
        let one = ExtendedComplex::one(p);
        assert!(log_max_norm(&one, &one).unwrap().is_zero());
        let e2 = ExtendedComplex::from_real(ExtendedFloat::from_i64(p, 2).exp());
        let l = log_max_norm(&e2, &one).unwrap();
        assert!((l.to_f64() - 2.0).abs() < 1e-30);
        let tiny = ExtendedComplex::from_real(ExtendedFloat::from_i64(p, -100_000).exp());
        let l = log_max_norm(&tiny, &tiny).unwrap();
        assert!((&l + &ExtendedFloat::from_i64(p, 100_000)).abs().to_f64() < 1e-20);
        assert!(log_max_norm(&ExtendedComplex::zero(p), &ExtendedComplex::zero(p)).is_err());
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(x in -1.0e6f64..1.0e6) {
            let p = 128;
            let v = ExtendedFloat::from_f64(p, x).exp();
            let back = v.ln().exp();
            let rel = ((&back - &v) / &v).abs();
            // 8 ulp, widened by the condition number |ln v| of exp at ln v
            let tol = ExtendedFloat::from_f64(p, 8.0 * (1.0 + x.abs())).mul_2exp(-(p as i64));
            prop_assert!(rel <= tol, "x = {x}: {rel}");
        }

        #[test]
        fn log_max_norm_scales(lr in -50.0f64..50.0, la in 0.0f64..6.3, a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let p = 160;
            let lam = ExtendedComplex::from_polar(&ExtendedFloat::from_f64(p, lr).exp(), &ExtendedFloat::from_f64(p, la));
            let v1 = ExtendedComplex::from_f64(p, a, b);
            let v2 = ExtendedComplex::from_f64(p, b, 0.5);
            let lhs = log_max_norm(&(&lam * &v1), &(&lam * &v2)).unwrap();
            let rhs = &lam.log_abs() + &log_max_norm(&v1, &v2).unwrap();
            let err = (&lhs - &rhs).abs();
            prop_assert!(err <= ExtendedFloat::one(p).mul_2exp(-(p as i64) + 3 + 6));
        }
    }
}
