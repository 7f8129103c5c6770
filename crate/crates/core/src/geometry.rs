//! Points of the projective line, the chordal metric and max-norm normalization.

use crate::error::{DegenError, Result};
use crate::numerics::{log_max_norm, ExtendedComplex, ExtendedFloat};

/// A nonzero vector `(z, w)` in `C^2` standing for the point `[z : w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint {
    pub z: ExtendedComplex,
    pub w: ExtendedComplex,
}

/// A lift of max-norm one together with the log of the removed scale.
#[derive(Clone, Debug)]
pub struct NormalizedPoint {
    pub point: ProjPoint,
    pub log_scale: ExtendedFloat,
}

/// A point of the Riemann sphere in the affine chart.
#[derive(Clone, Debug, PartialEq)]
pub enum AffinePoint {
    Finite(ExtendedComplex),
    Infinity,
}

impl ProjPoint {
    pub fn new(z: ExtendedComplex, w: ExtendedComplex) -> Result<Self> {
        if z.is_zero() && w.is_zero() {
            return Err(DegenError::Domain("(0, 0) is not a point of the projective line".into()));
        }
        Ok(ProjPoint { z, w })
    }

    pub fn from_f64(prec: u32, z: (f64, f64), w: (f64, f64)) -> Result<Self> {
        Self::new(ExtendedComplex::from_f64(prec, z.0, z.1), ExtendedComplex::from_f64(prec, w.0, w.1))
    }

    pub fn prec(&self) -> u32 {
        self.z.prec().max(self.w.prec())
    }

    pub fn scale(&self, lambda: &ExtendedComplex) -> Result<Self> {
        Self::new(&self.z * lambda, &self.w * lambda)
    }

    pub fn log_max_norm(&self) -> ExtendedFloat {
        log_max_norm(&self.z, &self.w).expect("ProjPoint is nonzero")
    }

    /// Squared Euclidean norm of the lift.
    pub fn norm2_sqr(&self) -> ExtendedFloat {
        &self.z.norm_sqr() + &self.w.norm_sqr()
    }
}

/// Chordal distance `|z1 w2 - z2 w1| / (|p|_2 |q|_2)`, a value in `[0, 1]`.
pub fn chordal(p: &ProjPoint, q: &ProjPoint) -> ExtendedFloat {
    let prec = p.prec().max(q.prec());
    let w = prec + 8;
    let cross = &(&p.z * &q.w).round_to(w) - &(&p.w * &q.z).round_to(w);
    let denom = p.norm2_sqr().mul_prec(&q.norm2_sqr(), w).sqrt();
    let d = cross.abs().div_prec(&denom, prec);
    let one = ExtendedFloat::one(prec);
    if d > one {
        one
    } else {
        d
    }
}

/// Rescales by `1 / max(|z|, |w|)`.
pub fn normalize(p: &ProjPoint) -> NormalizedPoint {
    let prec = p.prec();
    let (az, aw) = (p.z.norm_sqr(), p.w.norm_sqr());
    let (big, big_sqr) = if az >= aw { (&p.z, az) } else { (&p.w, aw) };
    let m = big_sqr.round_to(prec + 8).sqrt();
    let inv = ExtendedFloat::one(prec + 8).div_prec(&m, prec + 8);
    let log_scale = big.log_abs();
    let mut point = ProjPoint { z: p.z.scale(&inv).round_to(prec), w: p.w.scale(&inv).round_to(prec) };
    // A coordinate below 2^(-2p-64) of the other cannot move any image above
    // rounding level for a map that passes the degeneracy test; flushing it
    // keeps exponents of orbits like (1, 4^(-2^k)) from overflowing.
    let floor = -2 * prec as i64 - 64;
    for c in [&mut point.z, &mut point.w] {
        let e = c.re.exponent().into_iter().chain(c.im.exponent()).max();
        if e.is_some_and(|e| e < floor) {
            *c = ExtendedComplex::zero(prec);
        }
    }
    NormalizedPoint { point, log_scale }
}

pub fn affine_embed(a: &AffinePoint, prec: u32) -> ProjPoint {
    match a {
        AffinePoint::Finite(z) => ProjPoint { z: z.clone(), w: ExtendedComplex::one(prec) },
        AffinePoint::Infinity => ProjPoint { z: ExtendedComplex::one(prec), w: ExtendedComplex::zero(prec) },
    }
}

pub fn affine_chart(p: &ProjPoint) -> AffinePoint {
    if p.w.is_zero() {
        AffinePoint::Infinity
    } else {
        AffinePoint::Finite(&p.z / &p.w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn pt(z: (f64, f64), w: (f64, f64)) -> ProjPoint {
        ProjPoint::from_f64(P, z, w).unwrap()
    }

    fn ulps(k: i64) -> ExtendedFloat {
        ExtendedFloat::from_i64(P, k).mul_2exp(-(P as i64))
    }

    #[test]
    fn chordal_examples() {
        let zero = pt((0.0, 0.0), (1.0, 0.0));
        let inf = pt((1.0, 0.0), (0.0, 0.0));
        assert_eq!(chordal(&zero, &inf).to_f64(), 1.0);
        let q = pt((0.3, -0.7), (1.1, 0.2));
        assert!(chordal(&q, &q).is_zero());
        let one = pt((1.0, 0.0), (1.0, 0.0));
        let minus = pt((-1.0, 0.0), (1.0, 0.0));
        assert!((&chordal(&one, &minus) - &ExtendedFloat::one(P)).abs() <= ulps(4));
        assert!(ProjPoint::from_f64(P, (0.0, 0.0), (0.0, 0.0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&pt((2.0, 0.0), (1.0, 0.0)));
        assert_eq!(n.point, pt((1.0, 0.0), (0.5, 0.0)));
        assert!((&n.log_scale - &ExtendedFloat::ln2(P)).abs() <= ulps(4));

        let tiny = ExtendedFloat::from_i64(P, -10_000).exp();
        let p = ProjPoint::new(ExtendedComplex::zero(P), ExtendedComplex::from_real(tiny)).unwrap();
        let n = normalize(&p);
        assert!((&n.point.w.re - &ExtendedFloat::one(P)).abs() <= ulps(4));
        assert!((&n.log_scale + &ExtendedFloat::from_i64(P, 10_000)).abs().to_f64() < 1e-30);

        let again = normalize(&n.point);
        assert!(again.log_scale.abs() <= ulps(4));
        assert!(chordal(&again.point, &n.point) <= ulps(8));
    }

    #[test]
    fn affine_round_trips() {
        let five = AffinePoint::Finite(ExtendedComplex::from_i64(P, 5));
        let e = affine_embed(&five, P);
        assert_eq!(e, pt((5.0, 0.0), (1.0, 0.0)));
        assert_eq!(affine_chart(&e), five);
        assert_eq!(affine_chart(&affine_embed(&AffinePoint::Infinity, P)), AffinePoint::Infinity);
        assert_eq!(affine_chart(&pt((6.0, 0.0), (2.0, 0.0))), AffinePoint::Finite(ExtendedComplex::from_i64(P, 3)));
    }

    fn arb_point() -> impl Strategy<Value = ProjPoint> {
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
            .prop_filter("nonzero", |(a, b, c, d)| a.abs() + b.abs() + c.abs() + d.abs() > 1e-3)
            .prop_map(|(a, b, c, d)| pt((a, b), (c, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn chordal_is_a_metric(p in arb_point(), q in arb_point(), r in arb_point()) {
            let (pq, qp) = (chordal(&p, &q), chordal(&q, &p));
            prop_assert!((&pq - &qp).abs() <= ulps(8));
            let pr = chordal(&p, &r);
            let rq = chordal(&r, &q);
            prop_assert!(pq <= &(&pr + &rq) + &ulps(8));
            prop_assert!(pq <= ExtendedFloat::one(P) && !pq.is_sign_negative());
        }

        #[test]
        fn chordal_ignores_lift_scaling(p in arb_point(), q in arb_point(), lr in -20.0f64..20.0, la in 0.0f64..6.3) {
            let lam = ExtendedComplex::from_polar(&ExtendedFloat::from_f64(P, lr).exp(), &ExtendedFloat::from_f64(P, la));
            let scaled = p.scale(&lam).unwrap();
            let d = (&chordal(&scaled, &q) - &chordal(&p, &q)).abs();
            prop_assert!(d <= ulps(8));
        }
    }
}
