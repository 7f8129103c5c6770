use degen_core::geometry::{affine_chart, affine_embed, chordal, normalize, ProjPoint};
use degen_core::numerics::{log_max_norm, ExtendedComplex, ExtendedFloat, TruncatedSeries};
use proptest::prelude::*;
use rug::Float;

const P: u32 = 192;

fn ulps(k: f64) -> f64 {
    k * 2f64.powi(-(P as i32))
}

fn c(re: f64, im: f64) -> ExtendedComplex {
    ExtendedComplex::from_f64(P, re, im)
}

fn point(z: (f64, f64), w: (f64, f64)) -> ProjPoint {
    ProjPoint::from_f64(P, z, w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ln_agrees_with_mpfr(m in 0.5f64..1.0, e in -1_000_000i64..1_000_000) {
        let x = ExtendedFloat::from_f64(P, m).mul_2exp(e);
        let oracle = Float::with_val(P, m).ln() + Float::with_val(P, e) * Float::with_val(P, rug::float::Constant::Log2);
        let got = x.ln().to_float(P);
        let err = Float::with_val(P, &got - &oracle).abs().to_f64();
        prop_assert!(err <= oracle.to_f64().abs().max(1.0) * ulps(8.0));
    }

    #[test]
    fn series_mul_distributes(a in prop::collection::vec(-2.0f64..2.0, 5), b in prop::collection::vec(-2.0f64..2.0, 5), k in prop::collection::vec(-2.0f64..2.0, 5)) {
        let s = |v: &[f64]| TruncatedSeries::new(v.iter().map(|&x| c(x, 0.5 * x)).collect(), 4, P);
        let (a, b, k) = (s(&a), s(&b), s(&k));
        let lhs = k.mul(&a.add(&b));
        let rhs = k.mul(&a).add(&k.mul(&b));
        prop_assert!(lhs.sub(&rhs).max_coeff().to_f64() <= ulps(64.0) * 64.0);
    }

    #[test]
    fn log_max_norm_of_scaled_vectors(lr in -1000.0f64..1000.0, la in 0.0f64..6.3, a in -3.0f64..3.0, b in 0.1f64..3.0) {
        let lam = ExtendedComplex::from_polar(&ExtendedFloat::from_f64(P, lr).exp(), &ExtendedFloat::from_f64(P, la));
        let (v1, v2) = (c(a, b), c(b, -a));
        let base = log_max_norm(&v1, &v2).unwrap();
        let scaled = log_max_norm(&(&lam * &v1), &(&lam * &v2)).unwrap();
        let res = (&(&scaled - &base) - &lam.log_abs()).abs().to_f64();
        prop_assert!(res <= ulps(8.0) * lr.abs().max(1.0) * 4.0);
    }

    #[test]
    fn chordal_matches_the_affine_formula(z in (-5.0f64..5.0, -5.0f64..5.0), u in (-5.0f64..5.0, -5.0f64..5.0)) {
        // [z, u] = |z - u| / sqrt((1 + |z|^2)(1 + |u|^2)) for finite points
        let d = chordal(&point(z, (1.0, 0.0)), &point(u, (1.0, 0.0))).to_f64();
        let (zr, zi, ur, ui) = (z.0, z.1, u.0, u.1);
        let oracle = ((zr - ur).hypot(zi - ui)) / ((1.0 + zr * zr + zi * zi) * (1.0 + ur * ur + ui * ui)).sqrt();
        prop_assert!((d - oracle).abs() <= 1e-14);
    }

    #[test]
    fn chordal_is_bounded_and_separates(z in (-5.0f64..5.0, -5.0f64..5.0), w in (-5.0f64..5.0, -5.0f64..5.0)) {
        let p = point(z, w);
        prop_assert!(chordal(&p, &p).to_f64() <= ulps(8.0));
        prop_assert!(chordal(&p, &point((1.0, 0.0), (0.0, 0.0))).to_f64() <= 1.0 + ulps(8.0));
    }

    #[test]
    fn normalization_recovers_the_lift(z in (-5.0f64..5.0, -5.0f64..5.0), w in (-5.0f64..5.0, -5.0f64..5.0), e in -5000i64..5000) {
        let p = point(z, w).scale(&ExtendedComplex::one(P).mul_2exp(e)).unwrap();
        let n = normalize(&p);
        prop_assert!((&n.log_scale - &p.log_max_norm()).abs().to_f64() <= ulps(8.0) * (e.unsigned_abs() as f64 + 1.0));
        prop_assert!((n.point.log_max_norm().to_f64()).abs() <= ulps(8.0));
        prop_assert!(chordal(&n.point, &p).to_f64() <= ulps(16.0));
    }

    #[test]
    fn affine_chart_round_trips(z in (-5.0f64..5.0, -5.0f64..5.0), w in (0.1f64..5.0, -5.0f64..5.0)) {
        let p = point(z, w);
        let q = affine_embed(&affine_chart(&p), P);
        prop_assert!(chordal(&p, &q).to_f64() <= ulps(16.0));
    }
}
