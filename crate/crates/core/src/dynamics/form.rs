//! Homogeneous polynomial families `F_t = (P_t, Q_t)` on `C^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DegenError, Result};
use crate::geometry::{NormalizedPoint, ProjPoint};
use crate::numerics::linalg;
use crate::numerics::{log_max_norm, ExtendedComplex, ExtendedFloat, ParamPoly, TruncatedSeries};

/// Pair of degree-`d` homogeneous forms whose coefficients are polynomials in `t`.
/// `p[i]` and `q[i]` multiply the monomial `z^i w^(d-i)`.
#[derive(Clone, Debug)]
pub struct HomogeneousFamily {
    degree: usize,
    p: Vec<ParamPoly>,
    q: Vec<ParamPoly>,
}

/// A point of `C^2` whose coordinates are truncated series in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSeriesPoint {
    pub z: TruncatedSeries,
    pub w: TruncatedSeries,
}

/// A family member at a fixed `t`: coefficient vectors of both forms.
#[derive(Clone, Debug)]
pub struct EvaluatedMap {
    pub degree: usize,
    pub p: Vec<ExtendedComplex>,
    pub q: Vec<ExtendedComplex>,
    pub prec: u32,
}

/// Output of [`HomogeneousFamily::lemma22_constant`].
#[derive(Clone, Debug)]
pub struct SphereConstant {
    /// Rigorous upper bound for `log |F_t(x)| - d log |x|` over `|t| <= r`.
    pub c_plus: ExtendedFloat,
    /// Largest value seen on sampled sphere points, for comparison.
    pub empirical_max: ExtendedFloat,
}

impl HomogeneousFamily {
    pub fn new(degree: usize, p: Vec<ParamPoly>, q: Vec<ParamPoly>) -> Result<Self> {
        if degree < 1 || p.len() != degree + 1 || q.len() != degree + 1 {
            return Err(DegenError::Precondition(format!("a degree-{degree} homogeneous pair needs {} coefficients per coordinate", degree + 1)));
        }
        if p.iter().all(|c| c.is_zero()) || q.iter().all(|c| c.is_zero()) {
            return Err(DegenError::Precondition("a coordinate form is identically zero".into()));
        }
        Ok(HomogeneousFamily { degree, p, q })
    }

    /// Builds from sparse monomial lists `(i, coefficient of z^i w^(d-i))`.
    pub fn from_monomials(degree: usize, p: &[(usize, ParamPoly)], q: &[(usize, ParamPoly)], prec: u32) -> Result<Self> {
        let fill = |terms: &[(usize, ParamPoly)]| -> Result<Vec<ParamPoly>> {
            let mut v = vec![ParamPoly::zero(prec); degree + 1];
            for (i, c) in terms {
                if *i > degree {
                    return Err(DegenError::Precondition(format!("monomial z^{i} exceeds degree {degree}")));
                }
                v[*i] = v[*i].add(c);
            }
            Ok(v)
        };
        Self::new(degree, fill(p)?, fill(q)?)
    }

    /// Family with `t`-independent coefficients.
    pub fn constant(degree: usize, p: Vec<ExtendedComplex>, q: Vec<ExtendedComplex>) -> Result<Self> {
        Self::new(degree, p.into_iter().map(ParamPoly::constant).collect(), q.into_iter().map(ParamPoly::constant).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs_p(&self) -> &[ParamPoly] {
        &self.p
    }

    pub fn coeffs_q(&self) -> &[ParamPoly] {
        &self.q
    }

    pub fn at(&self, t: &ExtendedComplex, prec: u32) -> EvaluatedMap {
        let t = t.round_to(prec);
        let ev = |c: &ParamPoly| c.round_to(prec + 16).eval(&t).round_to(prec);
        EvaluatedMap { degree: self.degree, p: self.p.iter().map(ev).collect(), q: self.q.iter().map(ev).collect(), prec }
    }

    /// `F_t(x)`; fails when the image is `(0, 0)`.
    pub fn evaluate(&self, t: &ExtendedComplex, x: &ProjPoint, prec: u32) -> Result<ProjPoint> {
        self.at(t, prec).apply(x).map_err(|_| DegenError::IndeterminateImage { t: format!("{t}") })
    }

    pub fn resultant_at(&self, t: &ExtendedComplex, prec: u32) -> ExtendedComplex {
        self.at(t, prec).resultant()
    }

    /// Applies the family to a point whose coordinates are series in `t`.
    pub fn evaluate_series(&self, x: &ParamSeriesPoint) -> ParamSeriesPoint {
        let d = self.degree;
        let order = x.z.order().min(x.w.order());
        let z = x.z.truncate(order);
        let w = x.w.truncate(order);
        let prec = z.prec().max(w.prec());
        let mut zp = vec![TruncatedSeries::constant(ExtendedComplex::one(prec), order)];
        let mut wp = zp.clone();
        for k in 1..=d {
            zp.push(zp[k - 1].mul(&z));
            wp.push(wp[k - 1].mul(&w));
        }
        let form = |coeffs: &[ParamPoly]| {
            let mut acc = TruncatedSeries::zero(order, prec);
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&zp[i].mul(&wp[d - i]).mul_poly(c));
            }
            acc
        };
        ParamSeriesPoint { z: form(&self.p), w: form(&self.q) }
    }

    /// Rigorous `C_+` over `|t| <= r`: log of (largest monomial count) times
    /// (largest coefficient bound), plus a sampled maximum of the step ratio
    /// on the unit max-norm sphere.
    pub fn lemma22_constant(&self, r: &ExtendedFloat, samples: usize, prec: u32) -> SphereConstant {
        let count = |v: &[ParamPoly]| v.iter().filter(|c| !c.is_zero()).count();
        let monomials = count(&self.p).max(count(&self.q)) as i64;
        let mut coeff_max = ExtendedFloat::zero(prec);
        for c in self.p.iter().chain(&self.q) {
            let b = c.abs_bound(r);
            if b > coeff_max {
                coeff_max = b;
            }
        }
        let c_plus = coeff_max.mul_i64(monomials).round_to(prec).ln();

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0022);
        let mut empirical = None::<ExtendedFloat>;
        let rf = r.to_f64();
        for _ in 0..samples {
            let rad = rf * rng.random::<f64>().sqrt();
            let t =
                ExtendedComplex::from_polar(&ExtendedFloat::from_f64(prec, rad), &ExtendedFloat::from_f64(prec, rng.random_range(0.0..std::f64::consts::TAU)));
            let x = random_sphere_point(&mut rng, prec);
            if let Ok(img) = self.at(&t, prec).apply(&x) {
                let s = img.log_max_norm();
                if empirical.as_ref().is_none_or(|e| s > *e) {
                    empirical = Some(s);
                }
            }
        }
        SphereConstant { c_plus, empirical_max: empirical.unwrap_or_else(|| ExtendedFloat::zero(prec)) }
    }
}

/// Point of the max-norm unit sphere with one coordinate of modulus one.
pub fn random_sphere_point(rng: &mut ChaCha8Rng, prec: u32) -> ProjPoint {
    let big = ExtendedComplex::from_polar(&ExtendedFloat::one(prec), &ExtendedFloat::from_f64(prec, rng.random_range(0.0..std::f64::consts::TAU)));
    let small = ExtendedComplex::from_polar(
        &ExtendedFloat::from_f64(prec, rng.random::<f64>()),
        &ExtendedFloat::from_f64(prec, rng.random_range(0.0..std::f64::consts::TAU)),
    );
    if rng.random::<bool>() {
        ProjPoint { z: big, w: small }
    } else {
        ProjPoint { z: small, w: big }
    }
}

fn eval_form(coeffs: &[ExtendedComplex], z: &ExtendedComplex, w: &ExtendedComplex) -> ExtendedComplex {
    // homogeneous Horner: (((c_d z + c_{d-1} w) z + c_{d-2} w^2) ...)
    let d = coeffs.len() - 1;
    let mut acc = coeffs[d].clone();
    let mut wpow = ExtendedComplex::one(z.prec());
    for i in (0..d).rev() {
        wpow = &wpow * w;
        acc = &(&acc * z) + &(&coeffs[i] * &wpow);
    }
    acc
}

impl EvaluatedMap {
    pub fn apply(&self, x: &ProjPoint) -> Result<ProjPoint> {
        let z = eval_form(&self.p, &x.z, &x.w);
        let w = eval_form(&self.q, &x.z, &x.w);
        ProjPoint::new(z, w).map_err(|_| DegenError::IndeterminateImage { t: "this parameter".into() })
    }

    /// `log |F(x)|_max` for a max-norm-one `x`.
    pub fn step_ratio(&self, x: &NormalizedPoint) -> Result<ExtendedFloat> {
        let img = self.apply(&x.point)?;
        Ok(log_max_norm(&img.z, &img.w).expect("nonzero image"))
    }

    fn sylvester(&self) -> Vec<Vec<ExtendedComplex>> {
        let d = self.degree;
        let n = 2 * d;
        let mut m = vec![vec![ExtendedComplex::zero(self.prec); n]; n];
        for r in 0..d {
            for i in 0..=d {
                m[r][r + d - i] = self.p[i].clone();
                m[d + r][r + d - i] = self.q[i].clone();
            }
        }
        m
    }

    /// Homogeneous resultant: determinant of the `2d x 2d` Sylvester matrix.
    pub fn resultant(&self) -> ExtendedComplex {
        linalg::determinant(self.sylvester())
    }

    /// Hadamard bound on `|resultant|`: product of the Sylvester row norms.
    pub fn hadamard_bound(&self) -> ExtendedFloat {
        let mut acc = ExtendedFloat::one(self.prec);
        for row in self.sylvester() {
            let mut s = ExtendedFloat::zero(self.prec);
            for c in &row {
                s = &s + &c.norm_sqr();
            }
            acc = &acc * &s.sqrt();
        }
        acc
    }

    /// Refuses parameters with `|Res| < 2^(-p/2) * hadamard_bound`.
    pub fn check_nondegenerate(&self, t: &ExtendedComplex) -> Result<()> {
        let res = self.resultant();
        let threshold = self.hadamard_bound().mul_2exp(-(self.prec as i64) / 2);
        if res.abs() < threshold {
            return Err(DegenError::Degenerate { t: format!("{t}"), resultant: res.abs().to_decimal(6) });
        }
        Ok(())
    }

    /// Upper bound for `log |F(x)|_max` on the unit max-norm sphere.
    pub fn c_plus(&self) -> ExtendedFloat {
        let count = |v: &[ExtendedComplex]| v.iter().filter(|c| !c.is_zero()).count().max(1) as i64;
        let monomials = count(&self.p).max(count(&self.q));
        let mut m = ExtendedFloat::zero(self.prec);
        for c in self.p.iter().chain(&self.q) {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m.mul_i64(monomials).ln()
    }

    /// Lower bound for `log |F(x)|_max` on the unit max-norm sphere, from
    /// cofactors `U P + V Q = z^(2d-1)` and `= w^(2d-1)` solved on the
    /// transposed Sylvester system; `None` if the system is singular.
    pub fn log_min_sphere(&self) -> Option<ExtendedFloat> {
        let n = 2 * self.degree;
        let s = self.sylvester();
        let st: Vec<Vec<ExtendedComplex>> = (0..n).map(|i| (0..n).map(|j| s[j][i].clone()).collect()).collect();
        let mut worst = ExtendedFloat::zero(self.prec);
        for target in [0, n - 1] {
            let mut e = vec![ExtendedComplex::zero(self.prec); n];
            e[target] = ExtendedComplex::one(self.prec);
            let x = linalg::solve(st.clone(), e)?;
            let mut l1 = ExtendedFloat::zero(self.prec);
            for c in &x {
                l1 = &l1 + &c.abs();
            }
            if l1 > worst {
                worst = l1;
            }
        }
        if worst.is_zero() {
            return None;
        }
        Some(-worst.ln())
    }

    /// Smallest sampled `log |F(x)|_max` over `m` sphere points.
    pub fn empirical_log_min_sphere(&self, m: usize, seed: u64) -> ExtendedFloat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<ExtendedFloat> = None;
        for _ in 0..m.max(1) {
            let x = random_sphere_point(&mut rng, self.prec);
            if let Ok(img) = self.apply(&x) {
                let s = img.log_max_norm();
                if best.as_ref().is_none_or(|b| s < *b) {
                    best = Some(s);
                }
            }
        }
        best.unwrap_or_else(|| ExtendedFloat::zero(self.prec))
    }
}
