//! Builders for the degenerating families `f~_t = (P (z - (h + eps t^m) w), Q (z - (h - eps t^m) w))`
//! and their marked sections.

use crate::dynamics::{ConstantSection, HomogeneousFamily, ParamSeriesPoint, Section};
use crate::error::{DegenError, Result};
use crate::geometry::ProjPoint;
use crate::numerics::roots::roots_extended;
use crate::numerics::{half_precision_tol, ExtendedComplex, ExtendedFloat, ParamPoly, TruncatedSeries};

use super::cf::ContinuedFraction;

/// A rational map `phi = num / den` in `z` with a perturbation centre `h`.
#[derive(Clone, Debug)]
pub struct PerturbationSpec {
    pub phi_num: ParamPoly,
    pub phi_den: ParamPoly,
    pub h: ExtendedComplex,
    pub epsilon: ExtendedFloat,
    pub t_exponent: u32,
}

impl PerturbationSpec {
    pub fn prec(&self) -> u32 {
        self.phi_num.prec().max(self.phi_den.prec()).max(self.h.prec())
    }

    /// Degree `e` of `phi` as a homogeneous pair.
    pub fn phi_degree(&self) -> usize {
        self.phi_num.degree().max(self.phi_den.degree())
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_zero() || self.epsilon.is_sign_negative() {
            return Err(DegenError::Precondition("epsilon must be positive".into()));
        }
        if !(1..=2).contains(&self.t_exponent) {
            return Err(DegenError::Precondition("t exponent must be 1 or 2".into()));
        }
        if self.phi_num.is_zero() || self.phi_den.is_zero() {
            return Err(DegenError::Precondition("phi needs nonzero numerator and denominator".into()));
        }
        if self.phi_degree() < 1 {
            return Err(DegenError::Precondition("phi must be nonconstant".into()));
        }
        let prec = self.prec();
        let tol = half_precision_tol(prec);
        let zeros = roots_extended(&self.phi_num)?;
        let poles = roots_extended(&self.phi_den)?;
        for a in &zeros {
            for b in &poles {
                let scale = ExtendedFloat::one(prec).max_ref(&a.abs()).clone();
                if (a - b).abs() <= &tol * &scale {
                    return Err(DegenError::Precondition("numerator and denominator share a root".into()));
                }
            }
        }
        let reach = &self.epsilon - &(&self.epsilon * &tol);
        for r in zeros.iter().chain(&poles) {
            let dist = (r - &self.h).abs();
            if dist > tol && dist < reach {
                return Err(DegenError::Precondition(format!(
                    "phi has a zero or pole at distance {} from h, inside the punctured epsilon-disk",
                    dist.to_decimal(6)
                )));
            }
        }
        Ok(())
    }

    /// The degree `e + 1` family, validated first.
    pub fn family(&self) -> Result<HomogeneousFamily> {
        self.validate()?;
        let prec = self.prec();
        let e = self.phi_degree();
        let pad =
            |f: &ParamPoly| -> Vec<ExtendedComplex> { (0..=e).map(|i| f.coeffs().get(i).cloned().unwrap_or_else(|| ExtendedComplex::zero(prec))).collect() };
        let shift = ParamPoly::monomial(ExtendedComplex::from_real(self.epsilon.round_to(prec)), self.t_exponent as usize);
        let centre = ParamPoly::constant(self.h.round_to(prec));
        // w-coefficients of z - (h +- eps t^m) w
        let plus = centre.add(&shift).neg();
        let minus = centre.sub(&shift).neg();
        let times = |c: &[ExtendedComplex], lin: &ParamPoly| -> Vec<ParamPoly> {
            (0..=e + 1)
                .map(|i| {
                    let from_z = if i >= 1 { ParamPoly::constant(c[i - 1].clone()) } else { ParamPoly::zero(prec) };
                    let from_w = if i <= e { lin.scale(&c[i]) } else { ParamPoly::zero(prec) };
                    from_z.add(&from_w)
                })
                .collect()
        };
        HomogeneousFamily::new(e + 1, times(&pad(&self.phi_num), &plus), times(&pad(&self.phi_den), &minus))
    }
}

/// Perturbation of the rotation `z -> e^{2 pi i theta} z`, marked at `(1, 1)`.
#[derive(Clone, Debug)]
pub struct RotationFamily {
    pub family: HomogeneousFamily,
    pub section: ConstantSection,
    pub lambda: ExtendedComplex,
    pub theta: ContinuedFraction,
}

pub fn build_rotation_family(theta: &ContinuedFraction, h: &ExtendedComplex, epsilon: &ExtendedFloat, t_exponent: u32, prec: u32) -> Result<RotationFamily> {
    let modulus = h.abs();
    let slack = ExtendedFloat::from_i64(prec, 8).mul_2exp(-(prec as i64));
    if (&modulus - &ExtendedFloat::one(prec)).abs() > slack {
        return Err(DegenError::Precondition("h must lie on the unit circle".into()));
    }
    let lambda = theta.lambda(prec);
    let spec = PerturbationSpec {
        phi_num: ParamPoly::new(vec![ExtendedComplex::zero(prec), lambda.clone()], prec),
        phi_den: ParamPoly::constant(ExtendedComplex::one(prec)),
        h: h.round_to(prec),
        epsilon: epsilon.round_to(prec),
        t_exponent,
    };
    let family = spec.family()?;
    let section = ConstantSection::new(ExtendedComplex::one(prec), ExtendedComplex::one(prec));
    Ok(RotationFamily { family, section, lambda, theta: theta.clone() })
}

/// `phi(z) = lambda (z - a0)^(d-1)`: fixed point of multiplier `lambda`,
/// unique finite critical point `a0`, critical value `0`.
#[derive(Clone, Debug)]
pub struct UnicriticalMap {
    pub d: usize,
    pub lambda: ExtendedComplex,
    pub a0: ExtendedComplex,
    pub phi: ParamPoly,
    pub fixed_point: ExtendedComplex,
    pub multiplier_error: ExtendedFloat,
    prec: u32,
}

pub fn build_unicritical_family(d: usize, theta: &ContinuedFraction, prec: u32) -> Result<UnicriticalMap> {
    if d < 3 {
        return Err(DegenError::Precondition("the unicritical builder needs d > 2".into()));
    }
    let w = prec + 32;
    let lambda = theta.lambda(w);
    let dm1 = (d - 1) as i64;
    let expo = ExtendedFloat::from_ratio(w, dm1, d as i64 - 2);
    let denom = (&expo * &ExtendedFloat::from_i64(w, dm1).ln()).exp();
    let a0 = (&lambda - &ExtendedComplex::from_i64(w, dm1)).scale(&ExtendedFloat::one(w).div_prec(&denom, w));
    let lin = ParamPoly::new(vec![-&a0, ExtendedComplex::one(w)], w);
    let mut phi = ParamPoly::constant(lambda.clone());
    for _ in 0..d - 1 {
        phi = phi.mul(&lin);
    }
    let phi = phi.round_to(prec);
    let a0 = a0.round_to(prec);
    let lambda = lambda.round_to(prec);

    let shifted = phi.sub(&ParamPoly::monomial(ExtendedComplex::one(prec), 1));
    let dphi = phi.derivative();
    let mut best: Option<(ExtendedFloat, ExtendedComplex)> = None;
    for z in roots_extended(&shifted)? {
        let err = (&dphi.eval(&z) - &lambda).abs();
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, z));
        }
    }
    let (multiplier_error, fixed_point) = best.expect("phi(z) - z has degree d - 1 >= 2");
    if multiplier_error.to_f64() > 1e-12 {
        return Err(DegenError::Precondition(format!("no fixed point with the requested multiplier (error {})", multiplier_error.to_decimal(4))));
    }
    Ok(UnicriticalMap { d, lambda, a0, phi, fixed_point, multiplier_error, prec })
}

impl UnicriticalMap {
    /// Perturbation at a caller-supplied `h`; requires `eps <= |a0 - h|` unless `h = a0`.
    pub fn family(&self, h: &ExtendedComplex, epsilon: &ExtendedFloat) -> Result<(HomogeneousFamily, ConstantSection)> {
        let spec = PerturbationSpec {
            phi_num: self.phi.clone(),
            phi_den: ParamPoly::constant(ExtendedComplex::one(self.prec)),
            h: h.round_to(self.prec),
            epsilon: epsilon.round_to(self.prec),
            t_exponent: 1,
        };
        let fam = spec.family()?;
        Ok((fam, ConstantSection::new(self.a0.clone(), ExtendedComplex::one(self.prec))))
    }
}

/// The quadratic family `(lambda z (z - (1 + t^2) w), (z - (1 - t^2) w) w)`
/// whose critical points both tend to `1`.
#[derive(Clone, Debug)]
pub struct QuadraticCriticalFamily {
    pub family: HomogeneousFamily,
    pub lambda: ExtendedComplex,
    pub theta: ContinuedFraction,
    prec: u32,
}

/// Critical point `c_{+-}(t) = 1 - t^2 +- i sqrt(2) t sqrt(1 - t^2)`.
#[derive(Clone, Debug)]
pub struct CriticalPointSection {
    pub sign: i8,
}

/// Critical value `v_{+-}(t) = lambda c (1 +- i sqrt(2) t / sqrt(1 - t^2))`.
#[derive(Clone, Debug)]
pub struct CriticalValueSection {
    pub sign: i8,
    lambda: ExtendedComplex,
    theta: ContinuedFraction,
    family: HomogeneousFamily,
}

fn sigma(t: &ExtendedComplex, prec: u32) -> ExtendedComplex {
    (&ExtendedComplex::one(prec) - &t.square()).sqrt()
}

fn i_sqrt2(sign: i8, prec: u32) -> ExtendedComplex {
    let s = ExtendedFloat::from_i64(prec, 2).sqrt();
    ExtendedComplex::new(ExtendedFloat::zero(prec), if sign >= 0 { s } else { -s })
}

fn critical_point_at(sign: i8, t: &ExtendedComplex, prec: u32) -> ExtendedComplex {
    let t = t.round_to(prec);
    let one = ExtendedComplex::one(prec);
    &(&one - &t.square()) + &(&(&i_sqrt2(sign, prec) * &t) * &sigma(&t, prec))
}

fn critical_point_series(sign: i8, order: usize, prec: u32) -> TruncatedSeries {
    let one = ExtendedComplex::one(prec);
    let t = TruncatedSeries::t(order, prec);
    let base = TruncatedSeries::constant(one, order).sub(&t.mul(&t));
    base.add(&t.mul(&base.sqrt()).scale(&i_sqrt2(sign, prec)))
}

impl Section for CriticalPointSection {
    fn name(&self) -> String {
        format!("c{}", if self.sign >= 0 { '+' } else { '-' })
    }

    fn lift(&self, t: &ExtendedComplex, prec: u32) -> Result<ProjPoint> {
        ProjPoint::new(critical_point_at(self.sign, t, prec), ExtendedComplex::one(prec))
    }

    fn series(&self, order: usize, prec: u32) -> Result<ParamSeriesPoint> {
        Ok(ParamSeriesPoint { z: critical_point_series(self.sign, order, prec), w: TruncatedSeries::constant(ExtendedComplex::one(prec), order) })
    }
}

impl CriticalValueSection {
    fn lambda_at(&self, prec: u32) -> ExtendedComplex {
        if prec <= self.lambda.prec() {
            self.lambda.round_to(prec)
        } else {
            self.theta.lambda(prec)
        }
    }
}

impl Section for CriticalValueSection {
    fn name(&self) -> String {
        format!("v{}", if self.sign >= 0 { '+' } else { '-' })
    }

    fn lift(&self, t: &ExtendedComplex, prec: u32) -> Result<ProjPoint> {
        let t = t.round_to(prec);
        let c = critical_point_at(self.sign, &t, prec);
        let ratio = &(&i_sqrt2(self.sign, prec) * &t) / &sigma(&t, prec);
        let v = &(&self.lambda_at(prec) * &c) * &(&ExtendedComplex::one(prec) + &ratio);
        ProjPoint::new(v, ExtendedComplex::one(prec))
    }

    /// `f_t(c(t))` by pushing the critical point series through the family:
    /// both image coordinates vanish to first order, so one power of `t` is
    /// divided out before forming the quotient.
    fn series(&self, order: usize, prec: u32) -> Result<ParamSeriesPoint> {
        let c = ParamSeriesPoint { z: critical_point_series(self.sign, order + 1, prec), w: TruncatedSeries::constant(ExtendedComplex::one(prec), order + 1) };
        let img = self.family.evaluate_series(&c);
        let tol = half_precision_tol(prec);
        if img.w.coeff(0).abs() > tol {
            return Err(DegenError::Domain("critical point image has unexpected valuation".into()));
        }
        let (p, q) = (img.z.shift_down(1), img.w.shift_down(1));
        let v = p.mul(&q.inv());
        Ok(ParamSeriesPoint { z: v, w: TruncatedSeries::constant(ExtendedComplex::one(prec), order) })
    }
}

pub fn build_quadratic_critical_family(theta0: &ContinuedFraction, prec: u32) -> Result<QuadraticCriticalFamily> {
    let lambda = theta0.lambda(prec);
    let c = |x: f64| ExtendedComplex::from_f64(prec, x, 0.0);
    let p = |coeffs: &[f64]| ParamPoly::from_f64(prec, coeffs);
    // z^i w^(2-i) coefficients, polynomials in t
    let family = HomogeneousFamily::from_monomials(
        2,
        &[(2, ParamPoly::constant(lambda.clone())), (1, p(&[-1.0, 0.0, -1.0]).scale(&lambda))],
        &[(1, ParamPoly::constant(c(1.0))), (0, p(&[-1.0, 0.0, 1.0]))],
        prec,
    )?;
    Ok(QuadraticCriticalFamily { family, lambda, theta: theta0.clone(), prec })
}

impl QuadraticCriticalFamily {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn critical_point(&self, sign: i8) -> CriticalPointSection {
        CriticalPointSection { sign }
    }

    pub fn critical_value(&self, sign: i8) -> CriticalValueSection {
        CriticalValueSection { sign, lambda: self.lambda.clone(), theta: self.theta.clone(), family: self.family.clone() }
    }

    /// The marked section used for potentials: the critical value `v_+`.
    pub fn marked(&self) -> CriticalValueSection {
        self.critical_value(1)
    }

    pub fn critical_point_at(&self, sign: i8, t: &ExtendedComplex, prec: u32) -> ExtendedComplex {
        critical_point_at(sign, t, prec)
    }

    /// `|f_t'(c)|` from the quotient rule on `lambda z (z - 1 - t^2) / (z - 1 + t^2)`.
    pub fn derivative_at(&self, t: &ExtendedComplex, z: &ExtendedComplex, prec: u32) -> ExtendedComplex {
        let t2 = t.round_to(prec).square();
        let one = ExtendedComplex::one(prec);
        let a = &one + &t2;
        let b = &one - &t2;
        let zb = z - &b;
        let num = &(&(&z.mul_2exp(1) - &a) * &zb) - &(z * &(z - &a));
        &(&self.lambda.round_to(prec) * &num) / &zb.square()
    }

    pub fn critical_residual(&self, sign: i8, t: &ExtendedComplex, prec: u32) -> ExtendedFloat {
        let c = critical_point_at(sign, t, prec);
        self.derivative_at(t, &c, prec).abs()
    }
}
