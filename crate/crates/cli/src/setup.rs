//! Resolves a family selector into a concrete family, marked section and height.

use std::fmt;
use std::str::FromStr;

use rug::Rational;

use degen_core::dynamics::{orbit_valuations, ConstantSection, EvaluatedMap, HomogeneousFamily, ParamSeriesPoint, Section, SeriesSection};
use degen_core::families::{build_quadratic_critical_family, build_rotation_family, build_unicritical_family, ContinuedFraction, OrbitProblem};
use degen_core::geometry::{affine_chart, AffinePoint};
use degen_core::numerics::{ExtendedComplex, ExtendedFloat, ParamPoly, TruncatedSeries};
use degen_core::{DegenError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `(z^2, w^2)`, constant in `t`.
    Power,
    /// `phi = lambda z` perturbed at `h` with `t^m`.
    Rotation,
    /// `(lambda z (z - (1 + t^2) w), (z - (1 - t^2) w) w)`.
    Quadratic,
    /// `phi = lambda (z - a0)^(d-1)` perturbed at a caller-supplied `h`.
    Unicritical(usize),
}

impl FromStr for FamilyKind {
    type Err = DegenError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(FamilyKind::Power),
            "rotation" => Ok(FamilyKind::Rotation),
            "quadratic" => Ok(FamilyKind::Quadratic),
            _ => {
                if let Some(d) = s.strip_prefix("unicritical:") {
                    let d = d.parse::<usize>().map_err(|e| DegenError::Precondition(format!("bad degree in '{s}': {e}")))?;
                    return Ok(FamilyKind::Unicritical(d));
                }
                Err(DegenError::Precondition(format!("unknown family '{s}' (expected power, rotation, quadratic or unicritical:<d>)")))
            }
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Power => write!(f, "power"),
            FamilyKind::Rotation => write!(f, "rotation"),
            FamilyKind::Quadratic => write!(f, "quadratic"),
            FamilyKind::Unicritical(d) => write!(f, "unicritical:{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SectionKind {
    A,
    V,
    CPlus,
    CMinus,
    /// Polynomial section given by coefficient lists `z(t)` and `w(t)`.
    Custom(Vec<f64>, Vec<f64>),
}

impl FromStr for SectionKind {
    type Err = DegenError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(SectionKind::A),
            "v" => Ok(SectionKind::V),
            "c+" => Ok(SectionKind::CPlus),
            "c-" => Ok(SectionKind::CMinus),
            _ => {
                let body = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| DegenError::Precondition(format!("unknown section '{s}' (expected a, v, c+, c- or custom:z0,z1,../w0,..)")))?;
                let (z, w) = body.split_once('/').ok_or_else(|| DegenError::Precondition("custom section needs 'z-coefficients/w-coefficients'".into()))?;
                let parse = |l: &str| -> Result<Vec<f64>> {
                    l.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| DegenError::Precondition(format!("bad coefficient '{x}': {e}")))).collect()
                };
                Ok(SectionKind::Custom(parse(z)?, parse(w)?))
            }
        }
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionKind::A => write!(f, "a"),
            SectionKind::V => write!(f, "v"),
            SectionKind::CPlus => write!(f, "c+"),
            SectionKind::CMinus => write!(f, "c-"),
            SectionKind::Custom(z, w) => {
                let j = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "custom:{}/{}", j(z), j(w))
            }
        }
    }
}

/// Perturbation parameters that only some families use.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationParams {
    pub h: (f64, f64),
    pub epsilon: f64,
    pub t_exponent: u32,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        PerturbationParams { h: (-1.0, 0.0), epsilon: 1.0, t_exponent: 1 }
    }
}

/// Everything a scan or dip run needs about the family.
pub struct FamilySetup {
    pub kind: FamilyKind,
    pub family: HomogeneousFamily,
    pub section: Box<dyn Section>,
    pub section_kind: SectionKind,
    /// The unperturbed map `Phi`, for the metric-comparison constant.
    pub phi: EvaluatedMap,
    pub epsilon: f64,
    /// Close approach of `phi^k(a0)` is scheduled at time `n = k + index_shift`.
    pub index_shift: u64,
    pub theta: ContinuedFraction,
}

fn phi_map(num: &[ExtendedComplex], den: &[ExtendedComplex], prec: u32) -> EvaluatedMap {
    let e = num.len().max(den.len()) - 1;
    let pad = |v: &[ExtendedComplex]| (0..=e).map(|i| v.get(i).cloned().unwrap_or_else(|| ExtendedComplex::zero(prec))).collect();
    EvaluatedMap { degree: e, p: pad(num), q: pad(den), prec }
}

fn custom_section(z: &[f64], w: &[f64], prec: u32) -> Box<dyn Section> {
    let order = z.len().max(w.len()).max(1) - 1;
    let series = |c: &[f64]| TruncatedSeries::from_poly(&ParamPoly::from_f64(prec, c), order);
    Box::new(SeriesSection { point: ParamSeriesPoint { z: series(z), w: series(w) } })
}

pub fn build_setup(kind: &FamilyKind, section: &SectionKind, theta: &ContinuedFraction, pert: &PerturbationParams, prec: u32) -> Result<FamilySetup> {
    let one = ExtendedComplex::one(prec);
    let zero = ExtendedComplex::zero(prec);
    let unsupported = || DegenError::Precondition(format!("section {section} is not defined for the {kind} family"));
    let (family, marked, phi, epsilon, shift): (HomogeneousFamily, Box<dyn Section>, EvaluatedMap, f64, u64) = match kind {
        FamilyKind::Power => {
            let fam = HomogeneousFamily::constant(2, vec![zero.clone(), zero.clone(), one.clone()], vec![one.clone(), zero.clone(), zero.clone()])?;
            let s: Box<dyn Section> = match section {
                SectionKind::A | SectionKind::V => Box::new(ConstantSection::new(one.clone(), one.clone())),
                SectionKind::Custom(z, w) => custom_section(z, w, prec),
                _ => return Err(unsupported()),
            };
            let phi = phi_map(&[zero.clone(), zero.clone(), one.clone()], std::slice::from_ref(&one), prec);
            (fam, s, phi, 1.0, 0)
        }
        FamilyKind::Rotation => {
            let h = ExtendedComplex::from_f64(prec, pert.h.0, pert.h.1);
            let rf = build_rotation_family(theta, &h, &ExtendedFloat::from_f64(prec, pert.epsilon), pert.t_exponent, prec)?;
            let s: Box<dyn Section> = match section {
                SectionKind::A => Box::new(rf.section.clone()),
                SectionKind::Custom(z, w) => custom_section(z, w, prec),
                _ => return Err(unsupported()),
            };
            let phi = phi_map(&[zero.clone(), rf.lambda.clone()], std::slice::from_ref(&one), prec);
            (rf.family, s, phi, pert.epsilon, 0)
        }
        FamilyKind::Quadratic => {
            let q = build_quadratic_critical_family(theta, prec)?;
            let s: Box<dyn Section> = match section {
                SectionKind::A | SectionKind::CPlus => Box::new(q.critical_point(1)),
                SectionKind::CMinus => Box::new(q.critical_point(-1)),
                SectionKind::V => Box::new(q.marked()),
                SectionKind::Custom(z, w) => custom_section(z, w, prec),
            };
            let phi = phi_map(&[zero.clone(), q.lambda.clone()], std::slice::from_ref(&one), prec);
            // v = f(c) starts one step along the orbit
            (q.family.clone(), s, phi, 1.0, 1)
        }
        FamilyKind::Unicritical(d) => {
            let u = build_unicritical_family(*d, theta, prec)?;
            let h = ExtendedComplex::from_f64(prec, pert.h.0, pert.h.1);
            let (fam, a) = u.family(&h, &ExtendedFloat::from_f64(prec, pert.epsilon))?;
            let s: Box<dyn Section> = match section {
                SectionKind::A => Box::new(a),
                SectionKind::V => Box::new(ConstantSection::new(zero.clone(), one.clone())),
                SectionKind::Custom(z, w) => custom_section(z, w, prec),
                _ => return Err(unsupported()),
            };
            let phi = phi_map(u.phi.coeffs(), std::slice::from_ref(&one), prec);
            (fam, s, phi, pert.epsilon, 1)
        }
    };
    Ok(FamilySetup { kind: kind.clone(), family, section: marked, section_kind: section.clone(), phi, epsilon, index_shift: shift, theta: theta.clone() })
}

impl FamilySetup {
    /// `eta = lim o_n / d^n` of the marked section from `n_max` series steps at order `order`.
    pub fn eta(&self, n_max: usize, order: usize, prec: u32) -> Result<Rational> {
        let s = self.section.series(order, prec)?;
        let prof = orbit_valuations(&self.family, &s, n_max)?;
        Ok(prof.eta().cloned().unwrap_or_default())
    }

    /// `log 2 + |log eps| + C_+(Phi)`: converts chordal closeness of the
    /// unperturbed orbit into a max-norm potential bound.
    pub fn metric_constant(&self) -> f64 {
        std::f64::consts::LN_2 + self.epsilon.ln().abs() + self.phi.c_plus().to_f64()
    }

    pub fn degree(&self) -> usize {
        self.family.degree()
    }

    /// Where the marked point sits at `t = 0`.
    pub fn marked_start(&self, prec: u32) -> Result<AffinePoint> {
        Ok(affine_chart(&self.section.lift(&ExtendedComplex::zero(prec), prec)?))
    }

    /// The default target of the close returns: the collision point `1` for
    /// the quadratic family, `0` for the power map, else the perturbation point.
    pub fn default_target(&self, pert: &PerturbationParams, prec: u32) -> AffinePoint {
        match self.kind {
            FamilyKind::Quadratic => AffinePoint::Finite(ExtendedComplex::one(prec)),
            FamilyKind::Power => AffinePoint::Finite(ExtendedComplex::zero(prec)),
            _ => AffinePoint::Finite(ExtendedComplex::from_f64(prec, pert.h.0, pert.h.1)),
        }
    }

    /// The unperturbed orbit of `a0` under `Phi`, weighted by `d^-n`.
    pub fn orbit_problem(&self, a0: AffinePoint, h: AffinePoint, d: u32, prec: u32) -> OrbitProblem {
        OrbitProblem {
            phi_num: ParamPoly::new(self.phi.p.clone(), prec),
            phi_den: ParamPoly::new(self.phi.q.clone(), prec),
            a0,
            h,
            d,
            index_shift: self.index_shift as usize,
            prec,
        }
    }
}
