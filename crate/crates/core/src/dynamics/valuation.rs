//! Orbit valuations `o_n` and the local height `eta = lim o_n / d^n`.

use rug::{Integer, Rational};

use crate::error::{DegenError, Result};
use crate::numerics::{half_precision_tol, ExtendedComplex, ExtendedFloat, Valuation};

use super::form::{HomogeneousFamily, ParamSeriesPoint};

#[derive(Clone, Debug, PartialEq)]
pub struct ValuationProfile {
    pub degree: usize,
    /// Valuation of the section itself.
    pub o0: u64,
    /// `o_1, ..., o_n`.
    pub o: Vec<u64>,
    /// `o_k / d^k`, exact.
    pub eta_estimates: Vec<Rational>,
    /// Truncation order remaining after the last step.
    pub final_order: usize,
}

impl ValuationProfile {
    pub fn eta(&self) -> Option<&Rational> {
        self.eta_estimates.last()
    }
}

fn min_valuation(x: &ParamSeriesPoint, tol: &ExtendedFloat) -> Valuation {
    match (x.z.valuation(tol), x.w.valuation(tol)) {
        (Valuation::Exact(a), Valuation::Exact(b)) => Valuation::Exact(a.min(b)),
        (Valuation::Exact(a), _) | (_, Valuation::Exact(a)) => Valuation::Exact(a),
        (Valuation::AtLeast(a), Valuation::AtLeast(b)) => Valuation::AtLeast(a.min(b)),
    }
}

/// Divides by `t^v` and rescales so the larger constant term has modulus one.
fn extract(x: &ParamSeriesPoint, v: usize) -> ParamSeriesPoint {
    let z = x.z.shift_down(v.min(x.z.order()));
    let w = x.w.shift_down(v.min(x.w.order()));
    let order = z.order().min(w.order());
    let (z, w) = (z.truncate(order), w.truncate(order));
    let m = z.coeff(0).abs().max_ref(&w.coeff(0).abs()).clone();
    let inv = ExtendedComplex::from_real(ExtendedFloat::one(m.prec()).div_prec(&m, m.prec()));
    ParamSeriesPoint { z: z.scale(&inv), w: w.scale(&inv) }
}

/// Iterates the family on a series point, extracting the common power of
/// `t` after each step: `o_{n+1} = d o_n + v_{n+1}`.
pub fn orbit_valuations(fam: &HomogeneousFamily, section: &ParamSeriesPoint, n_max: usize) -> Result<ValuationProfile> {
    let prec = section.z.prec().max(section.w.prec());
    let tol = half_precision_tol(prec);
    let d = fam.degree() as u64;
    let order = section.z.order().min(section.w.order());
    let v0 = min_valuation(section, &tol).exact().ok_or(DegenError::TruncationTooLow { step: 0, order })?;
    let mut point = extract(section, v0);
    let mut o = v0 as u64;
    let mut out = Vec::with_capacity(n_max);
    let mut eta = Vec::with_capacity(n_max);
    let mut dk = Integer::from(1);
    for step in 1..=n_max {
        let image = fam.evaluate_series(&point);
        let order = image.z.order();
        let v = min_valuation(&image, &tol).exact().ok_or(DegenError::TruncationTooLow { step, order })?;
        if v > order {
            return Err(DegenError::TruncationTooLow { step, order });
        }
        point = extract(&image, v);
        o = o.checked_mul(d).and_then(|x| x.checked_add(v as u64)).ok_or_else(|| DegenError::Domain("o_n overflows u64".into()))?;
        dk *= d;
        out.push(o);
        eta.push(Rational::from((Integer::from(o), dk.clone())));
    }
    Ok(ValuationProfile { degree: fam.degree(), o0: v0 as u64, o: out, eta_estimates: eta, final_order: point.z.order() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::section::{ConstantSection, Section};
    use crate::numerics::{ParamPoly, TruncatedSeries};

    #[test]
    fn power_map_with_moving_section_never_degenerates() {
        let prec = 96;
        let c = |x: f64| ExtendedComplex::from_f64(prec, x, 0.0);
        let f = HomogeneousFamily::constant(2, vec![c(0.0), c(0.0), c(1.0)], vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        let order = 20;
        let section =
            ParamSeriesPoint { z: TruncatedSeries::from_poly(&ParamPoly::from_f64(prec, &[1.0, 1.0]), order), w: TruncatedSeries::constant(c(1.0), order) };
        let prof = orbit_valuations(&f, &section, 6).unwrap();
        assert_eq!(prof.o, vec![0; 6]);
        assert_eq!(*prof.eta().unwrap(), 0);
    }

    #[test]
    fn forced_zero_is_extracted_and_sentinel_reported() {
        // F_t = (t z^2, t w^2) at (1, 1): every step extracts one power of t,
        // so o_n = 2 o_{n-1} + 1 = 2^n - 1
        let prec = 96;
        let t_poly = ParamPoly::from_f64(prec, &[0.0, 1.0]);
        let f = HomogeneousFamily::from_monomials(2, &[(2, t_poly.clone())], &[(0, t_poly)], prec).unwrap();
        let section = ConstantSection::new(ExtendedComplex::one(prec), ExtendedComplex::one(prec)).series(12, prec).unwrap();
        let prof = orbit_valuations(&f, &section, 4).unwrap();
        assert_eq!(prof.o, vec![1, 3, 7, 15]);
        assert_eq!(prof.eta_estimates[3], Rational::from((15, 16)));
        assert_eq!(prof.final_order, 8);
        assert!(matches!(orbit_valuations(&f, &section, 13), Err(DegenError::TruncationTooLow { .. })));

        let zero = ParamSeriesPoint { z: TruncatedSeries::zero(5, prec), w: TruncatedSeries::zero(5, prec) };
        assert!(matches!(orbit_valuations(&f, &zero, 2), Err(DegenError::TruncationTooLow { step: 0, .. })));
    }
}
