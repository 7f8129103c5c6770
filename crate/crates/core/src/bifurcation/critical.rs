//! Sums of critical potentials and the quadratic-family relation between
//! the potentials of a critical point and of its value.

use rug::Rational;

use crate::dynamics::{potential, HomogeneousFamily, Section};
use crate::error::{DegenError, Result};
use crate::families::QuadraticCriticalFamily;
use crate::numerics::{ExtendedComplex, ExtendedFloat};

#[derive(Clone, Debug)]
pub struct CriticalPotentialSum {
    pub total: ExtendedFloat,
    pub terms: Vec<ExtendedFloat>,
    /// Sum of the per-term tail bounds.
    pub tail_bound: ExtendedFloat,
}

/// `sum_j (G(t, c_j(t)) - eta_j log |t|)` over all `2d - 2` critical sections.
pub fn critical_potential_sum(
    fam: &HomogeneousFamily,
    sections: &[&dyn Section],
    etas: &[Rational],
    t: &ExtendedComplex,
    depth: usize,
    prec: u32,
) -> Result<CriticalPotentialSum> {
    let expected = 2 * fam.degree() - 2;
    if sections.len() != expected || etas.len() != expected {
        return Err(DegenError::Precondition(format!(
            "a degree-{} family has {expected} critical sections; got {} sections and {} heights",
            fam.degree(),
            sections.len(),
            etas.len()
        )));
    }
    let mut total = ExtendedFloat::zero(prec);
    let mut tail = ExtendedFloat::zero(prec);
    let mut terms = Vec::with_capacity(expected);
    for (s, eta) in sections.iter().zip(etas) {
        let p = potential(fam, *s, t, eta, depth, prec)?;
        total = &total + &p.value;
        tail = &tail + &p.tail_bound;
        terms.push(p.value);
    }
    Ok(CriticalPotentialSum { total, terms, tail_bound: tail })
}

#[derive(Clone, Debug)]
pub struct RelationResidual {
    pub residual: ExtendedFloat,
    /// Potential of the critical point with `eta = 1/2`.
    pub point_potential: ExtendedFloat,
    /// Potential of the critical value with `eta = 0`.
    pub value_potential: ExtendedFloat,
    /// `log |c(t) - 1 + t^2| - log |t|`.
    pub harmonic_term: ExtendedFloat,
}

/// `|g_c - g_v / 2 - h(t) / 2|` for the critical point `c_+` and its value.
/// The value's orbit is one step ahead of the point's, so it is evaluated
/// at `depth - 1` to compare partial sums of equal length.
pub fn relation_check_quadratic(fam: &QuadraticCriticalFamily, t: &ExtendedComplex, depth: usize, prec: u32) -> Result<RelationResidual> {
    if depth < 2 {
        return Err(DegenError::Precondition("relation check needs depth >= 2".into()));
    }
    let t = t.round_to(prec);
    let r = t.abs();
    if t.is_zero() || r >= ExtendedFloat::from_ratio(prec, 1, 2) {
        return Err(DegenError::Precondition("relation check needs 0 < |t| < 1/2".into()));
    }
    let half = Rational::from((1, 2));
    let a = potential(&fam.family, &fam.critical_point(1), &t, &half, depth, prec)?;
    let v = potential(&fam.family, &fam.critical_value(1), &t, &Rational::new(), depth - 1, prec)?;
    let c = fam.critical_point_at(1, &t, prec);
    let one = ExtendedComplex::one(prec);
    let h = &(&(&c - &one) + &t.square()).log_abs() - &t.log_abs();
    let residual = (&(&a.value - &v.value.mul_2exp(-1)) - &h.mul_2exp(-1)).abs();
    Ok(RelationResidual { residual, point_potential: a.value, value_potential: v.value, harmonic_term: h })
}
