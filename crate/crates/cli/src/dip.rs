//! The dip experiment: predict the drop forced by a scheduled close return,
//! then locate a radius where the ring minimum of the potential realizes it.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use degen_core::dynamics::{potential, HomogeneousFamily, Section};
use degen_core::families::ScheduleEntry;
use degen_core::numerics::{ExtendedComplex, ExtendedFloat};
use degen_core::{DegenError, Result};

/// Angles sampled on every ring.
pub const RING_ANGLES: usize = 8;
const BISECTION_STEPS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DipPrediction {
    /// Orbit index `k` of the close approach.
    pub k: u64,
    /// `C_+(r = 1/2) / (d - 1) + metric constant`.
    pub c_corr: f64,
    pub metric_constant: f64,
    /// `g / d^(k+1) - C_corr`.
    pub delta: f64,
}

impl DipPrediction {
    pub fn predicts_dip(&self) -> bool {
        self.delta > 0.0
    }
}

pub fn dip_predict(c_plus_half: f64, metric_constant: f64, entry: &ScheduleEntry, d: usize, index_shift: u64) -> DipPrediction {
    let k = entry.n.saturating_sub(index_shift);
    let c_corr = c_plus_half / (d as f64 - 1.0) + metric_constant;
    let delta = entry.gap / (d as f64).powi(k as i32 + 1) - c_corr;
    DipPrediction { k, c_corr, metric_constant, delta }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DipStatus {
    Confirmed,
    NotFound,
    NoDipPredicted,
}

impl DipStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DipStatus::Confirmed => "confirmed",
            DipStatus::NotFound => "not found",
            DipStatus::NoDipPredicted => "no dip predicted",
        }
    }
}

/// One measured ring `|t| = rho`, with `rho` stored as its natural log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingMeasurement {
    pub log_radius: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DipReport {
    pub j: usize,
    pub n: u64,
    pub gap: f64,
    pub prediction: DipPrediction,
    pub m_ref: f64,
    /// `ln delta_j`, when a radius was located.
    pub log_radius: Option<f64>,
    pub measured_min: Option<f64>,
    pub slack: f64,
    /// `measured - (M_ref - Delta + slack)` at the best ring; negative when confirmed.
    pub margin: f64,
    pub status: DipStatus,
    pub rings: Vec<RingMeasurement>,
    pub precision: u32,
    pub depth: usize,
}

/// Inputs shared by every potential evaluation of one dip search.
pub struct DipContext<'a> {
    pub family: &'a HomogeneousFamily,
    pub section: &'a dyn Section,
    pub eta: &'a Rational,
    pub depth: usize,
    pub prec: u32,
}

/// Bits needed to resolve a gap `e^-g`.
pub fn required_precision(gap: f64) -> u64 {
    (4.0 * gap / std::f64::consts::LN_2).ceil() as u64
}

impl DipContext<'_> {
    /// Min and max of the potential over [`RING_ANGLES`] points on `|t| = e^log_r`,
    /// offset from the real axis by half a step.
    pub fn ring(&self, log_r: &ExtendedFloat) -> Result<RingMeasurement> {
        let prec = self.prec;
        let r = log_r.round_to(prec).exp();
        let values = (0..RING_ANGLES)
            .into_par_iter()
            .map(|k| {
                let angle = ExtendedFloat::pi(prec).mul_i64(2 * k as i64 + 1).div_i64(RING_ANGLES as i64);
                let t = ExtendedComplex::from_polar(&r, &angle);
                potential(self.family, self.section, &t, self.eta, self.depth, prec).map(|s| s.value.to_f64())
            })
            .collect::<Result<Vec<f64>>>()
            .map_err(|e| match e {
                DegenError::Degenerate { .. } => DegenError::PrecisionBudget { needed: 2 * prec as u64, available: prec as u64 },
                other => other,
            })?;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(RingMeasurement { log_radius: log_r.to_f64(), min, max })
    }

    /// Reference level: largest ring value at `|t| = 1/2`.
    pub fn reference_level(&self) -> Result<f64> {
        Ok(self.ring(&ExtendedFloat::ln2(self.prec).mul_i64(-1))?.max)
    }
}

/// Squares `rho` from `1/4` until the ring minimum drops to
/// `M_ref - Delta + slack` or `rho < e^{-4g}`, then bisects `ln rho`
/// between the last two rungs for the largest confirming radius.
pub fn find_dip_radius(ctx: &DipContext<'_>, j: usize, entry: &ScheduleEntry, prediction: &DipPrediction, slack: f64) -> Result<DipReport> {
    let needed = required_precision(entry.gap);
    if (ctx.prec as u64) < needed {
        return Err(DegenError::PrecisionBudget { needed, available: ctx.prec as u64 });
    }
    let m_ref = ctx.reference_level()?;
    let mut report = DipReport {
        j,
        n: entry.n,
        gap: entry.gap,
        prediction: prediction.clone(),
        m_ref,
        log_radius: None,
        measured_min: None,
        slack,
        margin: f64::INFINITY,
        status: DipStatus::NotFound,
        rings: Vec::new(),
        precision: ctx.prec,
        depth: ctx.depth,
    };
    if !prediction.predicts_dip() {
        report.status = DipStatus::NoDipPredicted;
    }
    let target = m_ref - prediction.delta + slack;
    let floor = -4.0 * entry.gap;
    let prec = ctx.prec;
    let mut log_r = ExtendedFloat::ln2(prec).mul_i64(-2);
    let mut previous: Option<ExtendedFloat> = None;
    while log_r.to_f64() >= floor {
        let ring = ctx.ring(&log_r)?;
        report.margin = report.margin.min(ring.min - target);
        let hit = ring.min <= target;
        report.rings.push(ring.clone());
        if hit && report.status != DipStatus::NoDipPredicted {
            let (mut lo, mut hi) = (log_r.clone(), previous.clone().unwrap_or_else(|| log_r.clone()));
            let mut best = ring;
            for _ in 0..BISECTION_STEPS {
                if hi == lo {
                    break;
                }
                let mid = (&lo + &hi).mul_2exp(-1);
                let m = ctx.ring(&mid)?;
                report.rings.push(m.clone());
                if m.min <= target {
                    lo = mid;
                    best = m;
                } else {
                    hi = mid;
                }
            }
            report.log_radius = Some(best.log_radius);
            report.measured_min = Some(best.min);
            report.margin = best.min - target;
            report.status = DipStatus::Confirmed;
            return Ok(report);
        }
        previous = Some(log_r.clone());
        log_r = log_r.mul_2exp(1);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prediction_arithmetic() {
        let e = ScheduleEntry { n: 3, gap: 60.0 };
        let p = dip_predict(2.0, 1.0, &e, 2, 1);
        assert_eq!(p.k, 2);
        assert!((p.delta - (60.0 / 8.0 - 3.0)).abs() < 1e-12);
        let p = dip_predict(1.0, 1.0, &ScheduleEntry { n: 6, gap: 1500.0 }, 2, 1);
        assert!((p.delta - (1500.0 / 64.0 - 2.0)).abs() < 1e-12);
        assert!(!dip_predict(1.0, 1.0, &ScheduleEntry { n: 3, gap: 1e-9 }, 2, 1).predicts_dip());
        assert_eq!(required_precision(60.0), 347);
    }
}
