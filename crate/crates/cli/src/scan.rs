//! Ring scans of the potential and their CSV form.

use std::io::{Read, Write};

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use degen_core::dynamics::{nondegenerate_map, potential, PotentialSample};
use degen_core::families::ContinuedFraction;
use degen_core::numerics::{ExtendedComplex, ExtendedFloat};
use degen_core::{DegenError, Result};

use crate::config::{precision_cap, RunConfig};
use crate::setup::{build_setup, FamilySetup};

/// Significant digits written for every numeric field.
pub const CSV_DIGITS: usize = 20;
/// Series steps and truncation order used when the height is inferred.
pub const ETA_STEPS: usize = 10;
pub const ETA_ORDER: usize = 64;

/// One CSV row; every field is a decimal string so exponents survive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t_re: String,
    pub t_im: String,
    pub abs_t: String,
    pub potential: String,
    pub depth: String,
    pub tail_bound: String,
    pub precision_bits: String,
}

impl ScanRow {
    pub fn from_sample(s: &PotentialSample) -> Self {
        ScanRow {
            t_re: s.t.re.to_decimal(CSV_DIGITS),
            t_im: s.t.im.to_decimal(CSV_DIGITS),
            abs_t: s.t.abs().to_decimal(CSV_DIGITS),
            potential: s.value.to_decimal(CSV_DIGITS),
            depth: s.depth.to_string(),
            tail_bound: s.tail_bound.to_decimal(CSV_DIGITS),
            precision_bits: s.precision.to_string(),
        }
    }

    fn number(field: &str) -> Result<ExtendedFloat> {
        ExtendedFloat::parse_decimal(128, field).ok_or_else(|| DegenError::Precondition(format!("bad numeric field '{field}'")))
    }

    /// `ln |t|` as a double; finite for every representable radius.
    pub fn log_abs_t(&self) -> Result<f64> {
        Ok(Self::number(&self.abs_t)?.ln().to_f64())
    }

    pub fn potential_f64(&self) -> Result<f64> {
        Ok(Self::number(&self.potential)?.to_f64())
    }
}

pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub eta: Rational,
}

/// Height of the configured section: the override, else from orbit valuations.
pub fn resolve_eta(config: &RunConfig, setup: &FamilySetup) -> Result<Rational> {
    match &config.eta {
        Some(e) => Ok(e.clone()),
        None => setup.eta(ETA_STEPS, ETA_ORDER, config.prec),
    }
}

/// Potential samples on every ring and angle, ordered by (ring, angle).
pub fn run_scan(config: &RunConfig) -> Result<ScanOutput> {
    config.validate()?;
    let prec = config.prec;
    let theta = config.theta()?;
    let setup = build_setup(&config.family, &config.section, &theta, &config.perturbation, prec)?;
    let eta = resolve_eta(config, &setup)?;
    let log_radii = config.radii.log_radii();
    let angles = config.angles;
    let jobs: Vec<(usize, usize)> = (0..log_radii.len()).flat_map(|i| (0..angles).map(move |k| (i, k))).collect();
    let samples = jobs
        .par_iter()
        .map(|&(i, k)| {
            let t = ring_point(&log_radii[i], k, angles, prec);
            potential(&setup.family, setup.section.as_ref(), &t, &eta, config.depth, prec).map_err(|e| (i, k, e))
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|(i, k, e)| match e {
            DegenError::Degenerate { .. } => precision_shortfall(config, &theta, &log_radii[i], k).unwrap_or(e),
            other => other,
        })?;
    Ok(ScanOutput { rows: samples.iter().map(ScanRow::from_sample).collect(), eta })
}

fn ring_point(log_r: &ExtendedFloat, k: usize, angles: usize, prec: u32) -> ExtendedComplex {
    let r = log_r.round_to(prec).exp();
    let angle = ExtendedFloat::pi(prec).mul_i64(2 * k as i64).div_i64(angles as i64);
    ExtendedComplex::from_polar(&r, &angle)
}

/// Retries a parameter refused as degenerate at doubled precisions, up to
/// 64 times the requested one and the cap. If some precision accepts it,
/// the run was short of bits rather than at a degenerate map.
fn precision_shortfall(config: &RunConfig, theta: &ContinuedFraction, log_r: &ExtendedFloat, k: usize) -> Option<DegenError> {
    let cap = precision_cap().ok()?.min(config.prec.saturating_mul(64));
    let mut p = config.prec;
    while p < cap {
        p = p.saturating_mul(2).min(cap);
        let setup = build_setup(&config.family, &config.section, theta, &config.perturbation, p).ok()?;
        let t = ring_point(log_r, k, config.angles, p);
        if nondegenerate_map(&setup.family, &t, p).is_ok() {
            return Some(DegenError::PrecisionBudget { needed: p as u64, available: config.prec as u64 });
        }
    }
    None
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<ScanRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Rows grouped by radius, preserving file order.
pub fn rings(rows: &[ScanRow]) -> Vec<Vec<&ScanRow>> {
    let mut out: Vec<Vec<&ScanRow>> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some(ring) if ring[0].abs_t == r.abs_t => ring.push(r),
            _ => out.push(vec![r]),
        }
    }
    out
}
