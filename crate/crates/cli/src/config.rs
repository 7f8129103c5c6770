//! Run configuration shared by the scan and dip subcommands.

use std::path::PathBuf;

use rug::Rational;

use degen_core::families::{construct_theta, ContinuedFraction, DipSchedule, ThetaFile};
use degen_core::numerics::ExtendedFloat;
use degen_core::{DegenError, Result};

use crate::setup::{FamilyKind, PerturbationParams, SectionKind};

/// Environment variable capping the working precision.
pub const PREC_MAX_ENV: &str = "DEGEN_PREC_MAX";
pub const DEFAULT_PREC_MAX: u32 = 1 << 16;

/// Geometric ladder of radii `start > ... > end`, `count` rungs.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiiSpec {
    pub start: ExtendedFloat,
    pub end: ExtendedFloat,
    pub count: usize,
}

impl RadiiSpec {
    /// Parses `start:end:count`; radii are decimal strings and may carry
    /// exponents far outside the double range.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(DegenError::Precondition(format!("radii '{s}' is not start:end:count")));
        }
        let num = |x: &str| ExtendedFloat::parse_decimal(prec, x.trim()).ok_or_else(|| DegenError::Precondition(format!("bad radius '{x}'")));
        let start = num(parts[0])?;
        let end = num(parts[1])?;
        let count = parts[2].trim().parse::<usize>().map_err(|e| DegenError::Precondition(format!("bad radius count '{}': {e}", parts[2])))?;
        let spec = RadiiSpec { start, end, count };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.end.is_zero() || self.end.is_sign_negative() {
            return Err(DegenError::Precondition("radii must be positive".into()));
        }
        if self.count == 0 || (self.count > 1 && self.start <= self.end) || (self.count == 1 && self.start != self.end) {
            return Err(DegenError::Precondition("radii must be strictly decreasing".into()));
        }
        Ok(())
    }

    /// `ln r_k`, evenly spaced from `ln start` to `ln end`.
    pub fn log_radii(&self) -> Vec<ExtendedFloat> {
        let (a, b) = (self.start.ln(), self.end.ln());
        if self.count == 1 {
            return vec![a];
        }
        let step = (&b - &a).div_i64(self.count as i64 - 1);
        (0..self.count).map(|k| &a + &step.mul_i64(k as i64)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: FamilyKind,
    pub perturbation: PerturbationParams,
    pub schedule: DipSchedule,
    pub theta_file: Option<PathBuf>,
    pub section: SectionKind,
    pub radii: RadiiSpec,
    pub angles: usize,
    pub depth: usize,
    pub prec: u32,
    pub seed: u64,
    /// Overrides the height computed from orbit valuations.
    pub eta: Option<Rational>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(family: FamilyKind, section: SectionKind, radii: RadiiSpec, prec: u32) -> Self {
        RunConfig {
            family,
            perturbation: PerturbationParams::default(),
            schedule: DipSchedule::empty(),
            theta_file: None,
            section,
            radii,
            angles: 8,
            depth: 64,
            prec,
            seed: 0,
            eta: None,
            out: None,
            svg: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.prec < 64 {
            return Err(DegenError::Precondition("precision must be at least 64 bits".into()));
        }
        if self.depth < 8 {
            return Err(DegenError::Precondition("depth must be at least 8".into()));
        }
        if self.angles == 0 {
            return Err(DegenError::Precondition("need at least one angle per ring".into()));
        }
        self.radii.validate()?;
        check_precision_cap(self.prec)
    }

    /// The rotation number: from the theta file, else built from the schedule.
    pub fn theta(&self) -> Result<ContinuedFraction> {
        match &self.theta_file {
            Some(path) => ThetaFile::read(path)?.continued_fraction(),
            None if self.schedule.is_empty() => Ok(ContinuedFraction::golden()),
            None => construct_theta(&self.schedule, self.prec),
        }
    }
}

/// Refuses precisions above `DEGEN_PREC_MAX`.
pub fn check_precision_cap(prec: u32) -> Result<()> {
    let cap = precision_cap()?;
    if prec > cap {
        return Err(DegenError::PrecisionBudget { needed: prec as u64, available: cap as u64 });
    }
    Ok(())
}

pub fn precision_cap() -> Result<u32> {
    match std::env::var(PREC_MAX_ENV) {
        Ok(v) => v.trim().parse::<u32>().map_err(|e| DegenError::Precondition(format!("{PREC_MAX_ENV}='{v}': {e}"))),
        Err(_) => Ok(DEFAULT_PREC_MAX),
    }
}

/// Parses `re,im`, a bare real, or `inf`.
pub fn parse_complex(s: &str) -> Result<Option<(f64, f64)>> {
    let s = s.trim();
    if s == "inf" {
        return Ok(None);
    }
    let bad = |e: std::num::ParseFloatError| DegenError::Precondition(format!("bad complex number '{s}': {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Some((re.trim().parse().map_err(bad)?, im.trim().parse().map_err(bad)?))),
        None => Ok(Some((s.parse().map_err(bad)?, 0.0))),
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse::<rug::Integer>();
            let q = q.trim().parse::<rug::Integer>();
            match (p, q) {
                (Ok(p), Ok(q)) if q != 0 => Some(Rational::from((p, q))),
                _ => None,
            }
        }
        None => s.parse::<rug::Integer>().ok().map(Rational::from),
    };
    r.ok_or_else(|| DegenError::Precondition(format!("bad rational '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_ladders() {
        let r = RadiiSpec::parse("0.4:0.01:3", 128).unwrap();
        let lr: Vec<f64> = r.log_radii().iter().map(|x| x.to_f64()).collect();
        assert!((lr[0] - 0.4f64.ln()).abs() < 1e-15);
        assert!((lr[1] - 0.5 * (0.4f64 * 0.01).ln()).abs() < 1e-14);
        assert!((lr[2] - 0.01f64.ln()).abs() < 1e-15);
        let deep = RadiiSpec::parse("0.5:1e-40000:2", 128).unwrap();
        assert!((deep.log_radii()[1].to_f64() + 40000.0 * 10f64.ln()).abs() < 1e-8);
        assert!(RadiiSpec::parse("0.1:0.4:3", 128).is_err());
        assert!(RadiiSpec::parse("0.1:0.4", 128).is_err());
    }

    #[test]
    fn scalar_parsers() {
        assert_eq!(parse_complex("-1").unwrap(), Some((-1.0, 0.0)));
        assert_eq!(parse_complex("0.5, 2").unwrap(), Some((0.5, 2.0)));
        assert_eq!(parse_complex("inf").unwrap(), None);
        assert!(parse_complex("x").is_err());
        assert_eq!(parse_rational("1/2").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("3").unwrap(), 3);
        assert!(parse_rational("1/0").is_err());
    }
}
