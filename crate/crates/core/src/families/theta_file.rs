//! JSON exchange format for rotation numbers. Integers and reals are stored
//! as decimal strings so files survive a change of working precision.

use std::path::Path;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{DegenError, Result};

use super::cf::{closeness_table, ContinuedFraction, DipSchedule, ScheduleEntry};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaFile {
    /// Prefix `a_1..a_K`; the expansion continues with 1s.
    pub partial_quotients: Vec<String>,
    pub schedule: Vec<(u64, String)>,
    pub closeness_log: Vec<(u64, String)>,
    pub precision_bits: u32,
}

impl ThetaFile {
    /// Records `cf` with the schedule that produced it and `log [1, e^{2 pi i n theta}]`
    /// for `n = 1..=log_len`.
    pub fn new(cf: &ContinuedFraction, schedule: &DipSchedule, log_len: u64, prec: u32) -> Self {
        let closeness_log =
            closeness_table(cf, log_len, prec).into_iter().map(|r| (r.n, if r.exact_hit { "-inf".to_string() } else { r.gap.ln().to_decimal(20) })).collect();
        ThetaFile {
            partial_quotients: cf.prefix().iter().map(|a| a.to_string()).collect(),
            schedule: schedule.entries().iter().map(|e| (e.n, format!("{}", e.gap))).collect(),
            closeness_log,
            precision_bits: prec,
        }
    }

    pub fn continued_fraction(&self) -> Result<ContinuedFraction> {
        let prefix = self
            .partial_quotients
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|e| DegenError::Precondition(format!("bad partial quotient '{s}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        ContinuedFraction::from_prefix(prefix)
    }

    pub fn dip_schedule(&self) -> Result<DipSchedule> {
        let entries = self
            .schedule
            .iter()
            .map(|(n, g)| {
                g.parse::<f64>().map(|gap| ScheduleEntry { n: *n, gap }).map_err(|e| DegenError::Precondition(format!("bad gap exponent '{g}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DipSchedule::new(entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| DegenError::Precondition(format!("malformed theta file: {e}")))
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| DegenError::Precondition(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cf::construct_theta;

    #[test]
    fn round_trip_preserves_the_expansion() {
        let s = DipSchedule::parse("3:60,6:200").unwrap();
        let cf = construct_theta(&s, 2048).unwrap();
        let f = ThetaFile::new(&cf, &s, 8, 2048);
        let back = ThetaFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.continued_fraction().unwrap(), cf);
        assert_eq!(back.dip_schedule().unwrap(), s);
        // huge partial quotient survives as a decimal string
        assert!(f.partial_quotients.last().unwrap().len() > 80);
        assert!(ThetaFile::from_json("{\"partial_quotients\": [1]}").is_err());
    }
}
