//! Rotation numbers as infinite continued fractions and the dip scheduler.
//!
//! A [`ContinuedFraction`] is `[0; a_1, ..., a_K, 1, 1, 1, ...]`: a finite
//! prefix followed by the golden tail, so every value is irrational and can
//! be evaluated exactly at any precision from the last two convergents.

use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{DegenError, Result};
use crate::geometry::{chordal, ProjPoint};
use crate::numerics::{half_precision_tol, ExtendedComplex, ExtendedFloat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    prefix: Vec<Integer>,
}

/// One scheduled close return: `|e^{2 pi i n theta} - 1| < e^{-gap}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub n: u64,
    pub gap: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DipSchedule {
    entries: Vec<ScheduleEntry>,
}

/// Chordal gap `[1, e^{2 pi i n theta}]` (or to another target).
#[derive(Clone, Debug)]
pub struct CloseRow {
    pub n: u64,
    pub gap: ExtendedFloat,
    pub exact_hit: bool,
}

impl DipSchedule {
    pub fn new(entries: Vec<ScheduleEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if e.n == 0 || !(e.gap.is_finite() && e.gap > 0.0) {
                return Err(DegenError::Precondition(format!("schedule entry {i} needs n >= 1 and a positive gap")));
            }
            if i > 0 && entries[i - 1].n >= e.n {
                return Err(DegenError::Precondition("schedule times must be strictly increasing".into()));
            }
        }
        Ok(DipSchedule { entries })
    }

    pub fn empty() -> Self {
        DipSchedule::default()
    }

    /// Parses `"n:g,n:g"`; the empty string is the empty schedule.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let (n, g) = part.split_once(':').ok_or_else(|| DegenError::Precondition(format!("schedule entry '{part}' is not n:g")))?;
            let n = n.trim().parse::<u64>().map_err(|e| DegenError::Precondition(format!("bad n in '{part}': {e}")))?;
            let gap = g.trim().parse::<f64>().map_err(|e| DegenError::Precondition(format!("bad gap in '{part}': {e}")))?;
            entries.push(ScheduleEntry { n, gap });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest gap exponent representable at `prec` bits.
    pub fn gap_budget(prec: u32) -> f64 {
        prec as f64 * std::f64::consts::LN_2 / 4.0
    }
}

impl fmt::Display for DipSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("{}:{}", e.n, e.gap)).collect();
        f.write_str(&parts.join(","))
    }
}

impl ContinuedFraction {
    /// `[0; 1, 1, 1, ...] = (sqrt 5 - 1) / 2`.
    pub fn golden() -> Self {
        ContinuedFraction { prefix: Vec::new() }
    }

    pub fn from_prefix(prefix: Vec<Integer>) -> Result<Self> {
        if prefix.iter().any(|a| *a < 1) {
            return Err(DegenError::Precondition("partial quotients must be positive".into()));
        }
        Ok(ContinuedFraction { prefix })
    }

    pub fn prefix(&self) -> &[Integer] {
        &self.prefix
    }

    /// `a_k` for `k >= 1`.
    pub fn partial_quotient(&self, k: usize) -> Integer {
        assert!(k >= 1, "partial quotients are indexed from 1");
        self.prefix.get(k - 1).cloned().unwrap_or_else(|| Integer::from(1))
    }

    /// Convergents `(p_k, q_k)` for `k = 0..=k_max`, starting at `0/1`.
    pub fn convergents(&self, k_max: usize) -> Vec<(Integer, Integer)> {
        let mut out = vec![(Integer::from(0), Integer::from(1))];
        let (mut pm1, mut qm1) = (Integer::from(1), Integer::from(0));
        for k in 1..=k_max {
            let a = self.partial_quotient(k);
            let (p, q) = out[k - 1].clone();
            let np = Integer::from(&a * &p) + &pm1;
            let nq = Integer::from(&a * &q) + &qm1;
            pm1 = p;
            qm1 = q;
            out.push((np, nq));
        }
        out
    }

    /// `theta` from the last prefix convergents and the golden tail.
    pub fn value(&self, prec: u32) -> ExtendedFloat {
        let k = self.prefix.len();
        let conv = self.convergents(k);
        let (p_k, q_k) = &conv[k];
        let (p_km1, q_km1) = if k == 0 { (Integer::from(1), Integer::from(0)) } else { conv[k - 1].clone() };
        let bits = q_k.significant_bits().max(p_k.significant_bits()) + 16;
        let w = prec + bits;
        let phi = ExtendedFloat::from_i64(w, 5).sqrt().add_prec(&ExtendedFloat::one(w), w).mul_2exp(-1);
        let int = |x: &Integer| ExtendedFloat::from_integer(w.max(x.significant_bits() + 8), x);
        let num = (&int(p_k) * &phi).add_prec(&int(&p_km1), w);
        let den = (&int(q_k) * &phi).add_prec(&int(&q_km1), w);
        num.div_prec(&den, prec)
    }

    /// Working precision used for `e^{2 pi i n theta}` requested at `prec`.
    fn cis_precision(n: u64, prec: u32) -> u32 {
        4 * prec + (64 - n.leading_zeros()) + 16
    }

    /// `e^{2 pi i n theta}` evaluated at four times `prec`, then rounded.
    pub fn cis_n(&self, n: u64, prec: u32) -> ExtendedComplex {
        self.cis_n_wide(n, prec).round_to(prec)
    }

    fn cis_n_wide(&self, n: u64, prec: u32) -> ExtendedComplex {
        let w = Self::cis_precision(n, prec);
        let x = self.value(w).mul_prec(&ExtendedFloat::from_integer(w, &Integer::from(n)), w);
        ExtendedComplex::cis_turns(&x)
    }

    /// Rotation multiplier `e^{2 pi i theta}`.
    pub fn lambda(&self, prec: u32) -> ExtendedComplex {
        self.cis_n(1, prec)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.prefix.iter().map(|a| a.to_string()).collect();
        if parts.is_empty() {
            write!(f, "[0; 1, 1, ...]")
        } else {
            write!(f, "[0; {}, 1, 1, ...]", parts.join(", "))
        }
    }
}

/// `ceil(2 pi m e^g / q)`, the partial quotient that forces `|e^{2 pi i m q theta} - 1| < e^{-g}`.
fn gap_quotient(m: u64, q: &Integer, g: f64) -> Integer {
    let bits = (g / std::f64::consts::LN_2) as u32 + q.significant_bits() + 128;
    let x = ExtendedFloat::pi(bits)
        .mul_2exp(1)
        .mul_i64(m as i64)
        .mul_prec(&ExtendedFloat::from_f64(bits, g).exp(), bits)
        .div_prec(&ExtendedFloat::from_integer(bits, q), bits);
    // the extra unit absorbs the rounding of x
    x.ceil_to_integer() + 1u32
}

/// Builds `theta` whose returns realize every scheduled gap. Each `n_j` is
/// either reached as a convergent denominator (partial quotient
/// `(n_j - q_{k-1}) / q_k`, else 1s) or is a multiple of the previous
/// scheduled denominator, in which case that denominator's gap quotient is
/// enlarged so the multiple inherits the bound.
pub fn construct_theta(schedule: &DipSchedule, prec: u32) -> Result<ContinuedFraction> {
    let budget = DipSchedule::gap_budget(prec);
    let mut a: Vec<Integer> = Vec::new();
    // q[k] is q_k; q_{-1} = 0 is implicit
    let mut q: Vec<Integer> = vec![Integer::from(1)];
    // index k whose next quotient a_{k+1} is the last one pushed as a gap quotient
    let mut gap_at: Option<usize> = None;
    let q_prev = |q: &[Integer], k: usize| if k == 0 { Integer::from(0) } else { q[k - 1].clone() };

    for e in schedule.entries() {
        if e.gap > budget {
            return Err(DegenError::Infeasible(format!("gap exponent {} exceeds the budget {budget:.1} at {prec} bits", e.gap)));
        }
        let n = Integer::from(e.n);
        if let Some(k) = gap_at {
            let qk = q[k].clone();
            if n.is_divisible(&qk) {
                let m = Integer::from(&n / &qk).to_u64().expect("multiple fits u64");
                let need = gap_quotient(m, &qk, e.gap);
                if need > a[k] {
                    a[k] = need;
                    let next = Integer::from(&a[k] * &qk) + q_prev(&q, k);
                    q[k + 1] = next;
                }
                continue;
            }
            return Err(DegenError::Infeasible(format!(
                "n = {} is neither a multiple of the scheduled denominator {} nor reachable past q = {}",
                e.n,
                qk,
                q.last().expect("nonempty")
            )));
        }
        loop {
            let k = q.len() - 1;
            let qk = q[k].clone();
            if qk == n {
                break;
            }
            if qk > n {
                return Err(DegenError::Infeasible(format!("n = {} is not a convergent denominator", e.n)));
            }
            let rest = Integer::from(&n - &q_prev(&q, k));
            let quotient = if rest.is_divisible(&qk) { Integer::from(&rest / &qk) } else { Integer::from(1) };
            let next = Integer::from(&quotient * &qk) + q_prev(&q, k);
            a.push(quotient);
            q.push(next);
        }
        let k = q.len() - 1;
        let need = gap_quotient(1, &q[k], e.gap);
        let next = Integer::from(&need * &q[k]) + q_prev(&q, k);
        a.push(need);
        q.push(next);
        gap_at = Some(k);
    }
    let cf = ContinuedFraction::from_prefix(a)?;
    verify_schedule(&cf, schedule, prec)?;
    Ok(cf)
}

/// Checks `0 < |e^{2 pi i n theta} - 1| < e^{-g}` for every entry at `4 prec` bits.
pub fn verify_schedule(cf: &ContinuedFraction, schedule: &DipSchedule, prec: u32) -> Result<()> {
    for e in schedule.entries() {
        let z = cf.cis_n_wide(e.n, prec);
        let w = z.prec();
        let diff = (&z - &ExtendedComplex::one(w)).abs();
        let bound = ExtendedFloat::from_f64(w, -e.gap).exp();
        if diff.is_zero() || diff >= bound {
            return Err(DegenError::Infeasible(format!("postcondition failed at n = {}: |e^(2 pi i n theta) - 1| = {}", e.n, diff.to_decimal(8))));
        }
    }
    Ok(())
}

/// Gaps `[1, e^{2 pi i n theta}]` for `n = 1..=n_max`, evaluated at four times `prec`.
pub fn closeness_table(cf: &ContinuedFraction, n_max: u64, prec: u32) -> Vec<CloseRow> {
    let one = ProjPoint::new(ExtendedComplex::one(prec), ExtendedComplex::one(prec)).expect("nonzero");
    closeness_to(cf, &one, 0, n_max, prec)
}

/// Gaps `[target, e^{2 pi i (n + offset) theta}]` for `n = 1..=n_max`;
/// gaps at or below `2^(-p/2)` are flagged as exact hits and reported as zero.
pub fn closeness_to(cf: &ContinuedFraction, target: &ProjPoint, offset: u64, n_max: u64, prec: u32) -> Vec<CloseRow> {
    let tol = half_precision_tol(prec);
    (1..=n_max)
        .map(|n| {
            let z = cf.cis_n_wide(n + offset, prec);
            let w = z.prec();
            let p = ProjPoint::new(z, ExtendedComplex::one(w)).expect("unit modulus");
            let tgt = ProjPoint::new(target.z.round_to(w), target.w.round_to(w)).expect("nonzero");
            let gap = chordal(&p, &tgt).round_to(prec);
            let exact_hit = gap <= tol;
            CloseRow { n, gap: if exact_hit { ExtendedFloat::zero(prec) } else { gap }, exact_hit }
        })
        .collect()
}
