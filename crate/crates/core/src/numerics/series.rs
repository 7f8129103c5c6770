use std::fmt;

use super::complex::ExtendedComplex;
use super::float::ExtendedFloat;
use super::poly::ParamPoly;

/// Valuation of a truncated series: either an exact index or the sentinel
/// "at least `T + 1`" when every stored coefficient is below tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(usize),
    AtLeast(usize),
}

impl Valuation {
    pub fn exact(self) -> Option<usize> {
        match self {
            Valuation::Exact(k) => Some(k),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(k) => write!(f, "{k}"),
            Valuation::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Power series in `t` known modulo `t^(T+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExtendedComplex>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(mut coeffs: Vec<ExtendedComplex>, order: usize, prec: u32) -> Self {
        coeffs.resize(order + 1, ExtendedComplex::zero(prec));
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize, prec: u32) -> Self {
        Self::new(Vec::new(), order, prec)
    }

    pub fn constant(c: ExtendedComplex, order: usize) -> Self {
        let p = c.prec();
        Self::new(vec![c], order, p)
    }

    /// The series `t`.
    pub fn t(order: usize, prec: u32) -> Self {
        let mut s = Self::zero(order, prec);
        if order >= 1 {
            s.coeffs[1] = ExtendedComplex::one(prec);
        }
        s
    }

    pub fn from_poly(f: &ParamPoly, order: usize) -> Self {
        Self::new(f.coeffs().iter().take(order + 1).cloned().collect(), order, f.prec())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExtendedComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ExtendedComplex {
        &self.coeffs[k]
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(64)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &ExtendedComplex) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Product modulo `t^(T+1)`; operands of different order are cut to the smaller one.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let p = self.prec().max(rhs.prec());
        let a_lead = self.coeffs[..=n].iter().position(|c| !c.is_zero());
        let b_lead = rhs.coeffs[..=n].iter().position(|c| !c.is_zero());
        let (Some(a0), Some(b0)) = (a_lead, b_lead) else {
            return Self::zero(n, p);
        };
        let mut out = vec![ExtendedComplex::zero(p); n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(a0 + b0) {
            let mut acc = ExtendedComplex::zero(p);
            for i in a0..=(k - b0) {
                let a = &self.coeffs[i];
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * &rhs.coeffs[k - i]);
            }
            *slot = acc;
        }
        TruncatedSeries { coeffs: out }
    }

    /// Product with a polynomial in `t`, cheaper than [`Self::mul`] for sparse `f`.
    pub fn mul_poly(&self, f: &ParamPoly) -> Self {
        let n = self.order();
        let p = self.prec().max(f.prec());
        let mut out = vec![ExtendedComplex::zero(p); n + 1];
        for (j, c) in f.coeffs().iter().enumerate().take(n + 1) {
            if c.is_zero() {
                continue;
            }
            for k in j..=n {
                if !self.coeffs[k - j].is_zero() {
                    out[k] = &out[k] + &(c * &self.coeffs[k - j]);
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Smallest `k` with `|c_k| > zero_tol`.
    pub fn valuation(&self, zero_tol: &ExtendedFloat) -> Valuation {
        match self.coeffs.iter().position(|c| c.abs_max_part() > *zero_tol) {
            Some(k) => Valuation::Exact(k),
            None => Valuation::AtLeast(self.order() + 1),
        }
    }

    /// Divides by `t^v`; the top `v` coefficients are lost, so the order drops by `v`.
    pub fn shift_down(&self, v: usize) -> Self {
        assert!(v <= self.order(), "shift exceeds truncation order");
        TruncatedSeries { coeffs: self.coeffs[v..].to_vec() }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<ExtendedComplex> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = ExtendedComplex::zero(self.prec());
            for i in 1..=k {
                acc = &acc + &(&self.coeffs[i] * &out[k - i]);
            }
            out.push(-&(&acc * &inv0));
        }
        TruncatedSeries { coeffs: out }
    }

    /// Square root whose constant term is the principal root of `c_0`.
    pub fn sqrt(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(!c0.is_zero(), "series sqrt needs a unit constant term");
        let s0 = c0.sqrt();
        let half_inv = s0.mul_2exp(1).recip();
        let n = self.order();
        let mut out: Vec<ExtendedComplex> = Vec::with_capacity(n + 1);
        out.push(s0);
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc = &acc - &(&out[i] * &out[k - i]);
            }
            out.push(&acc * &half_inv);
        }
        TruncatedSeries { coeffs: out }
    }

    /// Partial sum `sum c_k t^k`.
    pub fn eval(&self, t: &ExtendedComplex) -> ExtendedComplex {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Largest `|c_k|` (component-max proxy).
    pub fn max_coeff(&self) -> ExtendedFloat {
        let mut m = ExtendedFloat::zero(self.prec());
        for c in &self.coeffs {
            let a = c.abs_max_part();
            if a > m {
                m = a;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn s(coeffs: &[f64], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(coeffs.iter().map(|&c| ExtendedComplex::from_f64(P, c, 0.0)).collect(), order, P)
    }

    fn tol() -> ExtendedFloat {
        ExtendedFloat::one(P).mul_2exp(-(P as i64) / 2)
    }

    #[test]
    fn small_products_and_valuations() {
        let prod = s(&[1.0, 1.0], 3).mul(&s(&[1.0, -1.0], 3));
        assert_eq!(prod, s(&[1.0, 0.0, -1.0], 3));
        let t5 = s(&[0.0, 0.0, 1.0], 4).mul(&s(&[0.0, 0.0, 0.0, 1.0], 4));
        assert_eq!(t5.valuation(&tol()), Valuation::AtLeast(5));
        assert_eq!(t5.valuation(&tol()).to_string(), ">=5");
        assert_eq!(s(&[0.0, 0.0, 1.0, 1.0], 5).valuation(&tol()), Valuation::Exact(2));
        assert_eq!(s(&[], 5).valuation(&tol()), Valuation::AtLeast(6));
    }

    #[test]
    fn inverse_and_sqrt_of_one_minus_t_squared() {
        let order = 12;
        let x = s(&[1.0, 0.0, -1.0], order);
        let r = x.sqrt();
        // binomial series (1 - u)^(1/2) = sum binom(1/2, k) (-u)^k, computed in f64
        let mut b = 1.0f64;
        for k in 0..=order / 2 {
            let expect = b * if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((r.coeff(2 * k).re.to_f64() - expect).abs() < 1e-15, "k = {k}");
            if 2 * k + 1 <= order {
                assert!(r.coeff(2 * k + 1).abs().to_f64() < 1e-30);
            }
            b *= (0.5 - k as f64) / (k as f64 + 1.0);
        }
        assert_eq!(x.mul_poly(&ParamPoly::from_f64(P, &[1.0, 0.0, 1.0])), x.mul(&s(&[1.0, 0.0, 1.0], order)));
        let one = x.mul(&x.inv());
        assert_eq!(one.valuation(&tol()), Valuation::Exact(0));
        assert_eq!(one.shift_down(1).valuation(&tol()), Valuation::AtLeast(order));
    }

    fn schoolbook(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= order {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    fn close(a: &TruncatedSeries, b: &TruncatedSeries, scale: f64) -> bool {
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs().to_f64() <= scale * 8.0 * 2f64.powi(-(P as i32)))
    }

    proptest! {
        #[test]
        fn mul_matches_schoolbook(a in prop::collection::vec(-4.0f64..4.0, 8), b in prop::collection::vec(-4.0f64..4.0, 8)) {
            // small integers-over-powers-of-two keep the f64 oracle exact
            let a: Vec<f64> = a.iter().map(|x| (x * 16.0).round() / 16.0).collect();
            let b: Vec<f64> = b.iter().map(|x| (x * 16.0).round() / 16.0).collect();
            let order = 7;
            let got = s(&a, order).mul(&s(&b, order));
            let expect = s(&schoolbook(&a, &b, order), order);
            prop_assert!(close(&got, &expect, 1.0));
        }

        #[test]
        fn mul_commutes_and_associates(a in prop::collection::vec(-2.0f64..2.0, 6), b in prop::collection::vec(-2.0f64..2.0, 6), c in prop::collection::vec(-2.0f64..2.0, 6)) {
            let order = 5;
            let (x, y, z) = (s(&a, order), s(&b, order), s(&c, order));
            prop_assert!(close(&x.mul(&y), &y.mul(&x), 64.0));
            prop_assert!(close(&x.mul(&y).mul(&z), &x.mul(&y.mul(&z)), 2048.0));
        }
    }
}
