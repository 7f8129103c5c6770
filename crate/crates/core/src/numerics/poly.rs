use super::complex::ExtendedComplex;
use super::float::ExtendedFloat;

/// Univariate polynomial with [`ExtendedComplex`] coefficients, lowest power
/// first. Used both for coefficients in the family parameter `t` and for
/// one-variable maps in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoly {
    coeffs: Vec<ExtendedComplex>,
}

impl ParamPoly {
    /// Trailing zero coefficients are dropped; an empty list becomes the zero polynomial.
    pub fn new(mut coeffs: Vec<ExtendedComplex>, prec: u32) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ExtendedComplex::zero(prec));
        }
        ParamPoly { coeffs }
    }

    pub fn constant(c: ExtendedComplex) -> Self {
        let p = c.prec();
        Self::new(vec![c], p)
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Vec::new(), prec)
    }

    pub fn from_f64(prec: u32, coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ExtendedComplex::from_f64(prec, c, 0.0)).collect(), prec)
    }

    /// `c * x^k`.
    pub fn monomial(c: ExtendedComplex, k: usize) -> Self {
        let p = c.prec();
        let mut v = vec![ExtendedComplex::zero(p); k];
        v.push(c);
        Self::new(v, p)
    }

    pub fn coeffs(&self) -> &[ExtendedComplex] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(64)
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.round_to(prec)).collect(), prec)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &ExtendedComplex) -> ExtendedComplex {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let p = self.prec();
        let v = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&ExtendedFloat::from_i64(p, k as i64))).collect();
        Self::new(v, p)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ExtendedComplex::zero(p);
        let v = (0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)).collect();
        Self::new(v, p)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.prec())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let mut v = vec![ExtendedComplex::zero(p); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Self::new(v, p)
    }

    pub fn scale(&self, k: &ExtendedComplex) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.prec())
    }

    /// `sum |c_k| r^k`, an upper bound for `|f(t)|` on `|t| <= r`.
    pub fn abs_bound(&self, r: &ExtendedFloat) -> ExtendedFloat {
        let p = self.prec();
        let mut acc = ExtendedFloat::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * r) + &c.abs();
        }
        acc
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> ExtendedFloat {
        let p = self.prec();
        let mut acc = ExtendedFloat::zero(p);
        for c in &self.coeffs {
            acc = &acc + &c.norm_sqr();
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_evaluations() {
        let p = 128;
        let f = ParamPoly::from_f64(p, &[1.0, -1.0]);
        assert_eq!(f.eval(&ExtendedComplex::zero(p)).re.to_f64(), 1.0);
        let g = ParamPoly::from_f64(p, &[0.0, 0.0, 1.0]);
        assert_eq!(g.eval(&ExtendedComplex::from_i64(p, 3)).re.to_f64(), 9.0);
        assert_eq!(ParamPoly::from_f64(p, &[2.0, 0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn binomial_fifth_power() {
        let p = 160;
        // Pascal's row computed independently of the polynomial code
        let mut row = vec![1i64];
        for _ in 0..5 {
            let mut next = vec![1i64];
            next.extend(row.windows(2).map(|w| w[0] + w[1]));
            next.push(1);
            row = next;
        }
        let f = ParamPoly::new(row.iter().map(|&c| ExtendedComplex::from_i64(p, c)).collect(), p);
        let v = f.eval(&ExtendedComplex::one(p));
        let err = (&v.re - &ExtendedFloat::from_i64(p, 32)).abs();
        assert!(err <= ExtendedFloat::one(p).mul_2exp(-(p as i64) + 4));

        let one_plus_t = ParamPoly::from_f64(p, &[1.0, 1.0]);
        let mut pw = ParamPoly::from_f64(p, &[1.0]);
        for _ in 0..5 {
            pw = pw.mul(&one_plus_t);
        }
        assert_eq!(pw, f);
    }

    #[test]
    fn abs_bound_dominates_samples() {
        let p = 96;
        let f = ParamPoly::from_f64(p, &[1.0, -3.0, 0.5, 2.0]);
        let r = ExtendedFloat::from_f64(p, 0.5);
        let bound = f.abs_bound(&r);
        for k in 0..32 {
            let ang = ExtendedFloat::from_f64(p, k as f64 / 32.0);
            let t = ExtendedComplex::cis_turns(&ang).scale(&r);
            assert!(f.eval(&t).abs() <= bound);
        }
        let df = f.derivative();
        assert_eq!(df, ParamPoly::from_f64(p, &[-3.0, 1.0, 6.0]));
    }
}
