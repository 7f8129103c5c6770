use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::float::ExtendedFloat;

/// Complex number with [`ExtendedFloat`] parts.
#[derive(Clone, PartialEq)]
pub struct ExtendedComplex {
    pub re: ExtendedFloat,
    pub im: ExtendedFloat,
}

impl ExtendedComplex {
    pub fn new(re: ExtendedFloat, im: ExtendedFloat) -> Self {
        ExtendedComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(ExtendedFloat::zero(prec), ExtendedFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(ExtendedFloat::one(prec), ExtendedFloat::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(ExtendedFloat::zero(prec), ExtendedFloat::one(prec))
    }

    pub fn from_real(re: ExtendedFloat) -> Self {
        let p = re.prec();
        Self::new(re, ExtendedFloat::zero(p))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self::new(ExtendedFloat::from_f64(prec, re), ExtendedFloat::from_f64(prec, im))
    }

    pub fn from_i64(prec: u32, re: i64) -> Self {
        Self::from_real(ExtendedFloat::from_i64(prec, re))
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    /// `r e^{i angle}`.
    pub fn from_polar(r: &ExtendedFloat, angle: &ExtendedFloat) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(r * &c, r * &s)
    }

    /// `e^{2 pi i x}` with the angle reduced modulo one before the trig call.
    pub fn cis_turns(x: &ExtendedFloat) -> Self {
        let p = x.prec();
        let frac = x.fract_floor();
        let angle = ExtendedFloat::pi(p + 8).mul_2exp(1).mul_prec(&frac, p + 8);
        let (s, c) = angle.sin_cos();
        Self::new(c.round_to(p), s.round_to(p))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self::new(self.re.round_to(prec), self.im.round_to(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> ExtendedFloat {
        let p = self.prec();
        self.re.mul_prec(&self.re, p + 2).add_prec(&self.im.mul_prec(&self.im, p + 2), p)
    }

    /// Modulus `|z|`.
    pub fn abs(&self) -> ExtendedFloat {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let p = self.prec();
        self.re.mul_prec(&self.re, p + 4).add_prec(&self.im.mul_prec(&self.im, p + 4), p + 4).sqrt().round_to(p)
    }

    /// `log |z|`; `z` must be nonzero.
    pub fn log_abs(&self) -> ExtendedFloat {
        assert!(!self.is_zero(), "log_abs of zero");
        let p = self.prec();
        self.norm_sqr().round_to(p + 4).ln().mul_2exp(-1).round_to(p)
    }

    /// `max(|re|, |im|)`, cheap magnitude proxy within a factor `sqrt 2` of `|z|`.
    pub fn abs_max_part(&self) -> ExtendedFloat {
        self.re.abs().max_ref(&self.im.abs()).clone()
    }

    pub fn scale(&self, k: &ExtendedFloat) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        Self::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let p = self.prec();
        let n = self.norm_sqr().round_to(p + 4);
        Self::new(self.re.div_prec(&n, p), (-&self.im).div_prec(&n, p))
    }

    pub fn powu(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Principal square root, branch cut on the negative real axis.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let w = p + 8;
        let r = self.round_to(w).abs();
        if !self.re.is_sign_negative() {
            let u = r.add_prec(&self.re, w).mul_2exp(-1).sqrt();
            let v = self.im.div_prec(&u.mul_2exp(1), w);
            Self::new(u.round_to(p), v.round_to(p))
        } else {
            let mut v = r.sub_prec(&self.re, w).mul_2exp(-1).sqrt();
            if self.im.is_sign_negative() {
                v = -v;
            }
            let u = self.im.div_prec(&v.mul_2exp(1), w);
            Self::new(u.round_to(p), v.round_to(p))
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_decimal(18), self.im.to_decimal(18))
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Neg for &ExtendedComplex {
    type Output = ExtendedComplex;
    fn neg(self) -> ExtendedComplex {
        ExtendedComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for ExtendedComplex {
    type Output = ExtendedComplex;
    fn neg(self) -> ExtendedComplex {
        -&self
    }
}

impl Add<&ExtendedComplex> for &ExtendedComplex {
    type Output = ExtendedComplex;
    fn add(self, rhs: &ExtendedComplex) -> ExtendedComplex {
        ExtendedComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&ExtendedComplex> for &ExtendedComplex {
    type Output = ExtendedComplex;
    fn sub(self, rhs: &ExtendedComplex) -> ExtendedComplex {
        ExtendedComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&ExtendedComplex> for &ExtendedComplex {
    type Output = ExtendedComplex;
    fn mul(self, rhs: &ExtendedComplex) -> ExtendedComplex {
        let p = self.prec().max(rhs.prec());
        let w = p + 4;
        let (a, b, c, d) = (&self.re, &self.im, &rhs.re, &rhs.im);
        let re = a.mul_prec(c, w).sub_prec(&b.mul_prec(d, w), p);
        let im = a.mul_prec(d, w).add_prec(&b.mul_prec(c, w), p);
        ExtendedComplex::new(re, im)
    }
}

impl Div<&ExtendedComplex> for &ExtendedComplex {
    type Output = ExtendedComplex;
    fn div(self, rhs: &ExtendedComplex) -> ExtendedComplex {
        assert!(!rhs.is_zero(), "complex division by zero");
        let p = self.prec().max(rhs.prec());
        let w = p + 6;
        let n = rhs.norm_sqr().round_to(w);
        let num = &self.round_to(w) * &rhs.conj().round_to(w);
        ExtendedComplex::new(num.re.div_prec(&n, p), num.im.div_prec(&n, p))
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<ExtendedComplex> for ExtendedComplex {
            type Output = ExtendedComplex;
            fn $method(self, rhs: ExtendedComplex) -> ExtendedComplex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExtendedComplex> for ExtendedComplex {
            type Output = ExtendedComplex;
            fn $method(self, rhs: &ExtendedComplex) -> ExtendedComplex {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExtendedComplex> for &ExtendedComplex {
            type Output = ExtendedComplex;
            fn $method(self, rhs: ExtendedComplex) -> ExtendedComplex {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ExtendedComplex {
        ExtendedComplex::from_f64(128, re, im)
    }

    #[test]
    fn field_operations_match_f64() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        let za = Complex64::new(1.5, -2.0);
        let zb = Complex64::new(-0.25, 3.0);
        for (x, z) in [(&a * &b, za * zb), (&a / &b, za / zb), (&a + &b, za + zb), (&a - &b, za - zb)] {
            assert!((x.to_c64() - z).norm() < 1e-14, "{x:?} vs {z}");
        }
        assert!(((&a * &a.recip()).to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-30);
    }

    #[test]
    fn principal_sqrt() {
        for &(re, im) in &[(4.0, 0.0), (-4.0, 0.0), (-4.0, -1e-30), (0.0, 2.0), (3.0, -4.0), (-3.0, 4.0)] {
            let z = c(re, im);
            let s = z.sqrt();
            let back = s.square();
            assert!((back.to_c64() - z.to_c64()).norm() < 1e-14 * (1.0 + z.to_c64().norm()));
            assert!(!s.re.is_sign_negative(), "sqrt({re},{im}) = {s:?}");
            let expect = Complex64::new(re, im).sqrt();
            assert!((s.to_c64() - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn log_abs_of_tiny_modulus() {
        let tiny = ExtendedFloat::from_i64(128, -100_000).exp();
        let z = ExtendedComplex::new(tiny.clone(), tiny);
        let l = z.log_abs();
        let expect = -100_000.0 + 0.5 * 2f64.ln();
        assert!((l.to_f64() - expect).abs() < 1e-9);
    }

    #[test]
    fn cis_turns_reduces_argument() {
        let x = ExtendedFloat::from_f64(200, 12.25);
        let z = ExtendedComplex::cis_turns(&x);
        assert!((z.to_c64() - Complex64::new(0.0, 1.0)).norm() < 1e-40);
        let p = c(2.0, 1.0).powu(5);
        assert!((p.to_c64() - Complex64::new(2.0, 1.0).powu(5)).norm() < 1e-12);
    }
}
