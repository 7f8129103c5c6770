//! Binary floating point with an MPFR significand and a 64-bit exponent.
//!
//! MPFR keeps exponents in a 32-bit window, which is too narrow for orbit
//! magnitudes such as `2^(-2^40)`. [`ExtendedFloat`] stores the significand in
//! a [`rug::Float`] pinned to MPFR exponent zero and carries the binary
//! exponent separately as an `i64`. Every operation is evaluated by MPFR on
//! the significands, so results are correctly rounded at the target
//! precision (addition of operands more than `prec + 2` binades apart
//! returns the larger operand rounded, which is within one ulp).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::NegAssign;
use rug::{Float, Integer};

/// Exponent magnitude below which a value can be materialised as a plain
/// MPFR float without leaving the default exponent window.
const FLOAT_SAFE_EXP: i64 = 1 << 28;

/// Arbitrary precision real with unbounded binary exponent.
///
/// Value is `mant * 2^exp` where `mant` is zero or `0.5 <= |mant| < 1`.
#[derive(Clone)]
pub struct ExtendedFloat {
    mant: Float,
    exp: i64,
}

fn guard_bits(e: i64) -> u32 {
    64 + (64 - e.unsigned_abs().leading_zeros())
}

impl ExtendedFloat {
    fn from_parts(mut mant: Float, exp: i64) -> Self {
        debug_assert!(!mant.is_nan() && !mant.is_infinite(), "non-finite significand");
        if mant.is_zero() {
            if mant.is_sign_negative() {
                mant.neg_assign();
            }
            return ExtendedFloat { mant, exp: 0 };
        }
        let e = mant.get_exp().expect("finite nonzero significand");
        if e != 0 {
            mant >>= e;
        }
        ExtendedFloat { mant, exp: exp.checked_add(e as i64).expect("binary exponent overflow") }
    }

    pub fn from_float(f: Float) -> Self {
        Self::from_parts(f, 0)
    }

    pub fn zero(prec: u32) -> Self {
        ExtendedFloat { mant: Float::new(prec), exp: 0 }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1)
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        assert!(x.is_finite(), "ExtendedFloat::from_f64 on non-finite {x}");
        Self::from_parts(Float::with_val(prec, x), 0)
    }

    pub fn from_i64(prec: u32, x: i64) -> Self {
        Self::from_parts(Float::with_val(prec, x), 0)
    }

    pub fn from_integer(prec: u32, x: &Integer) -> Self {
        Self::from_parts(Float::with_val(prec, x), 0)
    }

    /// `num / den` rounded to `prec`.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        Self::from_i64(prec + 8, num).div_prec(&Self::from_i64(prec + 8, den), prec)
    }

    pub fn pi(prec: u32) -> Self {
        Self::from_parts(Float::with_val(prec, Constant::Pi), 0)
    }

    pub fn ln2(prec: u32) -> Self {
        Self::from_parts(Float::with_val(prec, Constant::Log2), 0)
    }

    pub fn prec(&self) -> u32 {
        self.mant.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        !self.is_zero() && self.mant.is_sign_negative()
    }

    /// Binary exponent `e` with `0.5 <= |x| / 2^e < 1`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp)
        }
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self::from_parts(Float::with_val(prec, &self.mant), self.exp)
    }

    pub fn abs(&self) -> Self {
        ExtendedFloat { mant: self.mant.clone().abs(), exp: self.exp }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        ExtendedFloat { mant: self.mant.clone(), exp: self.exp.checked_add(k).expect("binary exponent overflow") }
    }

    pub fn add_prec(&self, rhs: &Self, prec: u32) -> Self {
        if rhs.is_zero() {
            return self.round_to(prec);
        }
        if self.is_zero() {
            return rhs.round_to(prec);
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let diff = big.exp - small.exp;
        let limit = prec.max(big.prec()).max(small.prec()) as i64 + 2;
        if diff > limit {
            return big.round_to(prec);
        }
        let mut shifted = small.mant.clone();
        shifted >>= diff as i32;
        Self::from_parts(Float::with_val(prec, &big.mant + &shifted), big.exp)
    }

    pub fn sub_prec(&self, rhs: &Self, prec: u32) -> Self {
        self.add_prec(&rhs.neg_ref(), prec)
    }

    pub fn mul_prec(&self, rhs: &Self, prec: u32) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(Float::with_val(prec, &self.mant * &rhs.mant), self.exp + rhs.exp)
    }

    pub fn div_prec(&self, rhs: &Self, prec: u32) -> Self {
        assert!(!rhs.is_zero(), "ExtendedFloat division by zero");
        if self.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(Float::with_val(prec, &self.mant / &rhs.mant), self.exp - rhs.exp)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_prec(&Self::from_i64(64, k), self.prec())
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div_prec(&Self::from_i64(64, k), self.prec())
    }

    pub fn square(&self) -> Self {
        self.mul_prec(self, self.prec())
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_sign_negative(), "sqrt of negative ExtendedFloat");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec();
        let (m, e) = if self.exp % 2 != 0 { (Float::with_val(prec + 1, &self.mant << 1u32), self.exp - 1) } else { (self.mant.clone(), self.exp) };
        Self::from_parts(Float::with_val(prec, m.sqrt_ref()), e / 2)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(!self.is_zero() && !self.is_sign_negative(), "ln of non-positive ExtendedFloat");
        let prec = self.prec();
        let work = prec + guard_bits(self.exp);
        let mut l = Float::with_val(work, self.mant.ln_ref());
        if self.exp != 0 {
            let mut e_ln2 = Float::with_val(work, Constant::Log2);
            e_ln2 *= Float::with_val(64, self.exp);
            l += e_ln2;
        }
        Self::from_parts(Float::with_val(prec, &l), 0)
    }

    /// `e^x`; panics when the result exponent leaves the `i64` range.
    pub fn exp(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() || self.exp < -(prec as i64) - 16 {
            // e^x = 1 + x + ..., x below half an ulp of 1
            return Self::one(prec).add_prec(self, prec);
        }
        assert!(self.exp <= 61, "ExtendedFloat::exp argument too large");
        let work = prec + guard_bits(self.exp) + 16;
        let x = self.to_float(work);
        let ln2 = Float::with_val(work, Constant::Log2);
        let k = Float::with_val(work, &x / &ln2).round().to_integer().expect("finite");
        let k_i64 = k.to_i64().expect("exponent fits i64");
        let r = Float::with_val(work, &x - Float::with_val(work, &ln2 * &k));
        Self::from_parts(Float::with_val(prec, r.exp_ref()), k_i64)
    }

    /// `(sin x, cos x)`; the argument must have moderate magnitude.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec();
        assert!(self.exp < FLOAT_SAFE_EXP, "sin_cos argument too large");
        if self.exp < -FLOAT_SAFE_EXP {
            return (self.clone(), Self::one(prec));
        }
        let x = self.to_float(prec);
        let (s, c) = x.sin_cos(Float::new(prec));
        (Self::from_float(s), Self::from_float(c))
    }

    /// Value as a plain MPFR float; the exponent must be in MPFR's window.
    pub fn to_float(&self, prec: u32) -> Float {
        assert!(self.exp.abs() < FLOAT_SAFE_EXP, "exponent {} outside MPFR range", self.exp);
        let mut f = Float::with_val(prec, &self.mant);
        if self.exp != 0 {
            f <<= self.exp as i32;
        }
        f
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exp > 2000 {
            return if self.is_sign_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if self.exp < -2000 {
            return if self.is_sign_negative() { -0.0 } else { 0.0 };
        }
        let mut f = Float::with_val(self.prec(), &self.mant);
        f <<= self.exp as i32;
        f.to_f64()
    }

    /// `log2 |x|` in double precision; `-inf` for zero.
    pub fn log2_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exp as f64 + self.mant.to_f64().abs().log2()
    }

    pub fn ceil_to_integer(&self) -> Integer {
        if self.is_zero() {
            return Integer::new();
        }
        let f = self.to_float(self.prec().max(64));
        f.ceil().to_integer().expect("finite")
    }

    pub fn floor_to_integer(&self) -> Integer {
        if self.is_zero() {
            return Integer::new();
        }
        let f = self.to_float(self.prec().max(64));
        f.floor().to_integer().expect("finite")
    }

    /// Fractional part `x - floor(x)` in `[0, 1)`.
    pub fn fract_floor(&self) -> Self {
        if self.is_zero() || self.exp <= 0 && !self.is_sign_negative() {
            return self.clone();
        }
        let prec = self.prec();
        let fl = Self::from_integer(prec + self.exp.max(0) as u32 + 8, &self.floor_to_integer());
        self.sub_prec(&fl, prec)
    }

    fn neg_ref(&self) -> Self {
        let mut mant = self.mant.clone();
        if !mant.is_zero() {
            mant.neg_assign();
        }
        ExtendedFloat { mant, exp: self.exp }
    }

    pub fn max_ref<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min_ref<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Decimal rendering `[-]d.ddd…e<exp>` with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(2);
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        if self.exp.abs() < FLOAT_SAFE_EXP {
            let f = self.to_float(self.prec());
            let (neg, ds, e10) = f.to_sign_string_exp(10, Some(digits));
            return format_sci(neg, &ds, e10.expect("finite") as i64 - 1);
        }
        // Beyond MPFR's window: split log10 |x| into integer and fractional parts.
        let work = self.prec().max(64) + guard_bits(self.exp) + 32;
        let abs = self.abs().round_to(work);
        let ln10 = Self::from_i64(work, 10).ln();
        let l10 = abs.ln().div_prec(&ln10, work);
        let e10 = l10.floor_to_integer();
        let frac = l10.sub_prec(&Self::from_integer(work, &e10), work);
        let m = frac.mul_prec(&ln10, work).exp().to_float(work);
        let (_, mut ds, me) = m.to_sign_string_exp(10, Some(digits));
        let mut e10 = e10.to_i64().expect("decimal exponent fits i64");
        let me = me.expect("finite");
        if me == 2 {
            // mantissa rounded up to 10.0
            e10 += 1;
            ds = format!("1{}", "0".repeat(digits - 1));
        }
        format_sci(self.is_sign_negative(), &ds, e10)
    }

    /// Parses a decimal literal with an arbitrarily large exponent.
    pub fn parse_decimal(prec: u32, s: &str) -> Option<Self> {
        let s = s.trim();
        let (mantissa, e10) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        if e10.abs() < 10_000_000 {
            let parsed = Float::parse(s).ok()?;
            let f = Float::with_val(prec, parsed);
            if !f.is_finite() {
                return None;
            }
            return Some(Self::from_float(f));
        }
        let m = Float::parse(mantissa).ok()?;
        let work = prec + guard_bits(e10) + 32;
        let m = Self::from_float(Float::with_val(work, m));
        let ln10 = Self::from_i64(work, 10).ln();
        let scale = ln10.mul_prec(&Self::from_i64(work, e10), work).exp();
        Some(m.mul_prec(&scale, prec))
    }
}

fn format_sci(neg: bool, digits: &str, e10: i64) -> String {
    let (head, tail) = digits.split_at(1);
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, e10)
}

impl PartialEq for ExtendedFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for ExtendedFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = if self.is_zero() {
            0
        } else if self.mant.is_sign_negative() {
            -1
        } else {
            1
        };
        let sb = if other.is_zero() {
            0
        } else if other.mant.is_sign_negative() {
            -1
        } else {
            1
        };
        if sa != sb || sa == 0 {
            return Some(sa.cmp(&sb));
        }
        let mag = self.exp.cmp(&other.exp).then_with(|| self.mant.cmp_abs(&other.mant).expect("finite significands"));
        Some(if sa > 0 { mag } else { mag.reverse() })
    }
}

impl fmt::Display for ExtendedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(20)))
    }
}

impl fmt::Debug for ExtendedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} bits]", self.to_decimal(20), self.prec())
    }
}

impl Neg for &ExtendedFloat {
    type Output = ExtendedFloat;
    fn neg(self) -> ExtendedFloat {
        self.neg_ref()
    }
}

impl Neg for ExtendedFloat {
    type Output = ExtendedFloat;
    fn neg(self) -> ExtendedFloat {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&ExtendedFloat> for &ExtendedFloat {
            type Output = ExtendedFloat;
            fn $method(self, rhs: &ExtendedFloat) -> ExtendedFloat {
                self.$imp(rhs, self.prec().max(rhs.prec()))
            }
        }
        impl $tr<ExtendedFloat> for ExtendedFloat {
            type Output = ExtendedFloat;
            fn $method(self, rhs: ExtendedFloat) -> ExtendedFloat {
                (&self).$imp(&rhs, self.prec().max(rhs.prec()))
            }
        }
        impl $tr<&ExtendedFloat> for ExtendedFloat {
            type Output = ExtendedFloat;
            fn $method(self, rhs: &ExtendedFloat) -> ExtendedFloat {
                (&self).$imp(rhs, self.prec().max(rhs.prec()))
            }
        }
        impl $tr<ExtendedFloat> for &ExtendedFloat {
            type Output = ExtendedFloat;
            fn $method(self, rhs: ExtendedFloat) -> ExtendedFloat {
                self.$imp(&rhs, self.prec().max(rhs.prec()))
            }
        }
    };
}

binop!(Add, add, add_prec);
binop!(Sub, sub, sub_prec);
binop!(Mul, mul, mul_prec);
binop!(Div, div, div_prec);

/// Rounding helper used by callers that need an upper bound in `f64`.
pub fn f64_round_up(x: &ExtendedFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.exp.abs() >= 2000 {
        return x.to_f64();
    }
    let mut f = Float::with_val(x.prec(), &x.mant);
    f <<= x.exp as i32;
    f.to_f64_round(Round::Up)
}
