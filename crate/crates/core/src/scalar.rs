//! Scalar and count abstractions the numeric routines are generic over.
//!
//! Orbit arithmetic (the beta-transformation, greedy digits, evaluation of
//! digit words) is written once against [`OrbitScalar`] and instantiated with
//! `f64`/`f32` for speed or [`BigRational`] when digits must be certified.
//! Word counting is written against [`Count`], instantiated with exact
//! [`BigUint`] counts or with [`LogCount`] for long words.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// An ordered field-like scalar able to run the greedy beta-transformation.
pub trait OrbitScalar:
    Clone
    + PartialOrd
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_digit(d: u32) -> Self;

    /// Floor of a non-negative value, `None` if negative or not representable.
    fn floor_digit(&self) -> Option<u32>;

    fn to_f64(&self) -> f64;
}

impl OrbitScalar for f64 {
    fn from_digit(d: u32) -> Self {
        f64::from(d)
    }

    fn floor_digit(&self) -> Option<u32> {
        if !self.is_finite() || *self < 0.0 || *self >= f64::from(u32::MAX) {
            return None;
        }
        Some(self.floor() as u32)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl OrbitScalar for f32 {
    fn from_digit(d: u32) -> Self {
        d as f32
    }

    fn floor_digit(&self) -> Option<u32> {
        if !self.is_finite() || *self < 0.0 || *self >= u32::MAX as f32 {
            return None;
        }
        Some(self.floor() as u32)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl OrbitScalar for BigRational {
    fn from_digit(d: u32) -> Self {
        BigRational::from_integer(BigInt::from(d))
    }

    fn floor_digit(&self) -> Option<u32> {
        if self.is_negative() {
            return None;
        }
        self.floor().to_integer().to_u32()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
}

/// Bit size of a rational (numerator plus denominator), used as the
/// precision measure of exact orbits.
pub fn rational_bits(x: &BigRational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Converts a rational to the nearest-ish `f64`, robust to huge components.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (x.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Parses a decimal literal (`"2"`, `"1.5"`, `"-0.25"`, `"1e-3"`) into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return domain("empty numeric literal");
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| crate::Error::Domain(format!("bad exponent in {text:?}")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return domain(format!("not a decimal literal: {text:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().expect("validated digits")
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// The rational a user meant by an `f64` parameter: its shortest round-trip
/// decimal representation (so `0.3` is `3/10`, not the nearest dyadic).
pub fn decimal_of(x: f64) -> BigRational {
    parse_decimal(&format!("{x}")).expect("f64 Display is a decimal literal")
}

/// Exact value of an `f64` as a dyadic rational.
pub fn exact_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// `floor` of a rational as a `BigInt`.
pub fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer strictly greater than `x`.
pub fn strict_ceil_above(x: &BigRational) -> BigInt {
    floor_int(x) + BigInt::one()
}

/// Largest integer strictly less than `x`.
pub fn strict_floor_below(x: &BigRational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        q - BigInt::one()
    } else {
        q
    }
}

/// A commutative counting semiring used by the dynamic programs.
pub trait Count: Clone + Debug + Send + Sync {
    /// The count of the empty set.
    fn empty() -> Self;
    /// The count of a single word.
    fn single() -> Self;
    fn is_empty(&self) -> bool;
    fn accumulate(&mut self, other: &Self);
    fn product(&self, other: &Self) -> Self;
    /// Natural logarithm, `-inf` for zero.
    fn ln(&self) -> f64;
}

impl Count for BigUint {
    fn empty() -> Self {
        BigUint::zero()
    }

    fn single() -> Self {
        BigUint::one()
    }

    fn is_empty(&self) -> bool {
        Zero::is_zero(self)
    }

    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn ln(&self) -> f64 {
        biguint_ln(self)
    }
}

/// Natural log of a big integer without overflowing `f64`.
pub fn biguint_ln(x: &BigUint) -> f64 {
    if Zero::is_zero(x) {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift as usize).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A count stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCount(pub f64);

impl Count for LogCount {
    fn empty() -> Self {
        LogCount(f64::NEG_INFINITY)
    }

    fn single() -> Self {
        LogCount(0.0)
    }

    fn is_empty(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    fn accumulate(&mut self, other: &Self) {
        let (a, b) = (self.0, other.0);
        if b == f64::NEG_INFINITY {
            return;
        }
        if a == f64::NEG_INFINITY {
            self.0 = b;
            return;
        }
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        self.0 = hi + (lo - hi).exp().ln_1p();
    }

    fn product(&self, other: &Self) -> Self {
        LogCount(self.0 + other.0)
    }

    fn ln(&self) -> f64 {
        self.0
    }
}
