//! Arbitrary-precision binary floating point used for log-scale quantities.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_traits::Zero;

use super::Rational;

/// Smallest accepted working precision, in bits.
pub const MIN_PRECISION: usize = 53;

/// Default working precision, in bits.
pub const DEFAULT_PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number carried at a fixed binary precision.
///
/// Binary operations run at the larger of the two operand precisions.
#[derive(Debug)]
pub struct BigReal {
    value: BigFloat,
    precision: usize,
}

impl Clone for BigReal {
    fn clone(&self) -> Self {
        BigReal {
            value: self.value.clone(),
            precision: self.precision,
        }
    }
}

fn clamp_precision(p: usize) -> usize {
    p.max(MIN_PRECISION)
}

impl BigReal {
    pub fn zero(precision: usize) -> Self {
        Self::from_f64(0.0, precision)
    }

    pub fn one(precision: usize) -> Self {
        Self::from_f64(1.0, precision)
    }

    pub fn from_f64(x: f64, precision: usize) -> Self {
        let precision = clamp_precision(precision);
        BigReal {
            value: BigFloat::from_f64(x, precision),
            precision,
        }
    }

    pub fn from_i64(x: i64, precision: usize) -> Self {
        let precision = clamp_precision(precision);
        BigReal {
            value: BigFloat::from_i64(x, precision),
            precision,
        }
    }

    /// Rounds an arbitrary integer to `precision` bits.
    pub fn from_bigint(n: &BigInt, precision: usize) -> Self {
        let precision = clamp_precision(precision);
        if n.is_zero() {
            return Self::zero(precision);
        }
        let (sign, words) = n.to_u64_digits();
        let sign = if sign == IntSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exponent = (64 * words.len()) as i32;
        let mut value = BigFloat::from_words(&words, sign, exponent);
        value
            .set_precision(precision, RM)
            .expect("precision within range");
        BigReal { value, precision }
    }

    pub fn from_rational(q: &Rational, precision: usize) -> Self {
        let num = Self::from_bigint(q.numer(), precision + 8);
        let den = Self::from_bigint(q.denom(), precision + 8);
        let mut out = &num / &den;
        out.set_precision(precision);
        out
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn set_precision(&mut self, precision: usize) {
        let precision = clamp_precision(precision);
        self.value
            .set_precision(precision, RM)
            .expect("precision within range");
        self.precision = precision;
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        self.set_precision(precision);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn abs(&self) -> Self {
        BigReal {
            value: self.value.abs(),
            precision: self.precision,
        }
    }

    /// Natural logarithm. Returns NaN for non-positive input.
    pub fn ln(&self) -> Self {
        let p = self.precision;
        let value = with_consts(|cc| self.value.ln(p, RM, cc));
        BigReal {
            value,
            precision: p,
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.precision;
        let value = with_consts(|cc| self.value.exp(p, RM, cc));
        BigReal {
            value,
            precision: p,
        }
    }

    pub fn sqrt(&self) -> Self {
        let p = self.precision;
        BigReal {
            value: self.value.sqrt(p, RM),
            precision: p,
        }
    }

    /// Natural logarithm of a nonzero integer's absolute value.
    pub fn ln_abs_int(n: &BigInt, precision: usize) -> Self {
        Self::from_bigint(n, precision + 16).abs().ln().with_precision(precision)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        self * &BigReal::from_f64(x, self.precision)
    }

    /// Nearest double.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.value.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exponent, _) = self.value.as_raw_parts().expect("finite value");
        let top = *words.last().expect("nonempty mantissa");
        let next = if words.len() > 1 {
            words[words.len() - 2]
        } else {
            0
        };
        let mantissa = top as f64 + next as f64 / 18446744073709551616.0;
        let shift = exponent as i64 - 64;
        let mut out = mantissa;
        let mut remaining = shift;
        while remaining > 1000 {
            out *= 2f64.powi(1000);
            remaining -= 1000;
        }
        while remaining < -1000 {
            out *= 2f64.powi(-1000);
            remaining += 1000;
        }
        out *= 2f64.powi(remaining as i32);
        if sign == Sign::Neg {
            -out
        } else {
            out
        }
    }

    /// Decimal rendering with the number of significant digits the precision supports.
    pub fn to_decimal_string(&self) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize;
        let mut rounded = self.value.clone();
        let _ = rounded.set_precision(self.precision, RM);
        let s = with_consts(|cc| rounded.format(Radix::Dec, RM, cc)).unwrap_or_default();
        trim_mantissa(&s, digits.max(1))
    }
}

/// Truncates the mantissa of a `d.ddddde±x` string to `digits` significant digits.
fn trim_mantissa(s: &str, digits: usize) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mut kept = String::new();
    let mut count = 0;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        kept.push(ch);
    }
    if kept.contains('.') {
        while kept.ends_with('0') {
            kept.pop();
        }
        if kept.ends_with('.') {
            kept.pop();
        }
    }
    format!("{kept}{exp}")
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let p = self.precision.max(rhs.precision);
                BigReal {
                    value: self.value.$call(&rhs.value, p, RM),
                    precision: p,
                }
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            value: -self.value.clone(),
            precision: self.precision,
        }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(iter: I) -> BigReal {
        let mut acc: Option<BigReal> = None;
        for x in iter {
            acc = Some(match acc {
                None => x,
                Some(a) => a + x,
            });
        }
        acc.unwrap_or_else(|| BigReal::zero(DEFAULT_PRECISION))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_roundtrip_matches_f64() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = BigReal::from_bigint(&n, 256);
        assert!((x.to_f64() - 1.2345678901234568e29).abs() < 1e14);
        let neg = BigReal::from_bigint(&(-n), 256);
        assert!(neg.is_negative());
    }

    #[test]
    fn ln_of_two() {
        let x = BigReal::from_i64(2, 256).ln();
        assert!((x.to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
        let s = x.to_decimal_string();
        assert!(s.starts_with("6.93147180559945309417232121458176568"), "{s}");
    }

    #[test]
    fn small_values_to_f64() {
        let x = BigReal::from_f64(3.5e-200, 128);
        assert_eq!(x.to_f64(), 3.5e-200);
        assert_eq!(BigReal::from_f64(-0.75, 64).to_f64(), -0.75);
    }

    #[test]
    fn rational_conversion() {
        let q = Rational::new(BigInt::from(-35), BigInt::from(11));
        let x = BigReal::from_rational(&q, 200);
        assert!((x.to_f64() + 35.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn precision_floor() {
        assert_eq!(BigReal::from_f64(1.0, 8).precision(), MIN_PRECISION);
    }
}
