use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::bigint_to_f64;
use crate::error::{Error, Result};
use crate::qfield::{parse_rational, Rational};

/// A point of P¹(Q) stored as coprime integers `(a, b)` with `b > 0`, or `(1, 0)` for ∞.
///
/// Points are ordered by value with ∞ last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    x: BigInt,
    y: BigInt,
}

impl ProjPointQ {
    /// `None` when both coordinates vanish.
    pub fn from_coords(a: BigInt, b: BigInt) -> Option<Self> {
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / &g, b / &g);
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
        }
        Some(ProjPointQ { x: a, y: b })
    }

    pub fn from_rational(q: &Rational) -> Self {
        ProjPointQ {
            x: q.numer().clone(),
            y: q.denom().clone(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ProjPointQ {
            x: BigInt::from(n),
            y: BigInt::one(),
        }
    }

    pub fn affine(p: i64, q: i64) -> Self {
        Self::from_coords(BigInt::from(p), BigInt::from(q)).expect("nonzero point")
    }

    pub fn infinity() -> Self {
        ProjPointQ {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| Rational::new(self.x.clone(), self.y.clone()))
    }

    /// `max(|a|, |b|)`.
    pub fn norm(&self) -> BigInt {
        self.x.abs().max(self.y.abs())
    }

    pub fn to_complex(&self) -> ProjPointC {
        let n = self.norm();
        let bits = n.bits();
        // keep about 60 significant bits
        let shift = bits.saturating_sub(60);
        let a = bigint_to_f64(&(&self.x >> shift));
        let b = bigint_to_f64(&(&self.y >> shift));
        ProjPointC::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }
}

impl Ord for ProjPointQ {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => (&self.x * &other.y).cmp(&(&other.x * &self.y)),
        }
    }
}

impl PartialOrd for ProjPointQ {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl FromStr for ProjPointQ {
    type Err = Error;

    /// `"p/q"`, an integer, or `"inf"`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "oo" | "infinity" | "∞" => Ok(ProjPointQ::infinity()),
            t => Ok(ProjPointQ::from_rational(&parse_rational(t)?)),
        }
    }
}

/// A point of P¹(C) with a double-precision lift of max-norm 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPointC {
    x: Complex64,
    y: Complex64,
}

impl ProjPointC {
    /// Panics if both coordinates vanish.
    pub fn new(x: Complex64, y: Complex64) -> Self {
        let n = x.norm().max(y.norm());
        assert!(n > 0.0 && n.is_finite(), "invalid projective point");
        ProjPointC { x: x / n, y: y / n }
    }

    pub fn affine(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        ProjPointC {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(0.0, 0.0),
        }
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    /// Affine coordinate, `None` at ∞.
    pub fn to_affine(&self) -> Option<Complex64> {
        (self.y.norm() > 0.0).then(|| self.x / self.y)
    }
}

/// A point given exactly over Q or numerically over C.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Rational(ProjPointQ),
    Complex(ProjPointC),
}

impl Point {
    pub fn to_complex(&self) -> ProjPointC {
        match self {
            Point::Rational(q) => q.to_complex(),
            Point::Complex(c) => *c,
        }
    }
}

impl From<ProjPointQ> for Point {
    fn from(p: ProjPointQ) -> Self {
        Point::Rational(p)
    }
}

impl From<ProjPointC> for Point {
    fn from(p: ProjPointC) -> Self {
        Point::Complex(p)
    }
}
