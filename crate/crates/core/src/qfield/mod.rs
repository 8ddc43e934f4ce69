//! Rationals, the places of Q, valuations and the product formula.

mod bigreal;

pub use bigreal::{BigReal, DEFAULT_PRECISION, MIN_PRECISION};

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"`, `"num"` or a plain decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |m: &str| Error::parse(format!("{s:?}"), m);
    if t.is_empty() {
        return Err(bad("empty rational"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let whole = whole.trim_start_matches(['+', '-']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole.chars().all(|c| c.is_ascii_digit())
            || (whole.is_empty() && frac.is_empty())
        {
            return Err(bad("bad decimal"));
        }
        let digits = format!("{whole}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| bad("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| bad("bad integer"))
}

/// `"num"` when the denominator is 1, else `"num/den"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A rational prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(p: impl Into<BigUint>) -> Result<Self> {
        let p = p.into();
        if num_prime::nt_funcs::is_prime(&p, None).probably() {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub(crate) fn new_unchecked(p: BigUint) -> Self {
        Prime(p)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.0.clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `log p` at the given precision.
    pub fn ln(&self, precision: usize) -> BigReal {
        BigReal::ln_abs_int(&self.to_bigint(), precision)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Prime {
    /// Panics if `p` is not prime.
    fn from(p: u32) -> Self {
        Prime::new(BigUint::from(p)).expect("prime literal")
    }
}

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Finite(Prime),
}

impl Place {
    pub fn finite(p: u32) -> Place {
        Place::Finite(Prime::from(p))
    }

    /// `N_v = [Q_v : Q_p]`, always 1 over Q.
    pub fn local_degree(&self) -> u32 {
        1
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    pub fn prime(&self) -> Option<&Prime> {
        match self {
            Place::Archimedean => None,
            Place::Finite(p) => Some(p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => f.write_str("arch"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    /// Accepts `arch`, `inf`, `oo` or a prime.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "arch" | "inf" | "oo" | "infinity" => Ok(Place::Archimedean),
            _ => {
                let p = BigUint::from_str(t)
                    .map_err(|_| Error::parse(format!("{s:?}"), "expected 'arch' or a prime"))?;
                Ok(Place::Finite(Prime::new(p)?))
            }
        }
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: &Prime) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let p = p.to_bigint();
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(x) = v_p(num) − v_p(den)`.
pub fn valuation(x: &Rational, p: &Prime) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(valuation_int(x.numer(), p)? - valuation_int(x.denom(), p)?)
}

/// `c · log p` with an exact rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLog {
    pub prime: Prime,
    pub coeff: Rational,
}

impl FiniteLog {
    pub fn zero(prime: Prime) -> Self {
        FiniteLog {
            prime,
            coeff: Rational::zero(),
        }
    }

    pub fn new(prime: Prime, coeff: Rational) -> Self {
        FiniteLog { prime, coeff }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_bigreal(&self, precision: usize) -> BigReal {
        if self.coeff.is_zero() {
            return BigReal::zero(precision);
        }
        let c = BigReal::from_rational(&self.coeff, precision + 16);
        (c * self.prime.ln(precision + 16)).with_precision(precision)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigreal(64).to_f64()
    }

    fn check(&self, other: &FiniteLog) {
        assert_eq!(self.prime, other.prime, "FiniteLog at different primes");
    }
}

impl Add for FiniteLog {
    type Output = FiniteLog;
    fn add(self, rhs: FiniteLog) -> FiniteLog {
        self.check(&rhs);
        FiniteLog::new(self.prime, self.coeff + rhs.coeff)
    }
}

impl Sub for FiniteLog {
    type Output = FiniteLog;
    fn sub(self, rhs: FiniteLog) -> FiniteLog {
        self.check(&rhs);
        FiniteLog::new(self.prime, self.coeff - rhs.coeff)
    }
}

impl Neg for FiniteLog {
    type Output = FiniteLog;
    fn neg(self) -> FiniteLog {
        FiniteLog::new(self.prime, -self.coeff)
    }
}

impl Mul<&Rational> for FiniteLog {
    type Output = FiniteLog;
    fn mul(self, rhs: &Rational) -> FiniteLog {
        FiniteLog::new(self.prime, self.coeff * rhs)
    }
}

/// `log|x|_p = −v_p(x)·log p`, exactly.
pub fn log_abs_finite(x: &Rational, p: &Prime) -> Result<FiniteLog> {
    let v = valuation(x, p)?;
    Ok(FiniteLog::new(p.clone(), int(-v)))
}

/// `log|x|_v`: `log|x|` at the archimedean place, `−v_p(x)·log p` at p.
pub fn log_abs(x: &Rational, v: &Place, precision: usize) -> Result<BigReal> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    match v {
        Place::Archimedean => {
            let n = BigReal::ln_abs_int(x.numer(), precision + 16);
            let d = BigReal::ln_abs_int(x.denom(), precision + 16);
            Ok((n - d).with_precision(precision))
        }
        Place::Finite(p) => Ok(log_abs_finite(x, p)?.to_bigreal(precision)),
    }
}

/// Prime factors of a nonzero integer.
pub fn prime_factors(n: &BigInt) -> BTreeSet<Prime> {
    let m = n.magnitude().clone();
    if m <= BigUint::one() {
        return BTreeSet::new();
    }
    num_prime::nt_funcs::factorize(m)
        .into_keys()
        .map(Prime::new_unchecked)
        .collect()
}

/// Primes dividing the numerator or denominator of `x`.
pub fn support_primes(x: &Rational) -> Result<BTreeSet<Prime>> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let mut s = prime_factors(x.numer());
    s.extend(prime_factors(x.denom()));
    Ok(s)
}

/// `Σ_v log|x|_v` evaluated in floating point; zero up to rounding.
pub fn product_formula_residual(x: &Rational, precision: usize) -> Result<BigReal> {
    let mut acc = log_abs(x, &Place::Archimedean, precision)?;
    for p in support_primes(x)? {
        acc = acc + log_abs(x, &Place::Finite(p), precision)?;
    }
    Ok(acc)
}
