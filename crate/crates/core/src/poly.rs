//! Dense univariate polynomials over Q.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::qfield::{format_rational, prime_factors, Rational};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(
            c.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// `z`.
    pub fn x() -> Self {
        QPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Rational::one() / l))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Same polynomial scaled to coprime integer coefficients.
    pub fn primitive_rational(&self) -> QPoly {
        match self.to_primitive_integers() {
            Some(c) => QPoly::new(c.into_iter().map(Rational::from_integer).collect()),
            None => QPoly::zero(),
        }
    }

    /// Integer coefficients with content 1 and positive leading term.
    pub fn to_primitive_integers(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for c in ints.iter_mut() {
            *c = &*c / &g * &sign;
        }
        Some(ints)
    }

    /// Yun's algorithm: `self = c · Π_k s_k^k` with squarefree, pairwise coprime monic `s_k`.
    /// Returns the list of `(s_k, k)` with nonconstant `s_k`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = vec![];
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// All distinct rational roots, by the rational root test.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = BTreeSet::new();
        let Some(ints) = self.to_primitive_integers() else {
            return vec![];
        };
        let shift = ints.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            roots.insert(Rational::zero());
        }
        let ints = &ints[shift..];
        if ints.len() > 1 {
            let p = QPoly::new(ints.iter().cloned().map(Rational::from_integer).collect());
            let nums = divisors(&ints[0]);
            let dens = divisors(ints.last().unwrap());
            for a in &nums {
                for b in &dens {
                    for s in [1, -1] {
                        let r = Rational::new(a * BigInt::from(s), b.clone());
                        if p.eval(&r).is_zero() {
                            roots.insert(r);
                        }
                    }
                }
            }
        }
        roots.into_iter().collect()
    }

    /// Composition `self(g(z))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &QPoly::constant(c.clone());
        }
        acc
    }
}

/// Positive divisors of a nonzero integer.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    let n = n.abs();
    for p in prime_factors(&n) {
        let p = p.to_bigint();
        let mut e = 0;
        let mut m = n.clone();
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        let mut next = Vec::with_capacity(out.len() * (e + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = format_rational(c);
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        Ok(())
    }
}
