//! Homogeneous lifts of rational maps on P¹, resultants, chordal distances, evaluation.

mod forms;
mod point;

pub use forms::{form_eval, form_eval_c, form_mul, Form};
pub use point::{Point, ProjPointC, ProjPointQ};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::qfield::{
    format_rational, int, log_abs, parse_rational, prime_factors, valuation, valuation_int, BigReal,
    FiniteLog, Place, Prime, Rational,
};

/// Largest admissible degree of an iterated lift.
pub const MAX_ITERATED_DEGREE: usize = 4096;

/// A pair of degree-`d` binary forms with rational coefficients.
///
/// `coeffs0[i]` is the coefficient of `X^{d-i} Y^i` in `F₀`, likewise for `F₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousLift {
    pub degree: usize,
    pub coeffs0: Vec<Rational>,
    pub coeffs1: Vec<Rational>,
}

impl HomogeneousLift {
    pub fn new(degree: usize, coeffs0: Vec<Rational>, coeffs1: Vec<Rational>) -> Result<Self> {
        if coeffs0.len() != degree + 1 || coeffs1.len() != degree + 1 {
            return Err(Error::invalid(format!(
                "a degree-{degree} lift needs {} coefficients per form",
                degree + 1
            )));
        }
        Ok(HomogeneousLift {
            degree,
            coeffs0,
            coeffs1,
        })
    }

    pub fn from_ints(c0: &[i64], c1: &[i64]) -> Result<Self> {
        let conv = |c: &[i64]| {
            c.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect::<Vec<_>>()
        };
        HomogeneousLift::new(c0.len().saturating_sub(1), conv(c0), conv(c1))
    }

    fn from_forms(degree: usize, f0: &Form, f1: &Form) -> Self {
        let conv = |c: &Form| c.iter().cloned().map(Rational::from_integer).collect();
        HomogeneousLift {
            degree,
            coeffs0: conv(f0),
            coeffs1: conv(f1),
        }
    }

    /// The lift of the polynomial `Σ c_k z^k`, i.e. `(Y^d·p(X/Y), Y^d)`.
    pub fn polynomial(ascending: &[i64]) -> Result<Self> {
        let d = ascending.len().saturating_sub(1);
        let mut c0 = vec![0; d + 1];
        let mut c1 = vec![0; d + 1];
        for (k, &c) in ascending.iter().enumerate() {
            c0[d - k] = c;
        }
        c1[d] = 1;
        HomogeneousLift::from_ints(&c0, &c1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs0.iter().chain(&self.coeffs1).all(|c| c.is_zero())
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        HomogeneousLift {
            degree: self.degree,
            coeffs0: self.coeffs0.iter().map(|c| c * alpha).collect(),
            coeffs1: self.coeffs1.iter().map(|c| c * alpha).collect(),
        }
    }

    /// Integer forms `(L·F₀, L·F₁)` with `L` the lcm of the denominators.
    fn clear_denominators(&self) -> (BigInt, Form, Form) {
        let l = self
            .coeffs0
            .iter()
            .chain(&self.coeffs1)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lq = Rational::from_integer(l.clone());
        let conv = |c: &[Rational]| c.iter().map(|x| (x * &lq).to_integer()).collect();
        (l, conv(&self.coeffs0), conv(&self.coeffs1))
    }
}

impl fmt::Display for HomogeneousLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &[Rational]| {
            c.iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "d={} F0=[{}] F1=[{}]",
            self.degree,
            show(&self.coeffs0),
            show(&self.coeffs1)
        )
    }
}

/// Normalizes a lift to coprime integer coefficients, first nonzero coefficient of
/// `F₀` (else `F₁`) positive.
pub fn normalize_lift(f: &HomogeneousLift) -> Result<HomogeneousLift> {
    if f.is_zero() {
        return Err(Error::ZeroLift);
    }
    let (_, f0, f1) = f.clear_denominators();
    let (f0, f1) = normalize_forms(f0, f1);
    Ok(HomogeneousLift::from_forms(f.degree, &f0, &f1))
}

fn normalize_forms(mut f0: Form, mut f1: Form) -> (Form, Form) {
    let g = f0
        .iter()
        .chain(&f1)
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let first = f0
        .iter()
        .chain(&f1)
        .find(|c| !c.is_zero())
        .expect("nonzero lift");
    let g = if first.is_negative() { -g } else { g };
    for c in f0.iter_mut().chain(f1.iter_mut()) {
        *c = &*c / &g;
    }
    (f0, f1)
}

/// Sylvester matrix of two degree-`d` forms.
pub fn sylvester_matrix(f0: &[BigInt], f1: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = f0.len() - 1;
    let n = 2 * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..d {
        for j in 0..=d {
            m[i][i + j] = f0[j].clone();
            m[d + i][i + j] = f1[j].clone();
        }
    }
    m
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn integer_resultant(f0: &[BigInt], f1: &[BigInt]) -> BigInt {
    bareiss_determinant(sylvester_matrix(f0, f1))
}

/// Exact Sylvester resultant `Res(F₀, F₁)`.
pub fn resultant(f: &HomogeneousLift) -> Rational {
    let (l, f0, f1) = f.clear_denominators();
    let r = integer_resultant(&f0, &f1);
    Rational::new(r, num_traits::pow(l, 2 * f.degree))
}

/// A rational map of degree `d ≥ 1` on P¹ over Q with its normalized integer lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMapP1 {
    lift: HomogeneousLift,
    f0: Form,
    f1: Form,
    resultant: BigInt,
    bad_primes: BTreeSet<Prime>,
}

impl RationalMapP1 {
    pub fn new(lift: &HomogeneousLift) -> Result<Self> {
        if lift.degree == 0 {
            return Err(Error::invalid("degree must be positive"));
        }
        let lift = normalize_lift(lift)?;
        let (_, f0, f1) = lift.clear_denominators();
        let res = integer_resultant(&f0, &f1);
        if res.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let bad_primes = prime_factors(&res);
        Ok(RationalMapP1 {
            lift,
            f0,
            f1,
            resultant: res,
            bad_primes,
        })
    }

    pub fn from_ints(c0: &[i64], c1: &[i64]) -> Result<Self> {
        Self::new(&HomogeneousLift::from_ints(c0, c1)?)
    }

    /// The polynomial map `z ↦ Σ c_k z^k`.
    pub fn polynomial(ascending: &[i64]) -> Result<Self> {
        Self::new(&HomogeneousLift::polynomial(ascending)?)
    }

    /// `(F₀(z), F₁(z))` as polynomials in `z = X/Y`.
    pub fn from_polys(num: &QPoly, den: &QPoly) -> Result<Self> {
        let d = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        let lift = |p: &QPoly| (0..=d).map(|i| p.coeff(d - i)).collect::<Vec<_>>();
        Self::new(&HomogeneousLift::new(d, lift(num), lift(den))?)
    }

    pub fn degree(&self) -> usize {
        self.lift.degree
    }

    pub fn lift(&self) -> &HomogeneousLift {
        &self.lift
    }

    /// Integer coefficients of `F₀`.
    pub fn f0(&self) -> &[BigInt] {
        &self.f0
    }

    pub fn f1(&self) -> &[BigInt] {
        &self.f1
    }

    pub fn resultant(&self) -> &BigInt {
        &self.resultant
    }

    pub fn bad_primes(&self) -> &BTreeSet<Prime> {
        &self.bad_primes
    }

    /// `max |a|` over the coefficients of the normalized lift.
    pub fn max_coeff(&self) -> BigInt {
        self.f0
            .iter()
            .chain(&self.f1)
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// `v_p(Res(F))` for the normalized lift.
    pub fn resultant_valuation(&self, p: &Prime) -> i64 {
        valuation_int(&self.resultant, p).expect("nonzero resultant")
    }

    pub fn apply(&self, x: &ProjPointQ) -> ProjPointQ {
        let a = form_eval(&self.f0, x.x(), x.y());
        let b = form_eval(&self.f1, x.x(), x.y());
        ProjPointQ::from_coords(a, b).expect("F has no common zero")
    }

    /// `F(X)` without removing the content.
    pub fn apply_raw(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (form_eval(&self.f0, x, y), form_eval(&self.f1, x, y))
    }

    pub fn apply_c(&self, x: &ProjPointC) -> ProjPointC {
        let (a, b) = self.apply_c_raw(x.x(), x.y());
        ProjPointC::new(a, b)
    }

    /// `F(X)` in double precision.
    pub fn apply_c_raw(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (form_eval_c(&self.f0_f64(), x, y), form_eval_c(&self.f1_f64(), x, y))
    }

    pub fn f0_f64(&self) -> Vec<f64> {
        self.f0.iter().map(bigint_to_f64).collect()
    }

    pub fn f1_f64(&self) -> Vec<f64> {
        self.f1.iter().map(bigint_to_f64).collect()
    }

    pub fn apply_point(&self, x: &Point) -> Point {
        match x {
            Point::Rational(q) => Point::Rational(self.apply(q)),
            Point::Complex(c) => Point::Complex(self.apply_c(c)),
        }
    }

    /// Normalized lift of the `n`-th iterate.
    pub fn iterate(&self, n: usize) -> Result<RationalMapP1> {
        let lift = iterate_lift(&self.lift, n)?;
        RationalMapP1::new(&lift)
    }

    /// `φ⁻¹∘f∘φ` for `φ(z) = (az + b)/(cz + d)`.
    pub fn conjugate(&self, [a, b, c, d]: [i64; 4]) -> Result<RationalMapP1> {
        if a * d - b * c == 0 {
            return Err(Error::invalid("Möbius matrix is singular"));
        }
        let z = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let (h0, h1) = compose_forms(&self.f0, &self.f1, &z(&[a, b]), &z(&[c, d]));
        let (g0, g1) = compose_forms(&z(&[d, -b]), &z(&[-c, a]), &h0, &h1);
        RationalMapP1::new(&HomogeneousLift::from_forms(self.degree(), &g0, &g1))
    }

    /// `F₀(z,1)` and `F₁(z,1)`.
    pub fn dehomogenize(&self) -> (QPoly, QPoly) {
        (dehomogenize(&self.f0), dehomogenize(&self.f1))
    }

    pub fn to_json_value(&self) -> MapJson {
        MapJson {
            d: self.degree(),
            f0: self.f0.iter().map(|c| c.to_string()).collect(),
            f1: self.f1.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl fmt::Display for RationalMapP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.dehomogenize();
        write!(f, "({n}) / ({d})")
    }
}

/// JSON encoding of a map: `{"d": 2, "F0": ["1","0","-2"], "F1": ["0","0","1"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub d: usize,
    #[serde(rename = "F0")]
    pub f0: Vec<String>,
    #[serde(rename = "F1")]
    pub f1: Vec<String>,
}

impl MapJson {
    pub fn to_map(&self) -> Result<RationalMapP1> {
        let parse = |name: &str, v: &[String]| {
            v.iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_rational(s).map_err(|e| match e {
                        Error::Parse { message, .. } => Error::parse(format!("{name}[{i}]"), message),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()
        };
        let lift = HomogeneousLift::new(self.d, parse("F0", &self.f0)?, parse("F1", &self.f1)?)?;
        RationalMapP1::new(&lift)
    }
}

pub(crate) fn bigint_to_f64(n: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
}

fn dehomogenize(f: &[BigInt]) -> QPoly {
    let d = f.len() - 1;
    QPoly::new(
        (0..=d)
            .map(|k| Rational::from_integer(f[d - k].clone()))
            .collect(),
    )
}

/// `log‖F‖_v`; zero at every finite place for a normalized lift.
pub fn sup_norm_f(f: &HomogeneousLift, v: &Place, precision: usize) -> Result<BigReal> {
    let lift = normalize_lift(f)?;
    match v {
        Place::Finite(_) if lift == *f => Ok(BigReal::zero(precision)),
        Place::Finite(p) => {
            let nonzero = f.coeffs0.iter().chain(&f.coeffs1).filter(|c| !c.is_zero());
            let vmin = nonzero
                .map(|c| valuation(c, p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .unwrap();
            Ok(FiniteLog::new(p.clone(), int(-vmin)).to_bigreal(precision))
        }
        Place::Archimedean => {
            let m = f
                .coeffs0
                .iter()
                .chain(&f.coeffs1)
                .map(|c| c.abs())
                .max()
                .unwrap();
            log_abs(&m, v, precision)
        }
    }
}

/// Chordal distance `|X₀Y₁ − X₁Y₀|_v / (‖X‖_v‖Y‖_v)` with the max norm.
pub fn chordal_distance(x: &Point, y: &Point, v: &Place, precision: usize) -> Result<BigReal> {
    match (x, y, v) {
        (Point::Rational(a), Point::Rational(b), _) => Ok(chordal_distance_q(a, b, v, precision)),
        (_, _, Place::Finite(_)) => Err(Error::NonRationalPoint),
        _ => Ok(BigReal::from_f64(
            chordal_distance_c(&x.to_complex(), &y.to_complex()),
            precision,
        )),
    }
}

pub fn chordal_distance_q(x: &ProjPointQ, y: &ProjPointQ, v: &Place, precision: usize) -> BigReal {
    let cross = x.x() * y.y() - x.y() * y.x();
    if cross.is_zero() {
        return BigReal::zero(precision);
    }
    match v {
        Place::Archimedean => {
            let num = BigReal::from_bigint(&cross.abs(), precision);
            let den = BigReal::from_bigint(&(x.norm() * y.norm()), precision);
            num / den
        }
        Place::Finite(p) => {
            let e = valuation_int(&cross, p).expect("nonzero") as i64;
            p_power_inverse(p, e, precision)
        }
    }
}

/// `p^{-e}` as a BigReal.
fn p_power_inverse(p: &Prime, e: i64, precision: usize) -> BigReal {
    let pe = num_traits::pow(p.to_bigint(), e.unsigned_abs() as usize);
    let pe = BigReal::from_bigint(&pe, precision);
    if e >= 0 {
        BigReal::one(precision) / pe
    } else {
        pe
    }
}

/// `v_p` of the chordal distance: `dist_p = p^{-k}`.
pub fn chordal_valuation(x: &ProjPointQ, y: &ProjPointQ, p: &Prime) -> Option<i64> {
    let cross = x.x() * y.y() - x.y() * y.x();
    if cross.is_zero() {
        None
    } else {
        Some(valuation_int(&cross, p).expect("nonzero"))
    }
}

pub fn chordal_distance_c(x: &ProjPointC, y: &ProjPointC) -> f64 {
    let (x0, x1) = (x.x(), x.y());
    let (y0, y1) = (y.x(), y.y());
    let nx = x0.norm().max(x1.norm());
    let ny = y0.norm().max(y1.norm());
    ((x0 / nx) * (y1 / ny) - (x1 / nx) * (y0 / ny)).norm()
}

/// Composes `F` with itself symbolically; the result is normalized, of degree `d^n`.
pub fn iterate_lift(f: &HomogeneousLift, n: usize) -> Result<HomogeneousLift> {
    if n == 0 {
        return Err(Error::invalid("iterate needs n >= 1"));
    }
    let d = f.degree;
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_ITERATED_DEGREE)
        .ok_or_else(|| Error::DepthGuard(format!("{d}^{n} exceeds {MAX_ITERATED_DEGREE}")))?;
    let base = normalize_lift(f)?;
    let (_, b0, b1) = base.clear_denominators();
    let (mut g0, mut g1) = (b0.clone(), b1.clone());
    for _ in 1..n {
        let (h0, h1) = compose_forms(&b0, &b1, &g0, &g1);
        let (h0, h1) = normalize_forms(h0, h1);
        g0 = h0;
        g1 = h1;
    }
    Ok(HomogeneousLift::from_forms(total, &g0, &g1))
}

/// `(F₀(G₀,G₁), F₁(G₀,G₁))`.
pub fn compose_forms(f0: &[BigInt], f1: &[BigInt], g0: &[BigInt], g1: &[BigInt]) -> (Form, Form) {
    let d = f0.len() - 1;
    let mut p0 = vec![vec![BigInt::one()]];
    let mut p1 = vec![vec![BigInt::one()]];
    for k in 1..=d {
        p0.push(form_mul(&p0[k - 1], g0));
        p1.push(form_mul(&p1[k - 1], g1));
    }
    let len = d * (g0.len() - 1) + 1;
    let mut h0 = vec![BigInt::zero(); len];
    let mut h1 = vec![BigInt::zero(); len];
    for i in 0..=d {
        if f0[i].is_zero() && f1[i].is_zero() {
            continue;
        }
        let m = form_mul(&p0[d - i], &p1[i]);
        for (k, c) in m.iter().enumerate() {
            if !f0[i].is_zero() {
                h0[k] += &f0[i] * c;
            }
            if !f1[i].is_zero() {
                h1[k] += &f1[i] * c;
            }
        }
    }
    (h0, h1)
}

/// `Φ(z) = F₀⁽ⁿ⁾(z,1)F₁⁽ᵐ⁾(z,1) − F₀⁽ᵐ⁾(z,1)F₁⁽ⁿ⁾(z,1)`, whose roots are the affine
/// solutions of `fⁿ(z) = fᵐ(z)`.
pub fn preperiodicity_polynomial(f: &RationalMapP1, m: usize, n: usize) -> Result<QPoly> {
    if m >= n {
        return Err(Error::invalid("preperiodicity polynomial needs m < n"));
    }
    let lift_at = |k: usize| -> Result<(QPoly, QPoly)> {
        if k == 0 {
            Ok((QPoly::x(), QPoly::from_ints(&[1])))
        } else {
            let l = iterate_lift(f.lift(), k)?;
            let (_, a, b) = l.clear_denominators();
            Ok((dehomogenize(&a), dehomogenize(&b)))
        }
    };
    let (n0, n1) = lift_at(n)?;
    let (m0, m1) = lift_at(m)?;
    Ok(&(&n0 * &m1) - &(&m0 * &n1))
}
