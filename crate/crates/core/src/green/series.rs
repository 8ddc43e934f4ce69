use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{local_params, require_degree};
use crate::error::{Error, Result};
use crate::projmap::{form_eval_c, Point, ProjPointC, ProjPointQ, RationalMapP1};
use crate::qfield::{valuation_int, BigReal, FiniteLog, Place, Prime, Rational};

/// Largest working precision tried before giving up on an archimedean series.
const MAX_PRECISION: usize = 4096;

/// A truncated Green function value.
#[derive(Debug, Clone)]
pub struct GreenValue {
    pub value: BigReal,
    /// Certified bound for the discarded tail of the series.
    pub tail_bound: f64,
    /// Observed change when the working precision is raised.
    pub rounding: f64,
    /// Number of series terms summed.
    pub terms: usize,
    /// Exact value of the partial sum at a finite place, as a multiple of `log p`.
    pub exact: Option<FiniteLog>,
}

impl GreenValue {
    pub fn error(&self) -> f64 {
        self.tail_bound + self.rounding
    }

    fn zero(precision: usize, exact: Option<FiniteLog>) -> Self {
        GreenValue {
            value: BigReal::zero(precision),
            tail_bound: 0.0,
            rounding: 0.0,
            terms: 0,
            exact,
        }
    }
}

/// Smallest `N ≥ 0` with `C1·d^{−N}·d/(d−1) ≤ tol`.
pub fn tail_terms(c1: f64, d: usize, tol: f64) -> usize {
    if c1 == 0.0 {
        return 0;
    }
    let d = d as f64;
    let bound = |n: usize| c1 * d.powi(1 - n as i32) / (d - 1.0);
    let mut n = ((c1 * d / ((d - 1.0) * tol)).ln() / d.ln()).ceil().max(0.0) as usize;
    while n > 0 && bound(n - 1) <= tol {
        n -= 1;
    }
    while bound(n) > tol {
        n += 1;
    }
    n
}

/// `u_F(x) = (1/d)·log‖F(X)‖ − log‖X‖` at the archimedean place.
pub fn u_f_q_arch(f: &RationalMapP1, x: &ProjPointQ, precision: usize) -> BigReal {
    let (a, b) = f.apply_raw(x.x(), x.y());
    let nf = a.abs().max(b.abs());
    let d = BigReal::from_i64(f.degree() as i64, precision);
    let lf = BigReal::ln_abs_int(&nf, precision);
    let lx = BigReal::ln_abs_int(&x.norm(), precision);
    &lf / &d - lx
}

/// `u_F(x)` at `p`, exactly: `−v_p(content F(X))/d · log p`.
pub fn u_f_finite(f: &RationalMapP1, x: &ProjPointQ, p: &Prime) -> FiniteLog {
    let (a, b) = f.apply_raw(x.x(), x.y());
    let g = a.gcd(&b);
    let e = valuation_int(&g, p).expect("F has no common zero");
    FiniteLog::new(
        p.clone(),
        Rational::new(BigInt::from(-e), BigInt::from(f.degree())),
    )
}

/// `u_F` in double precision at a complex point.
pub fn u_f_c(f: &RationalMapP1, x: &ProjPointC) -> f64 {
    let (a, b) = f.apply_c_raw(x.x(), x.y());
    a.norm().max(b.norm()).ln() / f.degree() as f64
}

pub fn u_f(f: &RationalMapP1, x: &Point, v: &Place, precision: usize) -> Result<BigReal> {
    match (x, v) {
        (Point::Rational(q), Place::Archimedean) => Ok(u_f_q_arch(f, q, precision)),
        (Point::Rational(q), Place::Finite(p)) => Ok(u_f_finite(f, q, p).to_bigreal(precision)),
        (Point::Complex(c), Place::Archimedean) => Ok(BigReal::from_f64(u_f_c(f, c), precision)),
        (Point::Complex(_), Place::Finite(_)) => Err(Error::NonRationalPoint),
    }
}

/// `g_F(x)` at a finite place. The orbit is followed modulo `p^M` with enough digits
/// that every content valuation along the first `N` steps is determined.
pub fn green_value_finite(f: &RationalMapP1, x: &ProjPointQ, p: &Prime, tol: f64) -> GreenValue {
    let v = f.resultant_valuation(p);
    if v == 0 {
        return GreenValue::zero(64, Some(FiniteLog::zero(p.clone())));
    }
    let c1 = local_params(f, &Place::Finite(p.clone())).c1;

    let (coeff, n, tail_bound) = finite_series(f, x, p, v, c1, tol);
    let exact = FiniteLog::new(p.clone(), coeff);
    GreenValue {
        value: exact.to_bigreal(256),
        tail_bound,
        rounding: 0.0,
        terms: n,
        exact: Some(exact),
    }
}

/// Coefficient of `log p`, number of terms and tail bound of the partial sum, given
/// `v = v_p(Res) > 0` and `C1`.
pub(crate) fn finite_series(f: &RationalMapP1, x: &ProjPointQ, p: &Prime, v: i64, c1: f64, tol: f64) -> (Rational, usize, f64) {
    let n = tail_terms(c1, f.degree(), tol);
    finite_series_with(f, x, p, n, c1, &prime_powers(p, (n + 1) * v as usize + 1))
}

/// `[1, p, p², …, p^k]`.
pub(crate) fn prime_powers(p: &Prime, k: usize) -> Vec<BigInt> {
    let pz = p.to_bigint();
    let mut out = Vec::with_capacity(k + 1);
    out.push(BigInt::one());
    for i in 0..k {
        let next = &out[i] * &pz;
        out.push(next);
    }
    out
}

/// The finite series with `n` terms, reading powers of `p` from `pows`, which must
/// reach `p^{(n+1)v+1}`.
pub(crate) fn finite_series_with(f: &RationalMapP1, x: &ProjPointQ, p: &Prime, n: usize, c1: f64, pows: &[BigInt]) -> (Rational, usize, f64) {
    let d = f.degree();
    let mut digits = pows.len() - 1;
    let mut modulus = &pows[digits];
    let (mut a, mut b) = (x.x().mod_floor(modulus), x.y().mod_floor(modulus));
    let mut num = BigInt::zero();
    let mut den_pow = BigInt::one();
    let dz = BigInt::from(d);
    for _ in 0..n {
        let (fa, fb) = f.apply_raw(&a, &b);
        let (fa, fb) = (fa.mod_floor(modulus), fb.mod_floor(modulus));
        let val = |t: &BigInt| {
            if t.is_zero() {
                digits as i64
            } else {
                valuation_int(t, p).unwrap()
            }
        };
        let e = val(&fa).min(val(&fb));
        debug_assert!((e as usize) < digits);
        // running sum Σ e_j d^{n−1−j}, divided by d^n at the end
        num = num * &dz + BigInt::from(e);
        den_pow *= &dz;
        let pe = &pows[e as usize];
        digits -= e as usize;
        modulus = &pows[digits];
        a = (fa / pe).mod_floor(modulus);
        b = (fb / pe).mod_floor(modulus);
    }
    let tail = c1 * (d as f64).powi(1 - n as i32) / (d as f64 - 1.0);
    (-Rational::new(num, den_pow), n, tail)
}

fn real_form(c: &[BigInt], precision: usize) -> Vec<BigReal> {
    c.iter().map(|x| BigReal::from_bigint(x, precision)).collect()
}

fn eval_real(c: &[BigReal], x: &BigReal, y: &BigReal) -> BigReal {
    let mut acc = c[0].clone();
    let mut yp = BigReal::one(x.precision());
    for ci in &c[1..] {
        yp = &yp * y;
        acc = &(&acc * x) + &(ci * &yp);
    }
    acc
}

fn arch_series_real(f: &RationalMapP1, x: &ProjPointQ, n: usize, precision: usize) -> BigReal {
    let c0 = real_form(f.f0(), precision);
    let c1 = real_form(f.f1(), precision);
    let d = BigReal::from_i64(f.degree() as i64, precision);
    let norm = BigReal::from_bigint(&x.norm(), precision);
    let mut a = BigReal::from_bigint(x.x(), precision) / &norm;
    let mut b = BigReal::from_bigint(x.y(), precision) / &norm;
    let mut sum = BigReal::zero(precision);
    let mut weight = BigReal::one(precision);
    for _ in 0..n {
        let fa = eval_real(&c0, &a, &b);
        let fb = eval_real(&c1, &a, &b);
        let m = fa.abs().max(&fb.abs());
        weight = &weight / &d;
        sum = sum + &m.ln() * &weight;
        a = &fa / &m;
        b = &fb / &m;
    }
    sum
}

/// `g_F(x)` at the archimedean place for a rational point. The truncation error is
/// certified; rounding is controlled by rerunning at a higher precision.
pub fn green_value_q(f: &RationalMapP1, x: &ProjPointQ, tol: f64, precision: usize) -> Result<GreenValue> {
    require_degree(f)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let c1 = local_params(f, &Place::Archimedean).c1;
    if c1 == 0.0 {
        return Ok(GreenValue::zero(precision, None));
    }
    let d = f.degree();
    let n = tail_terms(c1, d, tol);
    let tail = c1 * (d as f64).powi(1 - n as i32) / (d as f64 - 1.0);
    let mut work = precision + 32;
    loop {
        let lo = arch_series_real(f, x, n, work);
        let hi = arch_series_real(f, x, n, work + 64);
        let diff = (&hi - &lo).abs().to_f64();
        if diff <= tol / 4.0 || work >= MAX_PRECISION {
            if diff > tol {
                return Err(Error::NonConvergence(format!(
                    "Green series rounding {diff:e} exceeds tolerance at {work} bits"
                )));
            }
            return Ok(GreenValue {
                value: hi.with_precision(precision),
                tail_bound: tail,
                rounding: diff,
                terms: n,
                exact: None,
            });
        }
        work *= 2;
    }
}

/// `g_F(x)` at the archimedean place for a complex point, in double precision.
/// Returns the value and the certified tail bound.
pub fn green_value_c(f: &RationalMapP1, x: &ProjPointC, tol: f64) -> (f64, f64) {
    let c1 = local_params(f, &Place::Archimedean).c1;
    if c1 == 0.0 {
        return (0.0, 0.0);
    }
    complex_series(&f.f0_f64(), &f.f1_f64(), f.degree(), c1, x, tol)
}

/// [`green_value_c`] with the coefficients in double precision and `C1 > 0` already known.
pub(crate) fn complex_series(c0: &[f64], c1v: &[f64], d: usize, c1: f64, x: &ProjPointC, tol: f64) -> (f64, f64) {
    let n = tail_terms(c1, d, tol);
    let (mut a, mut b) = (x.x(), x.y());
    let mut sum = 0.0;
    let mut weight = 1.0;
    for _ in 0..n {
        let fa = form_eval_c(c0, a, b);
        let fb = form_eval_c(c1v, a, b);
        let m = fa.norm().max(fb.norm());
        weight /= d as f64;
        sum += m.ln() * weight;
        a = fa / m;
        b = fb / m;
    }
    let tail = c1 * (d as f64).powi(1 - n as i32) / (d as f64 - 1.0);
    (sum, tail)
}

/// `g_F(x)` at `v` with truncation error at most `tol`.
pub fn green_value(f: &RationalMapP1, x: &Point, v: &Place, tol: f64, precision: usize) -> Result<GreenValue> {
    require_degree(f)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    match (x, v) {
        (Point::Rational(q), Place::Archimedean) => green_value_q(f, q, tol, precision),
        (Point::Rational(q), Place::Finite(p)) => {
            let mut g = green_value_finite(f, q, p, tol);
            g.value = g.exact.as_ref().unwrap().to_bigreal(precision);
            Ok(g)
        }
        (Point::Complex(c), Place::Archimedean) => {
            let (val, tail) = green_value_c(f, c, tol.max(1e-15));
            Ok(GreenValue {
                value: BigReal::from_f64(val, precision),
                tail_bound: tail,
                rounding: 1e-14 * (1.0 + val.abs()),
                terms: tail_terms(local_params(f, v).c1, f.degree(), tol.max(1e-15)),
                exact: None,
            })
        }
        (Point::Complex(_), Place::Finite(_)) => Err(Error::NonRationalPoint),
    }
}
