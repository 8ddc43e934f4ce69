//! Polynomial root finding: Aberth iteration in double precision and in
//! arbitrary precision, followed by Newton refinement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::qfield::BigReal;

const MAX_ABERTH_STEPS: usize = 500;

fn initial_guesses(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Fujiwara bound for the moduli of the roots of `Σ c_k z^k`.
fn root_radius(c: &[Complex64]) -> f64 {
    let n = c.len() - 1;
    let lead = c[n].norm();
    let mut r: f64 = 0.0;
    for i in 1..=n {
        let mut t = (c[n - i].norm() / lead).powf(1.0 / i as f64);
        if i == n {
            t *= 0.5f64.powf(1.0 / n as f64);
        }
        r = r.max(t);
    }
    (2.0 * r).max(1e-3)
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of `Σ c_k z^k` (ascending coefficients, nonzero leading term).
///
/// ```
/// use num_complex::Complex64;
/// use adelic::roots::roots_c64;
///
/// let c = [-1.0, 0.0, 1.0].map(|x| Complex64::new(x, 0.0));
/// let mut r: Vec<f64> = roots_c64(&c).unwrap().iter().map(|z| z.re).collect();
/// r.sort_by(f64::total_cmp);
/// assert!((r[0] + 1.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
/// ```
pub fn roots_c64(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len().saturating_sub(1);
    if n == 0 || c[n] == Complex64::new(0.0, 0.0) {
        return Err(Error::invalid("root finding needs a nonzero leading coefficient"));
    }
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let mut z = initial_guesses(n, root_radius(c));
    for _ in 0..MAX_ABERTH_STEPS {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zk);
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    let scale: f64 = c.iter().map(|a| a.norm()).sum();
    for zk in &z {
        let (p, _) = horner(c, *zk);
        let mag: f64 = c
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() * zk.norm().powi(k as i32))
            .sum();
        if !zk.is_finite() || p.norm() > 1e-8 * mag.max(scale) {
            return Err(Error::NonConvergence(format!(
                "root refinement stalled at {zk} with residual {:e}",
                p.norm()
            )));
        }
    }
    Ok(z)
}

/// A complex number with arbitrary-precision parts.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(precision: usize) -> Self {
        BigComplex::new(BigReal::zero(precision), BigReal::zero(precision))
    }

    pub fn from_c64(z: Complex64, precision: usize) -> Self {
        BigComplex::new(BigReal::from_f64(z.re, precision), BigReal::from_f64(z.im, precision))
    }

    pub fn from_real(x: BigReal) -> Self {
        let p = x.precision();
        BigComplex::new(x, BigReal::zero(p))
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        BigComplex::new(
            self.re.clone().with_precision(precision),
            self.im.clone().with_precision(precision),
        )
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = o.norm_sqr();
        BigComplex::new(
            &(&(&self.re * &o.re) + &(&self.im * &o.im)) / &den,
            &(&(&self.im * &o.re) - &(&self.re * &o.im)) / &den,
        )
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }
}

fn horner_big(c: &[BigReal], z: &BigComplex) -> (BigComplex, BigComplex) {
    let p0 = z.re.precision();
    let mut p = BigComplex::zero(p0);
    let mut dp = BigComplex::zero(p0);
    for a in c.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z);
        p.re = &p.re + a;
    }
    (p, dp)
}

/// A refined root together with `|s(root)|` for the polynomial it was refined against.
#[derive(Debug, Clone)]
pub struct RefinedRoot {
    pub value: BigComplex,
    pub residual: BigReal,
    pub converged: bool,
}

/// `2^{−k}` without passing through `f64` underflow.
fn inv_pow2(k: usize, precision: usize) -> BigReal {
    let step = BigReal::from_f64(2f64.powi(-512), precision);
    let mut x = BigReal::from_f64(2f64.powi(-((k % 512) as i32)), precision);
    for _ in 0..k / 512 {
        x = &x * &step;
    }
    x
}

fn bits_of(q: &QPoly) -> usize {
    q.coeffs()
        .iter()
        .map(|c| (c.numer().bits() + c.denom().bits()) as usize)
        .max()
        .unwrap_or(0)
}

/// Roots of a squarefree rational polynomial, refined so that each Newton correction
/// is below `2^{−precision}` relative to the root.
pub fn squarefree_roots(s: &QPoly, precision: usize) -> Result<Vec<RefinedRoot>> {
    let n = s.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = s.monic();
    let work = precision + bits_of(&s) + 64;
    let coarse = aberth_big(&s, 128 + bits_of(&s))?;
    let c: Vec<BigReal> = s.coeffs().iter().map(|q| BigReal::from_rational(q, work)).collect();
    let target = inv_pow2(precision + 8, work);
    Ok(coarse
        .into_iter()
        .map(|z0| {
            let mut z = z0.with_precision(work);
            let mut converged = false;
            for _ in 0..200 {
                let (p, dp) = horner_big(&c, &z);
                if p.re.is_zero() && p.im.is_zero() {
                    converged = true;
                    break;
                }
                let step = p.div(&dp);
                z = z.sub(&step);
                let scale = &z.abs() + &BigReal::one(work);
                if step.abs() <= &target * &scale {
                    converged = true;
                    break;
                }
            }
            let (p, _) = horner_big(&c, &z);
            RefinedRoot {
                value: z,
                residual: p.abs(),
                converged,
            }
        })
        .collect())
}

fn aberth_big(s: &QPoly, precision: usize) -> Result<Vec<BigComplex>> {
    let n = s.degree().unwrap_or(0);
    let c: Vec<BigReal> = s.coeffs().iter().map(|q| BigReal::from_rational(q, precision)).collect();
    let mags: Vec<f64> = c.iter().map(|x| x.abs().to_f64()).collect();
    let mut radius: f64 = 0.0;
    for i in 1..=n {
        let ln = mags[n - i].ln() / i as f64;
        radius = radius.max(ln);
    }
    let radius = (2.0 * radius.exp()).max(1e-3);
    let mut z: Vec<BigComplex> = initial_guesses(n, radius)
        .into_iter()
        .map(|g| BigComplex::from_c64(g, precision))
        .collect();
    if n == 1 {
        return Ok(vec![BigComplex::from_real(-&c[0])]);
    }
    let one = BigReal::one(precision);
    let eps = inv_pow2(precision - 24, precision);
    for _ in 0..MAX_ABERTH_STEPS {
        let mut done = true;
        for k in 0..n {
            let (p, dp) = horner_big(&c, &z[k]);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let ratio = p.div(&dp);
            let mut sum = BigComplex::zero(precision);
            for j in 0..n {
                if j != k {
                    let diff = z[k].sub(&z[j]);
                    sum = sum.add(&BigComplex::from_real(one.clone()).div(&diff));
                }
            }
            let denom = BigComplex::from_real(one.clone()).sub(&ratio.mul(&sum));
            let w = ratio.div(&denom);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[k] = z[k].sub(&w);
            let scale = &z[k].abs() + &one;
            if w.abs() > &eps * &scale {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence(format!(
        "Aberth iteration did not settle for a degree-{n} factor"
    )))
}

/// `Σ c_k z^k` at a complex point, with the coefficients rounded to the point's precision.
pub fn eval_big(q: &QPoly, z: &BigComplex) -> BigComplex {
    let p = z.re.precision();
    let c: Vec<BigReal> = q.coeffs().iter().map(|x| BigReal::from_rational(x, p)).collect();
    horner_big(&c, z).0
}
