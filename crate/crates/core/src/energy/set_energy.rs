use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_traits::{Signed, ToPrimitive};

use super::{AdelicEpsilon, GaloisSetQ};
use crate::error::Result;
use crate::qfield::{log_abs, support_primes, valuation, BigReal, Place, Prime, Rational};

fn rules() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| {
        (
            GaussLegendre::new(NonZeroUsize::new(24).unwrap()),
            GaussLegendre::new(NonZeroUsize::new(48).unwrap()),
        )
    })
}

/// `(1/π)∫_0^{θ₀} log|1 + ρe^{iθ}| dθ` with `cos θ₀ = −ρ/2`, and a quadrature error
/// estimate from two rule sizes.
fn circle_correction(rho: f64) -> (f64, f64) {
    if rho == 0.0 {
        return (0.0, 0.0);
    }
    let theta0 = (-rho / 2.0).acos();
    let integrand = |t: f64| 0.5 * (1.0 + rho * rho + 2.0 * rho * t.cos()).ln();
    let (coarse, fine) = rules();
    let a = coarse.integrate(0.0, theta0, integrand) / std::f64::consts::PI;
    let b = fine.integrate(0.0, theta0, integrand) / std::f64::consts::PI;
    (b, (a - b).abs() + 4.0 * f64::EPSILON)
}

/// Average of `log max(|z − y|, ε)` over the circle `|z − x| = ε`, where `r = |x − y|`.
///
/// ```
/// use adelic::energy::arch_kernel;
///
/// assert!((arch_kernel(0.0, 0.5) - 0.5f64.ln()).abs() < 1e-15);
/// assert!((arch_kernel(3.0, 0.5) - 3.0f64.ln()).abs() < 1e-15);
/// ```
pub fn arch_kernel(r: f64, eps: f64) -> f64 {
    if r >= 2.0 * eps {
        r.ln()
    } else {
        eps.ln() + circle_correction(r / eps).0
    }
}

/// Result of [`regularized_set_energy`].
#[derive(Debug, Clone)]
pub struct SetEnergy {
    /// `Σ_v (1/#E²) Σ_{x,y} λ_v(x, y)`.
    pub lhs: BigReal,
    /// `(1/#E) Σ_v log ε_v` plus the product-formula sum.
    pub rhs: BigReal,
    /// `(1/#E²) Σ_{x≠y} Σ_v log|x − y|_v`, zero up to rounding.
    pub product_formula_residual: BigReal,
    /// Bound for the archimedean quadrature error in `lhs`.
    pub quadrature_error: f64,
    /// `(place, contribution to lhs, log ε_v)`.
    pub per_place: Vec<(Place, f64, f64)>,
}

impl SetEnergy {
    /// `lhs ≥ rhs` up to the quadrature error and `10⁻¹⁰`.
    pub fn holds(&self) -> bool {
        (&self.lhs - &self.rhs).to_f64() >= -(self.quadrature_error + 1e-10)
    }
}

fn ln_rational(q: &Rational, precision: usize) -> BigReal {
    BigReal::ln_abs_int(q.numer(), precision) - BigReal::ln_abs_int(q.denom(), precision)
}

fn finite_kernel(diff: &Rational, p: &Prime, eps: &Rational, precision: usize) -> Result<BigReal> {
    let v = valuation(diff, p)?;
    let pv = Rational::from(p.to_bigint());
    let abs = if v >= 0 {
        num_traits::pow(pv.recip(), v as usize)
    } else {
        num_traits::pow(pv, (-v) as usize)
    };
    Ok(if &abs >= eps {
        p.ln(precision).mul_f64(-(v as f64))
    } else {
        ln_rational(eps, precision)
    })
}

fn arch_kernel_exact(diff: &Rational, eps: &Rational, precision: usize) -> (BigReal, f64) {
    let r = diff.abs();
    if r >= eps * Rational::from_integer(2.into()) {
        return (ln_rational(&r, precision), 0.0);
    }
    let rho = (r / eps).to_f64().unwrap_or(0.0);
    let (c, err) = circle_correction(rho);
    (ln_rational(eps, precision) + BigReal::from_f64(c, precision), err)
}

/// The energy of `E` with each point spread to radius `ε_v` at every place.
///
/// ```
/// use adelic::energy::{regularized_set_energy, AdelicEpsilon, GaloisSetQ};
///
/// let e = GaloisSetQ::parse(&["0"]).unwrap();
/// let eps = AdelicEpsilon::parse(&[("arch", "1/2")]).unwrap();
/// let s = regularized_set_energy(&e, &eps, 128).unwrap();
/// assert!((s.lhs.to_f64() - 0.5f64.ln()).abs() < 1e-15);
/// assert!((&s.lhs - &s.rhs).to_f64().abs() < 1e-15);
/// ```
pub fn regularized_set_energy(e: &GaloisSetQ, eps: &AdelicEpsilon, precision: usize) -> Result<SetEnergy> {
    let xs = e.rationals();
    let n = xs.len();
    let mut diffs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            diffs.push(&xs[i] - &xs[j]);
        }
    }
    let mut primes: BTreeSet<Prime> = eps.places().filter_map(|v| v.prime().cloned()).collect();
    for d in &diffs {
        primes.extend(support_primes(d)?);
    }
    let places: Vec<Place> = std::iter::once(Place::Archimedean)
        .chain(primes.into_iter().map(Place::Finite))
        .collect();

    let n_big = BigReal::from_i64(n as i64, precision);
    let n2 = &n_big * &n_big;
    let mut lhs = BigReal::zero(precision);
    let mut log_eps_sum = BigReal::zero(precision);
    let mut quadrature_error = 0.0;
    let mut per_place = Vec::with_capacity(places.len());
    for v in &places {
        let ev = eps.get(v);
        let log_eps = ln_rational(&ev, precision);
        let mut off = BigReal::zero(precision);
        for d in &diffs {
            let k = match v {
                Place::Archimedean => {
                    let (k, err) = arch_kernel_exact(d, &ev, precision);
                    quadrature_error += 2.0 * err / (n * n) as f64;
                    k
                }
                Place::Finite(p) => finite_kernel(d, p, &ev, precision)?,
            };
            off = off + k;
        }
        let total = log_eps.mul_f64(n as f64) + off.mul_f64(2.0);
        let contribution = &total / &n2;
        per_place.push((v.clone(), contribution.to_f64(), log_eps.to_f64()));
        lhs = lhs + contribution;
        log_eps_sum = log_eps_sum + log_eps;
    }
    let mut residual = BigReal::zero(precision);
    for d in &diffs {
        for v in &places {
            residual = residual + log_abs(d, v, precision)?;
        }
    }
    let residual = residual.mul_f64(2.0) / n2;
    let rhs = &log_eps_sum / &n_big + residual.clone();
    Ok(SetEnergy {
        lhs,
        rhs,
        product_formula_residual: residual,
        quadrature_error,
        per_place,
    })
}
