//! Naive and canonical heights of rational points.
//!
//! For a point with coprime integer coordinates `X`,
//! `ĥ_f(x) = log‖X‖_∞ + Σ_v g_{F,v}(x)`, where the sum runs over the archimedean place
//! and the primes dividing `Res(F)`; the Green function vanishes identically at every
//! other prime.

use std::collections::HashMap;

use crate::energy::GaloisSetQ;
use crate::error::{Error, Result};
use crate::green::{green_value, height_difference_bound, relevant_places};
use crate::projmap::{Point, ProjPointQ, RationalMapP1};
use crate::qfield::{BigReal, FiniteLog, Place};

/// `log max(|a|, |b|)` for the coprime lift `(a, b)`.
pub fn naive_height(x: &ProjPointQ, precision: usize) -> BigReal {
    BigReal::ln_abs_int(&x.norm(), precision)
}

/// Contribution of one place to a canonical height.
#[derive(Debug, Clone)]
pub struct PlaceContribution {
    pub place: Place,
    pub value: BigReal,
    /// Truncation bound plus observed rounding.
    pub error: f64,
    /// Exact value as a multiple of `log p` at a finite place.
    pub exact: Option<FiniteLog>,
}

#[derive(Debug, Clone)]
pub struct HeightValue {
    pub value: BigReal,
    pub certified_error: f64,
    pub naive: BigReal,
    pub breakdown: Vec<PlaceContribution>,
}

/// `ĥ_f(x)` with `certified_error ≤ tol`.
///
/// ```
/// use adelic::heights::canonical_height;
/// use adelic::projmap::{ProjPointQ, RationalMapP1};
///
/// let f = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// let h = canonical_height(&f, &ProjPointQ::from_int(0), 1e-30, 256).unwrap();
/// assert!(h.value.to_f64().abs() <= h.certified_error);
/// ```
pub fn canonical_height(
    f: &RationalMapP1,
    x: &ProjPointQ,
    tol: f64,
    precision: usize,
) -> Result<HeightValue> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let places = relevant_places(f);
    let place_tol = tol / (2 * places.len()) as f64;
    let naive = naive_height(x, precision);
    let point = Point::Rational(x.clone());
    let mut value = naive.clone();
    let mut certified_error = 0.0;
    let mut breakdown = Vec::with_capacity(places.len());
    for v in places {
        let g = green_value(f, &point, &v, place_tol, precision)?;
        value = &value + &g.value;
        certified_error += g.error();
        breakdown.push(PlaceContribution {
            place: v,
            value: g.value.clone(),
            error: g.error(),
            exact: g.exact.clone(),
        });
    }
    Ok(HeightValue {
        value,
        certified_error,
        naive,
        breakdown,
    })
}

/// `h_{Rat_d}(f) = log‖F‖_∞` for the normalized lift.
pub fn hrat(f: &RationalMapP1, precision: usize) -> BigReal {
    BigReal::ln_abs_int(&f.max_coeff(), precision)
}

/// Mean of `ĥ_f + ĥ_g` over `E`, with error at most `2·tol`.
pub fn average_height(
    f: &RationalMapP1,
    g: &RationalMapP1,
    e: &GaloisSetQ,
    tol: f64,
    precision: usize,
) -> Result<(BigReal, f64)> {
    let n = e.len();
    if n == 0 {
        return Err(Error::invalid("average height over an empty set"));
    }
    let mut sum = BigReal::zero(precision);
    let mut err = 0.0;
    for x in e.points() {
        let hf = canonical_height(f, x, tol, precision)?;
        let hg = canonical_height(g, x, tol, precision)?;
        sum = sum + hf.value + hg.value;
        err += hf.certified_error + hg.certified_error;
    }
    let n_big = BigReal::from_i64(n as i64, precision);
    Ok((&sum / &n_big, err / n as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preperiodicity {
    /// `f^n(x) = f^m(x)` with `m < n` minimal; `orbit` lists `x, …, f^{n−1}(x)`.
    Preperiodic {
        m: usize,
        n: usize,
        orbit: Vec<ProjPointQ>,
    },
    /// `h_nv(f^k(x)) > B_f`, so `ĥ_f(f^k x) > 0` and hence `ĥ_f(x) > 0`.
    NotPreperiodic {
        k: usize,
        naive_height: f64,
        bound: f64,
        orbit: Vec<ProjPointQ>,
    },
}

impl Preperiodicity {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, Preperiodicity::Preperiodic { .. })
    }

    pub fn orbit(&self) -> &[ProjPointQ] {
        match self {
            Preperiodicity::Preperiodic { orbit, .. } | Preperiodicity::NotPreperiodic { orbit, .. } => orbit,
        }
    }
}

/// Decides preperiodicity by exact iteration. The loop stops either at the first
/// repeated point or once the naive height leaves `[0, B_f]`.
///
/// ```
/// use adelic::heights::{is_preperiodic, Preperiodicity};
/// use adelic::projmap::{ProjPointQ, RationalMapP1};
///
/// let f = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// match is_preperiodic(&f, &ProjPointQ::from_int(0)) {
///     Preperiodicity::Preperiodic { m, n, .. } => assert_eq!((m, n), (2, 3)),
///     other => panic!("{other:?}"),
/// }
/// ```
pub fn is_preperiodic(f: &RationalMapP1, x: &ProjPointQ) -> Preperiodicity {
    let bound = height_difference_bound(f);
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut y = x.clone();
    loop {
        if let Some(&m) = seen.get(&y) {
            return Preperiodicity::Preperiodic {
                m,
                n: orbit.len(),
                orbit,
            };
        }
        let h = naive_height(&y, 64).to_f64();
        if h > bound * (1.0 + 1e-12) + 1e-12 {
            let k = orbit.len();
            orbit.push(y);
            return Preperiodicity::NotPreperiodic {
                k,
                naive_height: h,
                bound,
                orbit,
            };
        }
        seen.insert(y.clone(), orbit.len());
        orbit.push(y.clone());
        y = f.apply(&y);
    }
}

#[cfg(test)]
mod tests;
