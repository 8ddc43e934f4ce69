//! Preperiodic points: exact enumeration over ℚ, numeric spectra over ℂ, and the
//! bound on the number of small points implied by a pair of height inequalities.

mod uniform;

pub use uniform::{uniform_bound_calculator, UniformBound, UniformBoundInputs};

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use crate::energy::{exceptional_pair_lookup, ExceptionalClass};
use crate::error::{Error, Result};
use crate::green::green_value_c;
use crate::heights::{is_preperiodic, Preperiodicity};
use crate::projmap::{preperiodicity_polynomial, ProjPointC, ProjPointQ, RationalMapP1};
use crate::qfield::BigReal;
use crate::roots::{eval_big, squarefree_roots, BigComplex};

/// Largest `⌊e^B⌋` accepted by [`rational_preperiodic_points`].
pub const MAX_BOX: u64 = 2000;

/// A point with `f^n(x) = f^m(x)`, `m < n` minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreperOrbit {
    pub point: ProjPointQ,
    /// Tail length `m`.
    pub tail: usize,
    /// Cycle length `n − m`.
    pub period: usize,
    /// `x, f(x), …, f^{n−1}(x)`.
    pub orbit: Vec<ProjPointQ>,
}

fn box_size(bound: f64) -> Result<u64> {
    if !(bound >= 0.0) {
        return Err(Error::invalid("height bound must be nonnegative"));
    }
    let h = (bound.exp() * (1.0 + 1e-12)).floor();
    if h > MAX_BOX as f64 {
        return Err(Error::DepthGuard(format!("e^B = {h} exceeds the search box limit {MAX_BOX}")));
    }
    Ok(h as u64)
}

/// `∞` and every `p/q` in lowest terms with `max(|p|, q) ≤ H`.
fn height_box(h: u64) -> Vec<ProjPointQ> {
    let h = h as i64;
    let mut out = vec![ProjPointQ::infinity()];
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 {
                out.push(ProjPointQ::affine(p, q));
            }
        }
    }
    out
}

/// All preperiodic points of `f` with naive height at most `bound`, sorted.
///
/// ```
/// use adelic::preper::rational_preperiodic_points;
/// use adelic::projmap::RationalMapP1;
///
/// let f = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// let pts = rational_preperiodic_points(&f, 10f64.ln()).unwrap();
/// let names: Vec<String> = pts.iter().map(|o| o.point.to_string()).collect();
/// assert_eq!(names, ["-2", "-1", "0", "1", "2", "inf"]);
/// ```
pub fn rational_preperiodic_points(f: &RationalMapP1, bound: f64) -> Result<Vec<PreperOrbit>> {
    let candidates = height_box(box_size(bound)?);
    let mut found: Vec<PreperOrbit> = candidates
        .into_par_iter()
        .filter_map(|x| match is_preperiodic(f, &x) {
            Preperiodicity::Preperiodic { m, n, orbit } => Some(PreperOrbit {
                point: x,
                tail: m,
                period: n - m,
                orbit,
            }),
            Preperiodicity::NotPreperiodic { .. } => None,
        })
        .collect();
    found.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(found)
}

/// A point preperiodic for both maps, with both orbit witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonPoint {
    pub point: ProjPointQ,
    pub orbit_f: PreperOrbit,
    pub orbit_g: PreperOrbit,
}

/// `Preper(f) ∩ Preper(g)` among points of naive height at most `bound`.
pub fn common_rational_preperiodic(f: &RationalMapP1, g: &RationalMapP1, bound: f64) -> Result<Vec<CommonPoint>> {
    let a = rational_preperiodic_points(f, bound)?;
    let b = rational_preperiodic_points(g, bound)?;
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].point.cmp(&b[j].point) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(CommonPoint {
                    point: a[i].point.clone(),
                    orbit_f: a[i].clone(),
                    orbit_g: b[j].clone(),
                });
                i += 1;
                j += 1;
            }
        }
    }
    Ok(out)
}

/// A complex solution of `f^n(z) = f^m(z)`; `value = None` is `∞`.
#[derive(Debug, Clone)]
pub struct PreperRoot {
    pub value: Option<BigComplex>,
    pub multiplicity: usize,
    /// `|Φ(z)|` for the monic preperiodicity polynomial.
    pub residual: BigReal,
    pub converged: bool,
}

impl PreperRoot {
    pub fn to_c64(&self) -> Option<Complex64> {
        self.value.as_ref().map(BigComplex::to_c64)
    }
}

/// The solutions of `f^n = f^m` with multiplicity, refined to `precision` bits.
///
/// ```
/// use adelic::preper::complex_preperiodic;
/// use adelic::projmap::RationalMapP1;
///
/// let f = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// let mut r: Vec<f64> = complex_preperiodic(&f, 0, 1, 128)
///     .unwrap()
///     .iter()
///     .filter_map(|z| z.to_c64().map(|c| c.re))
///     .collect();
/// r.sort_by(f64::total_cmp);
/// assert!((r[0] + 1.0).abs() < 1e-30 && (r[1] - 2.0).abs() < 1e-30);
/// ```
pub fn complex_preperiodic(f: &RationalMapP1, m: usize, n: usize, precision: usize) -> Result<Vec<PreperRoot>> {
    let phi = preperiodicity_polynomial(f, m, n)?;
    let d = f.degree();
    let full = d.pow(n as u32) + d.pow(m as u32);
    let affine = phi.degree().unwrap_or(0);
    let monic = phi.monic();
    let mut out = Vec::with_capacity(full);
    if full > affine {
        out.push(PreperRoot {
            value: None,
            multiplicity: full - affine,
            residual: BigReal::zero(precision),
            converged: true,
        });
    }
    for (factor, k) in phi.squarefree_decomposition() {
        for r in squarefree_roots(&factor, precision)? {
            let residual = eval_big(&monic, &r.value).abs();
            out.push(PreperRoot {
                value: Some(r.value),
                multiplicity: k,
                residual,
                converged: r.converged,
            });
        }
    }
    Ok(out)
}

/// A point of a numeric preperiodic spectrum, with the first level `(m, n)` it appeared at.
#[derive(Debug, Clone)]
pub struct SpectrumPoint {
    pub value: Option<BigComplex>,
    pub m: usize,
    pub n: usize,
    pub residual: f64,
}

/// Distinct solutions of `f^n = f^m` over tails `m ≤ max_m` and cycle lengths
/// `1 ≤ n − m ≤ max_period`, in order of increasing `n`.
pub fn preperiodic_spectrum(
    f: &RationalMapP1,
    max_m: usize,
    max_period: usize,
    match_tol: f64,
    precision: usize,
) -> Result<Vec<SpectrumPoint>> {
    let tol = BigReal::from_f64(match_tol, precision);
    let mut out: Vec<SpectrumPoint> = Vec::new();
    for n in 1..=max_m + max_period {
        for m in n.saturating_sub(max_period)..n.min(max_m + 1) {
            for r in complex_preperiodic(f, m, n, precision)? {
                let seen = out.iter().any(|s| match (&s.value, &r.value) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.sub(b).abs() <= tol,
                    _ => false,
                });
                if !seen {
                    out.push(SpectrumPoint {
                        value: r.value,
                        m,
                        n,
                        residual: r.residual.to_f64(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A candidate common preperiodic point.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMatch {
    /// `None` is `∞`.
    pub point: Option<Complex64>,
    pub distance: f64,
    pub level_f: (usize, usize),
    pub level_g: (usize, usize),
    pub residual_f: f64,
    pub residual_g: f64,
    /// `log max(|z|, 1) + g_F(z)`, the archimedean canonical local height for `f`.
    pub score_f: f64,
    pub score_g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericMatchReport {
    pub matches: Vec<NumericMatch>,
    pub spectrum_f: usize,
    pub spectrum_g: usize,
    pub exceptional: ExceptionalClass,
}

fn local_score(f: &RationalMapP1, z: Option<Complex64>) -> f64 {
    let p = match z {
        Some(z) => ProjPointC::affine(z),
        None => ProjPointC::infinity(),
    };
    let plus = z.map_or(0.0, |z| z.norm().max(1.0).ln());
    plus + green_value_c(f, &p, 1e-12).0
}

/// Pairs of points from the two spectra within `match_tol` of each other. These are
/// candidates only; nothing here proves that a match is a common preperiodic point.
///
/// The budgets are as in [`preperiodic_spectrum`].
pub fn common_preperiodic_numeric(
    f: &RationalMapP1,
    g: &RationalMapP1,
    max_m: usize,
    max_period: usize,
    match_tol: f64,
    precision: usize,
) -> Result<NumericMatchReport> {
    if !(match_tol > 0.0) {
        return Err(Error::invalid("match tolerance must be positive"));
    }
    let sf = preperiodic_spectrum(f, max_m, max_period, match_tol, precision)?;
    let sg = preperiodic_spectrum(g, max_m, max_period, match_tol, precision)?;
    let tol = BigReal::from_f64(match_tol, precision);
    let mut matches = Vec::new();
    for a in &sf {
        for b in &sg {
            let distance = match (&a.value, &b.value) {
                (None, None) => BigReal::zero(precision),
                (Some(x), Some(y)) => x.sub(y).abs(),
                _ => continue,
            };
            if distance > tol {
                continue;
            }
            let point = a.value.as_ref().map(BigComplex::to_c64);
            matches.push(NumericMatch {
                point,
                distance: distance.to_f64(),
                level_f: (a.m, a.n),
                level_g: (b.m, b.n),
                residual_f: a.residual,
                residual_g: b.residual,
                score_f: local_score(f, point),
                score_g: local_score(g, point),
            });
        }
    }
    matches.sort_by(|x, y| {
        let key = |p: &Option<Complex64>| p.map_or((f64::INFINITY, 0.0), |z| (z.re, z.im));
        let (a, b) = (key(&x.point), key(&y.point));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    Ok(NumericMatchReport {
        matches,
        spectrum_f: sf.len(),
        spectrum_g: sg.len(),
        exceptional: exceptional_pair_lookup(f, g),
    })
}
