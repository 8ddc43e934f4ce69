use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;

use super::exceptional::{exceptional_pair_lookup, ExceptionalClass};
use super::family::MapFamily;
use super::sample::{base_point, equilibrium_sample, ComplexMap, MeasureSample};
use crate::error::{Error, Result};
use crate::projmap::RationalMapP1;

/// Sampling parameters shared by the energy estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    /// Pullback depth `n`; each map contributes `d^n` atoms.
    pub depth: usize,
    /// Seed of the base point common to both maps.
    pub seed: u64,
    /// Kernel floor `ε`; `None` selects [`default_regularization`].
    pub epsilon: Option<f64>,
}

impl EnergyParams {
    pub fn new(depth: usize, seed: u64) -> Self {
        EnergyParams {
            depth,
            seed,
            epsilon: None,
        }
    }
}

/// A discrete energy with a heuristic error: the change from depth `n − 1` to `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub error: f64,
    pub previous: f64,
    pub depth: usize,
    pub atoms_f: usize,
    pub atoms_g: usize,
    pub epsilon: f64,
    /// `(μ_f, μ_f)`, `(μ_g, μ_g)` and `(μ_f, μ_g)` at depth `n`.
    pub self_f: f64,
    pub self_g: f64,
    pub cross: f64,
    pub exceptional: Option<ExceptionalClass>,
}

/// One grid point of a parameter scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UScanRow {
    pub re: f64,
    pub im: f64,
    pub u: f64,
    pub err: f64,
}

/// `1e-9`, far below the atom spacing of any sample this crate can build.
pub fn default_regularization() -> f64 {
    1e-9
}

fn nearest_neighbour_radii(a: &[Complex64], eps: f64) -> Vec<f64> {
    (0..a.len())
        .into_par_iter()
        .map(|i| {
            let nn = a
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| (a[i] - w).norm())
                .fold(f64::INFINITY, f64::min);
            if nn.is_finite() {
                (nn / std::f64::consts::TAU).max(eps)
            } else {
                1.0
            }
        })
        .collect()
}

/// `Σ_{i,j} K(a_i, b_j)` with `K = log max(|a − b|, ε)` off coincidences and the
/// self radius on them. Rows are summed in parallel and then in index order.
fn pair_sum(a: &[Complex64], ra: &[f64], b: &[Complex64], rb: &[f64], eps: f64) -> f64 {
    let rows: Vec<f64> = a
        .par_iter()
        .zip(ra.par_iter())
        .map(|(&x, &rx)| {
            let mut s = 0.0;
            for (&y, &ry) in b.iter().zip(rb) {
                s += if x == y {
                    rx.max(ry).ln()
                } else {
                    (x - y).norm().max(eps).ln()
                };
            }
            s
        })
        .collect();
    rows.iter().sum()
}

fn sample_key(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                (x.re.to_bits(), x.im.to_bits()).cmp(&(y.re.to_bits(), y.im.to_bits()))
            })
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

struct Pieces {
    value: f64,
    self_f: f64,
    self_g: f64,
    cross: f64,
}

fn energy_pieces(a: &[Complex64], b: &[Complex64], eps: f64) -> Pieces {
    let ra = nearest_neighbour_radii(a, eps);
    let rb = nearest_neighbour_radii(b, eps);
    let (ma, mb) = (a.len() as f64, b.len() as f64);
    let saa = pair_sum(a, &ra, a, &ra, eps) / (ma * ma);
    let sbb = pair_sum(b, &rb, b, &rb, eps) / (mb * mb);
    let sab = if sample_key(a, b).is_le() {
        pair_sum(a, &ra, b, &rb, eps)
    } else {
        pair_sum(b, &rb, a, &ra, eps)
    } / (ma * mb);
    Pieces {
        value: -((saa + sbb) - 2.0 * sab),
        self_f: -saa,
        self_g: -sbb,
        cross: -sab,
    }
}

/// `(μ − ν, μ − ν)` for two samples, with kernel floor `ε`.
pub fn mutual_energy_samples(a: &MeasureSample, b: &MeasureSample, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::invalid("regularization must be positive"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("empty sample"));
    }
    Ok(energy_pieces(&a.atoms, &b.atoms, eps).value)
}

/// Estimates `(μ_f − μ_g, μ_f − μ_g)` from pullbacks of one common base point.
pub fn mutual_energy_complex(f: &ComplexMap, g: &ComplexMap, params: &EnergyParams) -> Result<EnergyEstimate> {
    if params.depth == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    let eps = params.epsilon.unwrap_or_else(default_regularization);
    if !(eps > 0.0) {
        return Err(Error::invalid("regularization must be positive"));
    }
    let base = base_point(params.seed);
    let sf = equilibrium_sample(f, params.depth, base)?;
    let sg = equilibrium_sample(g, params.depth, base)?;
    let pf = equilibrium_sample(f, params.depth - 1, base)?;
    let pg = equilibrium_sample(g, params.depth - 1, base)?;
    let now = energy_pieces(&sf.atoms, &sg.atoms, eps);
    let before = energy_pieces(&pf.atoms, &pg.atoms, eps);
    Ok(EnergyEstimate {
        value: now.value,
        error: (now.value - before.value).abs(),
        previous: before.value,
        depth: params.depth,
        atoms_f: sf.len(),
        atoms_g: sg.len(),
        epsilon: eps,
        self_f: now.self_f,
        self_g: now.self_g,
        cross: now.cross,
        exceptional: None,
    })
}

/// Archimedean mutual energy of the equilibrium measures of `f` and `g`.
///
/// ```
/// use adelic::energy::{mutual_energy_arch, EnergyParams};
/// use adelic::projmap::RationalMapP1;
///
/// let f = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// let e = mutual_energy_arch(&f, &f, &EnergyParams::new(4, 0)).unwrap();
/// assert_eq!(e.value, 0.0);
/// ```
pub fn mutual_energy_arch(f: &RationalMapP1, g: &RationalMapP1, params: &EnergyParams) -> Result<EnergyEstimate> {
    let mut e = mutual_energy_complex(&ComplexMap::from(f), &ComplexMap::from(g), params)?;
    e.exceptional = Some(exceptional_pair_lookup(f, g));
    Ok(e)
}

/// Half the archimedean mutual energy: the archimedean part of `⟨f, g⟩`.
pub fn pairing_lower_arch(f: &RationalMapP1, g: &RationalMapP1, params: &EnergyParams) -> Result<EnergyEstimate> {
    let mut e = mutual_energy_arch(f, g, params)?;
    for x in [&mut e.value, &mut e.error, &mut e.previous, &mut e.self_f, &mut e.self_g, &mut e.cross] {
        *x *= 0.5;
    }
    Ok(e)
}

/// Result of [`u_parameter_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct UScan {
    pub rows: Vec<UScanRow>,
    /// Grid points where either map degenerates.
    pub skipped: Vec<Complex64>,
}

/// `U(t) = (μ_{f_t} − μ_{g_t}, μ_{f_t} − μ_{g_t})` over a grid of parameters.
pub fn u_parameter_scan(family: &MapFamily, grid: &[Complex64], params: &EnergyParams) -> Result<UScan> {
    let results: Vec<Option<Result<UScanRow>>> = grid
        .par_iter()
        .map(|&t| {
            let (f, g) = match (family.f.at(t), family.g.at(t)) {
                (Ok(f), Ok(g)) => (f, g),
                (Err(Error::DegenerateMap), _) | (_, Err(Error::DegenerateMap)) => return None,
                (Err(e), _) | (_, Err(e)) => return Some(Err(e)),
            };
            Some(mutual_energy_complex(&f, &g, params).map(|e| UScanRow {
                re: t.re,
                im: t.im,
                u: e.value,
                err: e.error,
            }))
        })
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (t, r) in grid.iter().zip(results) {
        match r {
            None => skipped.push(*t),
            Some(r) => rows.push(r?),
        }
    }
    if rows.is_empty() && !grid.is_empty() {
        return Err(Error::invalid("every grid point is degenerate"));
    }
    Ok(UScan { rows, skipped })
}
