use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projmap::RationalMapP1;
use crate::roots::roots_c64;

/// Largest number of atoms a sample may hold.
pub const MAX_ATOMS: usize = 1_000_000;

/// A rational map with complex coefficients, stored like a homogeneous lift:
/// index `i` holds the coefficient of `X^{d−i}Y^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMap {
    f0: Vec<Complex64>,
    f1: Vec<Complex64>,
}

impl ComplexMap {
    pub fn new(f0: Vec<Complex64>, f1: Vec<Complex64>) -> Result<Self> {
        if f0.len() != f1.len() || f0.len() < 3 {
            return Err(Error::invalid("both forms need d + 1 coefficients with d ≥ 2"));
        }
        let map = ComplexMap { f0, f1 };
        if map.is_degenerate() {
            return Err(Error::DegenerateMap);
        }
        Ok(map)
    }

    pub fn degree(&self) -> usize {
        self.f0.len() - 1
    }

    pub fn f0(&self) -> &[Complex64] {
        &self.f0
    }

    pub fn f1(&self) -> &[Complex64] {
        &self.f1
    }

    fn norm(&self) -> f64 {
        self.f0
            .iter()
            .chain(&self.f1)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Sylvester resultant by Gaussian elimination with partial pivoting.
    pub fn resultant(&self) -> Complex64 {
        let d = self.degree();
        let n = 2 * d;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for r in 0..d {
            for i in 0..=d {
                m[r][r + i] = self.f0[i];
                m[r + d][r + i] = self.f1[i];
            }
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
                .unwrap();
            if m[piv][col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det *= m[col][col];
            for r in col + 1..n {
                let factor = m[r][col] / m[col][col];
                for c in col..n {
                    let v = m[col][c];
                    m[r][c] -= factor * v;
                }
            }
        }
        det
    }

    /// `|Res| ≤ 10⁻¹²·‖F‖^{2d}`.
    pub fn is_degenerate(&self) -> bool {
        let scale = self.norm();
        if scale == 0.0 {
            return true;
        }
        let d = self.degree() as i32;
        self.resultant().norm() <= 1e-12 * scale.powi(2 * d)
    }

    /// The `d` solutions of `f(z) = w`, all affine.
    pub fn preimages(&self, w: Complex64) -> Result<Vec<Complex64>> {
        let d = self.degree();
        let c: Vec<Complex64> = (0..=d).map(|k| self.f0[d - k] - w * self.f1[d - k]).collect();
        let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if c[d].norm() <= 1e-14 * scale {
            return Err(Error::NonConvergence(format!(
                "a preimage of {w} lies at infinity"
            )));
        }
        roots_c64(&c)
    }
}

impl From<&RationalMapP1> for ComplexMap {
    fn from(f: &RationalMapP1) -> Self {
        let c = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        ComplexMap {
            f0: c(f.f0_f64()),
            f1: c(f.f1_f64()),
        }
    }
}

impl fmt::Display for ComplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Complex64]| {
            v.iter()
                .map(|c| format!("{}{:+}i", c.re, c.im))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "F0=[{}];F1=[{}]", show(&self.f0), show(&self.f1))
    }
}

/// Equal-weight atoms approximating an equilibrium measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSample {
    /// The solutions of `f^n(z) = base`, with multiplicity.
    pub atoms: Vec<Complex64>,
    pub depth: usize,
    pub base: Complex64,
    pub source: String,
}

impl MeasureSample {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.atoms.len() as f64
    }
}

/// Deterministic base point with modulus in `[1/2, 3/2]`.
pub fn base_point(seed: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 0.5 + rng.gen::<f64>();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, t)
}

/// Pulls `base` back `depth` times through `f`.
///
/// ```
/// use num_complex::Complex64;
/// use adelic::energy::{equilibrium_sample, ComplexMap};
/// use adelic::projmap::RationalMapP1;
///
/// let f = RationalMapP1::polynomial(&[0, 0, 1]).unwrap();
/// let s = equilibrium_sample(&ComplexMap::from(&f), 3, Complex64::new(1.0, 0.0)).unwrap();
/// assert_eq!(s.len(), 8);
/// assert!(s.atoms.iter().all(|z| (z.powu(8) - 1.0).norm() < 1e-12));
/// ```
pub fn equilibrium_sample(f: &ComplexMap, depth: usize, base: Complex64) -> Result<MeasureSample> {
    let d = f.degree();
    let total = (0..depth).try_fold(1usize, |acc, _| acc.checked_mul(d).filter(|&m| m <= MAX_ATOMS));
    if total.is_none() {
        return Err(Error::DepthGuard(format!("{d}^{depth} atoms exceed {MAX_ATOMS}")));
    }
    let mut atoms = vec![base];
    for _ in 0..depth {
        let next: Vec<Vec<Complex64>> = atoms
            .par_iter()
            .map(|&w| f.preimages(w))
            .collect::<Result<_>>()?;
        atoms = next.into_iter().flatten().collect();
    }
    Ok(MeasureSample {
        atoms,
        depth,
        base,
        source: f.to_string(),
    })
}
