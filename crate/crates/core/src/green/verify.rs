use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::series::{complex_series, finite_series_with, prime_powers, tail_terms};
use super::{local_params, HolderCertificate};
use crate::projmap::{chordal_distance_c, chordal_valuation, ProjPointC, ProjPointQ, RationalMapP1};
use crate::qfield::{Place, Prime, Rational};

/// Truncation tolerance of the Green values compared by [`holder_verify`].
const VERIFY_TOL: f64 = 1e-10;

/// One checked pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    pub z: String,
    pub w: String,
    /// `min(dist(z, w), 1)`.
    pub dist: f64,
    /// `|g(z) − g(w)|`.
    pub lhs: f64,
    /// `C·dist^α + 2·tolerance`.
    pub rhs: f64,
}

impl SamplePair {
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderReport {
    pub place: Place,
    pub samples: usize,
    pub passed: bool,
    pub max_ratio: f64,
    /// First violating pair, if any, else the pair with the largest ratio.
    pub witness: Option<SamplePair>,
    pub violations: usize,
}

fn complex_str(z: &ProjPointC) -> String {
    match z.to_affine() {
        Some(w) => format!("{:.17e}{:+.17e}i", w.re, w.im),
        None => "inf".to_string(),
    }
}

fn sample_complex(rng: &mut ChaCha8Rng) -> ProjPointC {
    let r = 3.0 * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    let z = Complex64::from_polar(r, t);
    match rng.gen_range(0..8) {
        0 => ProjPointC::new(Complex64::new(1.0, 0.0), z / 3.0),
        1 => ProjPointC::affine(Complex64::new(z.re, 0.0)),
        _ => ProjPointC::affine(z),
    }
}

fn arch_pair(rng: &mut ChaCha8Rng) -> (ProjPointC, ProjPointC) {
    let z = sample_complex(rng);
    let w = if rng.gen_bool(0.5) {
        sample_complex(rng)
    } else {
        let r = 10f64.powf(-rng.gen_range(0.0..8.0));
        let t = rng.gen::<f64>() * std::f64::consts::TAU;
        let s = rng.gen::<f64>() * std::f64::consts::TAU;
        let e0 = Complex64::from_polar(r * rng.gen::<f64>(), t);
        let e1 = Complex64::from_polar(r * rng.gen::<f64>(), s);
        ProjPointC::new(z.x() + e0, z.y() + e1)
    };
    (z, w)
}

fn anchors() -> Vec<ProjPointQ> {
    vec![
        ProjPointQ::from_int(0),
        ProjPointQ::infinity(),
        ProjPointQ::from_int(1),
        ProjPointQ::from_int(-1),
    ]
}

fn sample_rational(rng: &mut ChaCha8Rng) -> ProjPointQ {
    let a = rng.gen_range(-1000i64..=1000);
    let b = rng.gen_range(0i64..=1000);
    if a == 0 && b == 0 {
        ProjPointQ::infinity()
    } else {
        ProjPointQ::affine(a, b)
    }
}

fn finite_pair(rng: &mut ChaCha8Rng, p: &Prime, index: usize) -> (ProjPointQ, ProjPointQ) {
    let a = anchors();
    if index < a.len() * a.len() {
        return (a[index / a.len()].clone(), a[index % a.len()].clone());
    }
    let z = sample_rational(rng);
    if rng.gen_bool(0.5) {
        return (z, sample_rational(rng));
    }
    let k = rng.gen_range(0..10usize);
    let t = BigInt::from(rng.gen_range(-50i64..=50));
    let pk = num_traits::pow(p.to_bigint(), k);
    let w = if z.is_infinity() {
        ProjPointQ::from_coords(BigInt::from(1), pk * t).unwrap()
    } else {
        ProjPointQ::from_coords(z.x() + z.y() * &pk * t, z.y().clone()).unwrap()
    };
    (z, w)
}

/// Samples pairs and checks `|g(z) − g(w)| ≤ C·min(dist,1)^α + 2·tol` for each.
///
/// Finite places use rational points, including the pairs among `0, ∞, ±1` and pairs
/// that are `p`-adically close. The archimedean place uses complex points, half of
/// them close pairs.
pub fn holder_verify(
    f: &RationalMapP1,
    cert: &HolderCertificate,
    num_samples: usize,
    seed: u64,
) -> HolderReport {
    let place = cert.place.clone();
    let c1 = local_params(f, &place).c1;
    let (f0, f1) = (f.f0_f64(), f.f1_f64());
    let v = place.prime().map_or(0, |p| f.resultant_valuation(p));
    let green_c = |x: &ProjPointC| {
        if c1 == 0.0 {
            (0.0, 0.0)
        } else {
            complex_series(&f0, &f1, f.degree(), c1, x, VERIFY_TOL)
        }
    };
    let ln_p = place.prime().map_or(0.0, |p| p.ln(64).to_f64());
    let terms = tail_terms(c1, f.degree(), VERIFY_TOL);
    let pows = match place.prime() {
        Some(p) if v > 0 => prime_powers(p, (terms + 1) * v as usize + 1),
        _ => Vec::new(),
    };
    let green_p = |x: &ProjPointQ, p: &Prime| {
        if v == 0 {
            (Rational::zero(), 0.0)
        } else {
            let (coeff, _, tail) = finite_series_with(f, x, p, terms, c1, &pows);
            (coeff, tail)
        }
    };
    let pairs: Vec<SamplePair> = (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            match &place {
                Place::Archimedean => {
                    let (z, w) = arch_pair(&mut rng);
                    let (gz, ez) = green_c(&z);
                    let (gw, ew) = green_c(&w);
                    let dist = chordal_distance_c(&z, &w).min(1.0);
                    let slack = 2.0 * (ez.max(ew) + 1e-12 * (1.0 + gz.abs() + gw.abs()));
                    SamplePair {
                        z: complex_str(&z),
                        w: complex_str(&w),
                        dist,
                        lhs: (gz - gw).abs(),
                        rhs: cert.bound(dist) + slack,
                    }
                }
                Place::Finite(p) => {
                    let (z, w) = finite_pair(&mut rng, p, i);
                    let (gz, tz) = green_p(&z, p);
                    let (gw, tw) = green_p(&w, p);
                    let dist = match chordal_valuation(&z, &w, p) {
                        None => 0.0,
                        Some(k) => (ln_p * -(k as f64)).exp(),
                    };
                    let diff = (gz - gw).to_f64().unwrap_or(f64::INFINITY) * ln_p;
                    SamplePair {
                        z: z.to_string(),
                        w: w.to_string(),
                        dist,
                        lhs: diff.abs(),
                        rhs: cert.bound(dist) + 2.0 * tz.max(tw),
                    }
                }
            }
        })
        .collect();
    let violations = pairs.iter().filter(|s| s.lhs > s.rhs).count();
    let max_ratio = pairs.iter().map(SamplePair::ratio).fold(0.0, f64::max);
    let witness = pairs
        .iter()
        .find(|s| s.lhs > s.rhs)
        .or_else(|| {
            pairs
                .iter()
                .max_by(|a, b| a.ratio().total_cmp(&b.ratio()))
        })
        .cloned();
    HolderReport {
        place,
        samples: num_samples,
        passed: violations == 0,
        max_ratio,
        witness,
        violations,
    }
}
