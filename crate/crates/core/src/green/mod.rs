//! Local Green functions `g_F = Σ_j d^{−j} u_F∘f^j` and their Hölder certificates.
//!
//! At a finite place `p` the normalized lift has `‖F‖_p = 1`, and everything is
//! governed by `R = |Res(F)|_p = p^{−v}`: `u_F` takes values in `[−v·log p/d, 0]`,
//! is constant on balls of radius `R`, and `f` is `R^{−2}`-Lipschitz.
//!
//! At the archimedean place the constants come from three exact integers attached
//! to the lift: the row sum `S` (`‖F(X)‖ ≤ S‖X‖^d`), the adjugate constant `K`
//! (`‖F(X)‖ ≥ |Res|/K·‖X‖^d`) and the Bezoutian constant `Bz`.
//!
//! * `C1 = max(log S, log(K/|Res|)) / d` bounds `|u_F|`.
//! * `C2 = max(2(S·K/|Res| + 1), 4d·C1)` is a Lipschitz constant of `u_F`. For
//!   `dist < 1/(2d)`, write `X − cY` with `|c| ≥ 1 − dist` and `‖X − cY‖ ≤ dist`,
//!   then compare `‖F(X)‖` with `|c|^d‖F(Y)‖`; otherwise use `2·C1`.
//! * `C3 = Bz·(K/|Res|)²` is a Lipschitz constant of `f`.

mod constants;
mod series;
mod verify;

pub use constants::{
    adjugate_constant, adjugate_row, bezoutian, bezoutian_constant, row_sum_constant,
};
pub use series::{
    green_value, green_value_c, green_value_finite, green_value_q, tail_terms, u_f, u_f_c,
    u_f_finite, u_f_q_arch, GreenValue,
};
pub use verify::{holder_verify, HolderReport, SamplePair};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::projmap::RationalMapP1;
use crate::qfield::{BigReal, Place, Prime};

fn ln_int(n: &BigInt) -> f64 {
    BigReal::ln_abs_int(n, 64).to_f64()
}

/// Constants of the two-sided bound `|Res|/(C′‖F‖^{2d−1}) ‖X‖^d ≤ ‖F(X)‖ ≤ C‖F‖‖X‖^d`
/// and of the divisibility bound used for the Lipschitz constant of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchConstants {
    /// `C = d + 1`, valid for every lift of degree `d`.
    pub eval_upper: f64,
    /// `max(1, K/‖F‖^{2d−1})`.
    pub eval_lower: f64,
    /// `max(1, Bz/‖F‖²)`.
    pub pair_div: f64,
    pub row_sum: BigInt,
    pub adjugate: BigInt,
    pub bezoutian: BigInt,
}

/// The three constants of the local Green function and the radius `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGreenParams {
    /// `sup |u_F|`.
    pub c1: f64,
    /// Lipschitz constant of `u_F`.
    pub c2: f64,
    /// Lipschitz constant of `f`.
    pub c3: f64,
    /// `log R` with `R = |Res(F)|_v / ‖F‖_v^{2d}`.
    pub log_r: f64,
}

/// `|g(z) − g(w)| ≤ C·min(dist(z,w), 1)^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderCertificate {
    pub place: Place,
    pub c: f64,
    pub alpha: f64,
    pub params: LocalGreenParams,
}

impl HolderCertificate {
    /// True when the certificate records `g ≡ 0`.
    pub fn is_trivial(&self) -> bool {
        self.c == 0.0
    }

    pub fn bound(&self, dist: f64) -> f64 {
        if self.c == 0.0 {
            0.0
        } else {
            self.c * dist.min(1.0).powf(self.alpha)
        }
    }
}

fn require_degree(f: &RationalMapP1) -> Result<usize> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::invalid("Green functions need degree at least 2"));
    }
    Ok(d)
}

/// Instance constants at the archimedean place; all equal 1 at a finite place.
pub fn arch_eval_constants(f: &RationalMapP1, v: &Place) -> ArchConstants {
    let s = row_sum_constant(f.f0(), f.f1());
    let k = adjugate_constant(f.f0(), f.f1());
    let bz = bezoutian_constant(f.f0(), f.f1());
    match v {
        Place::Finite(_) => ArchConstants {
            eval_upper: 1.0,
            eval_lower: 1.0,
            pair_div: 1.0,
            row_sum: s,
            adjugate: k,
            bezoutian: bz,
        },
        Place::Archimedean => {
            let d = f.degree();
            let ln_f = ln_int(&f.max_coeff());
            let lower = (ln_int(&k) - (2 * d - 1) as f64 * ln_f).exp().max(1.0);
            let pair = (ln_int(&bz) - 2.0 * ln_f).exp().max(1.0);
            ArchConstants {
                eval_upper: (d + 1) as f64,
                eval_lower: lower,
                pair_div: pair,
                row_sum: s,
                adjugate: k,
                bezoutian: bz,
            }
        }
    }
}

fn finite_params(f: &RationalMapP1, p: &Prime) -> LocalGreenParams {
    let d = f.degree() as f64;
    let v = f.resultant_valuation(p);
    if v == 0 {
        return LocalGreenParams {
            c1: 0.0,
            c2: 0.0,
            c3: 1.0,
            log_r: 0.0,
        };
    }
    let log_inv_r = v as f64 * p.ln(64).to_f64();
    LocalGreenParams {
        c1: log_inv_r / d,
        c2: log_inv_r / d * log_inv_r.exp(),
        c3: (2.0 * log_inv_r).exp(),
        log_r: -log_inv_r,
    }
}

fn arch_params(f: &RationalMapP1) -> LocalGreenParams {
    let d = f.degree();
    let df = d as f64;
    let s = row_sum_constant(f.f0(), f.f1());
    let k = adjugate_constant(f.f0(), f.f1());
    let bz = bezoutian_constant(f.f0(), f.f1());
    let res = f.resultant().abs();
    let ln_s = ln_int(&s);
    let ln_k_res = ln_int(&k) - ln_int(&res);
    let c1 = if s.is_one() && k <= res {
        0.0
    } else {
        ln_s.max(ln_k_res).max(0.0) / df
    };
    let c2 = (2.0 * ((ln_s + ln_k_res).exp() + 1.0)).max(4.0 * df * c1);
    let c3 = (ln_int(&bz) + 2.0 * ln_k_res).exp();
    let log_r = ln_int(&res) - 2.0 * df * ln_int(&f.max_coeff());
    LocalGreenParams { c1, c2, c3, log_r }
}

/// `C1(F)`: a certified bound for `sup |u_F|` at `v`.
pub fn sup_uf_bound(f: &RationalMapP1, v: &Place) -> f64 {
    local_params(f, v).c1
}

/// Lipschitz data of `u_F`: the constant `C2(F)` and, at a finite place, the radius
/// `R` below which `u_F` is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzU {
    pub c2: f64,
    pub radius: Option<f64>,
}

pub fn lip_uf_bound(f: &RationalMapP1, v: &Place) -> LipschitzU {
    let p = local_params(f, v);
    LipschitzU {
        c2: p.c2,
        radius: (!v.is_archimedean()).then(|| p.log_r.exp()),
    }
}

/// `C3(F)`: a Lipschitz constant of `f` for the chordal metric at `v`.
pub fn lip_f_bound(f: &RationalMapP1, v: &Place) -> f64 {
    local_params(f, v).c3
}

pub fn local_params(f: &RationalMapP1, v: &Place) -> LocalGreenParams {
    match v {
        Place::Archimedean => arch_params(f),
        Place::Finite(p) => finite_params(f, p),
    }
}

/// Hölder certificate `(C, α)` of `g_F` at `v`.
///
/// Archimedean branch: with `L = max(C3, 2d)`, `λ = L/d` and `N` the first index with
/// `L^{−N} ≤ dist`, split the series at `N`; this gives `α = log d / log L` and
/// `C = d·(C2·λ/(λ−1) + 2·C1/(d−1))`.
///
/// Finite branch with `R < 1`: if `N` is the first index where the orbits separate
/// beyond `R`, then `dist > R^{2N+1}`, which gives `α = min(1, log d / (2 log(1/R)))`
/// and `C = C1·√d·d/(d−1)`.
///
/// When `g_F ≡ 0` the certificate is `(0, 1)`.
pub fn holder_certificate(f: &RationalMapP1, v: &Place) -> Result<HolderCertificate> {
    let d = require_degree(f)? as f64;
    let params = local_params(f, v);
    if params.c1 == 0.0 {
        return Ok(HolderCertificate {
            place: v.clone(),
            c: 0.0,
            alpha: 1.0,
            params,
        });
    }
    let (c, alpha) = match v {
        Place::Archimedean => {
            let l = params.c3.max(2.0 * d);
            let lambda = l / d;
            let c = d * (params.c2 * lambda / (lambda - 1.0) + 2.0 * params.c1 / (d - 1.0));
            (c, d.ln() / l.ln())
        }
        Place::Finite(_) => {
            let alpha = (d.ln() / (-2.0 * params.log_r)).min(1.0);
            (params.c1 * d / (d - 1.0) * d.sqrt(), alpha)
        }
    };
    Ok(HolderCertificate {
        place: v.clone(),
        c,
        alpha,
        params,
    })
}

/// Places where `g_F` can be nonzero: the archimedean place and the primes dividing `Res(F)`.
pub fn relevant_places(f: &RationalMapP1) -> Vec<Place> {
    std::iter::once(Place::Archimedean)
        .chain(f.bad_primes().iter().cloned().map(Place::Finite))
        .collect()
}

/// `B_f = Σ_v C1_v · d/(d−1)`, a bound for `|ĥ_f − h_nv|`.
pub fn height_difference_bound(f: &RationalMapP1) -> f64 {
    let d = f.degree() as f64;
    relevant_places(f)
        .iter()
        .map(|v| sup_uf_bound(f, v))
        .sum::<f64>()
        * d
        / (d - 1.0)
}
