use std::collections::BTreeSet;

use super::GaloisSetQ;
use crate::error::{Error, Result};
use crate::green::{holder_certificate, relevant_places, HolderCertificate};
use crate::heights::{average_height, hrat};
use crate::projmap::RationalMapP1;
use crate::qfield::Place;

/// Contribution of one place to the Hölder part of the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceTerm {
    pub place: Place,
    pub c_f: f64,
    pub alpha_f: f64,
    pub c_g: f64,
    pub alpha_g: f64,
    /// Constant of `½(g_f + g_g)`; at least 1 at the archimedean place unless all certificates are trivial.
    pub c: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// `4C·ε^α − log(ε)/#E`.
    pub contribution: f64,
}

/// `A(δ − log δ/#E)(h(f) + h(g) + 1) + heights` with `A = 4C₃(d₁ + d₂ + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericBound {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c3: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingBoundReport {
    pub delta: f64,
    pub set_size: usize,
    pub per_place_terms: Vec<PlaceTerm>,
    pub holder_term: f64,
    pub height_term: f64,
    /// Certified error of `height_term`.
    pub height_error: f64,
    pub total_upper_bound: f64,
    pub generic: GenericBound,
}

fn combine(place: Place, cf: &HolderCertificate, cg: &HolderCertificate, delta: f64, n: usize, floor: bool) -> PlaceTerm {
    let mut c = cf.c + cg.c;
    let inv_alpha: f64 = [cf, cg]
        .iter()
        .filter(|h| !h.is_trivial())
        .map(|h| 1.0 / h.alpha)
        .sum();
    let alpha = if inv_alpha > 0.0 { 1.0 / inv_alpha } else { 1.0 };
    if floor && place.is_archimedean() {
        c = c.max(1.0);
    }
    let epsilon = if c > 0.0 { delta.powf(1.0 / alpha) } else { 1.0 };
    let contribution = 4.0 * c * epsilon.powf(alpha) - epsilon.ln() / n as f64;
    PlaceTerm {
        place,
        c_f: cf.c,
        alpha_f: cf.alpha,
        c_g: cg.c,
        alpha_g: cg.alpha,
        c,
        alpha,
        epsilon,
        contribution,
    }
}

/// Upper bound for `⟨f, g⟩` from Hölder certificates and the heights of `E`.
///
/// At each place `ε_v = δ^{1/α_v}` when `C_v > 0` and `ε_v = 1` otherwise; the
/// archimedean constant is raised to at least 1 unless every certificate is trivial, in
/// which case both metrics are the naive one and the Hölder part vanishes.
///
/// ```
/// use adelic::energy::{split_bound, GaloisSetQ};
/// use adelic::projmap::RationalMapP1;
///
/// let f = RationalMapP1::polynomial(&[0, 0, 1]).unwrap();
/// let e = GaloisSetQ::parse(&["0", "1", "-1"]).unwrap();
/// let r = split_bound(&f, &f, &e, 0.5, 1e-20, 128).unwrap();
/// assert_eq!((r.holder_term, r.height_term), (0.0, 0.0));
/// ```
pub fn split_bound(
    f: &RationalMapP1,
    g: &RationalMapP1,
    e: &GaloisSetQ,
    delta: f64,
    tol: f64,
    precision: usize,
) -> Result<PairingBoundReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    let n = e.len();
    let places: BTreeSet<Place> = relevant_places(f)
        .into_iter()
        .chain(relevant_places(g))
        .collect();
    let certs = places
        .into_iter()
        .map(|v| Ok((holder_certificate(f, &v)?, holder_certificate(g, &v)?, v)))
        .collect::<Result<Vec<_>>>()?;
    let floor = certs.iter().any(|(cf, cg, _)| !cf.is_trivial() || !cg.is_trivial());
    let per_place_terms: Vec<PlaceTerm> = certs
        .into_iter()
        .map(|(cf, cg, v)| combine(v, &cf, &cg, delta, n, floor))
        .collect();
    let holder_term: f64 = per_place_terms.iter().map(|t| t.contribution).sum();
    let (h, height_error) = average_height(f, g, e, tol, precision)?;
    let height_term = h.to_f64();

    let c3 = 1.0;
    let c1 = std::f64::consts::E;
    let a = 4.0 * c3 * (f.degree() + g.degree() + 1) as f64;
    let b = 4.0 * c3 * c1.ln();
    let hr = hrat(f, 64).to_f64() + hrat(g, 64).to_f64();
    let generic = GenericBound {
        a,
        b,
        c1,
        c3,
        value: a * (delta - delta.ln() / n as f64) * (hr + 1.0) + height_term,
    };
    Ok(PairingBoundReport {
        delta,
        set_size: n,
        per_place_terms,
        holder_term,
        height_term,
        height_error,
        total_upper_bound: holder_term + height_term,
        generic,
    })
}
