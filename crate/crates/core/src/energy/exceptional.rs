use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::poly::QPoly;
use crate::projmap::{form_mul, Form, RationalMapP1};
use crate::qfield::Rational;
use crate::roots::roots_c64;

/// Outcome of [`exceptional_pair_lookup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExceptionalClass {
    /// Both maps are conjugate, by one Möbius map, to `±z^{±d}` with the same Julia circle.
    MonomialPair,
    /// Both maps are conjugate, by one Möbius map, to `±T_d` with the same Julia segment.
    ChebyshevPair,
    NotDetected,
    /// Neither map has an exceptional point, so a Lattès pair is not excluded.
    Unknown,
}

impl ExceptionalClass {
    pub fn is_exceptional(self) -> bool {
        matches!(self, ExceptionalClass::MonomialPair | ExceptionalClass::ChebyshevPair)
    }

    pub fn label(self) -> &'static str {
        match self {
            ExceptionalClass::MonomialPair | ExceptionalClass::ChebyshevPair => "EXCEPTIONAL",
            ExceptionalClass::NotDetected => "NOT_DETECTED",
            ExceptionalClass::Unknown => "UNKNOWN",
        }
    }

    pub fn family(self) -> Option<&'static str> {
        match self {
            ExceptionalClass::MonomialPair => Some("monomial"),
            ExceptionalClass::ChebyshevPair => Some("chebyshev"),
            _ => None,
        }
    }
}

impl fmt::Display for ExceptionalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            Some(k) => write!(f, "{} ({k})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

const MATCH_TOL: f64 = 1e-8;

fn d_x(c: &[BigInt]) -> Form {
    let d = c.len() - 1;
    (0..d).map(|i| &c[i] * BigInt::from(d - i)).collect()
}

fn d_y(c: &[BigInt]) -> Form {
    (1..c.len()).map(|i| &c[i] * BigInt::from(i)).collect()
}

fn sub_forms(a: &[BigInt], b: &[BigInt]) -> Form {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The Jacobian determinant of `F`, a form of degree `2d − 2` vanishing at the critical points.
fn wronskian(f: &RationalMapP1) -> Form {
    sub_forms(
        &form_mul(&d_x(f.f0()), &d_y(f.f1())),
        &form_mul(&d_y(f.f0()), &d_x(f.f1())),
    )
}

fn form_pow(a: &[BigInt], k: usize) -> Form {
    (1..k).fold(a.to_vec(), |acc, _| form_mul(&acc, a))
}

/// `G(F₀, F₁)`.
fn compose(g: &[BigInt], f0: &[BigInt], f1: &[BigInt]) -> Form {
    let k = g.len() - 1;
    let mut out: Option<Form> = None;
    for (i, gi) in g.iter().enumerate() {
        if gi.is_zero() {
            continue;
        }
        let mut term = vec![gi.clone()];
        for _ in 0..k - i {
            term = form_mul(&term, f0);
        }
        for _ in 0..i {
            term = form_mul(&term, f1);
        }
        out = Some(match out {
            None => term,
            Some(o) => o.iter().zip(&term).map(|(a, b)| a + b).collect(),
        });
    }
    out.unwrap_or_else(|| vec![BigInt::zero(); k * (f0.len() - 1) + 1])
}

fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    let Some(j) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    a.len() == b.len() && !a[j].is_zero() && a.iter().zip(b).all(|(x, y)| x * &b[j] == &a[j] * y)
}

/// `Q∘F ∝ Q^d`: the zeros of `Q` form a totally invariant set.
fn totally_invariant(q: &[BigInt], f: &RationalMapP1) -> bool {
    proportional(&compose(q, f.f0(), f.f1()), &form_pow(q, f.degree()))
}

fn form_to_affine(c: &[BigInt]) -> QPoly {
    QPoly::new(c.iter().rev().map(|x| Rational::from(x.clone())).collect())
}

fn affine_to_form(p: &QPoly, degree: usize) -> Form {
    let ints = p.to_primitive_integers().unwrap_or_default();
    let mut out = vec![BigInt::zero(); degree + 1];
    for (k, c) in ints.into_iter().enumerate() {
        out[degree - k] = c;
    }
    out
}

/// Points of multiplicity at least `d − 1` in the critical divisor: rational ones as
/// linear forms, plus an irreducible quadratic when the rest of them has degree 2.
struct Candidates {
    linear: Vec<Form>,
    quadratic: Option<Form>,
}

fn candidates(f: &RationalMapP1) -> Candidates {
    let d = f.degree();
    let w = wronskian(f);
    let mut linear = Vec::new();
    let at_infinity = w.iter().take_while(|x| x.is_zero()).count();
    if at_infinity >= d - 1 && at_infinity < w.len() {
        linear.push(vec![BigInt::zero(), BigInt::from(1)]);
    }
    let mut rest = QPoly::constant(Rational::from_integer(1.into()));
    for (factor, k) in form_to_affine(&w).squarefree_decomposition() {
        if k < d - 1 {
            continue;
        }
        let mut remaining = factor.clone();
        for r in factor.rational_roots() {
            let lin = QPoly::new(vec![-r.clone(), Rational::from_integer(1.into())]);
            remaining = remaining.div_rem(&lin).0;
            linear.push(vec![r.denom().clone(), -r.numer().clone()]);
        }
        rest = &rest * &remaining;
    }
    let quadratic = (rest.degree() == Some(2)).then(|| affine_to_form(&rest, 2));
    Candidates { linear, quadratic }
}

/// Roots of a binary form as affine points, `None` standing for `∞`.
fn form_roots(q: &[BigInt]) -> Option<Vec<Option<Complex64>>> {
    let deg = q.len() - 1;
    let lead_zeros = q.iter().take_while(|x| x.is_zero()).count();
    let affine: Vec<Complex64> = q[lead_zeros..]
        .iter()
        .rev()
        .map(|x| Complex64::new(x.to_f64()?, 0.0).into())
        .collect::<Option<_>>()?;
    let mut out = vec![None; lead_zeros];
    if deg > lead_zeros {
        out.extend(roots_c64(&affine).ok()?.into_iter().map(Some));
    }
    Some(out)
}

fn fixed_point_form(f: &RationalMapP1) -> Form {
    let d = f.degree();
    (0..=d + 1)
        .map(|i| {
            let a = if i <= d { f.f1()[i].clone() } else { BigInt::zero() };
            let b = if i >= 1 { f.f0()[i - 1].clone() } else { BigInt::zero() };
            a - b
        })
        .collect()
}

/// `|ψ(p)|` for a fixed point `p` away from `{a, b}`, with `ψ(z) = (z − a)/(z − b)`.
fn julia_radius(f: &RationalMapP1, a: Option<Complex64>, b: Option<Complex64>) -> Option<f64> {
    let (a, b) = match (a, b) {
        (None, Some(b)) => (Some(b), None),
        other => other,
    };
    let a = a?;
    let away = |z: &Complex64| {
        let da = (z - a).norm();
        b.map_or(da, |b| da.min((z - b).norm()))
    };
    let p = form_roots(&fixed_point_form(f))?
        .into_iter()
        .flatten()
        .max_by(|x, y| away(x).total_cmp(&away(y)))?;
    Some(match b {
        Some(b) => ((p - a) / (p - b)).norm(),
        None => (p - a).norm(),
    })
}

fn monomial_set(f: &RationalMapP1, c: &Candidates) -> Option<Form> {
    let mut options: Vec<Form> = Vec::new();
    for i in 0..c.linear.len() {
        for j in i + 1..c.linear.len() {
            options.push(form_mul(&c.linear[i], &c.linear[j]));
        }
    }
    options.extend(c.quadratic.clone());
    options.into_iter().find(|q| totally_invariant(q, f))
}

fn chebyshev_coefficients(d: usize) -> Vec<f64> {
    let mut prev = vec![2.0];
    let mut cur = vec![0.0, 1.0];
    for _ in 1..d {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `P(λz + β)` for ascending coefficients.
fn affine_substitute(p: &[Complex64], lambda: Complex64, beta: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); p.len()];
    for &c in p.iter().rev() {
        let mut next = vec![Complex64::zero(); p.len()];
        for k in 0..p.len() {
            next[k] += out[k] * beta;
            if k + 1 < p.len() {
                next[k + 1] += out[k] * lambda;
            }
        }
        next[0] += c;
        out = next;
    }
    out
}

/// For a polynomial `P` affinely conjugate to `T_d`, the endpoints of its Julia segment.
fn chebyshev_segment(p: &[Complex64]) -> Option<(Complex64, Complex64)> {
    let d = p.len() - 1;
    let lead = p[d];
    let lambda = lead.powf(-1.0 / (d as f64 - 1.0));
    let beta = -p[d - 1] / (lead * d as f64);
    let mut pc = affine_substitute(p, lambda, beta);
    pc[0] -= beta;
    for c in pc.iter_mut() {
        *c /= lambda;
    }
    let t = chebyshev_coefficients(d);
    (0..d - 1).find_map(|k| {
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / (d - 1) as f64);
        let ok = pc.iter().zip(&t).enumerate().all(|(j, (c, tj))| {
            (c * omega.powi(j as i32 - 1) - tj).norm() <= MATCH_TOL * (1.0 + tj.abs())
        });
        ok.then(|| (beta - 2.0 * lambda * omega, beta + 2.0 * lambda * omega))
    })
}

fn moebius_to(point: &[BigInt]) -> Option<[i64; 4]> {
    let q = point[0].to_i64()?;
    let p = -point[1].to_i64()?;
    if q == 0 {
        return Some([1, 0, 0, 1]);
    }
    let g = p.extended_gcd(&q);
    let (x, y) = if g.gcd < 0 { (-g.x, -g.y) } else { (g.x, g.y) };
    Some([p, -y, q, x])
}

fn polynomial_coefficients(f: &RationalMapP1) -> Option<Vec<Complex64>> {
    let (num, den) = f.dehomogenize();
    if den.degree() != Some(0) {
        return None;
    }
    let s = den.coeff(0);
    num.coeffs()
        .iter()
        .map(|c| Some(Complex64::new((c / &s).to_f64()?, 0.0)))
        .collect()
}

fn segment_of(f: &RationalMapP1, m: [i64; 4]) -> Option<(Complex64, Complex64)> {
    let h = f.conjugate(m).ok()?;
    chebyshev_segment(&polynomial_coefficients(&h)?)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MATCH_TOL * (1.0 + a.norm())
}

/// Recognizes pairs with equal equilibrium measures among monomial and Chebyshev maps.
///
/// ```
/// use adelic::energy::{exceptional_pair_lookup, ExceptionalClass};
/// use adelic::projmap::RationalMapP1;
///
/// let t2 = RationalMapP1::polynomial(&[-2, 0, 1]).unwrap();
/// let t3 = RationalMapP1::polynomial(&[0, -3, 0, 1]).unwrap();
/// assert_eq!(exceptional_pair_lookup(&t2, &t3), ExceptionalClass::ChebyshevPair);
/// ```
pub fn exceptional_pair_lookup(f: &RationalMapP1, g: &RationalMapP1) -> ExceptionalClass {
    let cf = candidates(f);
    let cg = candidates(g);
    if let (Some(qf), Some(qg)) = (monomial_set(f, &cf), monomial_set(g, &cg)) {
        if proportional(&qf, &qg) {
            if let Some(r) = form_roots(&qf) {
                let (a, b) = (r[0], r[1]);
                if let (Some(rf), Some(rg)) = (julia_radius(f, a, b), julia_radius(g, a, b)) {
                    if (rf - rg).abs() <= MATCH_TOL * rf.max(1.0) {
                        return ExceptionalClass::MonomialPair;
                    }
                }
            }
        }
        return ExceptionalClass::NotDetected;
    }
    let pf: Vec<&Form> = cf.linear.iter().filter(|l| totally_invariant(l, f)).collect();
    let pg: Vec<&Form> = cg.linear.iter().filter(|l| totally_invariant(l, g)).collect();
    for l in &pf {
        if !pg.iter().any(|k| proportional(l, k)) {
            continue;
        }
        let Some(m) = moebius_to(l) else { continue };
        if let (Some(sf), Some(sg)) = (segment_of(f, m), segment_of(g, m)) {
            if (close(sf.0, sg.0) && close(sf.1, sg.1)) || (close(sf.0, sg.1) && close(sf.1, sg.0)) {
                return ExceptionalClass::ChebyshevPair;
            }
        }
    }
    let has_exceptional = |c: &Candidates, p: &[&Form], h: &RationalMapP1| {
        !p.is_empty() || monomial_set(h, c).is_some()
    };
    if has_exceptional(&cf, &pf, f) || has_exceptional(&cg, &pg, g) {
        ExceptionalClass::NotDetected
    } else {
        ExceptionalClass::Unknown
    }
}
