use super::*;
use crate::projmap::{ProjPointQ, RationalMapP1};
use crate::qfield::{rat, Place};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{LN_2, PI};

fn poly(c: &[i64]) -> RationalMapP1 {
    RationalMapP1::polynomial(c).unwrap()
}

/// `2·Cl₂(π/3)/π` with the Clausen function summed from its Fourier series,
/// `Cl₂(θ) = Σ sin(kθ)/k²`. Equals `2·(1/π)∫_0^π log⁺|2cos θ| dθ`, the energy of
/// (uniform measure on the unit circle) − (arcsine measure on [−2, 2]).
fn circle_vs_segment_energy() -> f64 {
    let theta = PI / 3.0;
    let n = 2_000_000u64;
    let mut s = 0.0;
    for k in (1..=n).rev() {
        let k = k as f64;
        s += (k * theta).sin() / (k * k);
    }
    2.0 * s / PI
}

/// The same quantity by midpoint quadrature of the log⁺ integral.
fn circle_vs_segment_quadrature() -> f64 {
    let n = 400_000;
    let h = PI / n as f64;
    let s: f64 = (0..n)
        .map(|k| (2.0 * ((k as f64 + 0.5) * h).cos()).abs().ln().max(0.0))
        .sum();
    2.0 * s * h / PI
}

#[test]
fn oracles_agree() {
    let a = circle_vs_segment_energy();
    let b = circle_vs_segment_quadrature();
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    assert!((a - 0.646132).abs() < 1e-5);
}

#[test]
fn sample_examples() {
    let sq = ComplexMap::from(&poly(&[0, 0, 1]));
    let s = equilibrium_sample(&sq, 3, Complex64::new(1.0, 0.0)).unwrap();
    assert_eq!(s.len(), 8);
    assert!((s.weight() * s.len() as f64 - 1.0).abs() < 1e-15);
    for k in 0..8 {
        let w = Complex64::from_polar(1.0, k as f64 * PI / 4.0);
        assert!(s.atoms.iter().any(|z| (z - w).norm() < 1e-12));
    }
    let cheb = ComplexMap::from(&poly(&[-2, 0, 1]));
    let s = equilibrium_sample(&cheb, 2, Complex64::new(2.0, 0.0)).unwrap();
    let mut re: Vec<f64> = s.atoms.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let expect = [-2.0, 0.0, 0.0, 2.0];
    for (a, b) in re.iter().zip(expect) {
        assert!((a - b).abs() < 1e-6, "{re:?}");
    }
    assert!(s.atoms.iter().all(|z| z.im.abs() < 1e-6));
}

#[test]
fn sample_depth_guard() {
    let sq = ComplexMap::from(&poly(&[0, 0, 1]));
    assert!(matches!(
        equilibrium_sample(&sq, 20, Complex64::new(1.0, 0.0)),
        Err(crate::error::Error::DepthGuard(_))
    ));
}

#[test]
fn complex_map_degeneracy() {
    let z = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    assert!(ComplexMap::new(z(&[1.0, 0.0, 0.0]), z(&[1.0, 0.0, 0.0])).is_err());
    let m = ComplexMap::new(z(&[1.0, 0.0, 3.0]), z(&[0.0, 0.0, 1.0])).unwrap();
    assert!((m.resultant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn energy_of_identical_maps_is_zero() {
    for f in [poly(&[0, 0, 1]), poly(&[1, 0, 1]), poly(&[0, -3, 0, 1])] {
        let e = mutual_energy_arch(&f, &f, &EnergyParams::new(6, 3)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(pairing_lower_arch(&f, &f, &EnergyParams::new(5, 1)).unwrap().value, 0.0);
    }
}

#[test]
fn energy_is_symmetric() {
    let pairs = [
        (poly(&[0, 0, 1]), poly(&[-2, 0, 1])),
        (poly(&[1, 0, 1]), poly(&[0, -1, 0, 1])),
        (RationalMapP1::from_ints(&[1, 0, 1], &[1, 0, -1]).unwrap(), poly(&[-1, 0, 1])),
    ];
    for (f, g) in pairs {
        let p = EnergyParams::new(6, 7);
        let a = mutual_energy_arch(&f, &g, &p).unwrap();
        let b = mutual_energy_arch(&g, &f, &p).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error.to_bits(), b.error.to_bits());
    }
}

#[test]
fn energy_matches_oracle() {
    let oracle = circle_vs_segment_energy();
    let e = mutual_energy_arch(&poly(&[0, 0, 1]), &poly(&[-2, 0, 1]), &EnergyParams::new(9, 0)).unwrap();
    assert!(e.value > 0.0);
    assert!((e.value - oracle).abs() <= 0.05 * oracle, "{} vs {oracle}", e.value);
    assert!((e.value - oracle).abs() <= 3.0 * e.error, "{} ± {} vs {oracle}", e.value, e.error);
    assert_eq!(e.atoms_f, 512);
    assert_eq!(e.exceptional, Some(ExceptionalClass::NotDetected));
    let half = pairing_lower_arch(&poly(&[0, 0, 1]), &poly(&[-2, 0, 1]), &EnergyParams::new(9, 0)).unwrap();
    assert_eq!(half.value, 0.5 * e.value);
}

#[test]
fn independent_seeds_converge() {
    let f = ComplexMap::from(&poly(&[1, 0, 1]));
    let values: Vec<f64> = (6..=10)
        .map(|n| {
            let a = equilibrium_sample(&f, n, base_point(1)).unwrap();
            let b = equilibrium_sample(&f, n, base_point(2)).unwrap();
            mutual_energy_samples(&a, &b, default_regularization()).unwrap()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    assert!(values[4].abs() < 0.01, "{values:?}");
}

#[test]
fn energy_rejects_bad_parameters() {
    let f = poly(&[0, 0, 1]);
    assert!(mutual_energy_arch(&f, &f, &EnergyParams::new(0, 0)).is_err());
    let mut p = EnergyParams::new(3, 0);
    p.epsilon = Some(0.0);
    assert!(mutual_energy_arch(&f, &f, &p).is_err());
}

#[test]
fn set_energy_examples() {
    let one = GaloisSetQ::parse(&["0"]).unwrap();
    let eps = AdelicEpsilon::parse(&[("arch", "1/2")]).unwrap();
    let s = regularized_set_energy(&one, &eps, 128).unwrap();
    assert!((s.lhs.to_f64() + LN_2).abs() < 1e-15);
    assert!((s.rhs.to_f64() + LN_2).abs() < 1e-15);
    assert!(s.holds());

    let pair = GaloisSetQ::parse(&["0", "1"]).unwrap();
    let s = regularized_set_energy(&pair, &AdelicEpsilon::trivial(), 128).unwrap();
    assert_eq!(s.rhs.to_f64(), 0.0);
    assert!(s.lhs.to_f64() >= -1e-30);
    assert!(s.holds());

    let many = GaloisSetQ::parse(&["1/2", "3", "-7/4", "10"]).unwrap();
    let s = regularized_set_energy(&many, &AdelicEpsilon::trivial(), 128).unwrap();
    assert!(s.rhs.to_f64().abs() < 1e-30);
    assert!(s.product_formula_residual.to_f64().abs() < 1e-30);
    assert!(s.holds());
}

#[test]
fn arch_kernel_is_continuous() {
    let eps = 0.3;
    let below = arch_kernel(2.0 * eps * (1.0 - 1e-9), eps);
    let above = arch_kernel(2.0 * eps, eps);
    assert!((below - above).abs() < 1e-8);
    // mean of log max(|z|, ε) over |z − x| = ε with x at distance r from 0
    let r = 0.4;
    let n = 200_000;
    let brute: f64 = (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) * std::f64::consts::TAU / n as f64;
            (Complex64::new(r, 0.0) + Complex64::from_polar(eps, t)).norm().max(eps).ln()
        })
        .sum::<f64>()
        / n as f64;
    assert!((arch_kernel(r, eps) - brute).abs() < 1e-8, "{} vs {brute}", arch_kernel(r, eps));
}

#[test]
fn galois_set_validation() {
    assert!(GaloisSetQ::parse::<&str>(&[]).is_err());
    assert!(GaloisSetQ::parse(&["1", "1"]).is_err());
    assert!(GaloisSetQ::parse(&["inf"]).is_err());
    let e = GaloisSetQ::parse(&["3", "-1/2", "0"]).unwrap();
    let names: Vec<String> = e.points().iter().map(ProjPointQ::to_string).collect();
    assert_eq!(names, ["-1/2", "0", "3"]);
    assert!(AdelicEpsilon::parse(&[("arch", "2")]).is_err());
    assert!(AdelicEpsilon::parse(&[("2", "0")]).is_err());
    let eps = AdelicEpsilon::parse(&[("arch", "0.5"), ("3", "1"), ("2", "1/4")]).unwrap();
    assert_eq!(eps.get(&Place::finite(2)), rat(1, 4));
    assert_eq!(eps.get(&Place::finite(3)), rat(1, 1));
    assert_eq!(eps.entries().count(), 2);
}

fn galois_set() -> impl Strategy<Value = GaloisSetQ> {
    proptest::collection::btree_set((-40i64..=40, 1i64..=12), 1..=6).prop_filter_map("duplicate", |s| {
        let pts: Vec<ProjPointQ> = s.into_iter().map(|(p, q)| ProjPointQ::affine(p, q)).collect();
        GaloisSetQ::new(pts).ok()
    })
}

fn epsilon() -> impl Strategy<Value = AdelicEpsilon> {
    let place = prop_oneof![Just(Place::Archimedean), (0usize..5).prop_map(|i| Place::finite([2, 3, 5, 7, 11][i]))];
    proptest::collection::vec((place, 1i64..=64, 1i64..=64), 0..=3).prop_map(|v| {
        let entries = v.into_iter().map(|(pl, a, b)| (pl, rat(a.min(b), a.max(b))));
        let mut seen = std::collections::BTreeMap::new();
        for (pl, e) in entries {
            seen.insert(pl, e);
        }
        AdelicEpsilon::new(seen).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn set_energy_lemma(e in galois_set(), eps in epsilon()) {
        let s = regularized_set_energy(&e, &eps, 128).unwrap();
        let gap = (&s.lhs - &s.rhs).to_f64();
        prop_assert!(gap >= -1e-10, "lhs − rhs = {gap:e}");
        prop_assert!(s.product_formula_residual.to_f64().abs() < 1e-25);
        if e.len() == 1 {
            prop_assert!(gap.abs() <= s.quadrature_error + 1e-12);
        }
    }
}

#[test]
fn split_bound_examples() {
    let sq = poly(&[0, 0, 1]);
    let cheb = poly(&[-2, 0, 1]);
    let e = GaloisSetQ::parse(&["0", "1", "-1"]).unwrap();
    let r = split_bound(&sq, &sq, &e, 0.5, 1e-20, 128).unwrap();
    assert_eq!((r.holder_term, r.height_term, r.total_upper_bound), (0.0, 0.0, 0.0));
    assert!(r.per_place_terms.iter().all(|t| t.epsilon == 1.0));

    let r = split_bound(&sq, &cheb, &e, 0.5, 1e-20, 128).unwrap();
    assert!(r.total_upper_bound.is_finite() && r.total_upper_bound > 0.0);
    assert!(r.height_term.abs() <= r.height_error + 1e-20);
    assert_eq!(r.total_upper_bound, r.holder_term + r.height_term);
    let lower = pairing_lower_arch(&sq, &cheb, &EnergyParams::new(8, 0)).unwrap();
    assert!(r.total_upper_bound >= lower.value - lower.error);
    assert_eq!(r.generic.a, 4.0 * 5.0);
    assert!(r.generic.value >= r.height_term);

    assert!(split_bound(&sq, &cheb, &e, 1.0, 1e-20, 128).is_err());
    assert!(split_bound(&sq, &cheb, &e, 0.0, 1e-20, 128).is_err());
}

#[test]
fn split_bound_is_term_by_term_in_delta() {
    let f = RationalMapP1::from_ints(&[1, 0, 0], &[0, 0, 2]).unwrap();
    let g = poly(&[-2, 0, 1]);
    let e = GaloisSetQ::parse(&["0", "2"]).unwrap();
    for delta in [0.5, 0.25, 0.1] {
        let r = split_bound(&f, &g, &e, delta, 1e-20, 128).unwrap();
        for t in &r.per_place_terms {
            let expect = if t.c > 0.0 {
                let eps = delta.powf(1.0 / t.alpha);
                4.0 * t.c * delta - eps.ln() / 2.0
            } else {
                0.0
            };
            assert!((t.contribution - expect).abs() <= 1e-12 * expect.abs().max(1.0), "{t:?}");
        }
        let half = split_bound(&f, &g, &e, delta / 2.0, 1e-20, 128).unwrap();
        for (a, b) in r.per_place_terms.iter().zip(&half.per_place_terms) {
            if a.c > 0.0 {
                let diff = b.contribution - a.contribution;
                let expect = -2.0 * a.c * delta + LN_2 / (a.alpha * 2.0);
                assert!((diff - expect).abs() < 1e-9, "{diff} vs {expect}");
            }
        }
    }
}

#[test]
fn exceptional_examples() {
    use ExceptionalClass::*;
    let sq = poly(&[0, 0, 1]);
    assert_eq!(exceptional_pair_lookup(&sq, &poly(&[0, 0, 0, 1])), MonomialPair);
    assert_eq!(exceptional_pair_lookup(&poly(&[-2, 0, 1]), &poly(&[0, -3, 0, 1])), ChebyshevPair);
    assert_eq!(exceptional_pair_lookup(&sq, &poly(&[1, 0, 1])), NotDetected);
    assert_eq!(exceptional_pair_lookup(&sq, &poly(&[-2, 0, 1])), NotDetected);
    // 1/z² shares the unit circle with z²
    let inv = RationalMapP1::from_ints(&[0, 0, 1], &[1, 0, 0]).unwrap();
    assert_eq!(exceptional_pair_lookup(&sq, &inv), MonomialPair);
    // 2z² has Julia set |z| = 1/2
    assert_eq!(exceptional_pair_lookup(&sq, &poly(&[0, 0, 2])), NotDetected);
    let lattes_like = RationalMapP1::from_ints(&[1, 0, 1], &[1, 0, -1]).unwrap();
    assert_eq!(exceptional_pair_lookup(&lattes_like, &lattes_like), Unknown);
    assert_eq!(MonomialPair.label(), "EXCEPTIONAL");
    assert_eq!(ChebyshevPair.family(), Some("chebyshev"));
}

#[test]
fn exceptional_survives_conjugation() {
    let phi = [2, 1, 1, 1];
    let t2 = poly(&[-2, 0, 1]).conjugate(phi).unwrap();
    let t3 = poly(&[0, -3, 0, 1]).conjugate(phi).unwrap();
    assert_eq!(exceptional_pair_lookup(&t2, &t3), ExceptionalClass::ChebyshevPair);
    let a = poly(&[0, 0, 1]).conjugate(phi).unwrap();
    let b = poly(&[0, 0, 0, 1]).conjugate(phi).unwrap();
    assert_eq!(exceptional_pair_lookup(&a, &b), ExceptionalClass::MonomialPair);
}

#[test]
fn family_parsing() {
    assert_eq!(parse_family_coefficient("3").unwrap(), (rat(3, 1), rat(0, 1)));
    assert_eq!(parse_family_coefficient("-t").unwrap(), (rat(0, 1), rat(-1, 1)));
    assert_eq!(parse_family_coefficient("2*t").unwrap(), (rat(0, 1), rat(2, 1)));
    assert_eq!(parse_family_coefficient("-1/3+2t").unwrap(), (rat(-1, 3), rat(2, 1)));
    assert!(parse_family_coefficient("tt").is_err());
    assert!(parse_family_coefficient("x").is_err());
    assert!(FormFamily::parse(2, &["1", "0"], &["0", "0", "1"]).is_err());
}

fn square_family() -> MapFamily {
    MapFamily {
        f: FormFamily::parse(2, &["1", "0", "0"], &["0", "0", "1"]).unwrap(),
        g: FormFamily::parse(2, &["1", "0", "t"], &["0", "0", "1"]).unwrap(),
    }
}

#[test]
fn uscan_examples() {
    let grid = [Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(0.25, 0.5)];
    let scan = u_parameter_scan(&square_family(), &grid, &EnergyParams::new(8, 0)).unwrap();
    assert_eq!(scan.rows.len(), 3);
    assert_eq!(scan.rows[0].u, 0.0);
    let direct = mutual_energy_arch(&poly(&[0, 0, 1]), &poly(&[-2, 0, 1]), &EnergyParams::new(8, 0)).unwrap();
    assert!((scan.rows[1].u - direct.value).abs() < 1e-9);
    assert!(scan.rows.iter().all(|r| r.u >= -r.err));
}

#[test]
fn uscan_skips_degenerate_points() {
    // f_t = (X² + tY², tY²) degenerates at t = 0
    let family = MapFamily {
        f: FormFamily::parse(2, &["1", "0", "t"], &["0", "0", "t"]).unwrap(),
        g: FormFamily::parse(2, &["1", "0", "0"], &["0", "0", "1"]).unwrap(),
    };
    let grid = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let scan = u_parameter_scan(&family, &grid, &EnergyParams::new(5, 0)).unwrap();
    assert_eq!(scan.skipped, vec![Complex64::new(0.0, 0.0)]);
    assert_eq!(scan.rows.len(), 1);
    assert!(u_parameter_scan(&family, &grid[..1], &EnergyParams::new(5, 0)).is_err());
}

#[test]
fn energy_is_conjugation_invariant() {
    let f = poly(&[0, 0, 1]);
    let g = poly(&[-2, 0, 1]);
    let p = EnergyParams::new(9, 0);
    let base = mutual_energy_arch(&f, &g, &p).unwrap();
    for phi in [[1, 1, 0, 1], [2, 1, 1, 1], [1, 0, 1, 3]] {
        let fc = f.conjugate(phi).unwrap();
        let gc = g.conjugate(phi).unwrap();
        let e = mutual_energy_arch(&fc, &gc, &p).unwrap();
        let tol = 2.0 * base.error.max(e.error);
        assert!((e.value - base.value).abs() <= tol, "{phi:?}: {} vs {} (tol {tol})", e.value, base.value);
    }
}
