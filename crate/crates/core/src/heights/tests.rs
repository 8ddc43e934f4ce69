use super::*;
use crate::green::height_difference_bound;
use proptest::prelude::*;

const LN2: f64 = std::f64::consts::LN_2;

fn poly(c: &[i64]) -> RationalMapP1 {
    RationalMapP1::polynomial(c).unwrap()
}

fn ch(f: &RationalMapP1, x: &ProjPointQ) -> HeightValue {
    canonical_height(f, x, 1e-30, 256).unwrap()
}

/// `d^{−n} h_nv(fⁿx)` by exact iteration.
fn direct_limit(f: &RationalMapP1, x: &ProjPointQ, n: usize) -> f64 {
    let mut y = x.clone();
    for _ in 0..n {
        y = f.apply(&y);
    }
    naive_height(&y, 256).to_f64() / (f.degree() as f64).powi(n as i32)
}

#[test]
fn naive_examples() {
    assert!((naive_height(&ProjPointQ::from_int(2), 128).to_f64() - LN2).abs() < 1e-16);
    assert_eq!(naive_height(&ProjPointQ::infinity(), 128).to_f64(), 0.0);
    assert!((naive_height(&ProjPointQ::affine(3, 7), 128).to_f64() - 7f64.ln()).abs() < 1e-15);
}

#[test]
fn canonical_examples() {
    let sq = poly(&[0, 0, 1]);
    let h = ch(&sq, &ProjPointQ::from_int(2));
    let ln2 = BigReal::ln_abs_int(&2.into(), 256);
    assert!((&h.value - &ln2).abs().to_f64() <= 1e-30);
    assert!(h.certified_error <= 1e-30);

    let cheb = poly(&[-2, 0, 1]);
    let h0 = ch(&cheb, &ProjPointQ::from_int(0));
    assert!(h0.value.to_f64().abs() <= 1e-30);

    let three = ProjPointQ::from_int(3);
    let h3 = ch(&cheb, &three).value.to_f64();
    let n = 12;
    let oracle = direct_limit(&cheb, &three, n);
    // |ĥ − d^{−n}h_nv(fⁿx)| ≤ B_f·d^{−n}
    let gap = height_difference_bound(&cheb) / 2f64.powi(n as i32);
    assert!(h3 > 0.0);
    assert!((h3 - oracle).abs() <= gap + 1e-12, "{h3} vs {oracle}");
}

#[test]
fn breakdown_covers_bad_primes() {
    // z²/2 has Res = 4
    let f = RationalMapP1::from_ints(&[1, 0, 0], &[0, 0, 2]).unwrap();
    let h = ch(&f, &ProjPointQ::from_int(3));
    let places: Vec<String> = h.breakdown.iter().map(|c| c.place.to_string()).collect();
    assert_eq!(places.len(), 2);
    assert!(h.breakdown.iter().any(|c| c.exact.is_some()));
    let sum = h.breakdown.iter().fold(h.naive.clone(), |acc, c| &acc + &c.value);
    assert!((&sum - &h.value).abs().to_f64() < 1e-60);
}

#[test]
fn hrat_examples() {
    assert_eq!(hrat(&poly(&[0, 0, 1]), 128).to_f64(), 0.0);
    assert!((hrat(&poly(&[-2, 0, 1]), 128).to_f64() - LN2).abs() < 1e-16);
    // (3z² + 1)/(z² + z)
    let f = RationalMapP1::from_ints(&[3, 0, 1], &[1, 1, 0]).unwrap();
    assert!((hrat(&f, 128).to_f64() - 3f64.ln()).abs() < 1e-15);
    let scaled = RationalMapP1::from_ints(&[6, 0, 2], &[2, 2, 0]).unwrap();
    assert_eq!(hrat(&scaled, 128).to_f64(), hrat(&f, 128).to_f64());
}

#[test]
fn average_examples() {
    let sq = poly(&[0, 0, 1]);
    let cheb = poly(&[-2, 0, 1]);
    let e = GaloisSetQ::parse(&["0", "1", "-1"]).unwrap();
    let (h, err) = average_height(&sq, &sq, &e, 1e-30, 256).unwrap();
    assert!(h.to_f64().abs() <= err && err <= 2e-30);
    let (h, err) = average_height(&sq, &cheb, &e, 1e-30, 256).unwrap();
    assert!(h.to_f64().abs() <= err + 1e-30);
    let two = GaloisSetQ::parse(&["2"]).unwrap();
    let (h, _) = average_height(&sq, &sq, &two, 1e-30, 256).unwrap();
    assert!((h.to_f64() - 2.0 * LN2).abs() < 1e-15);
}

#[test]
fn preperiodic_examples() {
    let sq = poly(&[0, 0, 1]);
    assert!(matches!(
        is_preperiodic(&sq, &ProjPointQ::from_int(1)),
        Preperiodicity::Preperiodic { m: 0, n: 1, .. }
    ));
    let cheb = poly(&[-2, 0, 1]);
    match is_preperiodic(&cheb, &ProjPointQ::from_int(0)) {
        Preperiodicity::Preperiodic { m, n, orbit } => {
            assert_eq!((m, n), (2, 3));
            let names: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
            assert_eq!(names, ["0", "-2", "2"]);
        }
        other => panic!("{other:?}"),
    }
    match is_preperiodic(&sq, &ProjPointQ::from_int(2)) {
        Preperiodicity::NotPreperiodic { naive_height, bound, .. } => assert!(naive_height > bound),
        other => panic!("{other:?}"),
    }
    assert!(is_preperiodic(&sq, &ProjPointQ::infinity()).is_preperiodic());
}

fn random_map(d: usize) -> impl Strategy<Value = RationalMapP1> {
    (
        proptest::collection::vec(-20i64..=20, d + 1),
        proptest::collection::vec(-20i64..=20, d + 1),
    )
        .prop_filter_map("degenerate", |(a, b)| RationalMapP1::from_ints(&a, &b).ok())
}

fn point() -> impl Strategy<Value = ProjPointQ> {
    (-30i64..=30, 0i64..=30)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| ProjPointQ::affine(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn functional_equation(f in (2usize..=3).prop_flat_map(random_map), x in point()) {
        let tol = 1e-30;
        let hx = canonical_height(&f, &x, tol, 256).unwrap();
        let hfx = canonical_height(&f, &f.apply(&x), tol, 256).unwrap();
        let d = BigReal::from_i64(f.degree() as i64, 256);
        let diff = (&hfx.value - &(&d * &hx.value)).abs().to_f64();
        prop_assert!(diff <= (f.degree() as f64 + 1.0) * tol, "{diff:e}");
    }

    #[test]
    fn nonnegative_and_close_to_naive(f in random_map(2), x in point()) {
        let h = canonical_height(&f, &x, 1e-20, 256).unwrap();
        prop_assert!(h.value.to_f64() >= -h.certified_error);
        let gap = (&h.value - &h.naive).abs().to_f64();
        prop_assert!(gap <= height_difference_bound(&f) + 1e-12);
    }

    #[test]
    fn preperiodic_iff_height_vanishes(f in random_map(2), x in point()) {
        let tol = 1e-20;
        let h = canonical_height(&f, &x, tol, 256).unwrap();
        prop_assert_eq!(is_preperiodic(&f, &x).is_preperiodic(), h.value.to_f64() <= tol);
    }
}
