//! One function per subcommand, each returning the report text.

use adelic::energy::{
    mutual_energy_arch, pairing_lower_arch, regularized_set_energy, split_bound, u_parameter_scan,
    EnergyEstimate, EnergyParams,
};
use adelic::green::{
    green_value, holder_certificate, holder_verify, relevant_places, tail_terms, HolderCertificate,
};
use adelic::heights::{canonical_height, hrat, HeightValue};
use adelic::preper::{
    common_preperiodic_numeric, common_rational_preperiodic, rational_preperiodic_points, uniform_bound_calculator,
    PreperOrbit, UniformBoundInputs,
};
use adelic::projmap::{Point, ProjPointC, RationalMapP1};
use adelic::qfield::{format_rational, BigReal, parse_rational, product_formula_residual, support_primes, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::*;
use crate::report::*;
use crate::{CliError, Command, Global};

type Out = Result<String, CliError>;

fn within_tol(what: &str, value: &BigReal, error: f64, cfg: &RunConfig) -> Result<(), CliError> {
    let e = big_error(value, error);
    if e > cfg.tol {
        return Err(CliError::Core(adelic::Error::NonConvergence(format!(
            "{what}: certified error {e:e} exceeds --tol {:e} at {} bits",
            cfg.tol, cfg.precision
        ))));
    }
    Ok(())
}

pub fn dispatch(cmd: &Command, g: &Global) -> Out {
    if g.format == Format::Csv && !matches!(cmd, Command::Uscan { .. }) {
        return Err(CliError::Input(format!("csv output is only available for uscan, not {}", cmd.name())));
    }
    let cfg = g.config();
    let result = match cmd {
        Command::Resultant(m) => resultant(&parse_map(&m.map)?),
        Command::Green { map, point, place } => green(&parse_map(&map.map)?, point, place, &cfg)?,
        Command::HolderCert { map, place } => holder_cert(&parse_map(&map.map)?, place, &cfg)?,
        Command::HolderVerify { map, place, samples, corrupt } => {
            holder_check(&parse_map(&map.map)?, place, *samples, *corrupt, &cfg)?
        }
        Command::Height { map, point } => {
            let f = parse_map(&map.map)?;
            let x = parse_point(point)?;
            let h = canonical_height(&f, &x, cfg.tol, cfg.precision)?;
            within_tol("height", &h.value, h.certified_error, &cfg)?;
            json!({ "point": x.to_string(), "height": height_json(&h) })
        }
        Command::Hrat(m) => {
            let f = parse_map(&m.map)?;
            let h = hrat(&f, cfg.precision);
            let err = rounding(h.to_f64(), cfg.precision);
            json!({ "map": f.to_json_value(), "hrat": certified_big(&h, err) })
        }
        Command::Preper { map, bound } => {
            let f = parse_map(&map.map)?;
            let b = parse_log_number(bound)?;
            let pts = rational_preperiodic_points(&f, b)?;
            let list = pts
                .iter()
                .map(|o| orbit_json(&f, o, &cfg))
                .collect::<Result<Vec<_>, CliError>>()?;
            json!({ "bound": certified(b, f64_rounding(b, 1)), "count": pts.len(), "points": list })
        }
        Command::CommonPreper { maps, bound, numeric, max_m, max_period, match_tol } => {
            let (f, h) = (parse_map(&maps.map)?, parse_map(&maps.map2)?);
            common(&f, &h, parse_log_number(bound)?, numeric.then_some((*max_m, *max_period, *match_tol)), &cfg)?
        }
        Command::PairingEnergy { maps, epsilon } => {
            let (f, h) = (parse_map(&maps.map)?, parse_map(&maps.map2)?);
            let params = energy_params(&cfg, *epsilon);
            let e = mutual_energy_arch(&f, &h, &params)?;
            let lower = pairing_lower_arch(&f, &h, &params)?;
            json!({ "energy": energy_json(&e), "pairing_lower_arch": heuristic(lower.value, lower.error) })
        }
        Command::SetEnergy { set, epsilon } => set_energy(set, epsilon, &cfg)?,
        Command::BoundSplit { maps, set, delta } => {
            bound(&parse_map(&maps.map)?, &parse_map(&maps.map2)?, set, *delta, &cfg)?
        }
        Command::Uscan { family, re, im, epsilon } => return uscan(family, re, im, *epsilon, g),
        Command::UniformN { c, c_prime, c1, c2, epsilon, deg } => uniform(UniformBoundInputs {
            c: *c,
            c_prime: *c_prime,
            c1: *c1,
            c2: *c2,
            epsilon: *epsilon,
            deg: *deg,
        })?,
        Command::ProductCheck { x, random, digits } => product_check(x.as_deref(), *random, *digits, &cfg)?,
    };
    Ok(to_json_text(&envelope(cmd.name(), &cfg, result)))
}

fn resultant(f: &RationalMapP1) -> Value {
    let primes: Vec<String> = f.bad_primes().iter().map(ToString::to_string).collect();
    json!({
        "map": f.to_json_value(),
        "degree": f.degree(),
        "resultant": exact(f.resultant()),
        "bad_primes": primes,
    })
}

fn parse_any_point(s: &str) -> Result<Point, CliError> {
    if let Some((re, im)) = s.split_once(',') {
        let bad = || CliError::Input(format!("expected re,im, got {s:?}"));
        let z = Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?);
        return Ok(Point::Complex(ProjPointC::affine(z)));
    }
    Ok(Point::Rational(parse_point(s)?))
}

fn cert_json(f: &RationalMapP1, c: &HolderCertificate, cfg: &RunConfig) -> Value {
    let p = &c.params;
    json!({
        "place": c.place.to_string(),
        "C": certified(c.c, 0.0),
        "alpha": certified(c.alpha, 0.0),
        "C1": certified(p.c1, 0.0),
        "C2": certified(p.c2, 0.0),
        "C3": certified(p.c3, 0.0),
        "R": certified(p.log_r.exp(), f64_rounding(p.log_r.exp(), 2)),
        "tail_N": tail_terms(p.c1, f.degree(), cfg.tol),
    })
}

fn green(f: &RationalMapP1, point: &str, place: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let v = parse_place(place)?;
    let x = parse_any_point(point)?;
    let g = green_value(f, &x, &v, cfg.tol, cfg.precision)?;
    if matches!(x, Point::Rational(_)) {
        within_tol("green", &g.value, g.error(), cfg)?;
    }
    let cert = holder_certificate(f, &v)?;
    let mut out = cert_json(f, &cert, cfg);
    out["point"] = json!(point);
    out["value"] = certified_big(&g.value, g.error());
    out["terms"] = json!(g.terms);
    if let Some(e) = &g.exact {
        out["exact_log_p_multiple"] = exact(format_rational(&e.coeff));
    }
    Ok(out)
}

fn holder_cert(f: &RationalMapP1, places: &[String], cfg: &RunConfig) -> Result<Value, CliError> {
    let vs = if places.is_empty() {
        relevant_places(f)
    } else {
        places.iter().map(|s| parse_place(s)).collect::<Result<Vec<_>, _>>()?
    };
    let certs = vs
        .iter()
        .map(|v| Ok(cert_json(f, &holder_certificate(f, v)?, cfg)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({ "map": f.to_json_value(), "certificates": certs }))
}

fn holder_check(f: &RationalMapP1, place: &str, samples: usize, corrupt: Option<f64>, cfg: &RunConfig) -> Result<Value, CliError> {
    let v = parse_place(place)?;
    let mut cert = holder_certificate(f, &v)?;
    if let Some(k) = corrupt {
        if !(k > 0.0) {
            return Err(CliError::Input("--corrupt must be positive".into()));
        }
        cert.c /= k;
    }
    let r = holder_verify(f, &cert, samples, cfg.seed);
    let witness = r.witness.as_ref().map(|w| {
        json!({
            "z": w.z,
            "w": w.w,
            "dist": heuristic(w.dist, 0.0),
            "lhs": heuristic(w.lhs, 0.0),
            "rhs": heuristic(w.rhs, 0.0),
        })
    });
    Ok(json!({
        "certificate": cert_json(f, &cert, cfg),
        "samples": r.samples,
        "passed": r.passed,
        "violations": r.violations,
        "max_ratio": heuristic(r.max_ratio, 0.0),
        "witness": witness,
    }))
}

fn height_json(h: &HeightValue) -> Value {
    let parts: Vec<Value> = h
        .breakdown
        .iter()
        .map(|c| {
            let mut o = json!({ "place": c.place.to_string(), "value": certified_big(&c.value, c.error) });
            if let Some(e) = &c.exact {
                o["exact_log_p_multiple"] = exact(format_rational(&e.coeff));
            }
            o
        })
        .collect();
    json!({
        "value": certified_big(&h.value, h.certified_error),
        "naive": certified_big(&h.naive, rounding(h.naive.to_f64(), h.naive.precision())),
        "breakdown": parts,
    })
}

fn orbit_json(f: &RationalMapP1, o: &PreperOrbit, cfg: &RunConfig) -> Result<Value, CliError> {
    let h = canonical_height(f, &o.point, cfg.tol, cfg.precision)?;
    Ok(json!({
        "point": o.point.to_string(),
        "m": o.tail,
        "n": o.tail + o.period,
        "orbit": o.orbit.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "height": certified_big(&h.value, h.certified_error),
    }))
}

fn common(f: &RationalMapP1, g: &RationalMapP1, b: f64, numeric: Option<(usize, usize, f64)>, cfg: &RunConfig) -> Result<Value, CliError> {
    let pts = common_rational_preperiodic(f, g, b)?;
    let list = pts
        .iter()
        .map(|c| {
            Ok(json!({
                "point": c.point.to_string(),
                "f": orbit_json(f, &c.orbit_f, cfg)?,
                "g": orbit_json(g, &c.orbit_g, cfg)?,
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut out = json!({ "bound": certified(b, f64_rounding(b, 1)), "count": pts.len(), "points": list });
    if let Some((max_m, max_period, tol)) = numeric {
        let r = common_preperiodic_numeric(f, g, max_m, max_period, tol, cfg.precision)?;
        let matches: Vec<Value> = r
            .matches
            .iter()
            .map(|m| {
                let point = match m.point {
                    None => json!("inf"),
                    Some(z) => json!([z.re, z.im]),
                };
                json!({
                    "candidate": point,
                    "distance": heuristic(m.distance, tol),
                    "level_f": [m.level_f.0, m.level_f.1],
                    "level_g": [m.level_g.0, m.level_g.1],
                    "residual_f": heuristic(m.residual_f, 0.0),
                    "residual_g": heuristic(m.residual_g, 0.0),
                    "score_f": heuristic(m.score_f, 1e-12),
                    "score_g": heuristic(m.score_g, 1e-12),
                })
            })
            .collect();
        out["numeric"] = json!({
            "status": "HEURISTIC",
            "max_m": max_m,
            "max_period": max_period,
            "match_tol": heuristic(tol, 0.0),
            "spectrum_f": r.spectrum_f,
            "spectrum_g": r.spectrum_g,
            "exceptional": exceptional_json(r.exceptional),
            "candidates": matches,
        });
    }
    Ok(out)
}

fn exceptional_json(c: adelic::energy::ExceptionalClass) -> Value {
    json!({ "label": c.label(), "family": c.family() })
}

fn energy_params(cfg: &RunConfig, epsilon: Option<f64>) -> EnergyParams {
    let mut p = EnergyParams::new(cfg.depth, cfg.seed);
    p.epsilon = epsilon;
    p
}

fn energy_json(e: &EnergyEstimate) -> Value {
    json!({
        "value": heuristic(e.value, e.error),
        "previous_depth": heuristic(e.previous, e.error),
        "self_f": heuristic(e.self_f, e.error),
        "self_g": heuristic(e.self_g, e.error),
        "cross": heuristic(e.cross, e.error),
        "depth": e.depth,
        "atoms_f": e.atoms_f,
        "atoms_g": e.atoms_g,
        "epsilon": heuristic(e.epsilon, 0.0),
        "exceptional": e.exceptional.map(exceptional_json),
    })
}

fn set_energy(set: &str, epsilon: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let e = parse_set(set)?;
    let eps = parse_epsilon(epsilon)?;
    let s = regularized_set_energy(&e, &eps, cfg.precision)?;
    let rnd = |x: f64| rounding(x, cfg.precision);
    let lhs_err = s.quadrature_error + rnd(s.lhs.to_f64());
    let per_place: Vec<Value> = s
        .per_place
        .iter()
        .map(|(v, c, le)| {
            json!({
                "place": v.to_string(),
                "contribution": certified(*c, f64_rounding(*c, 2) + if v.is_archimedean() { s.quadrature_error } else { 0.0 }),
                "log_epsilon": certified(*le, f64_rounding(*le, 1)),
            })
        })
        .collect();
    let gap = &s.lhs - &s.rhs;
    Ok(json!({
        "set": e.points().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "epsilon": eps.entries().map(|(v, q)| (v.to_string(), format_rational(q))).collect::<std::collections::BTreeMap<_, _>>(),
        "lhs": certified_big(&s.lhs, lhs_err),
        "rhs": certified_big(&s.rhs, rnd(s.rhs.to_f64())),
        "gap": certified_big(&gap, lhs_err + rnd(s.rhs.to_f64())),
        "product_formula_residual": certified_big(&s.product_formula_residual, rnd(1.0)),
        "holds": s.holds(),
        "per_place": per_place,
    }))
}

fn bound(f: &RationalMapP1, g: &RationalMapP1, set: &str, delta: f64, cfg: &RunConfig) -> Result<Value, CliError> {
    let e = parse_set(set)?;
    let r = split_bound(f, g, &e, delta, cfg.tol, cfg.precision)?;
    let n = r.per_place_terms.len();
    let terms: Vec<Value> = r
        .per_place_terms
        .iter()
        .map(|t| {
            json!({
                "place": t.place.to_string(),
                "C_f": certified(t.c_f, 0.0),
                "alpha_f": certified(t.alpha_f, 0.0),
                "C_g": certified(t.c_g, 0.0),
                "alpha_g": certified(t.alpha_g, 0.0),
                "C": certified(t.c, 0.0),
                "alpha": certified(t.alpha, 0.0),
                "epsilon": certified(t.epsilon, f64_rounding(t.epsilon, 2)),
                "contribution": certified(t.contribution, f64_rounding(t.contribution, 6)),
            })
        })
        .collect();
    let holder_err = f64_rounding(r.holder_term, 6 * n.max(1));
    Ok(json!({
        "delta": certified(delta, 0.0),
        "set_size": r.set_size,
        "per_place_terms": terms,
        "holder_term": certified(r.holder_term, holder_err),
        "height_term": certified(r.height_term, r.height_error),
        "total_upper_bound": certified(r.total_upper_bound, holder_err + r.height_error),
        "generic": {
            "A": certified(r.generic.a, 0.0),
            "B": certified(r.generic.b, f64_rounding(r.generic.b, 1)),
            "C1": certified(r.generic.c1, 0.0),
            "C3": certified(r.generic.c3, 0.0),
            "value": certified(r.generic.value, f64_rounding(r.generic.value, 8) + r.height_error),
            "note": "C1 and C3 are not pinned down; the values used are placeholders",
        },
    }))
}

fn uscan(family: &str, re: &str, im: &str, epsilon: Option<f64>, g: &Global) -> Out {
    let cfg = g.config();
    let fam = parse_family(family)?;
    let ts = grid(&parse_axis(re)?, &parse_axis(im)?);
    let scan = u_parameter_scan(&fam, &ts, &energy_params(&cfg, epsilon))?;
    if g.format == Format::Csv {
        let mut s = String::from("re,im,u,err");
        for r in &scan.rows {
            s.push_str(&format!("\n{},{},{},{}", r.re + 0.0, r.im + 0.0, r.u + 0.0, r.err));
        }
        return Ok(s);
    }
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|r| json!({ "re": r.re, "im": r.im, "u": heuristic(r.u, r.err) }))
        .collect();
    let skipped: Vec<Value> = scan.skipped.iter().map(|t| json!([t.re, t.im])).collect();
    Ok(to_json_text(&envelope("uscan", &cfg, json!({ "rows": rows, "skipped_degenerate": skipped }))))
}

fn uniform(inputs: UniformBoundInputs) -> Result<Value, CliError> {
    let r = uniform_bound_calculator(&inputs)?;
    let fr = |x: f64| certified(x, f64_rounding(x, 8));
    Ok(json!({
        "N": r.n,
        "B": fr(r.b),
        "branch_small_height": fr(r.branch_small_height),
        "branch_large_height": fr(r.branch_large_height),
        "delta_small_height": fr(r.delta_small_height),
        "delta_large_height": fr(r.delta_large_height),
        "threshold": fr(r.threshold),
        "large_height_dominates": r.large_height_dominates,
        "C_used": certified(r.c_used, 0.0),
    }))
}

fn random_rational(rng: &mut ChaCha8Rng, digits: u32) -> Rational {
    let draw = |rng: &mut ChaCha8Rng| -> String {
        let len = rng.gen_range(1..=digits.max(1));
        let mut s: String = (0..len).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect();
        if s.chars().all(|c| c == '0') {
            s = "1".into();
        }
        s
    };
    let sign = if rng.gen_bool(0.5) { "-" } else { "" };
    let n = draw(rng);
    let d = draw(rng);
    parse_rational(&format!("{sign}{n}/{d}")).expect("digits parse")
}

fn product_check(x: Option<&str>, random: Option<usize>, digits: u32, cfg: &RunConfig) -> Result<Value, CliError> {
    let xs: Vec<Rational> = match (x, random) {
        (Some(list), None) => parse_rational_list(list)?
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<_, _>>()?,
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..n).map(|_| random_rational(&mut rng, digits)).collect()
        }
        _ => return Err(CliError::Input("give exactly one of --x and --random".into())),
    };
    let bound = 2f64.powi(16 - cfg.precision as i32);
    let mut worst = 0.0f64;
    let mut rows = Vec::with_capacity(xs.len());
    for q in &xs {
        let r = product_formula_residual(q, cfg.precision)?;
        worst = worst.max(r.to_f64().abs());
        let primes: Vec<String> = support_primes(q)?.iter().map(ToString::to_string).collect();
        rows.push(json!({
            "x": format_rational(q),
            "residual": certified_big(&r, bound),
            "support_primes": primes,
        }));
    }
    Ok(json!({
        "count": xs.len(),
        "max_abs_residual": certified(worst, 0.0),
        "bound": certified(bound, 0.0),
        "passed": worst <= bound,
        "values": rows,
    }))
}
