//! The fourteen acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p inducing --test acceptance`.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::path::Path;
use std::time::Instant;

use rand::Rng;

use inducing::catalog::{self, MARKOV2_SYMBOLS};
use inducing::cli::{self, Analysis, Budgets, GridSpec, Observable, RunConfig};
use inducing::complexity::{
    self, admissible_interval, check_convexity, check_sandwich, kappa_of, u_t,
};
use inducing::liftability::{
    self, binom_entropy_check, carath_sum, check_compatible, frequency_diagnostic, gamma_count,
    set_pressure, AmbientPartition, Compatibility, FiniteShift, GammaMode, SymbolSet, DEFAULT_CAP,
};
use inducing::measure::InducedMeasure;
use inducing::potential::normalize;
use inducing::pressure::{
    self, gibbs, induced_pressure, pressure_curve, solve_pl, Truncation, SOLVE_TOL,
};
use inducing::report::Status;
use inducing::scheme::{BlockId, Cardinality};
use inducing::series::SeriesValue;
use inducing::stats::{self, clt_check, correlation_decay, sample_orbit};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{what}: got {got}, want {want} +- {tol}")
    })
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn trunc() -> Truncation {
    Truncation::default()
}

fn renewal_gibbs() -> Result<InducedMeasure, String> {
    let sys = catalog::renewal(0.3).map_err(e)?;
    let (_, g) =
        pressure::liftable_pressure(&sys.potential("phi").map_err(e)?, &sys.scheme, &trunc())
            .map_err(e)?;
    Ok(g.measure)
}

fn c1_renewal_pressure() -> Outcome {
    let start = Instant::now();
    let sys = catalog::renewal(0.3).map_err(e)?;
    let s = solve_pl(
        &sys.potential("phi").map_err(e)?,
        &sys.scheme,
        &trunc(),
        SOLVE_TOL,
    )
    .map_err(e)?;
    let secs = start.elapsed().as_secs_f64();
    close("P_L", s.q_star, LN_2 - 0.3, 1e-10)?;
    ensure(secs < 1.0, || format!("took {secs} s"))?;
    Ok(format!("q* = {:.12}, {secs:.3} s", s.q_star))
}

fn c2_gibbs_exactness() -> Outcome {
    let sys = catalog::renewal(0.3).map_err(e)?;
    let (_, g) =
        pressure::liftable_pressure(&sys.potential("phi").map_err(e)?, &sys.scheme, &trunc())
            .map_err(e)?;
    for a in 1..=20u32 {
        close(
            &format!("nu(J_{a})"),
            g.weight(BlockId::new(a, 1)).map_err(e)?,
            0.5f64.powi(a as i32),
            1e-10,
        )?;
        let tail = g
            .measure
            .tail(a)
            .map_err(e)?
            .finite()
            .ok_or("tail is not finite")?;
        close(
            &format!("nu(tau >= {a})"),
            tail,
            2f64.powi(1 - a as i32),
            1e-10,
        )?;
    }
    close("gibbs K", g.gibbs_k, 1.0, 1e-10)?;
    close("Q", g.kac, 2.0, 1e-10)?;
    Ok(format!("K = {}, Q = {}", g.gibbs_k, g.kac))
}

fn c3_weighted_complexity() -> Outcome {
    let sys = catalog::weighted_infinite(0.3).map_err(e)?;
    let phi = sys.potential("phi").map_err(e)?;
    for n in 1..=50 {
        ensure(
            sys.scheme.cardinality(n).map_err(e)? == Cardinality::CountablyInfinite,
            || format!("level {n} is not flagged infinite"),
        )?;
        let u = complexity::level_sum_u(&sys.scheme, &phi, n)
            .map_err(e)?
            .finite()
            .ok_or("U_n not finite")?;
        close(&format!("U_{n}"), u, (-0.3 * n as f64).exp(), 1e-12)?;
    }
    let k = kappa_of(&sys.scheme, &phi, (1, 50)).map_err(e)?;
    close("kappa", k.value, -0.3, 1e-6)?;
    ensure(k.status == Status::Certified, || {
        format!("kappa status {:?}", k.status)
    })?;
    let s = solve_pl(&phi, &sys.scheme, &trunc(), SOLVE_TOL).map_err(e)?;
    close("P_L", s.q_star, LN_2 - 0.3, 1e-10)?;
    Ok(format!(
        "kappa = {} (certified), q* = {:.12}",
        k.value, s.q_star
    ))
}

fn c4_divergence() -> Outcome {
    let sys = catalog::weighted_infinite(0.3).map_err(e)?;
    let phi = sys.potential("phi").map_err(e)?;
    let psi = sys.potential("neg_j").map_err(e)?;
    let mut checked = 0;
    for n in 1..=50 {
        for t in [-2.0, -1.0, -LN_2 - 0.1, -LN_2] {
            let u = u_t(&sys.scheme, &phi, &psi, t, n).map_err(e)?;
            ensure(u == SeriesValue::Divergent, || {
                format!("u_{n}({t}) = {u:?}, want divergent")
            })?;
            checked += 1;
        }
        for t in [-LN_2 + 1.1e-6, -LN_2 + 1e-3, -0.5, 0.0, 1.0] {
            let u = u_t(&sys.scheme, &phi, &psi, t, n).map_err(e)?;
            ensure(u.finite().is_some_and(f64::is_finite), || {
                format!("u_{n}({t}) = {u:?}, want finite")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} level sums classified"))
}

fn c5_convexity_and_sandwich() -> Outcome {
    let ts = complexity::grid(-1.0, 1.0, 0.1).map_err(e)?;
    ensure(ts.len() == 21, || format!("grid has {} points", ts.len()))?;
    let ns: Vec<u32> = (1..=12).collect();
    let mut lines = Vec::new();
    for (label, sys, psi) in [
        ("R(0.3)", catalog::renewal(0.3).map_err(e)?, "indicator1"),
        (
            "W(0.3)",
            catalog::weighted_infinite(0.3).map_err(e)?,
            "neg_j",
        ),
    ] {
        let phi = sys.potential("phi").map_err(e)?;
        let psi = sys.potential(psi).map_err(e)?;
        let samples = ts
            .iter()
            .map(|&t| {
                Ok((
                    t,
                    complexity::kappa(&sys.scheme, &phi, &psi, t, (1, 30))?.value,
                ))
            })
            .collect::<inducing::Result<Vec<_>>>()
            .map_err(e)?;
        let conv = check_convexity(&samples, 1e-9).map_err(e)?;
        ensure(conv.holds(), || {
            format!("{label}: convexity violated {:?}", conv.violations.first())
        })?;
        for n in [3, 10] {
            let log_u = ts
                .iter()
                .map(|&t| {
                    Ok((
                        t,
                        u_t(&sys.scheme, &phi, &psi, t, n)?
                            .finite()
                            .map_or(f64::INFINITY, f64::ln),
                    ))
                })
                .collect::<inducing::Result<Vec<_>>>()
                .map_err(e)?;
            let c = check_convexity(&log_u, 1e-9).map_err(e)?;
            ensure(c.holds(), || format!("{label}: log u_{n} not convex"))?;
        }
        let sw = check_sandwich(&sys.scheme, &phi, &psi, &ts, &ns, 1e-9).map_err(e)?;
        ensure(sw.holds(), || format!("{label}: sandwich fails"))?;
        lines.push(format!(
            "{label}: {} triples, {} sandwich rows",
            conv.triples_checked,
            sw.rows.len()
        ));
    }
    Ok(lines.join("; "))
}

struct RenewalCurve {
    interval: complexity::ParamInterval,
    curve: pressure::PressureCurve,
}

fn renewal_curve() -> Result<RenewalCurve, String> {
    let sys = catalog::renewal(0.3).map_err(e)?;
    let phi = sys.potential("phi").map_err(e)?;
    let psi = sys.potential("indicator1").map_err(e)?;
    let grid = complexity::grid(-0.5, 0.5, 0.05).map_err(e)?;
    let interval =
        admissible_interval(&sys.scheme, &phi, &psi, -5.0, 5.0, &grid, &trunc()).map_err(e)?;
    let curve = pressure_curve(
        &phi,
        &psi,
        &sys.scheme,
        &interval,
        &grid,
        &trunc(),
        SOLVE_TOL,
    )
    .map_err(e)?;
    Ok(RenewalCurve { interval, curve })
}

fn c6_tangent_line(rc: &RenewalCurve) -> Outcome {
    let sys = catalog::renewal(0.3).map_err(e)?;
    let phi = sys.potential("phi").map_err(e)?;
    let psi = sys.potential("indicator1").map_err(e)?;
    let pts = rc.curve.solved();
    ensure(pts.len() == rc.curve.points.len(), || {
        "some grid points did not solve".into()
    })?;
    for c in &rc.curve.points {
        let p = c.p_t.unwrap_or(f64::NAN);
        ensure(p >= c.q_t - 1e-9, || format!("p_t < q_t at t = {}", c.t))?;
        if c.t == 0.0 {
            close("p_0 - q_0", p - c.q_t, 0.0, 1e-9)?;
        }
    }
    let h = 1e-4;
    let p_at = |t: f64| {
        solve_pl(&phi.add_scaled(&psi, t), &sys.scheme, &trunc(), SOLVE_TOL).map(|s| s.q_star)
    };
    let deriv = (p_at(h).map_err(e)? - p_at(-h).map_err(e)?) / (2.0 * h);
    close("p'(0)", deriv, 0.25, 1e-4)?;
    close("lambda", rc.curve.lambda, 0.25, 1e-12)?;
    for w in pts.windows(3) {
        let d2 = w[0].1 - 2.0 * w[1].1 + w[2].1;
        ensure(d2 >= -1e-8, || {
            format!("second difference {d2} at t = {}", w[1].0)
        })?;
    }
    Ok(format!(
        "interval ({:.6}, {:.6}), p'(0) = {deriv:.7}, {} grid points",
        rc.interval.t_lower,
        rc.interval.t_upper,
        pts.len()
    ))
}

fn c7_chain(rc: &RenewalCurve) -> Outcome {
    let mut n = 0;
    for c in &rc.curve.points {
        ensure(c.inside_interval, || {
            format!("t = {} outside the computed interval", c.t)
        })?;
        let chain = c
            .chain
            .as_ref()
            .ok_or_else(|| format!("no chain at t = {}: {:?}", c.t, c.error))?;
        ensure(chain.passed(), || format!("chain fails at t = {}", c.t))?;
        ensure(chain.p5.parameters.theta.is_some_and(|th| th < 1.0), || {
            format!("P5 at t = {} has no certified rate", c.t)
        })?;
        n += 1;
    }
    Ok(format!("P3/P4/P5 pass at {n} grid points"))
}

fn c8_markov2() -> Outcome {
    let c = [[0.1, -0.4], [0.3, 0.2]];
    let sys = catalog::markov2(c).map_err(e)?;
    let pot = sys.potential("c").map_err(e)?;
    let taus = [1.0, 2.0];
    let matrix = |q: f64| {
        let mut m = [[0.0; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                m[x][y] = (c[x][y] - q * taus[x]).exp();
            }
        }
        m
    };
    let rho = |m: [[f64; 2]; 2]| {
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        0.5 * (tr + (tr * tr - 4.0 * det).sqrt())
    };
    for q in [0.0, 0.3, -0.5] {
        let p = induced_pressure(&pot.plus_tau(-q), &sys.scheme, &trunc()).map_err(e)?;
        close(
            &format!("P at q = {q}"),
            p.value,
            rho(matrix(q)).ln(),
            1e-10,
        )?;
    }
    let (mut lo, mut hi) = (-5.0, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rho(matrix(mid)) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q_oracle = 0.5 * (lo + hi);
    let s = solve_pl(&pot, &sys.scheme, &trunc(), SOLVE_TOL).map_err(e)?;
    close("q*", s.q_star, q_oracle, 1e-10)?;
    let g = gibbs(&normalize(&pot, s.q_star), &sys.scheme, &trunc(), 4).map_err(e)?;
    let m = matrix(q_oracle);
    let r = [m[0][1], 1.0 - m[0][0]];
    let l = [m[1][0], 1.0 - m[0][0]];
    let z = l[0] * r[0] + l[1] * r[1];
    for x in 0..2 {
        let pi = l[x] * r[x] / z;
        close(
            &format!("nu(J_{x})"),
            g.weight(MARKOV2_SYMBOLS[x]).map_err(e)?,
            pi,
            1e-10,
        )?;
        for y in 0..2 {
            let want = pi * m[x][y] * r[y] / r[x];
            let got = g
                .measure
                .cylinder_mass(&[MARKOV2_SYMBOLS[x], MARKOV2_SYMBOLS[y]])
                .map_err(e)?;
            close(&format!("nu([{x}{y}])"), got, want, 1e-10)?;
        }
    }
    let sym = catalog::markov2([[0.0, 0.0], [LN_2, LN_2]]).map_err(e)?;
    let sp = sym.potential("c").map_err(e)?;
    let s2 = solve_pl(&sp, &sym.scheme, &trunc(), SOLVE_TOL).map_err(e)?;
    close("symmetric q*", s2.q_star, LN_2, 1e-10)?;
    let g2 = gibbs(&normalize(&sp, s2.q_star), &sym.scheme, &trunc(), 4).map_err(e)?;
    close(
        "symmetric weight",
        g2.weight(MARKOV2_SYMBOLS[0]).map_err(e)?,
        0.5,
        1e-10,
    )?;
    Ok(format!("q* = {:.12}, gibbs K = {:.6}", s.q_star, g.gibbs_k))
}

fn c9_combinatorics() -> Outcome {
    let start = Instant::now();
    let b = binom_entropy_check(30).map_err(e)?;
    ensure(b.holds(), || {
        format!("binomial bound fails at {:?}", b.first_violation)
    })?;
    let mut pairs = 0;
    for n in 1..=liftability::GAMMA_EXACT_MAX {
        for big_n in [2, 5, 10] {
            for delta in [0.05, 0.1] {
                let exact = gamma_count(n, big_n, delta, GammaMode::Exact)
                    .map_err(e)?
                    .as_f64();
                let bound = gamma_count(n, big_n, delta, GammaMode::Bound)
                    .map_err(e)?
                    .as_f64();
                ensure(exact <= bound * (1.0 + 1e-12), || {
                    format!("gamma({n}, {big_n}, {delta}): {exact} > {bound}")
                })?;
                pairs += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs} s"))?;
    Ok(format!(
        "{} binomial pairs, {pairs} gamma cases, {secs:.2} s",
        b.pairs_checked
    ))
}

fn c10_set_pressure() -> Outcome {
    let shift = FiniteShift::counting(2).map_err(e)?;
    let schedule = [8, 16, 32, 64];
    let full = set_pressure(
        &shift,
        &SymbolSet::everything(),
        (-1.0, 3.0),
        &schedule,
        1e-6,
        DEFAULT_CAP,
    )
    .map_err(e)?;
    close("P_Z(full)", full.estimate, LN_2, 0.01)?;
    let p_mu = shift.bernoulli_pressure(&[0.5, 0.5]).map_err(e)?;
    let mut r = stats::rng(2024);
    let mut worst = f64::INFINITY;
    for i in 0..10 {
        let words: Vec<Vec<usize>> = (0..r.gen_range(1..=3))
            .map(|_| (0..r.gen_range(1..=4)).map(|_| r.gen_range(0..2)).collect())
            .collect();
        let z = SymbolSet::Cylinders(words.clone());
        ensure(z.bernoulli_mass(&[0.5, 0.5]) > 0.0, || {
            format!("set {i} has no mass")
        })?;
        let pz = set_pressure(&shift, &z, (-1.0, 3.0), &schedule, 1e-6, DEFAULT_CAP).map_err(e)?;
        ensure(p_mu <= pz.estimate + 1e-9, || {
            format!("P_mu = {p_mu} > P_Z = {} for {words:?}", pz.estimate)
        })?;
        worst = worst.min(pz.estimate - p_mu);
    }
    let c = carath_sum(&shift, &SymbolSet::everything(), 1.0, 3, 10).map_err(e)?;
    close(
        "uniform cover sum",
        c.uniform_value,
        (2.0 / std::f64::consts::E).powi(10),
        1e-12,
    )?;
    Ok(format!(
        "P_Z(full) = {:.6}, min P_Z - P_mu = {worst:.2e}",
        full.estimate
    ))
}

fn c11_compatibility() -> Outcome {
    let sys = catalog::mp_linear(0.5, 1.0).map_err(e)?;
    let canonical = AmbientPartition::canonical(&sys.scheme).map_err(e)?;
    let ok = check_compatible(&canonical, &sys.scheme, 30).map_err(e)?;
    ensure(matches!(ok, Compatibility::Compatible { .. }), || {
        format!("canonical: {ok:?}")
    })?;
    let split = canonical.split("left", 0.1875).map_err(e)?;
    let bad = check_compatible(&split, &sys.scheme, 30).map_err(e)?;
    ensure(
        bad == Compatibility::Violated {
            block: BlockId::new(3, 1),
            iterate: 1,
        },
        || format!("split: {bad:?}"),
    )?;
    Ok(format!("canonical {ok:?}; split witness {bad:?}"))
}

fn c12_frequencies() -> Outcome {
    let nu = renewal_gibbs()?;
    let rep = frequency_diagnostic(&nu, &[1], &[100_000], 5, 17).map_err(e)?;
    let row = rep.row(1, 100_000).ok_or("missing row")?;
    close("A_n^1", row.mean, 0.75, 0.01)?;
    let heavy = InducedMeasure::power_law(2.0).map_err(e)?;
    let ns = [1_000, 10_000, 100_000, 1_000_000];
    let h = frequency_diagnostic(&heavy, &[5], &ns, 20, 99).map_err(e)?;
    let means: Vec<f64> = ns
        .iter()
        .map(|&n| h.row(5, n).map_or(f64::NAN, |r| r.mean))
        .collect();
    ensure(means.windows(2).all(|w| w[1] < w[0]), || {
        format!("heavy-tail means {means:?} do not decrease")
    })?;
    ensure(h.tower_mass.is_none(), || {
        "heavy-tail fixture lifted".into()
    })?;
    Ok(format!("A^1 = {:.4}; heavy tail {means:.4?}", row.mean))
}

fn c13_statistics() -> Outcome {
    let start = Instant::now();
    let nu = renewal_gibbs()?;
    let sample = sample_orbit(&nu, 1_000_000, 3).map_err(e)?;
    let h0 = |_a: BlockId, k: u32| if k == 0 { 1.0 } else { 0.0 };
    let d = correlation_decay(&sample, &h0, &h0, 20).map_err(e)?;
    let fit = d.fit.ok_or("no decay fit")?;
    ensure(fit.theta < 1.0 && fit.r_squared > 0.95, || {
        format!("fit {fit:?}")
    })?;
    let hc = |_a: BlockId, k: u32| if k == 0 { 0.5 } else { -0.5 };
    let clt = clt_check(&sample, &hc, 1000).map_err(e)?;
    ensure(clt.block_length >= 1000, || {
        format!("block length {}", clt.block_length)
    })?;
    ensure(clt.passed && clt.ks < 0.05, || format!("KS = {}", clt.ks))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs} s"))?;
    Ok(format!(
        "theta = {:.4}, R^2 = {:.4}, KS = {:.4}, {secs:.1} s",
        fit.theta, fit.r_squared, clt.ks
    ))
}

fn reports_in(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(e)? {
        let p = entry.map_err(e)?.path();
        let name = p
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        if name != "manifest.json" {
            out.insert(name, std::fs::read(&p).map_err(e)?);
        }
    }
    Ok(out)
}

fn c14_reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().map_err(e)?;
    let configs = [
        RunConfig {
            scheme: Some("builtin:renewal?beta=0.3".into()),
            phi: "phi".into(),
            psi: Some("indicator1".into()),
            analysis: Analysis::Curve {
                t0_lower: -1.0,
                t0_upper: 1.0,
                t_grid: GridSpec {
                    start: -0.5,
                    end: 0.5,
                    step: 0.05,
                },
            },
            budgets: Budgets::default(),
            seed: None,
            output: tmp.path().join("curve"),
        },
        RunConfig {
            scheme: Some("builtin:weighted-infinite?beta=0.3".into()),
            phi: "phi".into(),
            psi: None,
            analysis: Analysis::Gibbs,
            budgets: Budgets::default(),
            seed: None,
            output: tmp.path().join("gibbs"),
        },
        RunConfig {
            scheme: Some("builtin:renewal?beta=0.3".into()),
            phi: "phi".into(),
            psi: None,
            analysis: Analysis::StatsClt {
                t: 0.0,
                length: 100_000,
                blocks: 100,
                observable: Observable::Height0,
            },
            budgets: Budgets::default(),
            seed: Some(11),
            output: tmp.path().join("clt"),
        },
    ];
    for (i, config) in configs.iter().enumerate() {
        let first = cli::run(config).map_err(e)?;
        let again =
            cli::replay(&first.manifest, Some(tmp.path().join(format!("replay{i}")))).map_err(e)?;
        let a = reports_in(&config.output)?;
        let b = reports_in(again.manifest.parent().ok_or("no parent")?)?;
        ensure(!a.is_empty() && a == b, || {
            format!("replay of {:?} differs", config.analysis)
        })?;
    }
    let gibbs: serde_json::Value =
        serde_json::from_slice(&std::fs::read(configs[1].output.join("gibbs.json")).map_err(e)?)
            .map_err(e)?;
    let mass = gibbs["total_mass"].as_f64().ok_or("no total_mass")?;
    close("gibbs total mass", mass, 1.0, 1e-10)?;
    let code = cli::main_from(["inducing", "no-such-verb"]);
    ensure(code == 2, || format!("unknown verb exit code {code}"))?;
    Ok(format!("{} runs replayed byte-identically", configs.len()))
}

fn main() {
    let rc = renewal_curve();
    let criteria: Vec<Criterion> = vec![
        ("renewal pressure", Box::new(c1_renewal_pressure)),
        ("gibbs exactness", Box::new(c2_gibbs_exactness)),
        (
            "weighted complexity with infinite levels",
            Box::new(c3_weighted_complexity),
        ),
        ("divergence handling", Box::new(c4_divergence)),
        (
            "convexity and sandwich",
            Box::new(c5_convexity_and_sandwich),
        ),
        (
            "tangent line",
            Box::new(|| rc.as_ref().map_err(Clone::clone).and_then(c6_tangent_line)),
        ),
        (
            "P3-P5 chain",
            Box::new(|| rc.as_ref().map_err(Clone::clone).and_then(c7_chain)),
        ),
        ("truncated operator consistency", Box::new(c8_markov2)),
        ("combinatorics", Box::new(c9_combinatorics)),
        ("set pressure", Box::new(c10_set_pressure)),
        ("compatibility", Box::new(c11_compatibility)),
        ("frequencies", Box::new(c12_frequencies)),
        ("statistics", Box::new(c13_statistics)),
        ("reproducibility", Box::new(c14_reproducibility)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
