//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use std::cell::Cell;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use motifgrow::config::{GrowthConfig, Mode};
use motifgrow::graph::Distance;
use motifgrow::growth::{run, Growth, GrowthError};
use motifgrow::predictor::{counts_randomized, negative_controls, ek_exact, ratio_to_f64, ModelParams};
use motifgrow::seed::{SeedGraph, SeedSet};
use motifgrow::verify::{
    ecum_profile, relative_spread, verify_counts, verify_counts_with, verify_degree_spectrum, verify_tail_fractions,
    CountOracle, Verdict, EK_TOLERANCE, PROFILE_TOLERANCE, SLOPE_TOLERANCE, SPREAD_TOLERANCE,
};
use proptest::test_runner::{Config as ProptestConfig, RngAlgorithm, TestCaseError, TestRng, TestRunner};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn grid_config(initial: &SeedGraph, seed: &SeedGraph, r: u32, steps: u32) -> Option<GrowthConfig> {
    if seed.m_v() < r {
        return None;
    }
    let mut c = GrowthConfig::deterministic(initial.clone(), seed.clone(), r, steps).ok()?;
    c.seeds = SeedSet::single(seed.clone(), r).ok()?;
    Some(c)
}

const PAIRS: [(f64, f64); 2] = [(0.5, 0.5), (1.0 / 3.0, 2.0 / 3.0)];

fn base_counts() -> Outcome {
    let start = Instant::now();
    let (m, _) = run(&common::base(1)).unwrap();
    let got = (m.vertex_count(), m.edge_count(), m.bound_count());
    let elapsed = start.elapsed();
    outcome(
        got == (15, 36, 12) && elapsed < Duration::from_secs(1),
        format!("(n_v, n_e, n_be) = {got:?}, expected (15, 36, 12); {elapsed:.2?}"),
    )
}

fn churn_counts() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for ((p_r, p_a), (removed, added, total)) in PAIRS.iter().zip([(18, 9, 159), (12, 16, 172)]) {
        let c = common::base(2).randomized(*p_r, *p_a).unwrap();
        let (_, trace) = run(&c).unwrap();
        let row = trace.row(2).unwrap();
        let predicted = counts_randomized(&ModelParams::from_config(&c).unwrap(), 2).unwrap().n_e;
        let good = (row.removed, row.added, row.n_e) == (removed, added, total) && predicted == total as f64;
        ok &= good;
        parts.push(format!(
            "({p_r:.3},{p_a:.3}): removed {} added {} n_e {} closed form {predicted}",
            row.removed, row.added, row.n_e
        ));
    }
    let elapsed = start.elapsed();
    outcome(ok && elapsed < Duration::from_secs(1), format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn count_grid() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut runs = 0;
    for r in 1..=3u32 {
        for (sname, seed) in common::grid_seeds() {
            for (iname, initial) in common::grid_initials() {
                let label = format!("r={r} seed={sname} initial={iname}");
                let Some(det) = grid_config(&initial, &seed, r, 8) else {
                    skipped.push(format!("{label} (m_v < r)"));
                    continue;
                };
                let params = ModelParams::from_config(&det).unwrap();
                let (_, trace) = run(&det).unwrap();
                runs += 1;
                let report = verify_counts(&trace, &params, Mode::Deterministic).unwrap();
                if let Some(e) = report.failures().next() {
                    failures.push(format!("{label} deterministic {}", e.name));
                };
                for &(p_r, p_a) in &PAIRS {
                    let c = det.clone().randomized(p_r, p_a).unwrap();
                    match run(&c) {
                        Ok((_, trace)) => {
                            runs += 1;
                            let report = verify_counts(&trace, &params.with_churn(p_r, p_a), Mode::Randomized).unwrap();
                            if let Some(e) = report.failures().next() {
                                failures.push(format!(
                                    "{label} ({p_r:.3},{p_a:.3}) {}: {} vs {}",
                                    e.name, e.measured, e.predicted
                                ));
                            };
                        }
                        // N(1) is K5 here, so an exact addition count cannot be met
                        Err(GrowthError::Saturated { .. }) if sname == "triangle" && iname == "K2" => {
                            skipped.push(format!("{label} ({p_r:.3},{p_a:.3}) saturates"));
                        }
                        Err(e) => failures.push(format!("{label} ({p_r:.3},{p_a:.3}): {e}")),
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    let mut detail = format!("{runs} runs to t=8, {} failures; {elapsed:.2?}", failures.len());
    if !failures.is_empty() {
        detail += &format!("; first: {}", failures[0]);
    }
    detail += &format!("; skipped: {}", skipped.join(", "));
    outcome(pass, detail)
}

fn degree_spectrum() -> Outcome {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for r in 1..=2u32 {
        for (sname, seed) in common::grid_seeds() {
            for (iname, initial) in common::grid_initials() {
                let Some(c) = grid_config(&initial, &seed, r, 6) else { continue };
                let params = ModelParams::from_config(&c).unwrap();
                let mut g = Growth::new(c).unwrap();
                for t in 0..=6 {
                    if t > 0 {
                        g.step().unwrap();
                    }
                    let report = verify_degree_spectrum(g.model(), &params).unwrap();
                    checked += g.model().vertex_count() as u64;
                    if let Some(e) = report.failures().next() {
                        failures.push(format!("r={r} seed={sname} initial={iname} t={t}: {} = {}", e.name, e.measured));
                    };
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} vertex checks over t=0..6, {} mismatching models{}", failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()),
    )
}

fn diameter_bound() -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut tightest = (0u32, 0u32, String::new());
    for r in 1..=3u32 {
        for (sname, seed) in common::grid_seeds() {
            for (iname, initial) in common::grid_initials() {
                let Some(c) = grid_config(&initial, &seed, r, 6) else { continue };
                let d0 = initial.diameter();
                let mut g = Growth::new(c).unwrap();
                for t in 0..=6u32 {
                    if t > 0 {
                        g.step().unwrap();
                    }
                    checks += 1;
                    let bound = t + 1 + d0;
                    match g.model().diameter() {
                        Distance::Finite(d) => {
                            if d > bound {
                                failures.push(format!("r={r} seed={sname} initial={iname} t={t}: D={d} > {bound}"));
                            }
                            if t == 6 && d >= tightest.0 {
                                tightest = (d, bound, format!("r={r} seed={sname} initial={iname}"));
                            }
                        }
                        Distance::Infinite => failures.push(format!("r={r} seed={sname} initial={iname} t={t}: disconnected")),
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checks} (config, t) pairs; largest D(6) = {} against bound {} ({}){}",
            tightest.0,
            tightest.1,
            tightest.2,
            failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
        ),
    )
}

fn power_law() -> Outcome {
    let det = common::base(8);
    let params = ModelParams::from_config(&det).unwrap();
    let (_, trace) = run(&det).unwrap();
    let profile = ecum_profile(&trace, &params, Mode::Deterministic).unwrap();
    let slope_ok = (profile.slope - 1.0).abs() <= SLOPE_TOLERANCE;
    let spread = relative_spread(&profile.ratios);
    let spread_ok = spread <= SPREAD_TOLERANCE;

    let mut slopes = Vec::new();
    for (i, &(p_r, p_a)) in PAIRS.iter().enumerate() {
        let c = det.clone().randomized(p_r, p_a).unwrap();
        let g = Growth::with_rng(c, motifgrow::growth::rng_for_run(0, i as u64 + 1)).unwrap();
        let (_, trace) = g.run_to_end().unwrap();
        slopes.push(ecum_profile(&trace, &params, Mode::Randomized).unwrap().slope);
    }
    let agree = (slopes[1] - slopes[0]).abs() <= PROFILE_TOLERANCE * slopes[0].abs();
    let ratios: Vec<String> = profile.ratios.iter().map(|r| format!("{r:.4}")).collect();
    outcome(
        slope_ok && spread_ok && agree,
        format!(
            "deterministic slope {:.4} ({}), ratio spread {:.4} over [{}] ({}); randomized slopes {:.4} vs {:.4} ({})",
            profile.slope,
            if slope_ok { "ok" } else { "out of 5%" },
            spread,
            ratios.join(", "),
            if spread_ok { "ok" } else { "exceeds 10%" },
            slopes[0],
            slopes[1],
            if agree { "ok" } else { "differ by more than 10%" },
        ),
    )
}

fn tail_fractions() -> Outcome {
    let c = common::base(6);
    let params = ModelParams::from_config(&c).unwrap();
    let (model, _) = run(&c).unwrap();
    let m_e_star = SeedGraph::path(4).top_degree_sum(2) as u64;
    let report = verify_tail_fractions(&model, &params, m_e_star).unwrap();
    let vk: Vec<_> = report.entries.iter().filter(|e| e.name.starts_with("v_k")).collect();
    let ek: Vec<_> = report.entries.iter().filter(|e| e.name.starts_with("e_k(")).collect();
    let vk_ok = !vk.is_empty() && vk.iter().all(|e| e.verdict == Verdict::Pass);
    let ek_ok = !ek.is_empty() && ek.iter().all(|e| e.verdict == Verdict::Pass);
    let ek_ratios: Vec<String> = ek
        .iter()
        .map(|e| match (&e.measured, &e.predicted) {
            (motifgrow::verify::Value::Real(m), motifgrow::verify::Value::Real(p)) => format!("{:.3}", m / p),
            _ => "?".into(),
        })
        .collect();
    let exact_ok = (1..=4).all(|tau| {
        let census = motifgrow::analytics::degree_census(&model);
        let k = motifgrow::analytics::class_threshold(&census, tau).unwrap();
        let s = motifgrow::analytics::threshold_stats(&census, k);
        let measured = s.q_gt as f64 / (2.0 * model.edge_count() as f64);
        (ratio_to_f64(&ek_exact(&params, m_e_star, tau, 6).unwrap()) - measured).abs() < 1e-15
    });
    outcome(
        vk_ok && ek_ok,
        format!(
            "v_k exact at {} thresholds: {}; e_k measured/predicted at tau=1..4: [{}] ({} {}); class-sum e_k exact: {}",
            vk.len(),
            if vk_ok { "all equal" } else { "mismatch" },
            ek_ratios.join(", "),
            if ek_ok { "within" } else { "outside" },
            EK_TOLERANCE,
            if exact_ok { "equal" } else { "mismatch" },
        ),
    )
}

fn negative_controls() -> Outcome {
    let det = common::base(4);
    let params = ModelParams::from_config(&det).unwrap();
    let (_, trace) = run(&det).unwrap();
    let good = verify_counts(&trace, &params, Mode::Deterministic).unwrap().passed();
    let bad = verify_counts_with(&trace, &params, Mode::Deterministic, CountOracle::AllEdgeRecursion).unwrap();
    let det_fail_steps: Vec<String> = bad.failures().map(|e| e.name.clone()).collect();
    let det_ok = good && det_fail_steps == ["n_e[2]", "n_e[3]", "n_e[4]"];

    // the printed leading term is off by p^(t-1) (N_e,0 - 1), inside the
    // drift allowance once t >= 2, so it is held to the exact churn totals
    let mut exact = Vec::new();
    let mut rand_ok = good;
    for &(p_r, p_a) in &PAIRS {
        let c = common::base(2).randomized(p_r, p_a).unwrap();
        let rparams = ModelParams::from_config(&c).unwrap();
        let (_, rtrace) = run(&c).unwrap();
        let measured = rtrace.row(2).unwrap().n_e as f64;
        let corrected = counts_randomized(&rparams, 2).unwrap().n_e;
        let bare = negative_controls::randomized_edges_bare_leading_term(&rparams, 2);
        rand_ok &= corrected == measured && bare != measured;
        exact.push(format!("{measured} vs {bare}"));
    }
    let rand = det.clone().randomized(0.5, 0.5).unwrap();
    let (_, rtrace) = run(&rand).unwrap();
    let rparams = params.with_churn(0.5, 0.5);
    rand_ok &= verify_counts(&rtrace, &rparams, Mode::Randomized).unwrap().passed();
    let rbad = verify_counts_with(&rtrace, &rparams, Mode::Randomized, CountOracle::BareLeadingTerm).unwrap();
    let rfail: Vec<String> = rbad.failures().map(|e| e.name.clone()).collect();
    let at2 = bad.entries.iter().find(|e| e.name == "n_e[2]").unwrap();
    outcome(
        det_ok && rand_ok,
        format!(
            "all-edge recursion fails at {:?} (t=2: {} vs {}); bare leading term misses the t=2 churn totals ({}) \
             and exceeds the drift allowance at {:?}; correct oracles pass: {}",
            det_fail_steps,
            at2.predicted,
            at2.measured,
            exact.join(", "),
            rfail,
            good && rand_ok
        ),
    )
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("triangle_path4.toml"), common::BASE_TOML).unwrap();
    let exe = env!("CARGO_BIN_EXE_motifgrow");
    let invoke = |args: &[&str]| {
        Command::new(exe)
            .current_dir(dir.path())
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
    };
    for out in ["g1", "g2"] {
        invoke(&[
            "grow", "--config", "triangle_path4.toml", "--mode", "randomized", "--pr", "0.5", "--pa", "0.5", "--steps", "4",
            "--rng-seed", "7", "--out", out,
        ]);
    }
    for out in ["v1", "v2"] {
        invoke(&[
            "verify", "--config", "triangle_path4.toml", "--mode", "randomized", "--pr", "0.5", "--pa", "0.5", "--steps", "6",
            "--rng-seed", "7", "--out", out,
        ]);
    }
    let same = |a: &str, b: &str, f: &str| {
        let x = fs::read(dir.path().join(a).join(f));
        let y = fs::read(dir.path().join(b).join(f));
        matches!((x, y), (Ok(x), Ok(y)) if x == y && !x.is_empty())
    };
    let files = ["edges.txt", "bound_edges.txt", "trace.csv", "provenance.csv"];
    let grow_ok = files.iter().all(|f| same("g1", "g2", f));
    let report_ok = ["report.txt", "report.json"].iter().all(|f| same("v1", "v2", f));
    outcome(
        grow_ok && report_ok,
        format!("graph and trace files identical: {grow_ok}; report files identical: {report_ok}"),
    )
}

fn invariant_suite() -> Outcome {
    let checked = Cell::new(0u32);
    let modes = Cell::new([0u32; 3]);
    let config = ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let result = runner.run(&common::config_strategy(), |config| {
        let done = common::check_invariants(&config).map_err(TestCaseError::fail)?;
        if !done {
            return Err(TestCaseError::reject("saturated"));
        }
        checked.set(checked.get() + 1);
        let mut m = modes.get();
        m[config.mode as usize] += 1;
        modes.set(m);
        Ok(())
    });
    let m = modes.get();
    let pass = result.is_ok() && checked.get() >= 200 && m.iter().all(|&x| x > 0);
    outcome(
        pass,
        format!(
            "{} configs checked (deterministic {}, randomized {}, rewire {}){}",
            checked.get(),
            m[0],
            m[1],
            m[2],
            result.err().map(|e| format!("; {e}")).unwrap_or_default()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("base counts", base_counts),
        ("churn counts", churn_counts),
        ("closed-form count grid", count_grid),
        ("degree spectrum", degree_spectrum),
        ("diameter bound", diameter_bound),
        ("edge-cumulative power law", power_law),
        ("tail fractions v_k / e_k", tail_fractions),
        ("negative controls", negative_controls),
        ("reproducibility", reproducibility),
        ("invariant suite", invariant_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {} [{:.1?}] {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
