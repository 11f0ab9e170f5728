//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use common::{exhaustive, naive_assignment, random_points, rel_close, rng};
use gwline::counterexample::{epsilon_upper_bound, in_proposition_regime};
use gwline::experiments::report_to_json;
use gwline::objective::rearrangement_terms;
use gwline::{
    assignment_objective, construct_instance, degenerate_gap, evaluate_baselines, f_cyc_closed_form,
    f_id_closed_form, gm_objective, gw_plan_objective, monte_carlo_study, plan_from_permutation, solve_brute_force,
    verify_proposition, CostParams, CounterexampleSpec, DiscreteMeasure, Distribution, Permutation,
    PointConfiguration,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cost(a: f64) -> CostParams {
    CostParams::new(a).unwrap()
}

fn pc(v: &[f64]) -> PointConfiguration {
    PointConfiguration::new(v.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. `f_id(0) = 2^a + (n-2)`, `f_cyc(0) = 2(n-2)`, to 1e-12 absolute.
fn degenerate_values() -> Outcome {
    let mut checked = 0;
    for n in 4..=12usize {
        for a in [0.5, 1.0, 2.0] {
            let c = cost(a);
            let fid = f_id_closed_form(n, &c, 0.0).map_err(|e| e.to_string())?;
            let fcyc = f_cyc_closed_form(n, &c, 0.0).map_err(|e| e.to_string())?;
            let want_id = 2f64.powf(a) + (n as f64 - 2.0);
            let want_cyc = 2.0 * (n as f64 - 2.0);
            ensure((fid - want_id).abs() <= 1e-12, || format!("f_id(0) n={n} a={a}: {fid} vs {want_id}"))?;
            ensure((fcyc - want_cyc).abs() <= 1e-12, || format!("f_cyc(0) n={n} a={a}: {fcyc} vs {want_cyc}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, alpha) pairs"))
}

/// 2. Degenerate gap formula and its sign.
fn gap_formula() -> Outcome {
    let mut positive = 0;
    for n in 4..=12usize {
        for a in [0.5, 1.0, 2.0] {
            let c = cost(a);
            let gap = degenerate_gap(n, &c);
            let want = (n as f64 - 2.0) - 2f64.powf(a);
            ensure((gap - want).abs() <= 1e-12, || format!("gap n={n} a={a}: {gap} vs {want}"))?;
            let regime = n as f64 > 2.0 + 2f64.powf(a);
            ensure((gap > 0.0) == regime, || format!("sign n={n} a={a}: gap {gap}, regime {regime}"))?;
            ensure(in_proposition_regime(n, &c) == regime, || format!("regime flag n={n} a={a}"))?;
            positive += regime as usize;
        }
    }
    Ok(format!("27 pairs, {positive} in regime"))
}

/// 3. Brute-force confirmation of the counterexample.
fn proposition() -> Outcome {
    let mut notes = Vec::new();
    for (n, a) in [(5usize, 1.0), (6, 1.0), (7, 1.0), (7, 2.0)] {
        let r = verify_proposition(n, &cost(a)).map_err(|e| format!("n={n} a={a}: {e}"))?;
        ensure(r.evaluations <= 5040, || format!("n={n}: {} evaluations", r.evaluations))?;
        ensure((r.f_id - r.f_aid).abs() <= 1e-12 * r.f_id.abs(), || {
            format!("n={n} a={a}: F_id {} != F_aid {}", r.f_id, r.f_aid)
        })?;
        ensure(r.f_max - r.f_id >= 1e-6, || {
            format!("n={n} a={a}: max {} - F_id {} < 1e-6", r.f_max, r.f_id)
        })?;
        ensure(r.max_dominates_cyc(), || format!("n={n} a={a}: max {} < f_cyc {}", r.f_max, r.f_cyc_closed_form))?;
        notes.push(format!(
            "(n={n},a={a}) eps={:.3e} gap={:.3e} cyc_max={}",
            r.epsilon,
            r.f_max - r.f_id,
            r.cyc_is_maximizer
        ));
    }
    Ok(notes.join("; "))
}

/// 4. Near-zero margin tracks the degenerate gap and grows with n.
fn gap_growth() -> Outcome {
    let c = cost(1.0);
    let mut prev = f64::NEG_INFINITY;
    let mut margins = Vec::new();
    for n in 5..=12usize {
        let eps = 2f64.powi(-20) * epsilon_upper_bound(n);
        let m = f_cyc_closed_form(n, &c, eps).unwrap() - f_id_closed_form(n, &c, eps).unwrap();
        let want = (n as f64 - 2.0) - 2.0;
        ensure((m - want).abs() <= 1e-3, || format!("n={n}: margin {m} vs {want}"))?;
        ensure(m > prev, || format!("n={n}: margin {m} not above {prev}"))?;
        prev = m;
        margins.push(format!("{m:.4}"));
    }
    Ok(format!("margins n=5..12: {}", margins.join(", ")))
}

/// 5. Closed forms against direct evaluation of the constructed instances.
fn closed_form_fidelity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 4..=10usize {
        let id: Vec<usize> = (0..n).collect();
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        for a in [0.5, 1.0, 1.5, 2.0] {
            let c = cost(a);
            for j in 1..=50 {
                let eps = epsilon_upper_bound(n) * j as f64 / 51.0;
                let (x, y) = construct_instance(&CounterexampleSpec::new(n, c, eps).unwrap()).unwrap();
                for (closed, perm) in [
                    (f_id_closed_form(n, &c, eps).unwrap(), &id),
                    (f_cyc_closed_form(n, &c, eps).unwrap(), &cyc),
                ] {
                    let direct = naive_assignment(x.as_slice(), y.as_slice(), perm, a);
                    let rel = (closed - direct).abs() / direct.abs().max(f64::MIN_POSITIVE);
                    worst = worst.max(rel);
                    ensure(rel <= 1e-9, || format!("n={n} a={a} eps={eps}: {closed} vs {direct}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} comparisons, worst relative error {worst:.2e}"))
}

/// 6. Rearrangement identity and argmin/argmax agreement.
fn rearrangement() -> Outcome {
    let mut r = rng(6);
    let alphas = [0.5, 1.0, 2.0];
    let mut worst: f64 = 0.0;
    for t in 0..500 {
        let n = r.random_range(2..=7usize);
        let a = alphas[t % 3];
        let x = random_points(&mut r, n);
        let y = random_points(&mut r, n);
        let mut s: Vec<usize> = (0..n).collect();
        s.shuffle(&mut r);
        let terms = rearrangement_terms(&pc(&x), &pc(&y), &Permutation::from_zero_based(s).unwrap(), &cost(a)).unwrap();
        worst = worst.max(terms.relative_residual());
        ensure(terms.relative_residual() <= 1e-9, || format!("instance {t}: {terms:?}"))?;
    }
    for t in 0..100 {
        let n = r.random_range(2..=6usize);
        let a = alphas[t % 3];
        let x = random_points(&mut r, n);
        let y = random_points(&mut r, n);
        let argmax: Vec<Vec<usize>> = solve_brute_force(&pc(&x), &pc(&y), &cost(a), 11)
            .unwrap()
            .maximizers
            .iter()
            .map(|m| m.as_slice().to_vec())
            .collect();
        let (_, argmin) = exhaustive(
            n,
            |p| gm_objective(&pc(&x), &pc(&y), &Permutation::from_zero_based(p.to_vec()).unwrap(), &cost(a)).unwrap(),
            false,
        );
        ensure(argmax == argmin, || format!("instance {t}: argmax {argmax:?} vs argmin {argmin:?}"))?;
    }
    Ok(format!("500 residuals (worst {worst:.2e}), 100 argmin/argmax sets equal"))
}

/// 7. Symmetries, each on 100 random instances.
fn symmetry_suite() -> Outcome {
    let mut r = rng(7);
    let alphas = [0.5, 1.0, 1.5, 2.0];
    for t in 0..100 {
        let n = r.random_range(2..=8usize);
        let a = alphas[t % 4];
        let c = cost(a);
        let x = random_points(&mut r, n);
        let y = random_points(&mut r, n);
        let mut s: Vec<usize> = (0..n).collect();
        s.shuffle(&mut r);
        let sigma = Permutation::from_zero_based(s).unwrap();
        let f = assignment_objective(&pc(&x), &pc(&y), &sigma, &c).unwrap();

        let shift = r.random_range(-50.0..50.0);
        let shifted: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let f_shift = assignment_objective(&pc(&shifted), &pc(&y), &sigma, &c).unwrap();
        ensure(rel_close(f, f_shift, 1e-9), || format!("translation {t}: {f} vs {f_shift}"))?;

        let lambda = r.random_range(0.1..10.0);
        let scaled: Vec<f64> = x.iter().map(|v| v * lambda).collect();
        let f_scaled = assignment_objective(&pc(&scaled), &pc(&y), &sigma, &c).unwrap();
        ensure(rel_close(f_scaled, lambda.powf(a) * f, 1e-9), || format!("homogeneity {t}"))?;

        let f_swapped = assignment_objective(&pc(&y), &pc(&x), &sigma.inverse(), &c).unwrap();
        ensure(rel_close(f, f_swapped, 1e-9), || format!("inverse symmetry {t}: {f} vs {f_swapped}"))?;

        let half = random_points(&mut r, n / 2);
        let base = half[0].min(0.0) - 1.0;
        let offs: Vec<f64> = half.iter().map(|v| v - base).collect();
        let mut xa: Vec<f64> = offs.iter().rev().map(|v| -v).collect();
        if n % 2 == 1 {
            xa.push(0.0);
        }
        xa.extend(&offs);
        let (f_id, f_aid) = evaluate_baselines(&pc(&xa), &pc(&y), &c).unwrap();
        ensure((f_id - f_aid).abs() <= 1e-12 * f_id.abs().max(1.0), || format!("baseline tie {t}: {f_id} vs {f_aid}"))?;

        let gw = gw_plan_objective(
            &DiscreteMeasure::uniform(pc(&x)),
            &DiscreteMeasure::uniform(pc(&y)),
            &plan_from_permutation(&sigma),
            &c,
        )
        .unwrap();
        let gm = gm_objective(&pc(&x), &pc(&y), &sigma, &c).unwrap();
        ensure(rel_close(gw, gm, 1e-9), || format!("plan embedding {t}: {gw} vs {gm}"))?;
    }
    Ok("translation, homogeneity, inverse symmetry, baseline tie, plan embedding on 100 instances each".into())
}

fn run_bin(args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_gwline"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        format!("{args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr))
    })
}

/// 8. Byte-identical output files; `n = 2` is always a baseline.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let (mc_a, mc_b, sw_a, sw_b, two) = (path("mc_a.json"), path("mc_b.json"), path("sw_a.csv"), path("sw_b.csv"), path("two.json"));

    for out in [&mc_a, &mc_b] {
        run_bin(&["montecarlo", "--n", "5", "--alpha", "1", "--trials", "500", "--seed", "2024", "--dist", "gaussian", "--out", out])?;
    }
    for out in [&sw_a, &sw_b] {
        run_bin(&["sweep", "--n", "6", "--alpha", "1", "--out", out])?;
    }
    let read = |p: &str| std::fs::read(p).map_err(|e| format!("{p}: {e}"));
    ensure(read(&mc_a)? == read(&mc_b)?, || "montecarlo files differ".into())?;
    ensure(read(&sw_a)? == read(&sw_b)?, || "sweep files differ".into())?;

    run_bin(&["montecarlo", "--n", "2", "--alpha", "1", "--trials", "1000", "--seed", "3", "--out", &two])?;
    let v: serde_json::Value = serde_json::from_slice(&read(&two)?).map_err(|e| e.to_string())?;
    ensure(v["fraction_id_or_aid"].as_f64() == Some(1.0), || format!("n=2 fraction {}", v["fraction_id_or_aid"]))?;
    Ok("montecarlo and sweep files byte-identical; n=2 fraction 1".into())
}

/// 9. Well-formed reports for the open question; no target fraction.
fn open_question_study() -> Outcome {
    let mut fractions = Vec::new();
    for n in 3..=7usize {
        let report = monte_carlo_study(n, &cost(1.0), 10_000, 1, Distribution::Uniform).map_err(|e| e.to_string())?;
        let total = report.count_id_optimal + report.count_aid_optimal + report.count_other_optimal + report.count_ties;
        ensure(total == report.trials && report.trials == 10_000, || format!("n={n}: counts sum to {total}"))?;
        let frac = report.fraction_id_or_aid;
        ensure((0.0..=1.0).contains(&frac), || format!("n={n}: fraction {frac}"))?;
        ensure(
            frac == (report.count_id_optimal + report.count_aid_optimal) as f64 / 10_000.0,
            || format!("n={n}: fraction inconsistent with counts"),
        )?;
        let v: serde_json::Value = serde_json::from_str(&report_to_json(&report)).map_err(|e| e.to_string())?;
        for key in [
            "n", "alpha", "trials", "seed", "distribution", "count_id_optimal", "count_aid_optimal",
            "count_other_optimal", "count_ties", "fraction_id_or_aid", "tool_version",
        ] {
            ensure(v.get(key).is_some(), || format!("n={n}: missing key {key}"))?;
        }
        fractions.push(format!("n={n}: {frac:.4}"));
    }
    Ok(format!("fraction id/a-id optimal (uniform, alpha=1): {}", fractions.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 degenerate values", degenerate_values),
        ("2 gap formula", gap_formula),
        ("3 counterexample reproduction", proposition),
        ("4 gap growth", gap_growth),
        ("5 closed-form fidelity", closed_form_fidelity),
        ("6 rearrangement identity", rearrangement),
        ("7 symmetry suite", symmetry_suite),
        ("8 determinism", determinism),
        ("9 open-question study", open_question_study),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.2}s): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
