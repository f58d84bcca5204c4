use std::f64::consts::{E, LN_2};
use std::process::ExitCode;
use std::time::Instant;

use sumset_core::checks::{
    doubling_and_difference, inverse_quantities, random_corpus, reports_from, run_inverse,
    run_registry, DEFAULT_CORPUS_SIZE,
};
use sumset_core::discrete::{
    random_pmfs, run_covering, run_discrete_registry, run_submodularity, DISCRETE_REGISTRY,
};
use sumset_core::distributions::{DensityModel, EULER_GAMMA};
use sumset_core::estimators::{estimate_functional, DEFAULT_K};
use sumset_core::expr::{derive_seed, parse_expression};
use sumset_core::gaussian_network::{
    random_variances, rho_sweep, run_bsg_scenario, run_c3122_mi, run_ccond_scenario, run_sub_diff,
    run_weak_bsg_scenario,
};
use sumset_core::grid::Numerics;
use sumset_core::report::{InequalityReport, Summary, Verdict};
use sumset_core::suite::{run_suite, CheckSelection, SuiteConfig};
use sumset_core::Result;

const SEED: u64 = 42;

const GOLDEN_TOL: f64 = 1e-4;
const CONSTANT_TOL: f64 = 1e-4;
const EXP_CONSTANT_TOL: f64 = 1e-3;
const RATIO_TOL: f64 = 1e-3;
const ALGEBRA_TOL: f64 = 1e-9;
const DATA_PROCESSING_TOL: f64 = 1e-10;
const BSG_TOL: f64 = 1e-9;
const DISCRETE_TOL: f64 = 1e-12;
const KL_TOL: f64 = 1e-3;
const KNN_FLOOR: f64 = 0.05;
const KNN_SAMPLES: usize = 100_000;
const REGISTRY_BUDGET_SECS: f64 = 300.0;
const KNN_BUDGET_SECS: f64 = 30.0;

const GOLDENS: [(&str, f64); 4] = [
    ("gaussian(0,1)", 1.418_938_533_204_672_7),
    ("uniform(0,1) + uniform(0,1)", 0.5),
    ("exponential(1) - exponential(1)", 1.0 + LN_2),
    ("exponential(1) + exponential(1)", 1.0 + EULER_GAMMA),
];

type Outcome = Result<std::result::Result<String, String>>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn verdict(ok: bool, detail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slack(r: &InequalityReport) -> f64 {
    r.slack.unwrap_or(f64::NAN)
}

fn golden_entropies(n: &Numerics) -> Outcome {
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for (expr, want) in GOLDENS {
        let h = parse_expression(expr)?.entropy(n)?.value;
        worst = worst.max((h - want).abs());
        lines.push(format!("{expr}={h:.7}"));
    }
    Ok(verdict(
        worst <= GOLDEN_TOL,
        format!("max |err| {worst:.2e}; {}", lines.join(", ")),
    ))
}

fn ruzsa_constants(n: &Numerics) -> Outcome {
    let g = doubling_and_difference(&DensityModel::gaussian(0.0, 1.0)?, n)?;
    let u = doubling_and_difference(&DensityModel::uniform(0.0, 1.0)?, n)?;
    let e = doubling_and_difference(&DensityModel::exponential(1.0)?, n)?;
    let sqrt2 = 2f64.sqrt();
    let ok = (g.sigma - sqrt2).abs() <= CONSTANT_TOL
        && (g.delta - sqrt2).abs() <= CONSTANT_TOL
        && (u.sigma - E.sqrt()).abs() <= CONSTANT_TOL
        && (e.sigma - EULER_GAMMA.exp()).abs() <= EXP_CONSTANT_TOL
        && (e.delta - 2.0).abs() <= EXP_CONSTANT_TOL;
    Ok(verdict(
        ok,
        format!(
            "gaussian sigma={:.6} delta={:.6}; uniform sigma={:.6}; exponential sigma={:.6} delta={:.6}",
            g.sigma, g.delta, u.sigma, e.sigma, e.delta
        ),
    ))
}

fn continuous_corpus(n: &Numerics) -> Outcome {
    let start = Instant::now();
    let corpus = random_corpus(derive_seed(SEED, 0), DEFAULT_CORPUS_SIZE);
    let reports = run_registry(&corpus, n);
    let secs = start.elapsed().as_secs_f64();
    let s = Summary::tally(&reports);
    let ok = s.violated == 0 && s.skipped == 0 && secs < REGISTRY_BUDGET_SECS;
    Ok(verdict(
        ok,
        format!(
            "{} models, {} reports: holds={} violated={} inconclusive={} skipped={} in {secs:.1}s",
            corpus.len(),
            reports.len(),
            s.holds,
            s.violated,
            s.inconclusive,
            s.skipped
        ),
    ))
}

fn doubling_difference_ratio(n: &Numerics) -> Outcome {
    let r = doubling_and_difference(&DensityModel::exponential(1.0)?, n)?.ratio();
    let want = EULER_GAMMA / LN_2;
    let ok = (r.value - want).abs() <= RATIO_TOL && (0.5..=2.0).contains(&r.value);
    Ok(verdict(ok, format!("ratio {:.6} vs {want:.6}", r.value)))
}

fn gaussian_identities() -> Outcome {
    let mut mic_worst = 0.0f64;
    for v in random_variances(derive_seed(SEED, 4), 50, 2) {
        let (_, mic) = run_ccond_scenario(v[0], v[1])?;
        mic_worst = mic_worst.max(slack(&mic).abs());
    }
    let (ccond, _) = run_ccond_scenario(1.0, 1.0)?;
    let ccond_err = (slack(&ccond) - LN_2).abs();
    let mut dp_min = f64::INFINITY;
    for v in random_variances(derive_seed(SEED, 5), 50, 3) {
        dp_min = dp_min.min(slack(&run_sub_diff(v[0], v[1], v[2])?));
        dp_min = dp_min.min(slack(&run_c3122_mi(v[0], v[1], v[2])?));
    }
    let ok = mic_worst <= ALGEBRA_TOL && ccond_err <= ALGEBRA_TOL && dp_min >= -DATA_PROCESSING_TOL;
    Ok(verdict(
        ok,
        format!(
            "mic max |slack| {mic_worst:.2e}; ccond unit slack - ln2 = {ccond_err:.2e}; data processing min slack {dp_min:.3e}"
        ),
    ))
}

fn bsg_sweep() -> Outcome {
    let rhos = rho_sweep(-0.95, 0.95, 0.05)?;
    let mut min = f64::INFINITY;
    for &rho in &rhos {
        let s = run_bsg_scenario(rho)?;
        for b in [s.conclusion_a, s.conclusion_b, s.conclusion_c] {
            min = min.min(b.slack);
        }
        min = min.min(slack(&run_weak_bsg_scenario(rho)?));
    }
    let ln_k = run_bsg_scenario(0.0)?.ln_k;
    let ok = rhos.len() == 39 && min >= -BSG_TOL && ln_k == 0.5 * LN_2;
    Ok(verdict(
        ok,
        format!(
            "{} correlations, min slack {min:.3e}; rho=0 ln K = {ln_k:?}",
            rhos.len()
        ),
    ))
}

fn discrete_exactness() -> Outcome {
    let z5 = random_pmfs(derive_seed(SEED, 1), 100, 5)?;
    let covering = run_covering(&z5);
    let cover_worst = covering.iter().map(|r| slack(r).abs()).fold(0.0, f64::max);
    let sub = run_submodularity(derive_seed(SEED, 3), 1000, 4)?;
    let sub_min = sub.iter().map(slack).fold(f64::INFINITY, f64::min);
    let z6 = random_pmfs(derive_seed(SEED, 2), 500, 6)?;
    let defs: Vec<_> = DISCRETE_REGISTRY.iter().collect();
    let reg = Summary::tally(&run_discrete_registry(&defs, &z6));
    let ok = covering.len() == 100
        && cover_worst <= DISCRETE_TOL
        && sub.len() == 1000
        && sub_min >= -DISCRETE_TOL
        && reg.violated == 0
        && reg.skipped == 0;
    Ok(verdict(
        ok,
        format!(
            "covering max |slack| {cover_worst:.2e}; submodularity min slack {sub_min:.3e}; Z_6 registry holds={} violated={} inconclusive={}",
            reg.holds, reg.violated, reg.inconclusive
        ),
    ))
}

fn inverse_bundle(n: &Numerics) -> Outcome {
    let find = |reports: &[InequalityReport], id: &str| {
        reports
            .iter()
            .find(|r| r.check_id == id)
            .cloned()
            .expect("report present")
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, m, want_d, want_bound) in [
        ("uniform", DensityModel::uniform(0.0, 1.0)?, 0.1765, 0.5265),
        (
            "exponential",
            DensityModel::exponential(1.0)?,
            0.4189,
            2.075,
        ),
    ] {
        let q = inverse_quantities(&m, n)?;
        let reports = reports_from(&q, vec![]);
        let stab = find(&reports, "inverse.sigma_stability");
        let bound = stab.rhs.unwrap_or(f64::NAN);
        let d = q.relative_entropy.value;
        ok &= (d - want_d).abs() <= KL_TOL
            && (bound - want_bound).abs() <= KL_TOL
            && stab.verdict == Verdict::Holds;
        detail.push(format!("{name} D={d:.5} bound={bound:.4}"));
    }
    for m in [
        DensityModel::gaussian(0.0, 1.0)?,
        DensityModel::uniform(0.0, 1.0)?,
        DensityModel::exponential(1.0)?,
    ] {
        let reports = reports_from(&inverse_quantities(&m, n)?, vec![]);
        let jump = find(&reports, "inverse.entropy_jump");
        ok &= jump.verdict != Verdict::Violated && jump.verdict != Verdict::Skipped;
    }
    let corpus = random_corpus(derive_seed(SEED, 0), DEFAULT_CORPUS_SIZE);
    let pinsker: Vec<_> = run_inverse(&corpus, n)
        .into_iter()
        .filter(|r| r.check_id == "inverse.pinsker")
        .collect();
    let pinsker_bad = pinsker
        .iter()
        .filter(|r| r.verdict == Verdict::Violated || r.verdict == Verdict::Skipped)
        .count();
    ok &= pinsker.len() == corpus.len() && pinsker_bad == 0;
    detail.push(format!(
        "pinsker {}/{} on corpus",
        pinsker.len() - pinsker_bad,
        pinsker.len()
    ));
    Ok(verdict(ok, detail.join("; ")))
}

fn knn_agreement(n: &Numerics) -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (i, (expr, _)) in GOLDENS.iter().enumerate() {
        let e = parse_expression(expr)?;
        let grid = e.entropy(n)?.value;
        let knn = estimate_functional(
            &e,
            KNN_SAMPLES,
            DEFAULT_K,
            derive_seed(SEED, 100 + i as u64),
        )?;
        let band = (3.0 * knn.stderr).max(KNN_FLOOR);
        ok &= (knn.value - grid).abs() <= band;
        detail.push(format!("{:+.4}", knn.value - grid));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < KNN_BUDGET_SECS;
    Ok(verdict(
        ok,
        format!("knn - grid: {} in {secs:.1}s", detail.join(", ")),
    ))
}

fn reproducibility() -> Outcome {
    let mut cfg = SuiteConfig::new(SEED);
    cfg.corpus_size = 12;
    cfg.checks = CheckSelection::Ids(
        [
            "ruzsa_triangle",
            "sum_difference_mi",
            "inverse_theorem",
            "ccond",
            "bsg",
            "discrete.four_variable",
            "covering_lemma",
            "functional_submodularity",
        ]
        .map(str::to_string)
        .to_vec(),
    );
    let a = run_suite(&cfg)?.to_json()?;
    let b = run_suite(&cfg)?.to_json()?;
    Ok(verdict(a == b, format!("{} bytes", a.len())))
}

fn main() -> ExitCode {
    let n = Numerics::default();
    let criteria: Vec<Criterion> = vec![
        ("golden entropies", Box::new(move || golden_entropies(&n))),
        (
            "doubling and difference constants",
            Box::new(move || ruzsa_constants(&n)),
        ),
        (
            "continuous corpus registry",
            Box::new(move || continuous_corpus(&n)),
        ),
        (
            "doubling-difference ratio",
            Box::new(move || doubling_difference_ratio(&n)),
        ),
        ("gaussian network identities", Box::new(gaussian_identities)),
        ("bsg sweep", Box::new(bsg_sweep)),
        ("discrete exactness", Box::new(discrete_exactness)),
        ("inverse bundle", Box::new(move || inverse_bundle(&n))),
        ("knn oracle agreement", Box::new(move || knn_agreement(&n))),
        ("byte-identical reports", Box::new(reproducibility)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "{tag} {:>2} {name} [{:.1}s]: {detail}",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
