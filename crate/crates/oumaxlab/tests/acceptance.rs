//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (run with `-- --nocapture` to see the lines for passing
//! tests as well; failing tests always show theirs).
//!
//! Criteria that the mathematics does not permit at these sample sizes
//! are asserted at their stated thresholds anyway and fail honestly with
//! the measured value in the message; see the repository notes for the
//! convergence-rate analysis behind those numbers.

use std::collections::BTreeMap;
use std::time::Instant;

use oumaxlab::excursion::{excursion_maxima, local_time};
use oumaxlab::gauge::{classify, integral_i, integral_j_of, GaugeFunction, Verdict};
use oumaxlab::harness::{run_experiment, ExperimentConfig};
use oumaxlab::lacunary::{orthogonality_quadrature, FrequencySequence};
use oumaxlab::limits::{blockmax_limit_cdf, blockmax_statistic, log_c};
use oumaxlab::ou::{simulate_path, OuPathConfig};
use oumaxlab::quad::adaptive_simpson;
use oumaxlab::rng::{mix_seed, replica_rng};
use oumaxlab::special::{growth_quadrature, growth_series, ExcursionLaw};
use oumaxlab::stats::{pearson, EmpiricalDistribution};
use rand::Rng;

fn gate(criterion: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {criterion}: {tag} - {detail}");
    assert!(pass, "acceptance {criterion}: {detail}");
}

fn experiment(name: &str, seed: u64, replicas: u64, params: &[(&str, &str)]) -> ExperimentConfig {
    ExperimentConfig {
        experiment: name.to_string(),
        seed,
        replicas,
        replica_offset: 0,
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect::<BTreeMap<_, _>>(),
    }
}

#[test]
fn acceptance_01_excursion_law_exactness() {
    let start = Instant::now();
    // Independent oracle: accumulate segment-wise adaptive quadrature of
    // exp(y^2/2) along the grid, so G(x_k) = G(x_{k-1}) + segment.
    let mut worst_g = 0.0_f64;
    let mut acc = 0.0_f64;
    let mut prev = 0.0_f64;
    for k in 1..=400 {
        let x = k as f64 * 10.0 / 400.0;
        acc += adaptive_simpson(&|y: f64| (y * y / 2.0).exp(), prev, x, 1e-13);
        prev = x;
        let s = growth_series(x);
        worst_g = worst_g.max((s - acc).abs() / s.abs());
    }
    // Spot-check the from-zero quadrature route as well.
    let spot = (growth_series(6.0) - growth_quadrature(6.0, 1e-13)).abs() / growth_series(6.0);
    worst_g = worst_g.max(spot);
    let law = ExcursionLaw::default();
    let mut worst_rt = 0.0_f64;
    for i in 0..1000 {
        let u = (i as f64 + 0.5) / 1000.0;
        let x = law.quantile(u).unwrap();
        worst_rt = worst_rt.max((law.cdf(x).unwrap() - u).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    gate(
        "01",
        worst_g <= 1e-12 && worst_rt <= 1e-10 && elapsed < 1.0,
        &format!(
            "G series/quadrature rel diff {worst_g:.2e} (<= 1e-12), \
             quantile round trip {worst_rt:.2e} (<= 1e-10), {elapsed:.2} s (< 1 s)"
        ),
    );
}

#[test]
fn acceptance_02_local_time_normalization() {
    let cfg = experiment(
        "localtime-moments",
        101,
        500,
        &[("t", "200"), ("step", "0.001"), ("epsilon", "0.02")],
    );
    let report = run_experiment(&cfg).unwrap();
    let mean = report.summary_num("mean_lhat_over_t").unwrap();
    let target = 0.39894;
    let rel = (mean - target).abs() / target;
    gate(
        "02",
        rel <= 0.02,
        &format!("mean l(t)/t = {mean:.5} vs {target} (rel dev {rel:.4}, tol 0.02)"),
    );
}

#[test]
fn acceptance_03_inverse_local_time_mean() {
    let cfg = experiment(
        "tau-moments",
        102,
        20_000,
        &[("level", "1"), ("step", "0.001"), ("epsilon", "0.02")],
    );
    let report = run_experiment(&cfg).unwrap();
    let mean = report.summary_num("mean_tau").unwrap();
    let target = 2.5066;
    let rel = (mean - target).abs() / target;
    gate(
        "03",
        rel <= 0.02,
        &format!("mean tau(1) = {mean:.4} vs {target} (rel dev {rel:.4}, tol 0.02)"),
    );
}

#[test]
fn acceptance_04_excursion_maximum_law() {
    let per_path = 8usize;
    let paths = 1250usize;
    let step = 1e-3;
    let eps = 0.02;
    let mut pooled = Vec::with_capacity(per_path * paths);
    let mut lag_a = Vec::new();
    let mut lag_b = Vec::new();
    for i in 0..paths {
        let p = simulate_path(&OuPathConfig {
            horizon: 90.0,
            step,
            seed: mix_seed(103, i as u64),
        })
        .unwrap();
        let lt = local_time(&p, eps).unwrap();
        let em = excursion_maxima(&p, &lt, per_path).unwrap();
        for w in em.maxima.windows(2) {
            lag_a.push(w[0]);
            lag_b.push(w[1]);
        }
        pooled.extend(em.maxima);
    }
    assert_eq!(pooled.len(), per_path * paths);
    let law = ExcursionLaw::default();
    let emp = EmpiricalDistribution::new(pooled).unwrap();
    let ks = emp.ks_statistic(|x| law.cdf(x).unwrap_or(if x > 0.0 { 1.0 } else { 0.0 }));
    let r = pearson(&lag_a, &lag_b);
    let se = 1.0 / (lag_a.len() as f64).sqrt();
    gate(
        "04",
        ks <= 0.02 && r.abs() <= 3.0 * se,
        &format!(
            "pooled M_n KS = {ks:.4} over {} samples (tol 0.02); \
             lag-1 autocorr {r:+.4} vs 3 SE = {:.4}",
            emp.len(),
            3.0 * se
        ),
    );
}

#[test]
fn acceptance_05_coupling_rate() {
    let cfg = experiment("coupling-mismatch", 105, 10_000, &[]);
    let report = run_experiment(&cfg).unwrap();
    let ts = [100.0, 400.0, 1600.0, 6400.0];
    let rates: Vec<f64> = ts
        .iter()
        .map(|t| report.summary_num(&format!("mismatch_p[t={t}]")).unwrap())
        .collect();
    let slope = report.summary_num("loglog_slope").unwrap();
    let decreasing = rates.windows(2).all(|w| w[1] < w[0]);
    gate(
        "05",
        decreasing && (-0.8..=-0.2).contains(&slope),
        &format!("mismatch rates {rates:?} strictly decreasing = {decreasing}, log-log slope {slope:.3} in [-0.8, -0.2]"),
    );
}

#[test]
fn acceptance_06_blockmax_mismatch_identity() {
    let law = ExcursionLaw::default();
    let reps = 100_000u64;
    let mut all_ok = true;
    let mut details = Vec::new();
    for (case, (n, m)) in [(0u64, (1usize, 1usize)), (1, (3, 2)), (2, (10, 5))] {
        let p = m as f64 / (n + m) as f64;
        let mut rng = replica_rng(106, case);
        let mut mismatches = 0u64;
        for _ in 0..reps {
            let mut head = f64::MIN;
            let mut all = f64::MIN;
            for j in 0..(n + m) {
                let u: f64 = rng.random::<f64>().clamp(1e-15, 1.0 - 1e-15);
                let x = law.quantile(u).unwrap();
                if j < n && x > head {
                    head = x;
                }
                if x > all {
                    all = x;
                }
            }
            if head != all {
                mismatches += 1;
            }
        }
        let freq = mismatches as f64 / reps as f64;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        let ok = (freq - p).abs() <= 3.0 * se;
        all_ok &= ok;
        details.push(format!("({n},{m}): {freq:.5} vs {p:.5} ({:+.2} SE)", (freq - p) / se));
    }
    gate("06", all_ok, &details.join("; "));
}

#[test]
fn acceptance_07_gumbel_type_limit() {
    let law = ExcursionLaw::default();
    let n = 100_000_000u64;
    let reps = 100_000usize;
    let mut rng = replica_rng(107, 0);
    let mut stats = Vec::with_capacity(reps);
    for _ in 0..reps {
        let u: f64 = rng.random::<f64>().clamp(1e-15, 1.0 - 1e-15);
        stats.push(blockmax_statistic(law.max_quantile_exact(n, u).unwrap(), n));
    }
    let emp = EmpiricalDistribution::new(stats).unwrap();
    let ks = emp.ks_statistic(blockmax_limit_cdf);
    gate(
        "07",
        ks <= 0.05,
        &format!("exact block maxima at n = 1e8, {reps} replicas: KS = {ks:.4} (tol 0.05)"),
    );
}

#[test]
fn acceptance_08a_ou_limit_t50() {
    let cfg = experiment("ou-de", 108, 10_000, &[("t", "50"), ("step", "0.001")]);
    let report = run_experiment(&cfg).unwrap();
    let ks = report.summary_num("ks_vs_limit").unwrap();
    gate(
        "08a",
        ks <= 0.1,
        &format!("OU normalized sup at t = 50: KS = {ks:.4} (tol 0.1)"),
    );
}

#[test]
fn acceptance_08b_walk_limit_n1e5() {
    let mut all_ok = true;
    let mut details = Vec::new();
    for dist in ["normal", "rademacher"] {
        let cfg = experiment("de-walk", 109, 2_000, &[("n", "100000"), ("dist", dist)]);
        let report = run_experiment(&cfg).unwrap();
        let ks = report.summary_num("ks_vs_limit").unwrap();
        all_ok &= ks <= 0.1;
        details.push(format!("{dist}: KS = {ks:.4}"));
    }
    gate("08b", all_ok, &format!("{} (tol 0.1 each)", details.join(", ")));
}

#[test]
fn acceptance_08c_heavy_tail_negative_control() {
    let cfg = experiment(
        "de-walk",
        110,
        1_000,
        &[("n", "100000"), ("dist", "student-t:df=2")],
    );
    let report = run_experiment(&cfg).unwrap();
    let ks = report.summary_num("ks_vs_limit").unwrap();
    gate(
        "08c",
        ks > 0.1,
        &format!("StudentT(df=2) control: KS = {ks:.4}, must exceed 0.1"),
    );
}

#[test]
fn acceptance_09_integral_tests() {
    // I(g) = J(log log g) for gauges staying above e^e, so the inner
    // logarithm is never clamped.
    let mut worst = 0.0_f64;
    for p in [3.0, 4.0, 5.0] {
        let g = GaugeFunction::log_power(p);
        let t_end = 1e7;
        let i = integral_i(&g, t_end).unwrap();
        let j = integral_j_of(|t| log_c(log_c(g.eval(t))), 16.0, t_end).unwrap();
        worst = worst.max((i - j).abs() / i.abs());
    }
    let identity_ok = worst <= 1e-8;

    let mut thresholds_ok = true;
    for (theta, want) in [(1.5, Verdict::Diverges), (2.0, Verdict::Diverges), (2.5, Verdict::Converges)] {
        let lll = classify(&GaugeFunction::lll(theta, 0.0)).unwrap().verdict;
        let feller = classify(&GaugeFunction::feller(theta)).unwrap().verdict;
        thresholds_ok &= lll == want && feller == want;
    }

    let base = GaugeFunction::lll(2.5, 0.0);
    let want = classify(&base).unwrap().verdict;
    let mut scaling_ok = true;
    for factor in [0.1, 10.0, 1000.0] {
        let scaled = GaugeFunction::scaled(factor, GaugeFunction::lll(2.5, 0.0)).unwrap();
        scaling_ok &= classify(&scaled).unwrap().verdict == want;
    }
    gate(
        "09",
        identity_ok && thresholds_ok && scaling_ok,
        &format!(
            "I = J rel diff {worst:.2e} (<= 1e-8); theta-threshold verdicts {}; \
             scaling invariance {}",
            if thresholds_ok { "exact" } else { "WRONG" },
            if scaling_ok { "holds" } else { "BROKEN" }
        ),
    );
}

#[test]
fn acceptance_10a_lacunary_orthogonality() {
    let freq = FrequencySequence::geometric(2, 64).unwrap();
    let n = 20usize;
    let val = orthogonality_quadrature(&freq, n).unwrap();
    let rel = (val - n as f64).abs() / n as f64;
    gate(
        "10a",
        rel <= 1e-6,
        &format!("integral of f_n^2 = {val:.9} vs {n} (rel {rel:.2e}, tol 1e-6)"),
    );
}

#[test]
fn acceptance_10b_lacunary_limit() {
    let cfg = experiment(
        "lacunary",
        111,
        10_000,
        &[("family", "geometric"), ("q", "2"), ("n", "10000")],
    );
    let report = run_experiment(&cfg).unwrap();
    let ks = report.summary_num("ks_vs_limit").unwrap();
    gate(
        "10b",
        ks <= 0.12,
        &format!("F-statistic ECDF at n = 1e4 over 1e4 omegas: KS = {ks:.4} (tol 0.12)"),
    );
}
