//! Cross-cutting distributional invariants that hold at desk scale even
//! where convergence to the asymptotic limit is slow: coupling alignment
//! of the two normalized statistics, universality across increment laws,
//! and stability of the OU statistic under step refinement.

use std::collections::BTreeMap;

use oumaxlab::excursion::{coupled_pair_sample, default_epsilon};
use oumaxlab::harness::{run_experiment, ExperimentConfig};
use oumaxlab::limits::{norm_a_at_exp, norm_b_at_exp};
use oumaxlab::rng::replica_rng;
use oumaxlab::stats::{ks_two_sample, EmpiricalDistribution};

fn de_walk_sample(dist: &str, replicas: u64, seed: u64) -> EmpiricalDistribution {
    let cfg = ExperimentConfig {
        experiment: "de-walk".into(),
        seed,
        replicas,
        replica_offset: 0,
        params: BTreeMap::from([
            ("n".to_string(), "100000".to_string()),
            ("dist".to_string(), dist.to_string()),
        ]),
    };
    let report = run_experiment(&cfg).unwrap();
    EmpiricalDistribution::new(report.samples.iter().map(|r| r[0]).collect()).unwrap()
}

#[test]
fn coupled_sup_and_blockmax_statistics_converge_together() {
    // The coupling replaces sup X by the max of ~t/sqrt(2 pi) excursion
    // maxima. The distributional gap between the two normalized
    // statistics comes from the path segments outside the block windows,
    // so it must shrink as t grows even though both marginals are still
    // far from the asymptotic limit at these horizons.
    let step = 1e-3;
    let eps = default_epsilon(step);
    let reps = 1500u64;
    let mut gaps = Vec::new();
    for &t in &[50.0f64, 100.0, 200.0] {
        let horizon = t + 6.0 * (t * t.ln()).sqrt();
        let mut sups = Vec::new();
        let mut blocks = Vec::new();
        for i in 0..reps {
            let pair = coupled_pair_sample(step, eps, t, horizon, replica_rng(2024, i)).unwrap();
            sups.push(norm_a_at_exp(t) * pair.sup - norm_b_at_exp(t));
            blocks.push(norm_a_at_exp(t) * pair.blockmax - norm_b_at_exp(t));
        }
        let a = EmpiricalDistribution::new(sups).unwrap();
        let b = EmpiricalDistribution::new(blocks).unwrap();
        gaps.push(ks_two_sample(&a, &b));
    }
    assert!(
        gaps.windows(2).all(|w| w[1] < w[0]),
        "gap not decreasing in t: {gaps:?}"
    );
    assert!(gaps[2] < 0.04, "gap at t = 200 too large: {}", gaps[2]);
}

#[test]
fn walk_de_statistic_is_universal_across_light_tails() {
    let normal = de_walk_sample("normal", 1000, 31);
    let rademacher = de_walk_sample("rademacher", 1000, 32);
    let uniform = de_walk_sample("uniform", 1000, 33);
    let d1 = ks_two_sample(&normal, &rademacher);
    let d2 = ks_two_sample(&normal, &uniform);
    // 95% two-sample KS quantile at n = m = 1000 is ~0.061.
    assert!(d1 < 0.08, "normal vs rademacher KS = {d1}");
    assert!(d2 < 0.08, "normal vs uniform KS = {d2}");
}

#[test]
fn ou_statistic_is_stable_under_step_refinement() {
    let run = |step: &str, seed: u64| {
        let cfg = ExperimentConfig {
            experiment: "ou-de".into(),
            seed,
            replicas: 2000,
            replica_offset: 0,
            params: BTreeMap::from([
                ("t".to_string(), "50".to_string()),
                ("step".to_string(), step.to_string()),
            ]),
        };
        let report = run_experiment(&cfg).unwrap();
        EmpiricalDistribution::new(report.samples.iter().map(|r| r[0]).collect()).unwrap()
    };
    let coarse = run("0.002", 41);
    let fine = run("0.0005", 42);
    let d = ks_two_sample(&coarse, &fine);
    // 95% two-sample KS quantile at n = m = 2000 is ~0.043; the grids
    // differ fourfold, so any step-size artifact would show up here.
    assert!(d < 0.06, "step 2e-3 vs 5e-4 KS = {d}");
}
