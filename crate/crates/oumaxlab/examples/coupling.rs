//! Couple the running supremum of one OU path with the maximum of its
//! first floor(t / sqrt(2 pi)) excursion maxima, and compare the observed
//! mismatch frequency across horizons with the exact i.i.d. identity
//! P(max over n differs from max over n + m) = m / (n + m).
//!
//!     cargo run --release --example coupling

use oumaxlab::excursion::{blockmax_mismatch_exact, coupled_pair_sample, default_epsilon};
use oumaxlab::rng::replica_rng;
use oumaxlab::stats::wilson_interval;

fn main() -> oumaxlab::Result<()> {
    let step = 1e-3;
    let eps = default_epsilon(step);
    let reps = 400u64;

    println!("t       mismatch freq   95% Wilson interval");
    for &t in &[50.0f64, 100.0, 200.0] {
        let horizon = t + 6.0 * (t * t.ln()).sqrt();
        let mut mismatches = 0u64;
        for i in 0..reps {
            let pair = coupled_pair_sample(step, eps, t, horizon, replica_rng(9, i))?;
            if pair.mismatch {
                mismatches += 1;
            }
        }
        let freq = mismatches as f64 / reps as f64;
        let (lo, hi) = wilson_interval(mismatches, reps, 1.96);
        println!("{t:<7} {freq:<15.4} [{lo:.4}, {hi:.4}]");
    }

    println!("\nexact block-max mismatch identity m/(n+m):");
    for (n, m) in [(1u64, 1u64), (3, 2), (10, 5)] {
        println!("  (n, m) = ({n}, {m}): {:.6}", blockmax_mismatch_exact(n, m)?);
    }
    Ok(())
}
