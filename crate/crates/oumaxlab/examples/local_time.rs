//! Estimate the local time at zero by band occupation, invert it, and
//! check the two moment identities E[l(t)] = t / sqrt(2 pi) and
//! E[tau(1)] = sqrt(2 pi) on a small ensemble.
//!
//!     cargo run --release --example local_time

use oumaxlab::excursion::{default_epsilon, local_time, tau_hat_streaming};
use oumaxlab::ou::{simulate_path, OuPathConfig};
use oumaxlab::rng::replica_rng;
use oumaxlab::stats::mean_and_stderr;

fn main() -> oumaxlab::Result<()> {
    let step = 1e-3;
    let eps = default_epsilon(step);
    println!("step = {step}, band eps = {eps}, quantum = {}", step / eps);

    let t = 100.0;
    let reps = 200;
    let mut lhat_over_t = Vec::with_capacity(reps);
    for i in 0..reps {
        let p = simulate_path(&OuPathConfig {
            horizon: t,
            step,
            seed: oumaxlab::rng::mix_seed(1, i as u64),
        })?;
        let lt = local_time(&p, eps)?;
        lhat_over_t.push(lt.values.last().unwrap() / t);
    }
    let (m, se) = mean_and_stderr(&lhat_over_t);
    println!(
        "mean l(t)/t over {reps} paths at t = {t}: {m:.5} +- {se:.5}  (1/sqrt(2 pi) = {:.5})",
        1.0 / (2.0 * std::f64::consts::PI).sqrt()
    );

    let mut taus = Vec::with_capacity(reps);
    for i in 0..reps {
        taus.push(tau_hat_streaming(step, eps, 1.0, 200.0, replica_rng(2, i as u64))?);
    }
    let (mt, set) = mean_and_stderr(&taus);
    println!(
        "mean tau(1) over {reps} paths: {mt:.4} +- {set:.4}  (sqrt(2 pi) = {:.4})",
        (2.0 * std::f64::consts::PI).sqrt()
    );
    Ok(())
}
