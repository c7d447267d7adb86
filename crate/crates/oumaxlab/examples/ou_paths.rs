//! Simulate a stationary Ornstein-Uhlenbeck path on a fixed grid and show
//! its running supremum, plus the geometric-grid Brownian time change used
//! to cross-check the AR(1) recursion.
//!
//!     cargo run --release --example ou_paths

use oumaxlab::ou::{bm_time_change, simulate_bm_geometric, simulate_path, OuPathConfig};
use oumaxlab::rng::replica_rng;
use oumaxlab::stats::mean_and_stderr;

fn main() -> oumaxlab::Result<()> {
    let cfg = OuPathConfig {
        horizon: 50.0,
        step: 1e-3,
        seed: 42,
    };
    let path = simulate_path(&cfg)?;
    println!("grid points: {}", path.values.len());
    println!("t        sup over [0, t]");
    for t in [1.0, 5.0, 10.0, 25.0, 50.0] {
        println!("{:<8} {:.6}", t, path.running_sup(t)?);
    }

    // Stationarity check: the marginal is N(0,1) at every grid time, so the
    // path average over a long horizon concentrates near 0 (slowly: the
    // autocorrelation time is 2).
    let (mean, _) = mean_and_stderr(&path.values);
    println!("\npath average over [0, 50]: {mean:+.4} (expect ~0 within ~0.3)");

    // Alternative construction: X_t = e^{-t/2} W(e^t) for a Brownian motion
    // W; sample W on the geometric grid e^{k delta} and time-change it.
    let mut rng = replica_rng(42, 7);
    let w = simulate_bm_geometric(0.01, 500, &mut rng);
    let x = bm_time_change(&w, 0.01);
    let (m2, s2) = mean_and_stderr(&x);
    println!("time-changed BM marginal: mean {m2:+.3} +- {s2:.3} over {} nodes", x.len());
    Ok(())
}
