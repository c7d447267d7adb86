//! Distributional limits of normalized maxima: the exact i.i.d. block
//! maximum at n = 10^8 against its Gumbel-type limit, and the tabulated
//! Darling-Erdos limit CDF.
//!
//!     cargo run --release --example extreme_limits

use oumaxlab::limits::{blockmax_limit_cdf, blockmax_statistic, de_limit_cdf};
use oumaxlab::rng::replica_rng;
use oumaxlab::special::ExcursionLaw;
use oumaxlab::stats::EmpiricalDistribution;
use rand::Rng;

fn main() -> oumaxlab::Result<()> {
    let law = ExcursionLaw::default();
    let n = 100_000_000u64;
    let reps = 20_000;
    let mut rng = replica_rng(5, 0);
    let mut stats = Vec::with_capacity(reps);
    for _ in 0..reps {
        let u: f64 = rng.random::<f64>().clamp(1e-15, 1.0 - 1e-15);
        let m = law.max_quantile_exact(n, u)?;
        stats.push(blockmax_statistic(m, n));
    }
    let emp = EmpiricalDistribution::new(stats)?;
    let ks = emp.ks_statistic(blockmax_limit_cdf);
    println!("block maximum at n = {n}: KS vs exp(-e^(-x/2)/sqrt 2) = {ks:.4} over {reps} draws");

    println!("\nDarling-Erdos limit CDF exp(-e^(-x)/sqrt(4 pi)):");
    for x in [-2.0, -1.0, 0.0, 1.0, 2.0, 4.0] {
        println!("  x = {x:<5} F(x) = {:.6}", de_limit_cdf(x));
    }
    Ok(())
}
