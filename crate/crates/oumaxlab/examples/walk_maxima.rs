//! Running maxima of random walks under several increment laws: the
//! Darling-Erdos statistic along geometric checkpoints and the iterated
//! logarithm envelopes.
//!
//!     cargo run --release --example walk_maxima

use oumaxlab::walk::{envelope_trace, simulate_walk_max_with_ratio, IncrementDistribution};

fn main() -> oumaxlab::Result<()> {
    let n = 100_000u64;
    for dist in [
        IncrementDistribution::Rademacher,
        IncrementDistribution::StdNormal,
        IncrementDistribution::StudentT { df: 2.0 },
    ] {
        let trace = simulate_walk_max_with_ratio(n, dist, 123, 10)?;
        println!("{dist:?}:");
        println!("  checkpoints {:?}", trace.checkpoints);
        println!("  U_n / sqrt(n) at n = {n}: {:.4}", trace.final_u());
        println!("  DE statistic a(n) U - b(n): {:.4}", trace.final_de());
        let (upper, lower) = envelope_trace(&trace)?;
        println!(
            "  envelope gap at final checkpoint: upper {:+.4}, lower {:+.4}",
            upper.last().unwrap(),
            lower.last().unwrap()
        );
    }
    println!("(heavy-tailed StudentT df = 2 violates the second-moment condition;");
    println!(" its DE statistic drifts far from the light-tailed values above)");
    Ok(())
}
