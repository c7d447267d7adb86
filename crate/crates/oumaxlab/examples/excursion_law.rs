//! Evaluate the excursion-maximum law: CDF, survival, quantiles, and the
//! exact n-block maximum sampler.
//!
//!     cargo run --release --example excursion_law

use oumaxlab::special::{growth_quadrature, growth_series, ExcursionLaw};

fn main() -> oumaxlab::Result<()> {
    let law = ExcursionLaw::default();

    println!("x        G(x) series       G(x) quadrature    F(x)          sf(x)");
    for x in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let gs = growth_series(x);
        let gq = growth_quadrature(x, 1e-13);
        println!(
            "{:<8} {:<17.12} {:<18.12} {:<13.9} {:.3e}",
            x,
            gs,
            gq,
            law.cdf(x)?,
            law.sf(x)?
        );
    }

    println!("\nquantile round trips:");
    for u in [0.01, 0.1, 0.5, 0.9, 0.99, 0.999999] {
        let x = law.quantile(u)?;
        let back = law.cdf(x)?;
        println!("  u = {u:<9}  F^-1(u) = {x:<18.12}  F(F^-1(u)) - u = {:+.2e}", back - u);
    }

    // One draw of max(M_1..M_n) costs a single quantile call: the maximum
    // of n i.i.d. F-draws has CDF F^n, so invert F at u^(1/n).
    println!("\nexact block-maximum quantiles at u = 0.5:");
    for n in [10u64, 1_000, 100_000_000] {
        println!("  n = {n:<11}  median max = {:.9}", law.max_quantile_exact(n, 0.5)?);
    }
    Ok(())
}
