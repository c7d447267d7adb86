//! Classify gauge functions by their integral tests: I(g), J(h), the
//! Feller sum, and the phi-condition ratios, including the clamped
//! tabulated route that refuses to extrapolate.
//!
//!     cargo run --release --example gauge_classify

use oumaxlab::gauge::{
    classify, clamp_gauge, integral_i, integral_j_of, phi_condition_report, GaugeFunction,
};
use oumaxlab::limits::log_c;

fn main() -> oumaxlab::Result<()> {
    let specs = [
        "lll:theta=1.5,c=0",
        "lll:theta=2.0,c=0",
        "lll:theta=2.5,c=0",
        "feller:theta=3.0",
        "logpower:p=3",
    ];
    println!("gauge                 verdict        partial integral (to 1e8)");
    for s in specs {
        let g = GaugeFunction::parse(s)?;
        let v = classify(&g)?;
        println!("{s:<21} {:<14?} {:.6}", v.verdict, v.partial_value);
    }

    // I(g) = J(log log g) whenever g stays above e^e on the domain, so the
    // inner logarithm is not clamped.
    let g = GaugeFunction::log_power(4.0);
    let t_end = 1e7;
    let i = integral_i(&g, t_end)?;
    let j = integral_j_of(|t| log_c(log_c(g.eval(t))), 16.0, t_end)?;
    println!("\nI(logpower p=4) = {i:.10}, J(log log g) = {j:.10}, diff = {:.2e}", (i - j).abs());

    // Tabulated gauges never extrapolate: classify stays inconclusive and
    // only reports the partial integral over the table's span.
    let grid: Vec<f64> = (0..200).map(|k| 16.0 * 1.1f64.powi(k)).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| log_c(t)).collect();
    let tab = GaugeFunction::tabulated(grid, vals)?;
    let v = classify(&tab)?;
    println!("tabulated log t gauge: {:?}, partial {:.4}", v.verdict, v.partial_value);

    let clamped = clamp_gauge(GaugeFunction::log_power(0.5));
    let ratios = phi_condition_report(&clamped, 10_000)?;
    println!("clamped gauge phi-condition ratios (geometric n grid): {:?}", &ratios[..4]);
    Ok(())
}
