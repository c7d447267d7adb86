//! Drive the experiment harness programmatically: run a small experiment,
//! render it in both formats, and demonstrate replica-offset merging
//! (two half runs reproduce the full run's sample set).
//!
//!     cargo run --release --example experiment_harness

use std::collections::BTreeMap;

use oumaxlab::harness::{render_report, run_experiment, ExperimentConfig, OutputFormat};

fn config(replicas: u64, offset: u64) -> ExperimentConfig {
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), "1000000".to_string());
    ExperimentConfig {
        experiment: "blockmax-limit".to_string(),
        seed: 31,
        replicas,
        replica_offset: offset,
        params,
    }
}

fn main() -> oumaxlab::Result<()> {
    let full = run_experiment(&config(200, 0))?;
    println!("{}", render_report(&full, OutputFormat::Csv));

    let json = render_report(&full, OutputFormat::Json);
    println!("json preview: {}...", &json[..json.len().min(200)]);

    // Replica streams are indexed by absolute replica number, so two half
    // runs cover exactly the same draws as one full run.
    let first = run_experiment(&config(100, 0))?;
    let second = run_experiment(&config(100, 100))?;
    let mut merged: Vec<f64> = first
        .samples
        .iter()
        .chain(&second.samples)
        .map(|row| row[row.len() - 1])
        .collect();
    let mut whole: Vec<f64> = full.samples.iter().map(|row| row[row.len() - 1]).collect();
    merged.sort_by(f64::total_cmp);
    whole.sort_by(f64::total_cmp);
    println!("half + half == full: {}", merged == whole);
    Ok(())
}
