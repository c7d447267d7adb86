//! Random-walk running maxima U_n = max_{k<=n} S_k / k^{1/2} under several
//! increment laws, with the normalized statistic a(n) U_n - b(n) and the
//! envelope traces on quadruple-log scale.
//!
//! The envelope constants are asymptotic on scales no simulation reaches;
//! the traces here are diagnostics with sanity bands, not estimates of the
//! limiting constants.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::limits::{log_c, norm_a, norm_b};
use crate::rng::replica_rng;

const SQRT_3: f64 = 1.7320508075688772;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IncrementDistribution {
    /// +1 or -1 with equal probability.
    Rademacher,
    /// Uniform on [-sqrt(3), sqrt(3)] (unit variance).
    UniformSym,
    StdNormal,
    /// Student's t; standardized to unit variance when df > 2. df <= 2 is
    /// the deliberate moment-condition violation.
    StudentT { df: f64 },
}

impl IncrementDistribution {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::UniformSym => rng.random_range(-SQRT_3..SQRT_3),
            Self::StdNormal => StandardNormal.sample(rng),
            Self::StudentT { df } => {
                let t: f64 = StudentT::new(*df).expect("df > 0").sample(rng);
                if *df > 2.0 {
                    t * ((df - 2.0) / df).sqrt()
                } else {
                    t
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rademacher" => Ok(Self::Rademacher),
            "uniform" => Ok(Self::UniformSym),
            "normal" => Ok(Self::StdNormal),
            other => {
                if let Some(df) = other.strip_prefix("student-t:df=") {
                    let df: f64 = df
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad df in `{other}`")))?;
                    if !(df > 0.0) {
                        return Err(Error::InvalidConfig(format!("df must be > 0, got {df}")));
                    }
                    Ok(Self::StudentT { df })
                } else {
                    Err(Error::InvalidConfig(format!("unknown distribution `{other}`")))
                }
            }
        }
    }
}

/// U_n and a(n) U_n - b(n) on a geometric checkpoint grid.
#[derive(Debug, Clone)]
pub struct WalkMaxTrace {
    pub checkpoints: Vec<u64>,
    pub u_values: Vec<f64>,
    pub de_values: Vec<f64>,
}

impl WalkMaxTrace {
    pub fn final_u(&self) -> f64 {
        *self.u_values.last().unwrap()
    }

    pub fn final_de(&self) -> f64 {
        *self.de_values.last().unwrap()
    }
}

/// Exact U_n from a stored increment vector (recomputation oracle).
pub fn walk_max_exact(increments: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut u = f64::NEG_INFINITY;
    for (k, &xi) in increments.iter().enumerate() {
        s += xi;
        u = u.max(s / ((k + 1) as f64).sqrt());
    }
    u
}

pub fn simulate_walk_max(
    n: u64,
    dist: IncrementDistribution,
    seed: u64,
) -> Result<WalkMaxTrace> {
    simulate_walk_max_with_ratio(n, dist, seed, 2)
}

/// Single pass over n increments; records U_k at checkpoints
/// 1, r, r^2, ..., and always at n. The stream is `replica_rng(seed, 0)`.
pub fn simulate_walk_max_with_ratio(
    n: u64,
    dist: IncrementDistribution,
    seed: u64,
    ratio: u64,
) -> Result<WalkMaxTrace> {
    if n < 1 {
        return Err(Error::InvalidConfig("walk length must be >= 1".into()));
    }
    if ratio < 2 {
        return Err(Error::InvalidConfig("checkpoint ratio must be >= 2".into()));
    }
    let mut rng = replica_rng(seed, 0);
    let mut checkpoints = Vec::new();
    let mut u_values = Vec::new();
    let mut s = 0.0_f64;
    let mut u = f64::NEG_INFINITY;
    let mut next_cp = 1u64;
    for k in 1..=n {
        s += dist.sample(&mut rng);
        let v = s / (k as f64).sqrt();
        if v > u {
            u = v;
        }
        if k == next_cp || k == n {
            checkpoints.push(k);
            u_values.push(u);
            while next_cp <= k {
                next_cp = next_cp.saturating_mul(ratio);
            }
        }
    }
    let de_values = checkpoints
        .iter()
        .zip(&u_values)
        .map(|(&k, &uv)| de_value(uv, k))
        .collect();
    Ok(WalkMaxTrace {
        checkpoints,
        u_values,
        de_values,
    })
}

/// a(n) u - b(n), the Darling-Erdos normalization for walks.
pub fn de_value(u: f64, n: u64) -> f64 {
    let nf = n as f64;
    norm_a(nf) * u - norm_b(nf)
}

/// The normalized statistic at every checkpoint of a trace.
pub fn de_statistic(trace: &WalkMaxTrace) -> Vec<f64> {
    trace
        .checkpoints
        .iter()
        .zip(&trace.u_values)
        .map(|(&k, &u)| de_value(u, k))
        .collect()
}

/// Quadruple-log envelope traces:
/// upper = (a(n) U_n - 2 llog n - (3/2) lllog n) / llllog n,
/// lower = (a(n) U_n - 2 llog n - (1/2) lllog n) / llllog n.
pub fn envelope_trace(trace: &WalkMaxTrace) -> Result<(Vec<f64>, Vec<f64>)> {
    if *trace.checkpoints.last().unwrap() < 1_000 {
        return Err(Error::InvalidConfig(
            "envelope traces need checkpoints reaching n >= 1000".into(),
        ));
    }
    let mut upper = Vec::with_capacity(trace.checkpoints.len());
    let mut lower = Vec::with_capacity(trace.checkpoints.len());
    for (&n, &u) in trace.checkpoints.iter().zip(&trace.u_values) {
        let nf = n as f64;
        let l2 = log_c(log_c(nf));
        let l3 = log_c(l2);
        let l4 = log_c(l3);
        let core = norm_a(nf) * u - 2.0 * l2;
        upper.push((core - 1.5 * l3) / l4);
        lower.push((core - 0.5 * l3) / l4);
    }
    Ok((upper, lower))
}
