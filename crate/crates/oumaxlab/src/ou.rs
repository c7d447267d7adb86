//! Exact simulation of the stationary Ornstein-Uhlenbeck process.
//!
//! The process is centered Gaussian with Cov(X_s, X_t) = exp(-|t-s|/2), so
//! conditionally on X_t = x the next point is Gaussian with mean
//! e^{-d/2} x and variance 1 - e^{-d}. Sampling that transition on a grid
//! introduces no bias at the grid times; the only discretization effect is
//! that the running supremum is taken over grid points.

use std::io::{Read, Write};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::replica_rng;

#[derive(Debug, Clone, Copy)]
pub struct OuPathConfig {
    pub horizon: f64,
    pub step: f64,
    pub seed: u64,
}

impl OuPathConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= self.horizon) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < step <= horizon, got step {} horizon {}",
                self.step, self.horizon
            )));
        }
        let points = (self.horizon / self.step).ceil();
        if !points.is_finite() || points >= (usize::MAX - 1) as f64 {
            return Err(Error::InvalidConfig("grid does not fit in memory".into()));
        }
        Ok(())
    }

    /// Number of grid points, ceil(horizon/step) + 1.
    pub fn grid_len(&self) -> usize {
        (self.horizon / self.step).ceil() as usize + 1
    }
}

/// A discretized OU trajectory with its running supremum.
#[derive(Debug, Clone)]
pub struct OuPath {
    pub step: f64,
    pub values: Vec<f64>,
    pub running_max: Vec<f64>,
}

/// Exact conditional draw of X_{t+delta} given X_t = x, with z ~ N(0,1).
pub fn ou_transition(x: f64, delta: f64, z: f64) -> f64 {
    let rho = (-0.5 * delta).exp();
    rho * x + (1.0 - rho * rho).sqrt() * z
}

/// Stateful stepper used by both path materialization and the streaming
/// experiments. Starts from the stationary law (X_0 ~ N(0,1)).
pub struct OuStepper<R: Rng> {
    rho: f64,
    innov_sd: f64,
    x: f64,
    rng: R,
}

impl<R: Rng> OuStepper<R> {
    pub fn new(step: f64, mut rng: R) -> Self {
        let rho = (-0.5 * step).exp();
        let x: f64 = rng.sample(StandardNormal);
        Self {
            rho,
            innov_sd: (1.0 - rho * rho).sqrt(),
            x,
            rng,
        }
    }

    /// Current value X_{k step}.
    pub fn current(&self) -> f64 {
        self.x
    }

    /// Advance one grid step and return the new value.
    pub fn advance(&mut self) -> f64 {
        let z: f64 = self.rng.sample(StandardNormal);
        self.x = self.rho * self.x + self.innov_sd * z;
        self.x
    }
}

/// Simulate a stationary OU path on the uniform grid. Deterministic per seed.
pub fn simulate_path(config: &OuPathConfig) -> Result<OuPath> {
    config.validate()?;
    let n = config.grid_len();
    let mut values = Vec::with_capacity(n);
    let mut running_max = Vec::with_capacity(n);
    let mut stepper = OuStepper::new(config.step, replica_rng(config.seed, 0));
    let mut max = stepper.current();
    values.push(max);
    running_max.push(max);
    for _ in 1..n {
        let x = stepper.advance();
        if x > max {
            max = x;
        }
        values.push(x);
        running_max.push(max);
    }
    Ok(OuPath {
        step: config.step,
        values,
        running_max,
    })
}

impl OuPath {
    pub fn horizon(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// Running supremum over [0, t]: the grid max up to the last index <= t.
    pub fn running_sup(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon() + 0.5 * self.step).contains(&t) {
            return Err(Error::OutOfRange {
                t,
                horizon: self.horizon(),
            });
        }
        let idx = ((t / self.step).floor() as usize).min(self.values.len() - 1);
        Ok(self.running_max[idx])
    }
}

/// Time-change a Brownian path sampled on the geometric grid e^{k delta}
/// into an OU path on the uniform grid k delta:
/// X_{k delta} = e^{-k delta / 2} B_{e^{k delta}}.
pub fn bm_time_change(bm_values: &[f64], delta: f64) -> Vec<f64> {
    bm_values
        .iter()
        .enumerate()
        .map(|(k, &b)| (-0.5 * k as f64 * delta).exp() * b)
        .collect()
}

/// Standard Brownian motion at the geometric times e^{k delta}, k = 0..=k_max,
/// with B_1 ~ N(0,1) as the starting point.
pub fn simulate_bm_geometric<R: Rng>(delta: f64, k_max: usize, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut b: f64 = rng.sample(StandardNormal);
    out.push(b);
    let mut t_prev = 1.0_f64;
    for k in 1..=k_max {
        let t = (k as f64 * delta).exp();
        let z: f64 = rng.sample(StandardNormal);
        b += (t - t_prev).sqrt() * z;
        out.push(b);
        t_prev = t;
    }
    out
}

const DUMP_MAGIC: &[u8; 8] = b"OUPATH01";

/// Debug dump: magic, step (LE f64), count (LE u64), then the values.
/// Not a stability contract.
pub fn write_path_dump<W: Write>(path: &OuPath, mut w: W) -> Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&path.step.to_le_bytes())?;
    w.write_all(&(path.values.len() as u64).to_le_bytes())?;
    for v in &path.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_path_dump<R: Read>(mut r: R) -> Result<OuPath> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(Error::InvalidConfig("bad path dump magic".into()));
    }
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    let step = f64::from_le_bytes(buf);
    r.read_exact(&mut buf)?;
    let count = u64::from_le_bytes(buf) as usize;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut buf)?;
        values.push(f64::from_le_bytes(buf));
    }
    let mut running_max = Vec::with_capacity(count);
    let mut max = f64::NEG_INFINITY;
    for &v in &values {
        if v > max {
            max = v;
        }
        running_max.push(max);
    }
    Ok(OuPath {
        step,
        values,
        running_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_rng;
    use crate::stats::mean_and_stderr;

    #[test]
    fn transition_limits() {
        // d -> 0: continuity.
        assert!((ou_transition(1.3, 1e-12, 0.7) - 1.3).abs() < 1e-5);
        // d -> inf with z = 0: reversion to the stationary mean.
        assert!(ou_transition(5.0, 1e4, 0.0).abs() < 1e-12);
    }

    #[test]
    fn transition_conditional_variance() {
        // Var(X_{t+1} | X_t = 0) = 1 - e^{-1}; Monte Carlo at 10^6 draws.
        let mut rng = replica_rng(7, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            let y = ou_transition(0.0, 1.0, z);
            sum += y;
            sumsq += y * y;
        }
        let var = sumsq / n as f64 - (sum / n as f64).powi(2);
        let target = 1.0 - (-1.0f64).exp();
        // SE of a variance estimate ~ sqrt(2/n) * var.
        let se = (2.0 / n as f64).sqrt() * target;
        assert!((var - target).abs() < 3.0 * se, "var {var} target {target}");
    }

    #[test]
    fn determinism() {
        let cfg = OuPathConfig {
            horizon: 5.0,
            step: 0.01,
            seed: 99,
        };
        let a = simulate_path(&cfg).unwrap();
        let b = simulate_path(&cfg).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.running_max, b.running_max);
        assert_eq!(a.values.len(), cfg.grid_len());
    }

    #[test]
    fn running_max_invariants() {
        let cfg = OuPathConfig {
            horizon: 10.0,
            step: 0.05,
            seed: 3,
        };
        let p = simulate_path(&cfg).unwrap();
        for k in 1..p.values.len() {
            assert!(p.running_max[k] >= p.running_max[k - 1]);
            assert_eq!(
                p.running_max[k],
                p.values[..=k].iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            );
        }
        assert_eq!(p.running_sup(0.0).unwrap(), p.values[0]);
        assert_eq!(p.running_sup(10.0).unwrap(), *p.running_max.last().unwrap());
        assert!(p.running_sup(2.0).unwrap() <= p.running_sup(7.0).unwrap());
        assert!(p.running_sup(11.0).is_err());
    }

    #[test]
    fn lag_autocovariance_matches_exponential() {
        // One long path, t = 1e4, step 0.05; lag-k autocovariance ~ e^{-k d/2}.
        let cfg = OuPathConfig {
            horizon: 1e4,
            step: 0.05,
            seed: 11,
        };
        let p = simulate_path(&cfg).unwrap();
        let v = &p.values;
        let n = v.len();
        for lag in [1usize, 5, 20] {
            let m = n - lag;
            let mut acc = 0.0;
            for i in 0..m {
                acc += v[i] * v[i + lag];
            }
            let est = acc / m as f64;
            let target = (-(lag as f64) * cfg.step / 2.0).exp();
            // Effective sample size is reduced by autocorrelation; the
            // integrated autocorrelation time is ~ 2/step grid points.
            let se = ((2.0 / cfg.step) / m as f64).sqrt();
            assert!(
                (est - target).abs() < 3.0 * se,
                "lag {lag}: est {est}, target {target}, se {se}"
            );
        }
    }

    #[test]
    fn stationary_marginal_variance() {
        // Marginal at the final time over many paths.
        let vals: Vec<f64> = (0..4000)
            .map(|i| {
                let cfg = OuPathConfig {
                    horizon: 3.0,
                    step: 0.1,
                    seed: 1000 + i,
                };
                let p = simulate_path(&cfg).unwrap();
                let x = *p.values.last().unwrap();
                x * x
            })
            .collect();
        let (mean, se) = mean_and_stderr(&vals);
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn time_change_matches_direct_simulation() {
        // Marginals: Var(e^{-s/2} B_{e^s}) = 1 for every grid point, and the
        // lag-j autocovariance matches e^{-j d/2}.
        let delta = 0.25;
        let k_max = 40;
        let reps = 4000;
        let mut lag1 = 0.0;
        let mut var_mid = 0.0;
        let mut rng = replica_rng(21, 0);
        for _ in 0..reps {
            let bm = simulate_bm_geometric(delta, k_max, &mut rng);
            let ou = bm_time_change(&bm, delta);
            assert_eq!(ou[0], bm[0]); // k = 0: e^0 = 1
            lag1 += ou[20] * ou[21];
            var_mid += ou[20] * ou[20];
        }
        let lag1 = lag1 / reps as f64;
        let var_mid = var_mid / reps as f64;
        let se = (1.0 / reps as f64).sqrt() * 1.5;
        assert!((var_mid - 1.0).abs() < 3.0 * se, "var {var_mid}");
        assert!(
            (lag1 - (-delta / 2.0f64).exp()).abs() < 3.0 * se,
            "lag1 {lag1}"
        );
    }

    #[test]
    fn dump_round_trip() {
        let cfg = OuPathConfig {
            horizon: 1.0,
            step: 0.1,
            seed: 5,
        };
        let p = simulate_path(&cfg).unwrap();
        let mut buf = Vec::new();
        write_path_dump(&p, &mut buf).unwrap();
        let q = read_path_dump(&buf[..]).unwrap();
        assert_eq!(p.values, q.values);
        assert_eq!(p.step, q.step);
        assert_eq!(p.running_max, q.running_max);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(simulate_path(&OuPathConfig {
            horizon: 1.0,
            step: 0.0,
            seed: 0
        })
        .is_err());
        assert!(simulate_path(&OuPathConfig {
            horizon: 1.0,
            step: 2.0,
            seed: 0
        })
        .is_err());
    }
}
