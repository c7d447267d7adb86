//! Local time at zero, inverse local time, excursion maxima, and the
//! coupled pair (running supremum vs. block maximum) built from one path.
//!
//! Local time is estimated by the one-sided occupation density
//! `l_t = (step/eps) * #{grid points s <= t with 0 < X_s < eps}`, whose
//! normalization matches E[l(t)] = t (2 pi)^{-1/2} without any extra
//! factor. The estimate moves in quanta of step/eps; its generalized
//! inverse counts whole inter-hit gaps from the first band hit (the
//! local-time clock only starts once the path reaches the band), with
//! gap counts rounded at half-quantum midpoints so that integer levels
//! carry no systematic one-quantum overshoot. Anchoring at the first
//! hit matters for moments: the stationary start sits a macroscopic
//! time away from the band, and including that delay would inflate
//! E[tau(1)] well above its limit sqrt(2 pi). Measured from a hit, the
//! inter-hit gaps average 1/rate each, so level u costs u/quantum gaps
//! of mean quantum * sqrt(2 pi). See `inverse_local_time`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ou::{OuPath, OuPathConfig, OuStepper};
use crate::rng::replica_rng;

const SQRT_2PI: f64 = 2.506628274631000502;

/// Band width paired with a grid step: eps ~ 0.632 sqrt(step), which is
/// 0.02 at the default step 1e-3 used by the coupling experiments.
pub fn default_epsilon(step: f64) -> f64 {
    0.632 * step.sqrt()
}

/// Occupation-density estimate of the local time at zero.
#[derive(Debug, Clone)]
pub struct LocalTimeEstimate {
    pub step: f64,
    pub epsilon: f64,
    /// l-hat at each grid time, nondecreasing, starts at 0 or one quantum.
    pub values: Vec<f64>,
}

/// Excursion maxima M_1..M_N with the inverse-local-time boundaries.
#[derive(Debug, Clone)]
pub struct ExcursionMaxima {
    /// M_n = grid max of the path over [tau(n-1), tau(n)].
    pub maxima: Vec<f64>,
    /// tau(0) = first band hit, tau(1), ..., tau(N); strictly increasing.
    pub tau: Vec<f64>,
}

/// One draw of (sup_{0<=s<=t} X_s, max block maximum, mismatch flag).
#[derive(Debug, Clone, Copy)]
pub struct CoupledPair {
    pub sup: f64,
    pub blockmax: f64,
    pub mismatch: bool,
    pub block_count: usize,
}

/// Number of whole inter-hit gaps that take the estimate past `level` in
/// the midpoint sense: the smallest m >= 0 with m * quantum > level -
/// quantum/2. Level 0 needs no gaps (the anchor hit itself), level 1 at
/// the default quantum 0.05 needs 20.
fn gaps_for_level(level: f64, quantum: f64) -> u64 {
    let m = (level / quantum - 0.5 + 1e-9).floor() as i64 + 1;
    m.max(0) as u64
}

pub fn local_time(path: &OuPath, epsilon: f64) -> Result<LocalTimeEstimate> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidConfig(format!("epsilon must be > 0, got {epsilon}")));
    }
    if path.values.is_empty() {
        return Err(Error::InvalidConfig("empty path".into()));
    }
    let quantum = path.step / epsilon;
    let mut acc = 0.0;
    let values = path
        .values
        .iter()
        .map(|&x| {
            if x > 0.0 && x < epsilon {
                acc += quantum;
            }
            acc
        })
        .collect();
    Ok(LocalTimeEstimate {
        step: path.step,
        epsilon,
        values,
    })
}

impl LocalTimeEstimate {
    pub fn quantum(&self) -> f64 {
        self.step / self.epsilon
    }

    /// Grid time of the band hit that closes the `gaps_for_level(level)`-th
    /// inter-hit gap after the anchor hit; level 0 yields the anchor (the
    /// first increment time) itself.
    pub fn inverse(&self, level: f64) -> Result<f64> {
        if !(level >= 0.0) {
            return Err(Error::InvalidConfig(format!("level must be >= 0, got {level}")));
        }
        let hits = gaps_for_level(level, self.quantum()) + 1;
        let threshold = hits as f64 * self.quantum();
        // First index with value >= threshold (values are exact multiples
        // of the quantum up to rounding; compare against a half-quantum
        // margin below the target to be safe).
        let cut = threshold - 0.5 * self.quantum();
        let idx = self.values.partition_point(|&v| v <= cut);
        if idx == self.values.len() {
            return Err(Error::HorizonExhausted {
                needed: level,
                reached: *self.values.last().unwrap(),
            });
        }
        Ok(idx as f64 * self.step)
    }
}

/// Synonym for the generalized inverse, matching the operation name used
/// throughout the experiments.
pub fn inverse_local_time(lt: &LocalTimeEstimate, level: f64) -> Result<f64> {
    lt.inverse(level)
}

pub fn excursion_maxima(
    path: &OuPath,
    lt: &LocalTimeEstimate,
    count: usize,
) -> Result<ExcursionMaxima> {
    if count == 0 {
        return Err(Error::InvalidConfig("count must be >= 1".into()));
    }
    if lt.values.len() != path.values.len() || lt.step != path.step {
        return Err(Error::InvalidConfig("local-time estimate does not match path".into()));
    }
    let mut tau = Vec::with_capacity(count + 1);
    tau.push(lt.inverse(0.0)?);
    for n in 1..=count {
        tau.push(lt.inverse(n as f64)?);
    }
    let mut maxima = Vec::with_capacity(count);
    for n in 1..=count {
        let lo = (tau[n - 1] / path.step).round() as usize;
        let hi = (tau[n] / path.step).round() as usize;
        let m = path.values[lo..=hi]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        maxima.push(m);
    }
    Ok(ExcursionMaxima { maxima, tau })
}

/// Streaming draw of the coupled pair from a fresh path: the running
/// supremum over [0, t] and the maximum of the first
/// floor((2 pi)^{-1/2} t) excursion maxima, both from the same trajectory.
pub fn coupled_pair_sample<R: Rng>(
    step: f64,
    epsilon: f64,
    t: f64,
    horizon: f64,
    rng: R,
) -> Result<CoupledPair> {
    let block_count = (t / SQRT_2PI).floor() as i64;
    if block_count < 1 {
        return Err(Error::InvalidConfig(format!(
            "t = {t} yields block count 0; need t >= sqrt(2 pi)"
        )));
    }
    let block_count = block_count as u64;
    let quantum = step / epsilon;
    let last_t_index = (t / step + 1e-9).floor() as u64;
    let max_index = (horizon / step).ceil() as u64;

    let mut stepper = OuStepper::new(step, rng);
    let mut x = stepper.current();
    let mut sup = f64::NEG_INFINITY;
    let mut blockmax = f64::NEG_INFINITY;
    let mut cur_block_max = x;
    let mut hits: u64 = 0;
    let mut block: u64 = 0;
    let mut needed = gaps_for_level(1.0, quantum) + 1;

    let mut k: u64 = 0;
    loop {
        if k <= last_t_index && x > sup {
            sup = x;
        }
        if x > cur_block_max {
            cur_block_max = x;
        }
        if x > 0.0 && x < epsilon {
            hits += 1;
            if hits == 1 {
                // The block windows start at the anchor hit; drop whatever
                // the path did during the initial approach to the band.
                cur_block_max = x;
            }
            while block < block_count && hits >= needed {
                block += 1;
                if cur_block_max > blockmax {
                    blockmax = cur_block_max;
                }
                cur_block_max = x; // boundary point shared with next block
                needed = gaps_for_level((block + 1) as f64, quantum) + 1;
            }
        }
        if block == block_count && k >= last_t_index {
            return Ok(CoupledPair {
                sup,
                blockmax,
                mismatch: sup != blockmax,
                block_count: block_count as usize,
            });
        }
        if k >= max_index {
            return Err(Error::HorizonExhausted {
                needed: block_count as f64,
                reached: hits as f64 * quantum,
            });
        }
        x = stepper.advance();
        k += 1;
    }
}

/// The coupled pair from a path described by `config`, using the default
/// band width for the config's step.
pub fn coupled_pair(config: &OuPathConfig, t: f64) -> Result<CoupledPair> {
    config.validate()?;
    coupled_pair_sample(
        config.step,
        default_epsilon(config.step),
        t,
        config.horizon,
        replica_rng(config.seed, 0),
    )
}

/// Streaming first passage of the local-time estimate through `level`,
/// without materializing a path: the elapsed time from the anchor hit to
/// the hit closing the last required gap, same conventions as `inverse`.
pub fn tau_hat_streaming<R: Rng>(
    step: f64,
    epsilon: f64,
    level: f64,
    horizon: f64,
    rng: R,
) -> Result<f64> {
    let quantum = step / epsilon;
    let needed = gaps_for_level(level, quantum) + 1;
    let max_index = (horizon / step).ceil() as u64;
    let mut stepper = OuStepper::new(step, rng);
    let mut x = stepper.current();
    let mut hits = 0u64;
    let mut anchor = 0u64;
    for k in 0..=max_index {
        if x > 0.0 && x < epsilon {
            hits += 1;
            if hits == 1 {
                anchor = k;
            }
            if hits >= needed {
                return Ok((k - anchor) as f64 * step);
            }
        }
        x = stepper.advance();
    }
    Err(Error::HorizonExhausted {
        needed: level,
        reached: hits as f64 * quantum,
    })
}

/// sup_{0<=s<=t} |tau(s) - s sqrt(2 pi)| / sqrt(t log t), evaluated at the
/// jump levels of the estimate (where the supremum of the step function
/// is attained).
pub fn tau_deviation(lt: &LocalTimeEstimate, t: f64) -> Result<f64> {
    if *lt.values.last().unwrap() < t {
        return Err(Error::HorizonExhausted {
            needed: t,
            reached: *lt.values.last().unwrap(),
        });
    }
    let quantum = lt.quantum();
    let mut sup = 0.0_f64;
    let mut hit = 0u64;
    let mut anchor = 0usize;
    let mut prev = 0.0;
    for (idx, &v) in lt.values.iter().enumerate() {
        if v > prev {
            hit += 1;
            if hit == 1 {
                anchor = idx;
            }
            // Hit h closes gap h - 1, i.e. level (h - 1) * quantum.
            let level = (hit - 1) as f64 * quantum;
            if level > t {
                break;
            }
            let dev = ((idx - anchor) as f64 * lt.step - level * SQRT_2PI).abs();
            if dev > sup {
                sup = dev;
            }
            prev = v;
        }
    }
    Ok(sup / (t * crate::limits::log_c(t)).sqrt())
}

/// Exact probability that the maximum of n i.i.d. continuous draws differs
/// from the maximum over the first n+m: m/(n+m).
pub fn blockmax_mismatch_exact(n: u64, m: u64) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig("blockmax_mismatch_exact requires n, m >= 1".into()));
    }
    Ok(m as f64 / (n + m) as f64)
}
