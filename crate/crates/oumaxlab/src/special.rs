//! Exact law of the excursion maximum.
//!
//! The maximum of one unit-local-time excursion block of the stationary OU
//! process has the explicit distribution
//!
//! ```text
//! F(x) = exp(-1 / (2 G(x))),   G(x) = int_0^x exp(y^2/2) dy,   x > 0,
//! ```
//!
//! with `F(x) = 0` for `x <= 0`. This module evaluates `G`, `F`, the
//! survival function, the quantile, exact block-maximum sampling through
//! the quantile, and the tail ratio `(1-F(x)) * 2 e^{x^2/2} / x` which
//! tends to 1.

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// x beyond which exp(x^2/2) leaves the f64 range (x^2/2 > ~709.7).
pub const OVERFLOW_X: f64 = 37.5;

/// Configuration for evaluating the excursion-maximum law.
#[derive(Debug, Clone, Copy)]
pub struct ExcursionLaw {
    /// Relative tolerance for quadrature cross-checks of the growth integral.
    pub quad_tol: f64,
    /// Absolute tolerance on |F(result) - u| for the quantile solver.
    pub newton_tol: f64,
    /// Iteration cap for the quantile solver.
    pub max_iter: usize,
}

impl Default for ExcursionLaw {
    fn default() -> Self {
        Self {
            quad_tol: 1e-13,
            newton_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Power series for G(x) = sum_k x^{2k+1} / ((2k+1) 2^k k!).
///
/// All terms are positive, so there is no cancellation anywhere on the
/// representable domain; this is the primary evaluation route.
pub fn growth_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0u32;
    loop {
        let kf = k as f64;
        term *= x2 * (2.0 * kf + 1.0) / (2.0 * (kf + 1.0) * (2.0 * kf + 3.0));
        sum += term;
        k += 1;
        if term <= sum * 1e-17 || k > 4000 {
            break;
        }
    }
    sum
}

/// Adaptive-quadrature route for G; independent cross-check of the series.
pub fn growth_quadrature(x: f64, rel_tol: f64) -> f64 {
    adaptive_simpson(&|y: f64| (0.5 * y * y).exp(), 0.0, x, rel_tol)
}

/// Large-x expansion G(x) ~ e^{x^2/2}/x (1 + x^-2 + 3 x^-4).
pub fn growth_asymptotic(x: f64) -> f64 {
    let ix2 = 1.0 / (x * x);
    ((0.5 * x * x).exp() / x) * (1.0 + ix2 + 3.0 * ix2 * ix2)
}

impl ExcursionLaw {
    /// G(x) = int_0^x exp(y^2/2) dy for x >= 0.
    pub fn growth_integral(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "growth_integral requires finite x >= 0, got {x}"
            )));
        }
        if x > OVERFLOW_X {
            return Err(Error::Overflow { x });
        }
        Ok(growth_series(x))
    }

    /// F(x) = exp(-1/(2 G(x))) for x > 0, and 0 for x <= 0.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::InvalidConfig("cdf of NaN".into()));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        let g = self.growth_integral(x)?;
        Ok((-1.0 / (2.0 * g)).exp())
    }

    /// Survival function 1 - F(x), computed as -expm1(-1/(2G)) so the
    /// far tail keeps its significant digits.
    pub fn sf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::InvalidConfig("sf of NaN".into()));
        }
        if x <= 0.0 {
            return Ok(1.0);
        }
        let g = self.growth_integral(x)?;
        Ok(-(-1.0 / (2.0 * g)).exp_m1())
    }

    /// Unique x > 0 with F(x) = u, via bracketed Newton on G(x) = -1/(2 ln u)
    /// with analytic derivative exp(x^2/2), falling back to bisection
    /// whenever a Newton step leaves the bracket.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "quantile requires 0 < u < 1, got {u}"
            )));
        }
        let target = -1.0 / (2.0 * u.ln());
        // Doubling bracket: G is strictly increasing from 0.
        let mut lo = 0.0_f64;
        let mut hi = 0.5_f64;
        while self.growth_integral(hi)? < target {
            lo = hi;
            hi *= 2.0;
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..self.max_iter {
            let g = self.growth_integral(x)?;
            if (-1.0 / (2.0 * g)).exp() - u == 0.0
                || ((-1.0 / (2.0 * g)).exp() - u).abs() <= self.newton_tol
            {
                return Ok(x);
            }
            if g > target {
                hi = x;
            } else {
                lo = x;
            }
            let step = (g - target) / (0.5 * x * x).exp();
            let candidate = x - step;
            x = if candidate > lo && candidate < hi {
                candidate
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::IterationCap {
            max_iter: self.max_iter,
        })
    }

    /// Exact sample of max_{1<=j<=n} M_j when `u` is uniform on (0,1):
    /// the quantile of F^n evaluated at u, i.e. quantile(u^{1/n}).
    /// The root u^{1/n} is taken as exp(ln(u)/n) so it survives large n.
    pub fn max_quantile_exact(&self, n: u64, u: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidConfig("max_quantile_exact requires n >= 1".into()));
        }
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max_quantile_exact requires 0 < u < 1, got {u}"
            )));
        }
        self.quantile((u.ln() / n as f64).exp())
    }

    /// (1 - F(x)) * 2 e^{x^2/2} / x, which is 1 + O(x^-2) as x grows.
    pub fn tail_ratio(&self, x: f64) -> Result<f64> {
        if !(x >= 3.0) {
            return Err(Error::InvalidConfig(format!(
                "tail_ratio requires x >= 3, got {x}"
            )));
        }
        if x > OVERFLOW_X {
            return Err(Error::Overflow { x });
        }
        let sf = self.sf(x)?;
        Ok(sf * 2.0 * (0.5 * x * x).exp() / x)
    }
}
