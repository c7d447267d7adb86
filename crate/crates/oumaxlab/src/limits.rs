//! Darling-Erdos normalizations and the two closed-form limit laws.
//!
//! Everywhere in this crate `log x` is shorthand for `ln(max(x, e))`,
//! applied independently at every nesting level. That convention makes
//! all iterated logarithms total on the reals: `log log 1 = 1`, never
//! -inf, and `a(x) >= sqrt(2)`, `b(x) >= 2.5` for every finite x.

/// ln(x v e): the clamped logarithm used by every iterated-log formula.
pub fn log_c(x: f64) -> f64 {
    x.max(std::f64::consts::E).ln()
}

/// a(x) = (2 log log x)^{1/2}.
pub fn norm_a(x: f64) -> f64 {
    (2.0 * log_c(log_c(x))).sqrt()
}

/// b(x) = 2 log log x + (1/2) log log log x.
pub fn norm_b(x: f64) -> f64 {
    let ll = log_c(log_c(x));
    2.0 * ll + 0.5 * log_c(ll)
}

/// a(e^t) without materializing e^t (which overflows past t ~ 709):
/// log(e^t v e) = max(t, 1), so a(e^t) = (2 log max(t,1))^{1/2}.
pub fn norm_a_at_exp(t: f64) -> f64 {
    (2.0 * log_c(t.max(1.0))).sqrt()
}

/// b(e^t) under the same rewriting.
pub fn norm_b_at_exp(t: f64) -> f64 {
    let ll = log_c(t.max(1.0));
    2.0 * ll + 0.5 * log_c(ll)
}

/// Limit CDF of a(n) U_n - b(n): exp(-e^{-x} / sqrt(4 pi)).
pub fn de_limit_cdf(x: f64) -> f64 {
    (-(-x).exp() / (4.0 * std::f64::consts::PI).sqrt()).exp()
}

/// Limit CDF of the normalized block maximum: exp(-e^{-x/2} / sqrt(2)).
pub fn blockmax_limit_cdf(x: f64) -> f64 {
    (-(-0.5 * x).exp() / std::f64::consts::SQRT_2).exp()
}

/// Invert the block-max threshold: the x for which `maxval` equals
/// (2 log n + log log n + x)^{1/2}, i.e. maxval^2 - 2 log n - log log n.
pub fn blockmax_statistic(maxval: f64, n: u64) -> f64 {
    let nf = n as f64;
    maxval * maxval - 2.0 * log_c(nf) - log_c(log_c(nf))
}

/// The running-supremum statistic
/// X(t) = a(e^t) sup - b(e^t) + log(4 pi)/2.
pub fn script_x(sup_val: f64, t: f64) -> f64 {
    norm_a_at_exp(t) * sup_val - norm_b_at_exp(t) + 0.5 * (4.0 * std::f64::consts::PI).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn normalizations_at_small_arguments() {
        let ee = E.powf(E); // e^e
        assert!((norm_a(ee) - 2f64.sqrt()).abs() < 1e-12);
        assert!((norm_b(ee) - 2.5).abs() < 1e-12);
        // Convention clamps every inner log at 1.
        assert!((norm_a(1.0) - 2f64.sqrt()).abs() < 1e-12);
        assert!((norm_a(-5.0) - 2f64.sqrt()).abs() < 1e-12);
        assert!((norm_b(0.0) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn exp_argument_forms_match() {
        for t in [0.1, 1.0, 2.5, 50.0, 600.0] {
            assert!((norm_a_at_exp(t) - norm_a(t.exp())).abs() < 1e-12);
            assert!((norm_b_at_exp(t) - norm_b(t.exp())).abs() < 1e-12);
        }
        // And past the overflow point of e^t the rewritten form stays finite.
        assert!(norm_a_at_exp(1e6).is_finite());
    }

    #[test]
    fn de_limit_values() {
        assert!((de_limit_cdf(0.0) - (-1.0 / (4.0 * PI).sqrt()).exp()).abs() < 1e-15);
        assert!((de_limit_cdf(0.0) - 0.7542).abs() < 1e-4);
        // e^{-x} = sqrt(4 pi) at x = -ln sqrt(4 pi), where the CDF is 1/e.
        let x = -(4.0 * PI).sqrt().ln();
        assert!((de_limit_cdf(x) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(de_limit_cdf(40.0) > 1.0 - 1e-15);
        assert!(de_limit_cdf(-40.0) < 1e-15);
    }

    #[test]
    fn blockmax_limit_values() {
        assert!((blockmax_limit_cdf(0.0) - (-1.0 / 2f64.sqrt()).exp()).abs() < 1e-15);
        assert!((blockmax_limit_cdf(0.0) - 0.49307).abs() < 1e-5);
        assert!(blockmax_limit_cdf(80.0) > 1.0 - 1e-15);
    }

    #[test]
    fn limit_cdfs_are_distribution_functions() {
        let mut prev_de = 0.0;
        let mut prev_bm = 0.0;
        let mut x = -30.0;
        while x <= 30.0 {
            let de = de_limit_cdf(x);
            let bm = blockmax_limit_cdf(x);
            assert!((0.0..=1.0).contains(&de) && de >= prev_de);
            assert!((0.0..=1.0).contains(&bm) && bm >= prev_bm);
            prev_de = de;
            prev_bm = bm;
            x += 0.01;
        }
    }

    #[test]
    fn blockmax_statistic_inverts_threshold() {
        for n in [3u64, 100, 10_000, 100_000_000] {
            let nf = n as f64;
            let threshold = (2.0 * log_c(nf) + log_c(log_c(nf))).sqrt();
            assert!(blockmax_statistic(threshold, n).abs() < 1e-9);
        }
        // Increasing in maxval at fixed n.
        assert!(blockmax_statistic(3.0, 1000) < blockmax_statistic(3.1, 1000));
    }

    #[test]
    fn script_x_at_t_e() {
        // t = e, sup = 0: -b(e^e) + ln(4 pi)/2.
        let expected = -2.5 + 0.5 * (4.0 * PI).ln();
        assert!((script_x(0.0, E) - expected).abs() < 1e-12);
        assert!(script_x(1.0, 10.0) > script_x(0.5, 10.0));
    }
}
