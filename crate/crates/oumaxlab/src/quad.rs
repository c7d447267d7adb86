//! Adaptive Simpson quadrature.

/// Integrate `f` over `[a, b]` to roughly `rel_tol` relative accuracy.
///
/// The absolute budget is seeded from a 64-panel composite estimate so the
/// relative tolerance is meaningful for integrands spanning many orders of
/// magnitude. Each accepted panel returns the Richardson-extrapolated value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Coarse scale estimate.
    let n = 64;
    let h = (b - a) / n as f64;
    let mut scale = 0.0_f64;
    for i in 0..n {
        let x0 = a + i as f64 * h;
        scale += simpson(f, x0, x0 + h).0;
    }
    let eps = (scale.abs() * rel_tol).max(f64::MIN_POSITIVE);
    let (whole, fm) = simpson(f, a, b);
    recurse(f, a, b, f(a), fm, f(b), whole, eps, 60)
}

/// Simpson estimate over [a, b]; returns (estimate, f(midpoint)).
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (f(a) + 4.0 * fm + f(b)), fm)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}
