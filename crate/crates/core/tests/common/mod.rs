#![allow(dead_code)]

//! Shared oracles for the integration tests. These stay independent of the
//! implementation paths they check: quadrature of the defining integrals,
//! plain element sums, exhaustive assignment search.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Adaptive Simpson quadrature.
pub fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Fresnel integrals by quadrature of their definitions.
pub fn fresnel_by_quadrature(x: f64) -> (f64, f64) {
    let c = quad(&|t: f64| (PI * t * t / 2.0).cos(), 0.0, x, 1e-13);
    let s = quad(&|t: f64| (PI * t * t / 2.0).sin(), 0.0, x, 1e-13);
    (c, s)
}

/// N-term quadratic-phase sum defining the range-domain receive array factor.
pub fn rx_range_direct_sum(
    obs_range: f64,
    focus_range: f64,
    steer_angle: f64,
    n_rx: usize,
    d_rx: f64,
    wavelength: f64,
) -> Complex64 {
    let cos_t = steer_angle.cos();
    let coeff = PI / wavelength * cos_t * cos_t * (1.0 / obs_range - 1.0 / focus_range);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..n_rx {
        let off = (n as f64 - (n_rx as f64 - 1.0) / 2.0) * d_rx;
        acc += Complex64::from_polar(1.0, -coeff * off * off);
    }
    acc / n_rx as f64
}

/// Exhaustive gated-assignment GOSPA (alpha = 2), independent of the library.
pub fn gospa_exhaustive_oracle(
    truth: &[[f64; 2]],
    estimates: &[[f64; 2]],
    gate: f64,
    order: f64,
) -> (f64, usize, usize) {
    fn walk(
        truth: &[[f64; 2]],
        est: &[[f64; 2]],
        gate_p: f64,
        pen: f64,
        order: f64,
        i: usize,
        acc: f64,
        matched: usize,
        used: &mut Vec<bool>,
        best: &mut (f64, usize),
    ) {
        if i == truth.len() {
            let total = acc + pen * ((truth.len() - matched) + (est.len() - matched)) as f64;
            if total < best.0 {
                *best = (total, matched);
            }
            return;
        }
        walk(truth, est, gate_p, pen, order, i + 1, acc, matched, used, best);
        for j in 0..est.len() {
            if !used[j] {
                let d = ((truth[i][0] - est[j][0]).powi(2) + (truth[i][1] - est[j][1]).powi(2))
                    .sqrt()
                    .powf(order);
                if d <= gate_p {
                    used[j] = true;
                    walk(truth, est, gate_p, pen, order, i + 1, acc + d, matched + 1, used, best);
                    used[j] = false;
                }
            }
        }
    }
    let mut best = (f64::INFINITY, 0usize);
    let mut used = vec![false; estimates.len()];
    walk(
        truth,
        estimates,
        gate.powf(order),
        gate.powf(order) / 2.0,
        order,
        0,
        0.0,
        0,
        &mut used,
        &mut best,
    );
    (
        best.0.powf(1.0 / order),
        truth.len() - best.1,
        estimates.len() - best.1,
    )
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (|diff| = {:.3e}, tol {tol:.3e})",
        (got - want).abs()
    );
}
