//! Fresnel integrals, the complex focusing kernel `F(xi)`, and the Dirichlet
//! (periodic sinc) ratio used by every array-factor expression.
//!
//! The Fresnel integrals are
//!
//! ```text
//! C(x) = ∫₀ˣ cos(π t²/2) dt,   S(x) = ∫₀ˣ sin(π t²/2) dt
//! ```
//!
//! evaluated by a piecewise scheme: a power series for |x| ≤ 1.6 and an
//! auxiliary-function expansion beyond (Chebyshev-approximated auxiliary
//! functions up to x = 6, plain asymptotic series further out). Absolute
//! accuracy is better than 1e-12 over the range exercised here; the test
//! suite checks 1e-9 against adaptive quadrature of the defining integrals.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Values of the Fresnel integrals at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    /// C(x), the cosine integral.
    pub c_val: f64,
    /// S(x), the sine integral.
    pub s_val: f64,
}

/// Switch point between the power series and the auxiliary-function branch.
const SERIES_LIMIT: f64 = 1.6;
/// Switch point between Chebyshev-fitted and asymptotic auxiliary functions.
const ASYMPTOTIC_LIMIT: f64 = 6.0;

// Chebyshev coefficients (c0 halved in Clenshaw) for the scaled auxiliary
// functions on w = 1/x², x in [1.6, 6]:
//   fhat(w) = pi x f(x),  ghat(w) = pi² x³ g(x)
// where  C(x) = 1/2 + f sin(pi x²/2) - g cos(pi x²/2)
//        S(x) = 1/2 - f cos(pi x²/2) - g sin(pi x²/2).
// Fit residual < 3e-15 on the interval.
const AUX_W_LO: f64 = 1.0 / 36.0;
const AUX_W_HI: f64 = 1.0 / (1.6 * 1.6);
const AUX_F_CHEB: [f64; 24] = [
    1.97118072558678128,
    -0.0172223462709747672,
    -0.00265353206181124221,
    0.000379441033999609480,
    -0.0000192636239881871492,
    -3.96166069142355167e-6,
    1.41230234945018653e-6,
    -2.42305940107721292e-7,
    1.70737595084295362e-8,
    5.13773942979688169e-9,
    -2.63064097061062704e-9,
    7.01001748442321332e-10,
    -1.21408073588433283e-10,
    5.93009429530260411e-12,
    5.61267060904201952e-12,
    -2.94125626623244588e-12,
    9.45106269052702313e-13,
    -2.21697624771352052e-13,
    3.17640692198882543e-14,
    2.84688279852983250e-15,
    -4.28939538503401843e-15,
    2.01553589874149675e-15,
    -6.88112222366154823e-16,
    1.81470330716324779e-16,
];
const AUX_G_CHEB: [f64; 24] = [
    1.87539304815766346,
    -0.0719938860292651670,
    -0.00839003911344640422,
    0.00225446347572843214,
    -0.000237980662917240230,
    -0.0000105595619864545611,
    0.0000112212421213031579,
    -2.91627787336582901e-6,
    4.28556783177894302e-7,
    9.56101345315924097e-10,
    -2.49925925736507169e-8,
    9.95475688143635005e-9,
    -2.52336152451914150e-9,
    4.03314048007870202e-10,
    4.71954029584589172e-12,
    -3.39355711845860128e-11,
    1.61493272505102933e-11,
    -5.18854238099389425e-12,
    1.23271357831756482e-12,
    -1.71626804274479598e-13,
    -2.47854458307942190e-14,
    3.04322593826603668e-14,
    -1.45114004310493979e-14,
    4.84366904773213505e-15,
];

fn clenshaw(coef: &[f64], w: f64) -> f64 {
    let t = (2.0 * w - AUX_W_LO - AUX_W_HI) / (AUX_W_HI - AUX_W_LO);
    let mut b0 = 0.0;
    let mut b1 = 0.0;
    for &c in coef[1..].iter().rev() {
        let next = 2.0 * t * b0 - b1 + c;
        b1 = b0;
        b0 = next;
    }
    t * b0 - b1 + coef[0] / 2.0
}

fn fresnel_series(x: f64) -> (f64, f64) {
    // C(x) = x Σ (-1)ⁿ φ²ⁿ/((2n)! (4n+1)),  S(x) = x Σ (-1)ⁿ φ²ⁿ⁺¹/((2n+1)! (4n+3)),
    // φ = π x²/2. Converges in < 40 terms for x ≤ 1.6 with no damaging cancellation.
    let phi = PI * x * x / 2.0;
    let phi2 = phi * phi;
    let mut a = 1.0; // φ²ⁿ/(2n)!
    let mut b = phi; // φ²ⁿ⁺¹/(2n+1)!
    let mut c = 0.0;
    let mut s = 0.0;
    let mut sign = 1.0;
    for n in 0..48u32 {
        let dc = sign * a / (4 * n + 1) as f64;
        let ds = sign * b / (4 * n + 3) as f64;
        c += dc;
        s += ds;
        if dc.abs() < 1e-18 && ds.abs() < 1e-18 {
            break;
        }
        let k = (2 * n) as f64;
        a *= phi2 / ((k + 1.0) * (k + 2.0));
        b *= phi2 / ((k + 2.0) * (k + 3.0));
        sign = -sign;
    }
    (x * c, x * s)
}

/// Auxiliary functions f(x), g(x) for x ≥ 1.6.
fn fresnel_aux(x: f64) -> (f64, f64) {
    if x <= ASYMPTOTIC_LIMIT {
        let w = 1.0 / (x * x);
        (
            clenshaw(&AUX_F_CHEB, w) / (PI * x),
            clenshaw(&AUX_G_CHEB, w) / (PI * PI * x * x * x),
        )
    } else {
        // f ~ (1/πx) Σ (-1)ᵏ (4k-1)!!/(πx²)²ᵏ,  g ~ (1/π²x³) Σ (-1)ᵏ (4k+1)!!/(πx²)²ᵏ
        let z = PI * x * x;
        let z2 = z * z;
        let mut tf = 1.0;
        let mut tg = 1.0;
        let mut f = 1.0;
        let mut g = 1.0;
        let mut sign = -1.0;
        for k in 0..12u32 {
            let k4 = (4 * k) as f64;
            let next_f = tf * (k4 + 1.0) * (k4 + 3.0) / z2;
            let next_g = tg * (k4 + 3.0) * (k4 + 5.0) / z2;
            if next_f >= tf || next_f < 1e-17 {
                f += sign * next_f * 0.5; // midpoint of the divergent tail
                g += sign * next_g * 0.5;
                break;
            }
            tf = next_f;
            tg = next_g;
            f += sign * tf;
            g += sign * tg;
            sign = -sign;
        }
        (f / (PI * x), g / (PI * PI * x * x * x))
    }
}

/// Fresnel integrals C(x) and S(x).
///
/// Odd in x; both tend to 1/2 as x → ∞. Non-finite input is a domain error.
pub fn fresnel(xi: f64) -> Result<FresnelPair> {
    if !xi.is_finite() {
        return Err(Error::domain(format!("fresnel: non-finite input {xi}")));
    }
    let x = xi.abs();
    let (c, s) = if x <= SERIES_LIMIT {
        fresnel_series(x)
    } else {
        let (f, g) = fresnel_aux(x);
        let phi = PI * x * x / 2.0;
        let (sin_phi, cos_phi) = phi.sin_cos();
        (
            0.5 + f * sin_phi - g * cos_phi,
            0.5 - f * cos_phi - g * sin_phi,
        )
    };
    let sign = if xi < 0.0 { -1.0 } else { 1.0 };
    Ok(FresnelPair {
        c_val: sign * c,
        s_val: sign * s,
    })
}

/// Complex focusing kernel `F(xi) = (C(xi) + j S(xi)) / xi` with `F(0) = 1`.
///
/// The argument is the composite focusing parameter, defined with an absolute
/// value, so negative input is a domain error.
pub fn fresnel_f(xi: f64) -> Result<Complex64> {
    if !xi.is_finite() {
        return Err(Error::domain(format!("fresnel_f: non-finite input {xi}")));
    }
    if xi < 0.0 {
        return Err(Error::domain(format!("fresnel_f: negative input {xi}")));
    }
    if xi == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pair = fresnel(xi)?;
    Ok(Complex64::new(pair.c_val / xi, pair.s_val / xi))
}

/// Threshold below which the Dirichlet ratio switches to its Taylor branch.
const DIRICHLET_TAYLOR_EPS: f64 = 1e-8;

/// Dirichlet ratio `sin(n u) / (n sin u)` with removable singularities at
/// `u = k π` resolved to ±1 by continuity.
///
/// `|dirichlet_ratio(u, n)| ≤ 1` for all real u, with equality exactly at the
/// singular points. NaN input propagates.
pub fn dirichlet_ratio(u: f64, n: u32) -> f64 {
    debug_assert!(n >= 1);
    let nf = n as f64;
    let k = (u / PI).round();
    let delta = u - k * PI;
    // sin(n u) = (-1)^{n k} sin(n δ), sin(u) = (-1)^k sin(δ)
    let sign = if (k as i64 & 1) == 1 && (n - 1) % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    if delta.abs() < DIRICHLET_TAYLOR_EPS {
        sign * (1.0 - (nf * nf - 1.0) * delta * delta / 6.0)
    } else {
        sign * (nf * delta).sin() / (nf * delta.sin())
    }
}
