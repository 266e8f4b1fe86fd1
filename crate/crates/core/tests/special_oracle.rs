//! Quadrature-oracle validation of the special-function kernels: the
//! implementation must track adaptive quadrature of the defining integrals to
//! 1e-9 absolute everywhere, including across its internal branch switches.

mod common;

use common::{assert_close, fresnel_by_quadrature, quad};
use nfis::special::{fresnel, fresnel_f};
use std::f64::consts::PI;

#[test]
fn fresnel_tracks_quadrature_to_1e9() {
    let mut xs: Vec<f64> = Vec::new();
    let mut x = 0.05;
    while x <= 10.0 {
        xs.push(x);
        x += 0.35; // lands on neither branch boundary
    }
    // straddle the branch switches explicitly
    xs.extend_from_slice(&[1.59, 1.6, 1.61, 5.95, 6.0, 6.05, 1.0, 2.5]);
    for &x in &xs {
        let (cq, sq) = fresnel_by_quadrature(x);
        let p = fresnel(x).unwrap();
        assert_close(p.c_val, cq, 1e-9, &format!("C({x}) vs quadrature"));
        assert_close(p.s_val, sq, 1e-9, &format!("S({x}) vs quadrature"));
        let m = fresnel(-x).unwrap();
        assert_close(m.c_val, -cq, 1e-9, &format!("C(-{x}) odd symmetry"));
        assert_close(m.s_val, -sq, 1e-9, &format!("S(-{x}) odd symmetry"));
    }
}

#[test]
fn fresnel_f_examples_from_quadrature() {
    // unity at zero
    assert_eq!(fresnel_f(0.0).unwrap(), num_complex::Complex64::new(1.0, 0.0));
    // F(2.5) against the quadrature pair divided by the argument
    let (cq, sq) = fresnel_by_quadrature(2.5);
    let f = fresnel_f(2.5).unwrap();
    assert_close(f.re, cq / 2.5, 1e-9, "Re F(2.5)");
    assert_close(f.im, sq / 2.5, 1e-9, "Im F(2.5)");
    // frozen values from the quadrature oracle at x = 1
    let (cq, sq) = fresnel_by_quadrature(1.0);
    assert_close(cq, 0.7798934003768228, 1e-11, "oracle self-check C(1)");
    assert_close(sq, 0.4382591473903548, 1e-11, "oracle self-check S(1)");
    let p = fresnel(1.0).unwrap();
    assert_close(p.c_val, 0.7798934003768228, 1e-9, "C(1)");
    assert_close(p.s_val, 0.4382591473903548, 1e-9, "S(1)");
}

#[test]
fn quadrature_oracle_sanity() {
    // the oracle itself must integrate simple functions correctly
    assert_close(quad(&|t| t * t, 0.0, 3.0, 1e-13), 9.0, 1e-11, "∫t²");
    assert_close(quad(&|t| t.sin(), 0.0, PI, 1e-13), 2.0, 1e-11, "∫sin");
}
