//! Extended-target construction and per-scatterer channel coefficients.
//!
//! A target is a rotated rectangular grid of candidate cells; each cell is
//! independently active with probability q, and active cells become point
//! scatterers at the cell centers with the radar-equation channel factor.

use crate::error::{Error, Result};
use crate::steering::tx_steering;
use crate::SPEED_OF_LIGHT;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Rectangular grid of candidate scatterer cells.
#[derive(Debug, Clone)]
pub struct ExtendedTarget {
    pub centroid: [f64; 2],
    /// Extent along the heading axis, meters.
    pub length: f64,
    /// Extent across the heading axis, meters.
    pub width: f64,
    /// Rotation of the long axis from the x axis, radians.
    pub heading: f64,
    pub cell_size: f64,
    pub activation_prob: f64,
    /// Cell-center positions, `(length/cell) * (width/cell)` of them.
    pub cells: Vec<[f64; 2]>,
}

/// One realized point scatterer.
#[derive(Debug, Clone)]
pub struct Scatterer {
    pub position: [f64; 2],
    /// Distance from the transceiver center, meters.
    pub range_ref: f64,
    /// Angle from boresight, radians.
    pub angle_ref: f64,
    /// Round-trip delay `2 r / c`, seconds.
    pub delay: f64,
    /// Doppler shift, Hz (zero for the static targets simulated here).
    pub doppler: f64,
    /// Radar cross section, m².
    pub rcs: f64,
    /// Complex channel factor ε with `|ε|² = σ c² / ((4π)³ f_c² r⁴)` and
    /// phase `-2π f_c τ`.
    pub channel_coeff: Complex64,
}

impl Scatterer {
    /// Scatterer at an explicit position with the radar-equation coefficient.
    pub fn at_position(position: [f64; 2], rcs: f64, carrier_hz: f64) -> Self {
        let range_ref = (position[0] * position[0] + position[1] * position[1]).sqrt();
        let angle_ref = position[1].atan2(position[0]);
        let delay = 2.0 * range_ref / SPEED_OF_LIGHT;
        let amp = (rcs * SPEED_OF_LIGHT * SPEED_OF_LIGHT
            / ((4.0 * PI).powi(3) * carrier_hz * carrier_hz * range_ref.powi(4)))
        .sqrt();
        Scatterer {
            position,
            range_ref,
            angle_ref,
            delay,
            doppler: 0.0,
            rcs,
            channel_coeff: Complex64::from_polar(amp, -2.0 * PI * carrier_hz * delay),
        }
    }
}

fn divides_evenly(extent: f64, cell: f64) -> Option<usize> {
    let n = extent / cell;
    let rounded = n.round();
    if rounded >= 1.0 && (n - rounded).abs() < 1e-9 * n.max(1.0) {
        Some(rounded as usize)
    } else {
        None
    }
}

/// Build the cell grid of an extended target. Length and width must tile
/// exactly by `cell_size`.
pub fn build_target(
    centroid: [f64; 2],
    length: f64,
    width: f64,
    heading: f64,
    cell_size: f64,
    activation_prob: f64,
) -> Result<ExtendedTarget> {
    if cell_size <= 0.0 {
        return Err(Error::contract(format!("cell size must be positive, got {cell_size}")));
    }
    if !(0.0..=1.0).contains(&activation_prob) {
        return Err(Error::contract(format!(
            "activation probability must lie in [0, 1], got {activation_prob}"
        )));
    }
    let (nl, nw) = match (divides_evenly(length, cell_size), divides_evenly(width, cell_size)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::contract(format!(
                "target {length} x {width} m does not tile by {cell_size} m cells"
            )))
        }
    };
    let (sin_h, cos_h) = heading.sin_cos();
    let mut cells = Vec::with_capacity(nl * nw);
    for i in 0..nl {
        let u = -length / 2.0 + (i as f64 + 0.5) * cell_size;
        for j in 0..nw {
            let v = -width / 2.0 + (j as f64 + 0.5) * cell_size;
            cells.push([
                centroid[0] + u * cos_h - v * sin_h,
                centroid[1] + u * sin_h + v * cos_h,
            ]);
        }
    }
    Ok(ExtendedTarget {
        centroid,
        length,
        width,
        heading,
        cell_size,
        activation_prob,
        cells,
    })
}

/// Draw one realization of the target: each cell independently active with
/// probability q. Identical seeds give identical scatterer sets. An empty
/// realization is valid; harnesses resample with an incremented seed.
pub fn sample_scatterers(
    target: &ExtendedTarget,
    rcs: f64,
    carrier_hz: f64,
    seed: u64,
) -> Vec<Scatterer> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    target
        .cells
        .iter()
        .filter(|_| rng.gen::<f64>() < target.activation_prob)
        .map(|&cell| Scatterer::at_position(cell, rcs, carrier_hz))
        .collect()
}

/// Beam-dependent effective gain `h = (a^H(θ) w_t) ε` for unit-norm transmit
/// weights.
pub fn effective_gain(scatterer: &Scatterer, tx_weights: &[Complex64]) -> Result<Complex64> {
    let norm_sqr: f64 = tx_weights.iter().map(|w| w.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-9 {
        return Err(Error::contract(format!(
            "transmit weights must be unit-norm, got ||w||² = {norm_sqr}"
        )));
    }
    let a = tx_steering(scatterer.angle_ref, tx_weights.len());
    let g: Complex64 = a
        .entries
        .iter()
        .zip(tx_weights)
        .map(|(ai, wi)| ai.conj() * wi)
        .sum();
    Ok(g * scatterer.channel_coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tx_notch_angles;

    #[test]
    fn cell_count_table_value() {
        let t = build_target([5.0, 3.0], 2.0, 1.0, 0.3, 0.1, 0.1).unwrap();
        assert_eq!(t.cells.len(), 200);
    }

    #[test]
    fn heading_flip_symmetry() {
        let a = build_target([1.0, 2.0], 0.4, 0.2, 0.0, 0.1, 0.5).unwrap();
        let b = build_target([1.0, 2.0], 0.4, 0.2, PI, 0.1, 0.5).unwrap();
        let mut pa: Vec<_> = a.cells.iter().map(|c| (c[0] * 1e9, c[1] * 1e9)).collect();
        let mut pb: Vec<_> = b.cells.iter().map(|c| (c[0] * 1e9, c[1] * 1e9)).collect();
        let key = |p: &(f64, f64)| ((p.0.round() as i64), (p.1.round() as i64));
        pa.sort_by_key(key);
        pb.sort_by_key(key);
        for (x, y) in pa.iter().zip(&pb) {
            assert!((x.0 - y.0).abs() < 1.0 && (x.1 - y.1).abs() < 1.0);
        }
    }

    #[test]
    fn two_cell_layout() {
        let t = build_target([0.0, 0.0], 0.2, 0.1, 0.0, 0.1, 0.5).unwrap();
        assert_eq!(t.cells.len(), 2);
        assert!((t.cells[0][0] + 0.05).abs() < 1e-12);
        assert!((t.cells[1][0] - 0.05).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_tiling() {
        assert!(build_target([0.0, 0.0], 0.25, 0.1, 0.0, 0.1, 0.5).is_err());
        assert!(build_target([0.0, 0.0], 1.0, 1.0, 0.0, 0.1, 1.5).is_err());
    }

    #[test]
    fn cells_inside_rotated_rectangle() {
        let t = build_target([3.0, -1.0], 2.0, 1.0, 0.7, 0.1, 0.1).unwrap();
        let (s, c) = t.heading.sin_cos();
        for cell in &t.cells {
            let dx = cell[0] - t.centroid[0];
            let dy = cell[1] - t.centroid[1];
            let u = dx * c + dy * s;
            let v = -dx * s + dy * c;
            assert!(u.abs() <= t.length / 2.0 + 1e-12);
            assert!(v.abs() <= t.width / 2.0 + 1e-12);
        }
    }

    #[test]
    fn sampling_degenerate_probabilities() {
        let mut t = build_target([2.0, 0.0], 2.0, 1.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(sample_scatterers(&t, 0.25, 60e9, 1).len(), 200);
        t.activation_prob = 0.0;
        assert!(sample_scatterers(&t, 0.25, 60e9, 1).is_empty());
    }

    #[test]
    fn sampling_binomial_mean() {
        let t = build_target([2.0, 0.0], 2.0, 1.0, 0.0, 0.1, 0.1).unwrap();
        let trials = 10_000u64;
        let total: usize = (0..trials)
            .map(|s| sample_scatterers(&t, 0.25, 60e9, s).len())
            .sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - 20.0).abs() < 1.0, "mean count {mean}");
    }

    #[test]
    fn sampling_reproducible() {
        let t = build_target([2.0, 0.0], 2.0, 1.0, 0.0, 0.1, 0.1).unwrap();
        let a = sample_scatterers(&t, 0.25, 60e9, 42);
        let b = sample_scatterers(&t, 0.25, 60e9, 42);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.position, y.position);
            assert_eq!(x.channel_coeff, y.channel_coeff);
        }
    }

    #[test]
    fn barycenter_inside_rectangle() {
        let t = build_target([5.0, 3.0], 2.0, 1.0, 1.2, 0.1, 0.1).unwrap();
        for seed in 0..50 {
            let sc = sample_scatterers(&t, 0.25, 60e9, seed);
            if sc.is_empty() {
                continue;
            }
            let n = sc.len() as f64;
            let bx = sc.iter().map(|s| s.position[0]).sum::<f64>() / n;
            let by = sc.iter().map(|s| s.position[1]).sum::<f64>() / n;
            let (s, c) = t.heading.sin_cos();
            let u = (bx - t.centroid[0]) * c + (by - t.centroid[1]) * s;
            let v = -(bx - t.centroid[0]) * s + (by - t.centroid[1]) * c;
            assert!(u.abs() <= t.length / 2.0 && v.abs() <= t.width / 2.0);
        }
    }

    #[test]
    fn channel_coefficient_radar_equation() {
        let s = Scatterer::at_position([10.0, 0.0], 0.25, 60e9);
        let expect = 0.25 * 9e16 / ((4.0 * PI).powi(3) * 3.6e21 * 1e4);
        assert!((s.channel_coeff.norm_sqr() - expect).abs() / expect < 1e-12);
        assert!((s.delay - 2.0 * 10.0 / 3e8).abs() / s.delay < 1e-15);
        // phase is -2 pi f_c tau modulo 2 pi
        let want = (-2.0 * PI * 60e9 * s.delay).rem_euclid(2.0 * PI);
        let got = s.channel_coeff.arg().rem_euclid(2.0 * PI);
        assert!((want - got).abs() < 1e-6 || (want - got).abs() > 2.0 * PI - 1e-6);
        // doubling range quarters the amplitude
        let far = Scatterer::at_position([20.0, 0.0], 0.25, 60e9);
        let ratio = s.channel_coeff.norm() / far.channel_coeff.norm();
        assert!((ratio - 4.0).abs() < 1e-9);
    }

    #[test]
    fn effective_gain_matched_and_notched() {
        let n_tx = 32;
        let w = tx_steering(0.2, n_tx).unit_weights();
        let sc = Scatterer::at_position([10.0 * 0.2f64.cos(), 10.0 * 0.2f64.sin()], 0.25, 60e9);
        let h = effective_gain(&sc, &w).unwrap();
        let expect = (n_tx as f64).sqrt() * sc.channel_coeff.norm();
        assert!((h.norm() - expect).abs() / expect < 1e-9);
        // a scatterer at a notch angle sees zero gain
        let notch = tx_notch_angles(n_tx, 0.2)[0];
        let sc = Scatterer::at_position([10.0 * notch.cos(), 10.0 * notch.sin()], 0.25, 60e9);
        let h = effective_gain(&sc, &w).unwrap();
        assert!(h.norm() / sc.channel_coeff.norm() < 1e-12);
        // unnormalized weights rejected
        let bad = tx_steering(0.2, n_tx).entries;
        assert!(effective_gain(&sc, &bad).is_err());
    }

    #[test]
    fn effective_gain_small_array_direct_sum() {
        let w = tx_steering(0.1, 8).unit_weights();
        let sc = Scatterer::at_position([7.0, 2.0], 0.25, 60e9);
        let h = effective_gain(&sc, &w).unwrap();
        let a = tx_steering(sc.angle_ref, 8);
        let direct: Complex64 = a.entries.iter().zip(&w).map(|(ai, wi)| ai.conj() * wi).sum();
        assert!((h - direct * sc.channel_coeff).norm() < 1e-12);
    }
}
