//! Array construction and every derived near-field scale: Fraunhofer distance,
//! maximum focusing distance, depth of focus, super-resolution radius, and the
//! spatial range-resolution map.
//!
//! Both arrays are ULAs along the y axis, centered at the origin; boresight is
//! the +x axis and angles are measured from it (`θ = atan2(y, x)`).

use crate::error::{Error, Result};
use crate::export::fmt_sig;
use crate::special::fresnel_f;
use crate::SPEED_OF_LIGHT;
use std::io::Write;
use std::sync::OnceLock;

/// Inter-element spacing rule of a transceiver pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingMode {
    /// `d_tx = λ/2`, `d_rx = N_t λ/2`: sparse receive aperture whose grating
    /// lobes land exactly on the transmit notches.
    Elas,
    /// Conventional `λ/2` at both ends (far-field baseline).
    HalfWavelength,
}

impl SpacingMode {
    pub fn label(&self) -> &'static str {
        match self {
            SpacingMode::Elas => "elas",
            SpacingMode::HalfWavelength => "half_wavelength",
        }
    }
}

/// Immutable transceiver geometry.
#[derive(Debug, Clone)]
pub struct ArrayGeometry {
    pub n_tx: usize,
    pub n_rx: usize,
    /// Tx inter-element spacing in meters.
    pub d_tx: f64,
    /// Rx inter-element spacing in meters.
    pub d_rx: f64,
    pub wavelength: f64,
    /// Rx element positions `[x, y]` in meters, symmetric about the origin.
    pub rx_positions: Vec<[f64; 2]>,
    /// `(n_tx - 1) d_tx`
    pub aperture_tx: f64,
    /// `(n_rx - 1) d_rx`
    pub aperture_rx: f64,
    pub spacing_mode: SpacingMode,
}

impl ArrayGeometry {
    /// ELAS geometry: `d_tx = λ/2`, `d_rx = n_tx λ/2`.
    pub fn elas(n_tx: usize, n_rx: usize, carrier_hz: f64) -> Result<Self> {
        let wavelength = wavelength_checked(carrier_hz)?;
        Self::build(
            n_tx,
            n_rx,
            wavelength,
            wavelength / 2.0,
            n_tx as f64 * wavelength / 2.0,
            SpacingMode::Elas,
        )
    }

    /// Half-wavelength ULAs at both ends.
    pub fn half_wavelength(n_tx: usize, n_rx: usize, carrier_hz: f64) -> Result<Self> {
        let wavelength = wavelength_checked(carrier_hz)?;
        Self::build(
            n_tx,
            n_rx,
            wavelength,
            wavelength / 2.0,
            wavelength / 2.0,
            SpacingMode::HalfWavelength,
        )
    }

    pub fn with_mode(
        mode: SpacingMode,
        n_tx: usize,
        n_rx: usize,
        carrier_hz: f64,
    ) -> Result<Self> {
        match mode {
            SpacingMode::Elas => Self::elas(n_tx, n_rx, carrier_hz),
            SpacingMode::HalfWavelength => Self::half_wavelength(n_tx, n_rx, carrier_hz),
        }
    }

    fn build(
        n_tx: usize,
        n_rx: usize,
        wavelength: f64,
        d_tx: f64,
        d_rx: f64,
        spacing_mode: SpacingMode,
    ) -> Result<Self> {
        if n_tx < 2 || n_rx < 2 {
            return Err(Error::contract(format!(
                "array needs at least 2 elements per side, got n_tx={n_tx}, n_rx={n_rx}"
            )));
        }
        let rx_positions = (0..n_rx)
            .map(|n| [0.0, element_offset(n, n_rx) * d_rx])
            .collect();
        Ok(ArrayGeometry {
            n_tx,
            n_rx,
            d_tx,
            d_rx,
            wavelength,
            rx_positions,
            aperture_tx: (n_tx as f64 - 1.0) * d_tx,
            aperture_rx: (n_rx as f64 - 1.0) * d_rx,
            spacing_mode,
        })
    }

    /// Signed y offset `ñ d_rx` of the n-th receive element (0-based).
    pub fn rx_offset(&self, n: usize) -> f64 {
        element_offset(n, self.n_rx) * self.d_rx
    }

    pub fn rx_offsets(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_rx).map(|n| self.rx_offset(n))
    }
}

/// Symmetric element index `ñ = (2n - N + 1)/2` for 0-based `n`.
fn element_offset(n: usize, count: usize) -> f64 {
    n as f64 - (count as f64 - 1.0) / 2.0
}

fn wavelength_checked(carrier_hz: f64) -> Result<f64> {
    if carrier_hz <= 0.0 || !carrier_hz.is_finite() {
        return Err(Error::domain(format!("carrier must be positive, got {carrier_hz}")));
    }
    Ok(SPEED_OF_LIGHT / carrier_hz)
}

/// Conventional near/far-field boundary `2 D²/λ`.
pub fn fraunhofer_distance(aperture: f64, wavelength: f64) -> Result<f64> {
    if aperture <= 0.0 || wavelength <= 0.0 {
        return Err(Error::domain(format!(
            "fraunhofer_distance needs positive inputs, got D={aperture}, lambda={wavelength}"
        )));
    }
    Ok(2.0 * aperture * aperture / wavelength)
}

/// Nominal literature value of the half-power point of `|F(Ξ)|²`.
pub const XI_3DB_NOMINAL: f64 = 1.318;

/// Root of `|F(Ξ)|² = 1/2`, solved once by bisection.
pub fn solve_xi_3db() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        let f = |x: f64| fresnel_f(x).expect("finite").norm_sqr() - 0.5;
        let (mut lo, mut hi) = (1.0, 1.6);
        debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Maximum focusing distance `N_r² d_r² cos²(θ̄) / (2 λ Ξ²)` for a steering
/// angle `θ̄` (the effective near-field boundary of the receive array).
pub fn max_focus_distance(geom: &ArrayGeometry, steer_angle: f64, xi_3db: f64) -> f64 {
    debug_assert!(steer_angle.abs() < std::f64::consts::FRAC_PI_2);
    let nr = geom.n_rx as f64;
    let c = steer_angle.cos();
    nr * nr * geom.d_rx * geom.d_rx * c * c / (2.0 * geom.wavelength * xi_3db * xi_3db)
}

/// Depth of focus around `focus_range`; infinite once the focus point leaves
/// the effective near field (focusing degenerates to steering).
pub fn depth_of_focus(focus_range: f64, max_focus: f64) -> f64 {
    debug_assert!(focus_range > 0.0);
    if focus_range >= max_focus {
        f64::INFINITY
    } else {
        2.0 * focus_range * focus_range * max_focus / (max_focus * max_focus - focus_range * focus_range)
    }
}

/// Radius of the super-resolution region, `sqrt(r_DF² / (4 B r_DF / c + 1))`.
pub fn super_resolution_radius(bandwidth: f64, max_focus: f64) -> f64 {
    debug_assert!(bandwidth > 0.0 && max_focus > 0.0);
    (max_focus * max_focus / (4.0 * bandwidth * max_focus / SPEED_OF_LIGHT + 1.0)).sqrt()
}

/// Overall range resolution at a focusing distance: the depth of focus inside
/// the super-resolution region, the bandwidth limit `c/2B` outside.
pub fn range_resolution(focus_range: f64, bandwidth: f64, max_focus: f64) -> f64 {
    debug_assert!(focus_range > 0.0);
    let r_sr = super_resolution_radius(bandwidth, max_focus);
    if focus_range < r_sr {
        depth_of_focus(focus_range, max_focus)
    } else {
        SPEED_OF_LIGHT / (2.0 * bandwidth)
    }
}

/// Derived near-field scales of a receive geometry (broadside steering).
#[derive(Debug, Clone)]
pub struct NearFieldScales {
    /// `2 D_r²/λ`
    pub fraunhofer_rx: f64,
    /// Maximum focusing distance at broadside, exact `N_r²` form.
    pub max_focus: f64,
    /// Solved root of `|F(Ξ)|² = 1/2` (compare [`XI_3DB_NOMINAL`]).
    pub xi_3db: f64,
}

impl NearFieldScales {
    pub fn for_geometry(geom: &ArrayGeometry) -> Result<Self> {
        let xi = solve_xi_3db();
        Ok(NearFieldScales {
            fraunhofer_rx: fraunhofer_distance(geom.aperture_rx, geom.wavelength)?,
            max_focus: max_focus_distance(geom, 0.0, xi),
            xi_3db: xi,
        })
    }

    /// Large-`N_r` form of the maximum focusing distance, `D_F^rx / (4 Ξ²)`.
    pub fn max_focus_large_n(&self) -> f64 {
        self.fraunhofer_rx / (4.0 * self.xi_3db * self.xi_3db)
    }

    pub fn super_resolution_radius(&self, bandwidth: f64) -> f64 {
        super_resolution_radius(bandwidth, self.max_focus)
    }

    pub fn range_resolution(&self, focus_range: f64, bandwidth: f64) -> f64 {
        range_resolution(focus_range, bandwidth, self.max_focus)
    }
}

/// Euclidean distance between a field point and an element position.
pub fn exact_distance(point: [f64; 2], element: [f64; 2]) -> f64 {
    let dx = point[0] - element[0];
    let dy = point[1] - element[1];
    (dx * dx + dy * dy).sqrt()
}

/// Second-order (Fresnel) expansion of the element distance:
/// `r - ñ d sin θ + (ñ d cos θ)² / (2 r)` with `element_offset = ñ d`.
pub fn fresnel_distance(range: f64, angle: f64, element_offset: f64) -> f64 {
    debug_assert!(range > 0.0);
    let (sin_t, cos_t) = angle.sin_cos();
    let t = element_offset * cos_t;
    range - element_offset * sin_t + t * t / (2.0 * range)
}

/// Transmit-pattern notch angles `arcsin(2i/N_t + sin θ̄)` for all valid i ≠ 0.
pub fn tx_notch_angles(n_tx: usize, steer_angle: f64) -> Vec<f64> {
    lattice_angles(n_tx, steer_angle)
}

/// Receive grating-lobe angles of the ELAS spacing; coincide with the Tx
/// notches by construction.
pub fn rx_grating_lobe_angles(n_tx: usize, steer_angle: f64) -> Vec<f64> {
    lattice_angles(n_tx, steer_angle)
}

fn lattice_angles(n_tx: usize, steer_angle: f64) -> Vec<f64> {
    let s = steer_angle.sin();
    let mut out = Vec::new();
    let mut i: i64 = 1;
    loop {
        let mut hit = false;
        for sgn in [1.0f64, -1.0] {
            let arg = 2.0 * sgn * i as f64 / n_tx as f64 + s;
            if arg.abs() <= 1.0 {
                out.push(arg.asin());
                hit = true;
            }
        }
        if !hit {
            break;
        }
        i += 1;
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::domain("degenerate region".to_string()));
        }
        Ok(Region { x_min, x_max, y_min, y_max })
    }
}

/// Whether the per-cell resolution uses the cell's own steering angle or a
/// broadside-fixed maximum focusing distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSteering {
    PerCell,
    Broadside,
}

/// Range-resolution values over a rectangular region, evaluated at cell
/// centers; `values` is row-major with x varying fastest.
#[derive(Debug, Clone)]
pub struct ResolutionMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub bandwidth: f64,
}

impl ResolutionMap {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// CSV export: header `x_m,y_m,delta_r_m`, 6 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x_m,y_m,delta_r_m")?;
        for (iy, &y) in self.ys.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_sig(x, 6),
                    fmt_sig(y, 6),
                    fmt_sig(self.value(ix, iy), 6)
                )?;
            }
        }
        Ok(())
    }
}

/// Evaluate the range resolution over `region` at cell centers of size `step`.
///
/// Each cell is evaluated at `r = hypot(x, y)` with the steering angle
/// `atan2(y, x)` feeding the cos² dependence of the maximum focusing distance
/// (unless `MapSteering::Broadside` pins it to θ̄ = 0).
pub fn range_resolution_map(
    geom: &ArrayGeometry,
    bandwidth: f64,
    region: Region,
    step: f64,
    steering: MapSteering,
) -> Result<ResolutionMap> {
    if step <= 0.0 {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let xi = solve_xi_3db();
    let centers = |lo: f64, hi: f64| -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor().max(1.0) as usize;
        (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect()
    };
    let xs = centers(region.x_min, region.x_max);
    let ys = centers(region.y_min, region.y_max);
    let broadside = max_focus_distance(geom, 0.0, xi);
    let mut values = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            let r = (x * x + y * y).sqrt();
            let max_focus = match steering {
                MapSteering::PerCell => max_focus_distance(geom, y.atan2(x), xi),
                MapSteering::Broadside => broadside,
            };
            values.push(range_resolution(r, bandwidth, max_focus));
        }
    }
    Ok(ResolutionMap { xs, ys, values, bandwidth })
}
