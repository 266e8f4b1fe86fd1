//! Frequency-domain OFDM frame generation and received-grid synthesis.
//!
//! The simulator works at the post-FFT symbol level: a transmitted QPSK grid
//! `x[k,m]`, a hybrid near-/far-field channel per scatterer, and calibrated
//! AWGN. Time-domain waveforms, cyclic prefixes and ICI/ISI are out of scope;
//! the symbol duration still includes a CP fraction so Doppler phases stay
//! meaningful.

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::scene::{effective_gain, Scatterer};
use crate::steering::{rx_nf_steering, DistanceMode};
use crate::{BOLTZMANN, T0_KELVIN};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

/// Cyclic-prefix fraction of the core symbol period folded into `T_s`.
/// Inert for static targets; surfaced here rather than buried in a formula.
pub const CP_FRACTION: f64 = 0.125;

/// Transmitted symbol grid, `n_subcarriers x n_symbols`, unit-modulus QPSK.
#[derive(Debug, Clone)]
pub struct SymbolGrid {
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    entries: Vec<Complex64>,
}

impl SymbolGrid {
    #[inline]
    pub fn entry(&self, k: usize, m: usize) -> Complex64 {
        self.entries[k * self.n_symbols + m]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Total symbol energy `sum |x[k,m]|²`.
    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// I.i.d. uniform QPSK, reproducible from the seed.
pub fn generate_symbols(n_subcarriers: usize, n_symbols: usize, seed: u64) -> SymbolGrid {
    debug_assert!(n_subcarriers >= 1 && n_symbols >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n_subcarriers * n_symbols)
        .map(|_| {
            let re = if rng.gen::<bool>() { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
            let im = if rng.gen::<bool>() { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
            Complex64::new(re, im)
        })
        .collect();
    SymbolGrid { n_subcarriers, n_symbols, entries }
}

/// Per-entry noise variance `k_B T_0 n_F Δf` with `Δf = bandwidth / K`.
pub fn noise_variance(bandwidth: f64, n_subcarriers: usize, noise_figure_db: f64) -> f64 {
    debug_assert!(bandwidth > 0.0 && n_subcarriers >= 1);
    let n_f = 10f64.powf(noise_figure_db / 10.0);
    BOLTZMANN * T0_KELVIN * n_f * bandwidth / n_subcarriers as f64
}

/// Scalars that fix one synthesis configuration.
#[derive(Debug, Clone, Copy)]
pub struct SignalParams {
    pub carrier_hz: f64,
    /// Subcarrier spacing `B / K`, Hz.
    pub delta_f: f64,
    /// OFDM symbol duration including the CP fraction, seconds.
    pub symbol_duration: f64,
    /// `sqrt(P_t G_t G_r / K)` applied to every scatterer contribution.
    pub amp_scale: f64,
    /// Per-entry complex noise variance, W.
    pub noise_var: f64,
}

impl SignalParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        carrier_hz: f64,
        bandwidth: f64,
        n_subcarriers: usize,
        eirp_w: f64,
        gain_tx: f64,
        gain_rx: f64,
        n_tx: usize,
        noise_figure_db: f64,
    ) -> Self {
        let delta_f = bandwidth / n_subcarriers as f64;
        // EIRP = P_t G_t N_t fixes the transmit power
        let pt = eirp_w / (gain_tx * n_tx as f64);
        SignalParams {
            carrier_hz,
            delta_f,
            symbol_duration: (1.0 + CP_FRACTION) / delta_f,
            amp_scale: (pt * gain_tx * gain_rx / n_subcarriers as f64).sqrt(),
            noise_var: noise_variance(bandwidth, n_subcarriers, noise_figure_db),
        }
    }
}

/// Demodulated receive grid, `n_rx x n_subcarriers x n_symbols`.
#[derive(Debug, Clone)]
pub struct ReceivedGrid {
    pub n_rx: usize,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    entries: Vec<Complex64>,
    pub noise_var: f64,
    pub amp_scale: f64,
    pub delta_f: f64,
    pub symbol_duration: f64,
}

impl ReceivedGrid {
    #[inline]
    fn idx(&self, n: usize, k: usize, m: usize) -> usize {
        (n * self.n_subcarriers + k) * self.n_symbols + m
    }

    #[inline]
    pub fn entry(&self, n: usize, k: usize, m: usize) -> Complex64 {
        self.entries[self.idx(n, k, m)]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn scale(&mut self, factor: Complex64) {
        for e in &mut self.entries {
            *e *= factor;
        }
    }

    /// Raw debugging dump: 32-byte header (magic `NFIS`, then u32 LE counts
    /// n_rx, K, M, then zero padding), followed by little-endian f64 (re, im)
    /// pairs in n-major, then k, then m order.
    pub fn write_raw_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = [0u8; 32];
        header[..4].copy_from_slice(b"NFIS");
        header[4..8].copy_from_slice(&(self.n_rx as u32).to_le_bytes());
        header[8..12].copy_from_slice(&(self.n_subcarriers as u32).to_le_bytes());
        header[12..16].copy_from_slice(&(self.n_symbols as u32).to_le_bytes());
        w.write_all(&header)?;
        for e in &self.entries {
            w.write_all(&e.re.to_le_bytes())?;
            w.write_all(&e.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Synthesize the received grid
/// `y_n[k,m] = amp · Σ_p h_p e^{j2π(m T_s f_D - k Δf τ_p)} b_n(θ_p, r_p) + ν`
/// with exact-distance receive steering and independent complex Gaussian
/// noise per entry. Noise draws are standard-normal scaled by the noise
/// standard deviation, so runs at different noise floors stay paired under a
/// common seed.
pub fn synthesize_received(
    scatterers: &[Scatterer],
    tx_weights: &[Complex64],
    geom: &ArrayGeometry,
    frame: &SymbolGrid,
    params: &SignalParams,
    noise_seed: u64,
) -> Result<ReceivedGrid> {
    if tx_weights.len() != geom.n_tx {
        return Err(Error::contract(format!(
            "{} transmit weights for {} elements",
            tx_weights.len(),
            geom.n_tx
        )));
    }
    if scatterers.is_empty() && params.noise_var == 0.0 {
        return Err(Error::contract(
            "empty scene with zero noise would synthesize an all-zero grid".to_string(),
        ));
    }
    let (n_rx, k_count, m_count) = (geom.n_rx, frame.n_subcarriers, frame.n_symbols);
    let mut grid = ReceivedGrid {
        n_rx,
        n_subcarriers: k_count,
        n_symbols: m_count,
        entries: vec![Complex64::new(0.0, 0.0); n_rx * k_count * m_count],
        noise_var: params.noise_var,
        amp_scale: params.amp_scale,
        delta_f: params.delta_f,
        symbol_duration: params.symbol_duration,
    };

    for sc in scatterers {
        let h = effective_gain(sc, tx_weights)?;
        let b = rx_nf_steering(sc.angle_ref, sc.range_ref, geom, DistanceMode::Exact)?;
        // per-axis phase ramps of the delay/Doppler term
        let delay_step = -2.0 * PI * params.delta_f * sc.delay;
        let doppler_step = 2.0 * PI * params.symbol_duration * sc.doppler;
        let ck: Vec<Complex64> = (0..k_count)
            .map(|k| Complex64::from_polar(1.0, delay_step * k as f64))
            .collect();
        let dm: Vec<Complex64> = (0..m_count)
            .map(|m| Complex64::from_polar(1.0, doppler_step * m as f64))
            .collect();
        let ah = h * params.amp_scale;
        for n in 0..n_rx {
            let un = ah * b.entries[n];
            for k in 0..k_count {
                let unk = un * ck[k];
                let base = (n * k_count + k) * m_count;
                for m in 0..m_count {
                    grid.entries[base + m] += unk * dm[m] * frame.entry(k, m);
                }
            }
        }
    }

    if params.noise_var > 0.0 {
        let sigma = (params.noise_var / 2.0).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        for e in &mut grid.entries {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *e += Complex64::new(sigma * re, sigma * im);
        }
    }
    Ok(grid)
}
