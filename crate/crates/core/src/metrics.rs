//! Centroid RMSE, the GOSPA set metric, and the Monte Carlo evaluation
//! harness comparing array designs across bandwidths.

use crate::config::ScenarioConfig;
use crate::detector::{build_radar_map, MapParams, SearchGrid};
use crate::error::{Error, Result};
use crate::export::fmt_sig;
use crate::geometry::{ArrayGeometry, SpacingMode};
use crate::rng::TrialStreams;
use crate::scene::{sample_scatterers, ExtendedTarget};
use crate::signal::SignalParams;
use rayon::prelude::*;
use std::io::Write;
use std::time::Instant;

/// GOSPA value with its cardinality-mismatch decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GospaResult {
    pub distance: f64,
    pub n_missed: usize,
    pub n_false: usize,
}

/// Assignment route for the GOSPA optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentMethod {
    /// Exhaustive enumeration of gated matchings (small sets).
    Exhaustive,
    /// Hungarian algorithm on the augmented square cost matrix.
    Hungarian,
}

const EXHAUSTIVE_LIMIT: usize = 10;

/// GOSPA distance between two point sets with the standard decomposable form
/// (`alpha = 2`): matches farther than the gate are forbidden, every unmatched
/// point costs `gate^p / alpha`.
///
/// Dispatches to exhaustive search for sets of at most ten points and to the
/// Hungarian solver above that.
pub fn gospa(
    truth: &[[f64; 2]],
    estimates: &[[f64; 2]],
    gate: f64,
    order: f64,
    alpha: f64,
) -> Result<GospaResult> {
    let method = if truth.len() <= EXHAUSTIVE_LIMIT && estimates.len() <= EXHAUSTIVE_LIMIT {
        AssignmentMethod::Exhaustive
    } else {
        AssignmentMethod::Hungarian
    };
    gospa_with(truth, estimates, gate, order, alpha, method)
}

/// GOSPA with an explicit assignment route (the two routes agree exactly;
/// the tests cross-check them).
pub fn gospa_with(
    truth: &[[f64; 2]],
    estimates: &[[f64; 2]],
    gate: f64,
    order: f64,
    alpha: f64,
    method: AssignmentMethod,
) -> Result<GospaResult> {
    if gate <= 0.0 {
        return Err(Error::domain(format!("gate must be positive, got {gate}")));
    }
    if order < 1.0 {
        return Err(Error::domain(format!("order must be at least 1, got {order}")));
    }
    if alpha != 2.0 {
        return Err(Error::domain(format!(
            "only the standard decomposable form alpha = 2 is supported, got {alpha}"
        )));
    }
    let unmatched_cost = gate.powf(order) / alpha;
    let dist_p = |a: [f64; 2], b: [f64; 2]| -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt().powf(order)
    };
    let gate_p = gate.powf(order);

    let (total, matched) = match method {
        AssignmentMethod::Exhaustive => {
            let mut best = f64::INFINITY;
            let mut best_matched = 0usize;
            let mut used = vec![false; estimates.len()];
            exhaustive(
                truth,
                estimates,
                gate_p,
                unmatched_cost,
                &dist_p,
                0,
                0.0,
                0,
                &mut used,
                &mut best,
                &mut best_matched,
            );
            (best, best_matched)
        }
        AssignmentMethod::Hungarian => {
            let (n, m) = (truth.len(), estimates.len());
            if n == 0 && m == 0 {
                (0.0, 0)
            } else {
                // augmented square matrix: real-real block, per-point dummy
                // slots at gate^p/alpha, dummy-dummy free
                let s = n + m;
                const BIG: f64 = 1e18;
                let mut cost = vec![vec![0.0f64; s]; s];
                for (i, row) in cost.iter_mut().enumerate().take(n) {
                    for (j, c) in row.iter_mut().enumerate() {
                        *c = if j < m {
                            let d = dist_p(truth[i], estimates[j]);
                            if d <= gate_p { d } else { BIG }
                        } else if j == m + i {
                            unmatched_cost
                        } else {
                            BIG
                        };
                    }
                }
                for i in n..s {
                    for (j, c) in cost[i].iter_mut().enumerate() {
                        *c = if j < m {
                            if i - n == j {
                                unmatched_cost
                            } else {
                                BIG
                            }
                        } else {
                            0.0
                        };
                    }
                }
                let assignment = hungarian(&cost);
                let mut total = 0.0;
                let mut matched = 0usize;
                for (i, &j) in assignment.iter().enumerate().take(n) {
                    if j < m {
                        total += dist_p(truth[i], estimates[j]);
                        matched += 1;
                    } else {
                        total += unmatched_cost;
                    }
                }
                for (i, &j) in assignment.iter().enumerate().skip(n) {
                    if j < m {
                        total += unmatched_cost;
                        debug_assert_eq!(i - n, j);
                    }
                }
                (total, matched)
            }
        }
    };
    Ok(GospaResult {
        distance: total.powf(1.0 / order),
        n_missed: truth.len() - matched,
        n_false: estimates.len() - matched,
    })
}

#[allow(clippy::too_many_arguments)]
fn exhaustive(
    truth: &[[f64; 2]],
    estimates: &[[f64; 2]],
    gate_p: f64,
    unmatched_cost: f64,
    dist_p: &dyn Fn([f64; 2], [f64; 2]) -> f64,
    i: usize,
    acc: f64,
    matched: usize,
    used: &mut Vec<bool>,
    best: &mut f64,
    best_matched: &mut usize,
) {
    if acc >= *best {
        return; // every remaining step only adds cost
    }
    if i == truth.len() {
        let spurious = estimates.len() - matched;
        let total = acc + unmatched_cost * (truth.len() - matched + spurious) as f64;
        if total < *best {
            *best = total;
            *best_matched = matched;
        }
        return;
    }
    // leave truth i unmatched
    exhaustive(
        truth, estimates, gate_p, unmatched_cost, dist_p, i + 1, acc, matched, used, best,
        best_matched,
    );
    // or match it to any free estimate within the gate
    for j in 0..estimates.len() {
        if !used[j] {
            let d = dist_p(truth[i], estimates[j]);
            if d <= gate_p {
                used[j] = true;
                exhaustive(
                    truth,
                    estimates,
                    gate_p,
                    unmatched_cost,
                    dist_p,
                    i + 1,
                    acc + d,
                    matched + 1,
                    used,
                    best,
                    best_matched,
                );
                used[j] = false;
            }
        }
    }
}

/// O(n³) Hungarian algorithm (potentials + augmenting paths) for a square
/// cost matrix; returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based internals, standard shortest-augmenting-path formulation
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut matched_col = vec![0usize; n + 1]; // p[j]: row matched to column j
    for i in 1..=n {
        matched_col[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut visited = vec![false; n + 1];
        loop {
            visited[j0] = true;
            let i0 = matched_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !visited[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if visited[j] {
                    u[matched_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_col[j0] = matched_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        if matched_col[j] > 0 {
            row_to_col[matched_col[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial_id: usize,
    pub true_scatterers: Vec<[f64; 2]>,
    pub estimated_scatterers: Vec<[f64; 2]>,
    pub true_centroid: [f64; 2],
    /// None when the map produced no detections.
    pub est_centroid: Option<[f64; 2]>,
    pub gospa: f64,
    pub n_missed: usize,
    pub n_false: usize,
}

/// Root-mean-square centroid error over the trials that produced detections.
/// Zero-detection trials are excluded here and surface in the detection
/// failure rate instead.
pub fn centroid_rmse(trials: &[TrialResult]) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::domain("centroid_rmse over an empty trial list".to_string()));
    }
    let mut acc = 0.0;
    let mut n = 0usize;
    for t in trials {
        if let Some(est) = t.est_centroid {
            let dx = est[0] - t.true_centroid[0];
            let dy = est[1] - t.true_centroid[1];
            acc += dx * dx + dy * dy;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::domain("no trial produced an estimated centroid".to_string()));
    }
    Ok((acc / n as f64).sqrt())
}

/// One evaluation arm: an array design at one bandwidth.
#[derive(Debug, Clone)]
pub struct ArmSpec {
    pub label: String,
    pub spacing_mode: SpacingMode,
    pub bandwidth: f64,
}

/// Aggregate results of a Monte Carlo run.
#[derive(Debug, Clone)]
pub struct McSummary {
    pub label: String,
    pub bandwidth: f64,
    pub rmse: f64,
    pub gospa_mean: f64,
    pub missed_mean: f64,
    pub false_mean: f64,
    pub n_trials: usize,
    pub detect_fail_rate: f64,
    pub elapsed_secs: f64,
}

/// GOSPA order used throughout the harness.
pub const GOSPA_ORDER: f64 = 2.0;
/// Decomposable-form alpha.
pub const GOSPA_ALPHA: f64 = 2.0;

/// Run paired Monte Carlo trials for one arm: per trial resample the target
/// (rejecting empty draws with an incremented seed), build the radar map, and
/// score detections against ground truth. Trials run in parallel with
/// deterministic, trial-indexed seeds.
pub fn run_monte_carlo(
    cfg: &ScenarioConfig,
    arm: &ArmSpec,
    n_trials: usize,
    master_seed: u64,
) -> Result<(Vec<TrialResult>, McSummary)> {
    if n_trials == 0 {
        return Err(Error::contract("n_trials must be positive".to_string()));
    }
    let started = Instant::now();
    let geom = ArrayGeometry::with_mode(arm.spacing_mode, cfg.n_tx, cfg.n_rx, cfg.carrier_hz)?;
    let target = cfg.target()?;
    let gate = 5.0 * cfg.roi_spacing_m;
    let map_params = MapParams {
        signal: SignalParams::new(
            cfg.carrier_hz,
            arm.bandwidth,
            cfg.n_subcarriers,
            cfg.eirp_w,
            cfg.element_gain_tx,
            cfg.element_gain_rx,
            cfg.n_tx,
            cfg.noise_figure_db,
        ),
        n_subcarriers: cfg.n_subcarriers,
        n_symbols: cfg.n_symbols,
        far: cfg.far,
        assignment: cfg.beam_assignment,
        mode: cfg.distance_mode,
    };

    let trials: Vec<TrialResult> = (0..n_trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &geom, &target, &map_params, gate, master_seed, trial))
        .collect::<Result<_>>()?;

    let n = n_trials as f64;
    let fails = trials.iter().filter(|t| t.est_centroid.is_none()).count();
    let summary = McSummary {
        label: arm.label.clone(),
        bandwidth: arm.bandwidth,
        rmse: centroid_rmse(&trials).unwrap_or(f64::NAN),
        gospa_mean: trials.iter().map(|t| t.gospa).sum::<f64>() / n,
        missed_mean: trials.iter().map(|t| t.n_missed as f64).sum::<f64>() / n,
        false_mean: trials.iter().map(|t| t.n_false as f64).sum::<f64>() / n,
        n_trials,
        detect_fail_rate: fails as f64 / n,
        elapsed_secs: started.elapsed().as_secs_f64(),
    };
    Ok((trials, summary))
}

fn run_trial(
    cfg: &ScenarioConfig,
    geom: &ArrayGeometry,
    target: &ExtendedTarget,
    map_params: &MapParams,
    gate: f64,
    master_seed: u64,
    trial: usize,
) -> Result<TrialResult> {
    let streams = TrialStreams::new(master_seed, trial as u64);
    // reject empty realizations; metrics are undefined for an empty target
    let mut scatterers = Vec::new();
    for attempt in 0..64u64 {
        scatterers = sample_scatterers(target, cfg.rcs_m2, cfg.carrier_hz, streams.target_seed(attempt));
        if !scatterers.is_empty() {
            break;
        }
    }
    if scatterers.is_empty() {
        return Err(Error::contract(format!(
            "trial {trial}: no non-empty target realization in 64 attempts (q = {})",
            target.activation_prob
        )));
    }
    let grid = SearchGrid::new(target.centroid, (cfg.roi_size_m, cfg.roi_size_m), cfg.roi_spacing_m)?;
    let map = build_radar_map(&scatterers, geom, grid, map_params, &streams)?;

    let truth: Vec<[f64; 2]> = scatterers.iter().map(|s| s.position).collect();
    let nt = truth.len() as f64;
    let true_centroid = [
        truth.iter().map(|p| p[0]).sum::<f64>() / nt,
        truth.iter().map(|p| p[1]).sum::<f64>() / nt,
    ];
    let est = map.estimates.clone();
    let est_centroid = if est.is_empty() {
        None
    } else {
        let ne = est.len() as f64;
        Some([
            est.iter().map(|p| p[0]).sum::<f64>() / ne,
            est.iter().map(|p| p[1]).sum::<f64>() / ne,
        ])
    };
    let g = gospa(&truth, &est, gate, GOSPA_ORDER, GOSPA_ALPHA)?;
    Ok(TrialResult {
        trial_id: trial,
        true_scatterers: truth,
        estimated_scatterers: est,
        true_centroid,
        est_centroid,
        gospa: g.distance,
        n_missed: g.n_missed,
        n_false: g.n_false,
    })
}

/// Summary CSV:
/// `config_label,bandwidth_hz,rmse_m,gospa_mean_m,missed_mean,false_mean,n_trials,detect_fail_rate`.
pub fn write_summary_csv<W: Write>(mut w: W, rows: &[McSummary]) -> std::io::Result<()> {
    writeln!(
        w,
        "config_label,bandwidth_hz,rmse_m,gospa_mean_m,missed_mean,false_mean,n_trials,detect_fail_rate"
    )?;
    for s in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            s.label,
            fmt_sig(s.bandwidth, 6),
            fmt_sig(s.rmse, 6),
            fmt_sig(s.gospa_mean, 6),
            fmt_sig(s.missed_mean, 6),
            fmt_sig(s.false_mean, 6),
            s.n_trials,
            fmt_sig(s.detect_fail_rate, 6),
        )?;
    }
    Ok(())
}

/// Per-trial CSV mirroring the fields of [`TrialResult`].
pub fn write_trials_csv<W: Write>(mut w: W, label: &str, trials: &[TrialResult]) -> std::io::Result<()> {
    writeln!(
        w,
        "config_label,trial,n_true,n_est,true_cx_m,true_cy_m,est_cx_m,est_cy_m,gospa_m,n_missed,n_false"
    )?;
    for t in trials {
        let (ecx, ecy) = match t.est_centroid {
            Some(c) => (fmt_sig(c[0], 6), fmt_sig(c[1], 6)),
            None => ("".to_string(), "".to_string()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            label,
            t.trial_id,
            t.true_scatterers.len(),
            t.estimated_scatterers.len(),
            fmt_sig(t.true_centroid[0], 6),
            fmt_sig(t.true_centroid[1], 6),
            ecx,
            ecy,
            fmt_sig(t.gospa, 6),
            t.n_missed,
            t.n_false,
        )?;
    }
    Ok(())
}

/// Ground-truth CSV: `trial,scatterer_id,x_m,y_m,r_m,theta_rad,rcs_m2`.
pub fn write_ground_truth_csv<W: Write>(
    mut w: W,
    trial: usize,
    scatterers: &[crate::scene::Scatterer],
    header: bool,
) -> std::io::Result<()> {
    if header {
        writeln!(w, "trial,scatterer_id,x_m,y_m,r_m,theta_rad,rcs_m2")?;
    }
    for (id, s) in scatterers.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            trial,
            id,
            fmt_sig(s.position[0], 6),
            fmt_sig(s.position[1], 6),
            fmt_sig(s.range_ref, 6),
            fmt_sig(s.angle_ref, 6),
            fmt_sig(s.rcs, 6),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gospa_identical_sets() {
        let pts = vec![[1.0, 2.0], [3.0, -1.0]];
        let g = gospa(&pts, &pts, 0.5, 2.0, 2.0).unwrap();
        assert_eq!(g.distance, 0.0);
        assert_eq!((g.n_missed, g.n_false), (0, 0));
    }

    #[test]
    fn gospa_cardinality_penalties() {
        // one truth, zero estimates
        let g = gospa(&[[0.0, 0.0]], &[], 0.5, 2.0, 2.0).unwrap();
        assert!(close(g.distance, (0.25f64 / 2.0).sqrt(), 1e-12));
        assert_eq!((g.n_missed, g.n_false), (1, 0));
        // symmetric case
        let g = gospa(&[], &[[0.0, 0.0]], 0.5, 2.0, 2.0).unwrap();
        assert_eq!((g.n_missed, g.n_false), (0, 1));
        // single in-gate match
        let g = gospa(&[[0.0, 0.0]], &[[0.1, 0.0]], 0.5, 2.0, 2.0).unwrap();
        assert!(close(g.distance, 0.1, 1e-12));
        assert_eq!((g.n_missed, g.n_false), (0, 0));
    }

    #[test]
    fn gospa_far_point_is_false_alarm() {
        let truth = vec![[0.0, 0.0]];
        let g0 = gospa(&truth, &[[0.05, 0.0]], 0.5, 2.0, 2.0).unwrap();
        let g1 = gospa(&truth, &[[0.05, 0.0], [10.0, 10.0]], 0.5, 2.0, 2.0).unwrap();
        assert!(g1.distance > g0.distance);
        assert_eq!(g1.n_false, 1);
    }

    #[test]
    fn gospa_rejects_bad_params() {
        assert!(gospa(&[], &[], 0.0, 2.0, 2.0).is_err());
        assert!(gospa(&[], &[], 0.5, 0.5, 2.0).is_err());
        assert!(gospa(&[], &[], 0.5, 2.0, 1.0).is_err());
    }

    #[test]
    fn gospa_symmetry_and_route_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(0..=6);
            let m = rng.gen_range(0..=6);
            let pt = |rng: &mut ChaCha8Rng| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let a: Vec<_> = (0..n).map(|_| pt(&mut rng)).collect();
            let b: Vec<_> = (0..m).map(|_| pt(&mut rng)).collect();
            let ab = gospa_with(&a, &b, 0.5, 2.0, 2.0, AssignmentMethod::Hungarian).unwrap();
            let ba = gospa_with(&b, &a, 0.5, 2.0, 2.0, AssignmentMethod::Hungarian).unwrap();
            assert!(close(ab.distance, ba.distance, 1e-12));
            assert_eq!((ab.n_missed, ab.n_false), (ba.n_false, ba.n_missed));
            let ex = gospa_with(&a, &b, 0.5, 2.0, 2.0, AssignmentMethod::Exhaustive).unwrap();
            assert!(
                close(ab.distance, ex.distance, 1e-12),
                "hungarian {} vs exhaustive {}",
                ab.distance,
                ex.distance
            );
            assert_eq!((ab.n_missed, ab.n_false), (ex.n_missed, ex.n_false));
        }
    }

    #[test]
    fn gospa_large_sets_use_hungarian() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let truth: Vec<_> = (0..25)
            .map(|_| [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
            .collect();
        let mut est = truth.clone();
        est.truncate(20);
        for e in est.iter_mut() {
            e[0] += rng.gen_range(-0.05..0.05);
            e[1] += rng.gen_range(-0.05..0.05);
        }
        let g = gospa(&truth, &est, 0.5, 2.0, 2.0).unwrap();
        assert_eq!(g.n_missed, 5);
        assert_eq!(g.n_false, 0);
        assert!(g.distance > 0.0);
    }

    #[test]
    fn rmse_examples() {
        let mk = |err: [f64; 2]| TrialResult {
            trial_id: 0,
            true_scatterers: vec![],
            estimated_scatterers: vec![],
            true_centroid: [1.0, 1.0],
            est_centroid: Some([1.0 + err[0], 1.0 + err[1]]),
            gospa: 0.0,
            n_missed: 0,
            n_false: 0,
        };
        assert_eq!(centroid_rmse(&[mk([0.0, 0.0])]).unwrap(), 0.0);
        assert!(close(centroid_rmse(&[mk([0.3, 0.4])]).unwrap(), 0.5, 1e-15));
        let two = [mk([0.1, 0.0]), mk([0.3, 0.0])];
        assert!(close(centroid_rmse(&two).unwrap(), (0.05f64).sqrt(), 1e-15));
        assert!(centroid_rmse(&[]).is_err());
    }

    #[test]
    fn rmse_translation_invariance() {
        let mk = |cx: f64, err: f64| TrialResult {
            trial_id: 0,
            true_scatterers: vec![],
            estimated_scatterers: vec![],
            true_centroid: [cx, 0.0],
            est_centroid: Some([cx + err, 0.0]),
            gospa: 0.0,
            n_missed: 0,
            n_false: 0,
        };
        let a = centroid_rmse(&[mk(0.0, 0.2), mk(0.0, 0.4)]).unwrap();
        let b = centroid_rmse(&[mk(100.0, 0.2), mk(100.0, 0.4)]).unwrap();
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn hungarian_simple_cases() {
        let cost = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert_eq!(hungarian(&cost), vec![0, 1]);
        let cost = vec![vec![10.0, 1.0], vec![1.0, 10.0]];
        assert_eq!(hungarian(&cost), vec![1, 0]);
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let a = hungarian(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert!(close(total, 5.0, 1e-12));
    }
}
