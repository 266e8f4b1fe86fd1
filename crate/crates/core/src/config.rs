//! Scenario configuration: flat JSON with dotted keys, validated against the
//! default parameter set (60 GHz carrier, K = 1024, M = 10, 32x32 elements,
//! 0.1 W EIRP, 10 dB noise figure, 0.25 m² scatterers, 2x1 m target with
//! q = 0.1 on 0.1 m cells, 3x3 m RoI at 0.1 m spacing, FAR = 1, 1000 trials).

use crate::detector::BeamAssignment;
use crate::error::{Error, Result};
use crate::geometry::SpacingMode;
use crate::metrics::ArmSpec;
use crate::scene::{build_target, ExtendedTarget};
use crate::steering::DistanceMode;
use serde_json::Value;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

/// Orientation rule of the target's long axis relative to the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadingMode {
    /// Long axis along the centroid's radial direction.
    Normal,
    /// Long axis across the centroid's radial direction.
    Tangential,
}

/// Full description of one simulation scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub carrier_hz: f64,
    /// One or more bandwidths; more than one means a sweep.
    pub bandwidths_hz: Vec<f64>,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pub n_tx: usize,
    pub n_rx: usize,
    pub spacing_mode: SpacingMode,
    pub eirp_w: f64,
    pub element_gain_tx: f64,
    pub element_gain_rx: f64,
    pub noise_figure_db: f64,
    pub rcs_m2: f64,
    pub target_centroid_m: [f64; 2],
    pub target_length_m: f64,
    pub target_width_m: f64,
    pub target_heading_mode: HeadingMode,
    pub target_cell_m: f64,
    pub target_q: f64,
    pub roi_size_m: f64,
    pub roi_spacing_m: f64,
    pub far: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    pub beam_assignment: BeamAssignment,
    pub distance_mode: DistanceMode,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            carrier_hz: 60e9,
            bandwidths_hz: vec![200e6],
            n_subcarriers: 1024,
            n_symbols: 10,
            n_tx: 32,
            n_rx: 32,
            spacing_mode: SpacingMode::Elas,
            eirp_w: 0.1,
            element_gain_tx: 1.0,
            element_gain_rx: 1.0,
            noise_figure_db: 10.0,
            rcs_m2: 0.25,
            target_centroid_m: [3.5, 0.0],
            target_length_m: 2.0,
            target_width_m: 1.0,
            target_heading_mode: HeadingMode::Normal,
            target_cell_m: 0.1,
            target_q: 0.1,
            roi_size_m: 3.0,
            roi_spacing_m: 0.1,
            far: 1.0,
            n_trials: 1000,
            master_seed: 1,
        beam_assignment: BeamAssignment::Nearest,
            distance_mode: DistanceMode::Exact,
        }
    }
}

impl ScenarioConfig {
    /// Parse a flat dotted-key JSON file; an empty file means all defaults.
    /// Unknown keys are rejected with their path.
    pub fn parse_config(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::config(path.as_ref().display().to_string(), format!("cannot read: {e}"))
        })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        if text.trim().is_empty() {
            return Ok(cfg);
        }
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::config("<root>", format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::config("<root>", "top level must be an object"))?;
        for (key, v) in obj {
            cfg.apply(key, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, v: &Value) -> Result<()> {
        let num = |v: &Value| -> Result<f64> {
            v.as_f64()
                .ok_or_else(|| Error::config(key, format!("expected a number, got {v}")))
        };
        let count = |v: &Value| -> Result<usize> {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::config(key, format!("expected a non-negative integer, got {v}")))
        };
        let text = |v: &Value| -> Result<String> {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::config(key, format!("expected a string, got {v}")))
        };
        match key {
            "carrier_hz" => self.carrier_hz = num(v)?,
            "bandwidth_hz" => {
                self.bandwidths_hz = match v {
                    Value::Array(items) => items.iter().map(num).collect::<Result<_>>()?,
                    other => vec![num(other)?],
                }
            }
            "n_subcarriers" => self.n_subcarriers = count(v)?,
            "n_symbols" => self.n_symbols = count(v)?,
            "n_tx" => self.n_tx = count(v)?,
            "n_rx" => self.n_rx = count(v)?,
            "spacing_mode" => {
                self.spacing_mode = match text(v)?.as_str() {
                    "elas" => SpacingMode::Elas,
                    "half_wavelength" => SpacingMode::HalfWavelength,
                    other => {
                        return Err(Error::config(
                            key,
                            format!("expected `elas` or `half_wavelength`, got `{other}`"),
                        ))
                    }
                }
            }
            "eirp_w" => self.eirp_w = num(v)?,
            "element_gains" => match v {
                Value::Array(items) if items.len() == 2 => {
                    self.element_gain_tx = num(&items[0])?;
                    self.element_gain_rx = num(&items[1])?;
                }
                _ => return Err(Error::config(key, "expected a two-element array [g_tx, g_rx]")),
            },
            "noise_figure_db" => self.noise_figure_db = num(v)?,
            "rcs_m2" => self.rcs_m2 = num(v)?,
            "target.centroid_m" => match v {
                Value::Array(items) if items.len() == 2 => {
                    self.target_centroid_m = [num(&items[0])?, num(&items[1])?];
                }
                _ => return Err(Error::config(key, "expected a two-element array [x, y]")),
            },
            "target.length_m" => self.target_length_m = num(v)?,
            "target.width_m" => self.target_width_m = num(v)?,
            "target.heading_mode" => {
                self.target_heading_mode = match text(v)?.as_str() {
                    "normal" => HeadingMode::Normal,
                    "tangential" => HeadingMode::Tangential,
                    other => {
                        return Err(Error::config(
                            key,
                            format!("expected `normal` or `tangential`, got `{other}`"),
                        ))
                    }
                }
            }
            "target.cell_m" => self.target_cell_m = num(v)?,
            "target.q" => self.target_q = num(v)?,
            "roi.size_m" => self.roi_size_m = num(v)?,
            "roi.spacing_m" => self.roi_spacing_m = num(v)?,
            "far" => self.far = num(v)?,
            "n_trials" => self.n_trials = count(v)?,
            "master_seed" => {
                self.master_seed = v
                    .as_u64()
                    .ok_or_else(|| Error::config(key, "expected a non-negative integer"))?
            }
            "detector.beam_assignment" => {
                self.beam_assignment = match text(v)?.as_str() {
                    "nearest" => BeamAssignment::Nearest,
                    "max-over-beams" => BeamAssignment::MaxOverBeams,
                    other => {
                        return Err(Error::config(
                            key,
                            format!("expected `nearest` or `max-over-beams`, got `{other}`"),
                        ))
                    }
                }
            }
            "detector.distance_mode" => {
                self.distance_mode = match text(v)?.as_str() {
                    "exact" => DistanceMode::Exact,
                    "fresnel" => DistanceMode::Fresnel,
                    other => {
                        return Err(Error::config(key, format!("expected `exact` or `fresnel`, got `{other}`")))
                    }
                }
            }
            unknown => return Err(Error::config(unknown, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_hz", self.carrier_hz),
            ("eirp_w", self.eirp_w),
            ("noise_figure_db+1", self.noise_figure_db + 1.0), // 0 dB allowed
            ("rcs_m2", self.rcs_m2),
            ("target.length_m", self.target_length_m),
            ("target.width_m", self.target_width_m),
            ("target.cell_m", self.target_cell_m),
            ("roi.size_m", self.roi_size_m),
            ("roi.spacing_m", self.roi_spacing_m),
            ("far", self.far),
        ];
        for (key, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::config(key, format!("must be positive and finite, got {value}")));
            }
        }
        if self.bandwidths_hz.is_empty() {
            return Err(Error::config("bandwidth_hz", "at least one bandwidth required"));
        }
        for &b in &self.bandwidths_hz {
            if !(b > 0.0) {
                return Err(Error::config("bandwidth_hz", format!("bandwidths must be positive, got {b}")));
            }
        }
        if self.n_subcarriers == 0 || self.n_symbols == 0 {
            return Err(Error::config("n_subcarriers/n_symbols", "must be at least 1"));
        }
        if self.n_tx < 2 || self.n_rx < 2 {
            return Err(Error::config("n_tx/n_rx", "arrays need at least 2 elements"));
        }
        if !(0.0..=1.0).contains(&self.target_q) {
            return Err(Error::config(
                "target.q",
                format!("activation probability must lie in [0, 1], got {}", self.target_q),
            ));
        }
        // the target grid must tile
        self.target().map(|_| ())
    }

    /// Build the extended target with the configured heading convention.
    pub fn target(&self) -> Result<ExtendedTarget> {
        let theta_c = self.target_centroid_m[1].atan2(self.target_centroid_m[0]);
        let heading = match self.target_heading_mode {
            HeadingMode::Normal => theta_c,
            HeadingMode::Tangential => theta_c + FRAC_PI_2,
        };
        build_target(
            self.target_centroid_m,
            self.target_length_m,
            self.target_width_m,
            heading,
            self.target_cell_m,
            self.target_q,
        )
        .map_err(|e| Error::config("target", e.to_string()))
    }

    /// Expand requested arm names ("elas", "ff") across the bandwidth sweep.
    pub fn arms(&self, names: &[String]) -> Result<Vec<ArmSpec>> {
        let mut arms = Vec::new();
        for name in names {
            let mode = match name.as_str() {
                "elas" => SpacingMode::Elas,
                "ff" | "half_wavelength" => SpacingMode::HalfWavelength,
                other => {
                    return Err(Error::config(
                        "arms",
                        format!("expected `elas` or `ff`, got `{other}`"),
                    ))
                }
            };
            for &bandwidth in &self.bandwidths_hz {
                arms.push(ArmSpec { label: name.clone(), spacing_mode: mode, bandwidth });
            }
        }
        Ok(arms)
    }

    /// The resolved configuration as a flat dotted-key JSON object (the same
    /// schema `parse_config` accepts); used by run manifests.
    pub fn to_flat_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("carrier_hz".into(), self.carrier_hz.into());
        map.insert(
            "bandwidth_hz".into(),
            Value::Array(self.bandwidths_hz.iter().map(|&b| b.into()).collect()),
        );
        map.insert("n_subcarriers".into(), (self.n_subcarriers as u64).into());
        map.insert("n_symbols".into(), (self.n_symbols as u64).into());
        map.insert("n_tx".into(), (self.n_tx as u64).into());
        map.insert("n_rx".into(), (self.n_rx as u64).into());
        map.insert("spacing_mode".into(), self.spacing_mode.label().into());
        map.insert("eirp_w".into(), self.eirp_w.into());
        map.insert(
            "element_gains".into(),
            Value::Array(vec![self.element_gain_tx.into(), self.element_gain_rx.into()]),
        );
        map.insert("noise_figure_db".into(), self.noise_figure_db.into());
        map.insert("rcs_m2".into(), self.rcs_m2.into());
        map.insert(
            "target.centroid_m".into(),
            Value::Array(vec![self.target_centroid_m[0].into(), self.target_centroid_m[1].into()]),
        );
        map.insert("target.length_m".into(), self.target_length_m.into());
        map.insert("target.width_m".into(), self.target_width_m.into());
        map.insert(
            "target.heading_mode".into(),
            match self.target_heading_mode {
                HeadingMode::Normal => "normal",
                HeadingMode::Tangential => "tangential",
            }
            .into(),
        );
        map.insert("target.cell_m".into(), self.target_cell_m.into());
        map.insert("target.q".into(), self.target_q.into());
        map.insert("roi.size_m".into(), self.roi_size_m.into());
        map.insert("roi.spacing_m".into(), self.roi_spacing_m.into());
        map.insert("far".into(), self.far.into());
        map.insert("n_trials".into(), (self.n_trials as u64).into());
        map.insert("master_seed".into(), self.master_seed.into());
        map.insert(
            "detector.beam_assignment".into(),
            match self.beam_assignment {
                BeamAssignment::Nearest => "nearest",
                BeamAssignment::MaxOverBeams => "max-over-beams",
            }
            .into(),
        );
        map.insert(
            "detector.distance_mode".into(),
            match self.distance_mode {
                DistanceMode::Exact => "exact",
                DistanceMode::Fresnel => "fresnel",
            }
            .into(),
        );
        Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = ScenarioConfig::from_json_str("").unwrap();
        assert_eq!(cfg.carrier_hz, 60e9);
        assert_eq!(cfg.n_subcarriers, 1024);
        assert_eq!(cfg.n_symbols, 10);
        assert_eq!((cfg.n_tx, cfg.n_rx), (32, 32));
        assert_eq!(cfg.eirp_w, 0.1);
        assert_eq!(cfg.noise_figure_db, 10.0);
        assert_eq!(cfg.rcs_m2, 0.25);
        assert_eq!(cfg.roi_size_m, 3.0);
        assert_eq!((cfg.target_length_m, cfg.target_width_m), (2.0, 1.0));
        assert_eq!(cfg.target_q, 0.1);
        assert_eq!(cfg.far, 1.0);
        assert_eq!(cfg.n_trials, 1000);
        assert_eq!(cfg.target().unwrap().cells.len(), 200);
    }

    #[test]
    fn bandwidth_sweep_list() {
        let cfg =
            ScenarioConfig::from_json_str(r#"{"bandwidth_hz": [50e6, 200e6, 400e6, 750e6]}"#).unwrap();
        assert_eq!(cfg.bandwidths_hz.len(), 4);
        assert_eq!(cfg.bandwidths_hz[3], 750e6);
        let arms = cfg.arms(&["ff".into(), "elas".into()]).unwrap();
        assert_eq!(arms.len(), 8);
        assert_eq!(arms[0].spacing_mode, SpacingMode::HalfWavelength);
    }

    #[test]
    fn rejects_invalid_values() {
        assert!(ScenarioConfig::from_json_str(r#"{"target.q": 1.5}"#).is_err());
        assert!(ScenarioConfig::from_json_str(r#"{"no_such_key": 1}"#).is_err());
        assert!(ScenarioConfig::from_json_str(r#"{"target.length_m": 0.25}"#).is_err());
        assert!(ScenarioConfig::from_json_str(r#"{"spacing_mode": "sparse"}"#).is_err());
        assert!(ScenarioConfig::from_json_str("[1,2]").is_err());
    }

    #[test]
    fn error_carries_key_path() {
        let err = ScenarioConfig::from_json_str(r#"{"target.q": "high"}"#).unwrap_err();
        assert!(err.to_string().contains("target.q"), "{err}");
    }

    #[test]
    fn heading_modes() {
        let cfg = ScenarioConfig::from_json_str(
            r#"{"target.centroid_m": [5.0, 3.0], "target.heading_mode": "tangential"}"#,
        )
        .unwrap();
        let t = cfg.target().unwrap();
        let theta_c: f64 = 3.0f64.atan2(5.0);
        assert!((t.heading - (theta_c + FRAC_PI_2)).abs() < 1e-12);
    }

    #[test]
    fn flat_json_round_trips() {
        let cfg = ScenarioConfig::from_json_str(
            r#"{"bandwidth_hz": [50e6, 400e6], "n_trials": 7, "target.centroid_m": [17.0, -8.0]}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&cfg.to_flat_json()).unwrap();
        let again = ScenarioConfig::from_json_str(&text).unwrap();
        assert_eq!(again.bandwidths_hz, cfg.bandwidths_hz);
        assert_eq!(again.n_trials, 7);
        assert_eq!(again.target_centroid_m, [17.0, -8.0]);
    }
}
