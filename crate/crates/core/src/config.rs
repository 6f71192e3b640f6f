//! Run configuration.
//!
//! JSON with every field optional; unknown keys are rejected. Defaults follow
//! the 50 km operating point (`η = 0.6`, `ξ = 0.01`, trusted detector noise,
//! `ε = 10⁻¹⁰`, half the blocks disclosed for estimation).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{distance_to_transmission, ChannelModel, NoiseShape, DEFAULT_LOSS_DB_PER_KM};
use crate::gaussian::DetectorModel;
use crate::keyrate::{DeltaConstants, DEFAULT_EPSILON};
use crate::modulation::ZSeries;
use crate::reconciliation::DEFAULT_MAX_ITERATIONS;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    /// Fibre length; ignored when `transmission` is set.
    pub distance_km: f64,
    pub transmission: Option<f64>,
    pub loss_db_per_km: f64,
    pub excess_noise: f64,
    pub noise_shape: NoiseShape,
    pub gain_x: Option<f64>,
    pub gain_p: Option<f64>,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            distance_km: 50.0,
            transmission: None,
            loss_db_per_km: DEFAULT_LOSS_DB_PER_KM,
            excess_noise: 0.01,
            noise_shape: NoiseShape::Gaussian,
            gain_x: None,
            gain_p: None,
        }
    }
}

impl ChannelConfig {
    pub fn transmission(&self) -> f64 {
        self.transmission
            .unwrap_or_else(|| distance_to_transmission(self.distance_km, self.loss_db_per_km))
    }

    pub fn model(&self) -> Result<ChannelModel> {
        match (self.gain_x, self.gain_p) {
            (None, None) => ChannelModel::new(self.transmission(), self.excess_noise, self.noise_shape),
            (gx, gp) => {
                let g = self.transmission().sqrt();
                ChannelModel::asymmetric(gx.unwrap_or(g), gp.unwrap_or(g), self.excess_noise, self.noise_shape)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub eta: f64,
    pub v_el: f64,
    pub trusted: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig { eta: 0.6, v_el: 0.0, trusted: true }
    }
}

impl DetectorConfig {
    pub fn model(&self) -> Result<DetectorModel> {
        DetectorModel::new(self.eta, self.v_el, self.trusted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EpsilonConfig {
    pub pe: f64,
    pub bar: f64,
    pub pa: f64,
}

impl Default for EpsilonConfig {
    fn default() -> Self {
        EpsilonConfig { pe: DEFAULT_EPSILON, bar: DEFAULT_EPSILON, pa: DEFAULT_EPSILON }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconciliationConfig {
    /// Built-in code id (`peg-r1_2-n4096`, ...) or path to a code file.
    pub code: String,
    pub repetition: usize,
    pub max_iterations: usize,
    /// Efficiency assumed by the `keyrate` command.
    pub beta: f64,
    /// SNR grid of `recon-bench`.
    pub bench_snr: Vec<f64>,
    /// Frames per SNR point in `recon-bench`.
    pub bench_frames: usize,
}

impl Default for ReconciliationConfig {
    fn default() -> Self {
        ReconciliationConfig {
            code: "peg-r1_2-n4096".into(),
            repetition: 2,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            beta: 0.8,
            bench_snr: vec![0.5, 0.6, 0.75, 1.0, 1.5, 3.0],
            bench_frames: 100,
        }
    }
}

/// Top-level configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Per-quadrature modulation variance `V_A`.
    pub v_a: f64,
    /// Number of 8-dimensional blocks (`N/8`).
    pub blocks: usize,
    /// Fraction of blocks disclosed for estimation.
    pub disclosed_fraction: f64,
    pub series: ZSeries,
    pub channel: ChannelConfig,
    pub detector: DetectorConfig,
    pub reconciliation: ReconciliationConfig,
    pub epsilon: EpsilonConfig,
    pub delta_constants: DeltaConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            v_a: 1.0,
            blocks: 100_000,
            disclosed_fraction: 0.5,
            series: ZSeries::default(),
            channel: ChannelConfig::default(),
            detector: DetectorConfig::default(),
            reconciliation: ReconciliationConfig::default(),
            epsilon: EpsilonConfig::default(),
            delta_constants: DeltaConstants::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        RunConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_a > 0.0 && self.v_a.is_finite()) {
            return Err(Error::domain(format!("v_a = {} must be > 0", self.v_a)));
        }
        if !(self.disclosed_fraction > 0.0 && self.disclosed_fraction < 1.0) {
            return Err(Error::domain(format!("disclosed_fraction = {} not in (0, 1)", self.disclosed_fraction)));
        }
        if self.blocks < 2 {
            return Err(Error::usage("need at least 2 blocks"));
        }
        self.channel.model()?;
        self.detector.model()?;
        let e = &self.epsilon;
        for (name, v) in [("pe", e.pe), ("bar", e.bar), ("pa", e.pa)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::domain(format!("epsilon.{name} = {v} not in (0, 1)")));
            }
        }
        let r = &self.reconciliation;
        if r.repetition == 0 || r.max_iterations == 0 {
            return Err(Error::usage("repetition and max_iterations must be >= 1"));
        }
        if !(0.0..=1.0).contains(&r.beta) {
            return Err(Error::domain(format!("beta = {} not in [0, 1]", r.beta)));
        }
        Ok(())
    }
}
