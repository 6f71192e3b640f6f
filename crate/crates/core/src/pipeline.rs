//! End-to-end protocol runs and the reconciliation benchmark.

use serde::{Deserialize, Serialize};

use crate::channel::{transmit, ChannelModel, NoiseShape};
use crate::config::RunConfig;
use crate::estimation::{confidence_bounds, disclose_indices, estimate, EstimationResult};
use crate::gaussian::DetectorModel;
use crate::keyrate::{finite_rate, FiniteSize, KeyRateReport};
use crate::modulation::sample_blocks;
use crate::par::Execution;
use crate::reconciliation::{privacy_amplification, reconcile, CodeSpec, ReconcileOutcome, VirtualChannel};
use crate::rng::{stream, Domain};
use crate::{Error, Result};
use rand::Rng;

/// Reconciliation figures without the key material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconciliationSummary {
    pub code: String,
    pub repetition: usize,
    pub frames: usize,
    pub successful_frames: usize,
    pub unused_blocks: usize,
    pub frame_error_rate: f64,
    pub snr: f64,
    pub capacity: f64,
    pub code_rate: f64,
    pub measured_beta: f64,
    pub net_beta: f64,
    pub mean_iterations: f64,
}

impl ReconciliationSummary {
    fn new(code: &CodeSpec, out: &ReconcileOutcome) -> Self {
        ReconciliationSummary {
            code: code.id.clone(),
            repetition: code.repetition,
            frames: out.frames,
            successful_frames: out.success.iter().filter(|&&s| s).count(),
            unused_blocks: out.unused_blocks,
            frame_error_rate: out.frame_error_rate,
            snr: out.snr,
            capacity: out.capacity,
            code_rate: out.code_rate,
            measured_beta: out.measured_beta,
            net_beta: out.net_beta,
            mean_iterations: out.mean_iterations,
        }
    }
}

/// Bits disclosed on the classical channel during reconciliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leakage {
    pub syndrome_bits_per_frame: usize,
    pub checksum_bits_per_frame: usize,
    pub bits_per_frame: usize,
    pub total_bits: usize,
}

/// Everything a run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub blocks: usize,
    pub disclosed_blocks: usize,
    pub key_blocks: usize,
    pub estimation: EstimationResult,
    pub reconciliation: ReconciliationSummary,
    pub key_rate: KeyRateReport,
    pub reconciled_bits: usize,
    pub key_length: usize,
    pub keys_match: bool,
    pub leakage: Leakage,
    pub notice: Option<String>,
}

/// A finished run: report plus both final keys.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutcome {
    pub report: SimulationReport,
    pub alice_key: Vec<bool>,
    pub bob_key: Vec<bool>,
}

/// Notice emitted when the finite-size rate is not positive.
pub const NO_POSITIVE_RATE: &str = "no positive rate: key length is zero";

/// Runs modulation, channel, estimation on the disclosed blocks,
/// reconciliation, and privacy amplification to the finite-size length.
pub fn simulate(cfg: &RunConfig, exec: Execution) -> Result<SimulationOutcome> {
    let stage = |name| move |e: Error| e.in_stage(name);
    cfg.validate().map_err(stage("config"))?;
    let ch = cfg.channel.model().map_err(stage("config"))?;
    let det = cfg.detector.model().map_err(stage("config"))?;
    let code = {
        let mut c = CodeSpec::load(&cfg.reconciliation.code, cfg.reconciliation.repetition).map_err(stage("code"))?;
        c.max_iterations = cfg.reconciliation.max_iterations;
        c
    };

    let points = sample_blocks(cfg.v_a, cfg.blocks, cfg.seed, exec).map_err(stage("modulation"))?;
    let records = transmit(&points, &ch, &det, cfg.seed, exec).map_err(stage("channel"))?;

    let disclosed = ((cfg.blocks as f64) * cfg.disclosed_fraction).round() as usize;
    let (pe_idx, key_idx) = disclose_indices(cfg.blocks, disclosed, cfg.seed).map_err(stage("estimation"))?;
    let xs: Vec<f64> = pe_idx.iter().flat_map(|&i| points[i].q).collect();
    let ys: Vec<f64> = pe_idx.iter().flat_map(|&i| records[i].y).collect();
    let sample = estimate(&xs, &ys, exec).map_err(stage("estimation"))?;
    let bounds = confidence_bounds(&sample, cfg.epsilon.pe, &det).map_err(stage("estimation"))?;

    let alice: Vec<[f64; 8]> = key_idx.iter().map(|&i| points[i].q).collect();
    let bob: Vec<[f64; 8]> = key_idx.iter().map(|&i| records[i].y).collect();
    if !(sample.t_hat > 0.0 && sample.sigma2_hat > 0.0) {
        return Err(Error::Estimation(format!(
            "estimated slope {} and noise {} admit no reconciliation",
            sample.t_hat, sample.sigma2_hat
        ))
        .in_stage("estimation"));
    }
    let vc = VirtualChannel { slope: sample.t_hat, noise_variance: sample.sigma2_hat, modulation_variance: cfg.v_a };
    let outcome = reconcile(&bob, &alice, &code, &vc, cfg.seed, exec).map_err(stage("reconciliation"))?;
    if outcome.alice_bits != outcome.bob_bits {
        return Err(Error::Invariant("reconciled strings differ on a successful frame".into()).in_stage("reconciliation"));
    }

    let finite = FiniteSize {
        n_total: 8 * cfg.blocks as u64,
        key_fraction: key_idx.len() as f64 / cfg.blocks as f64,
        epsilon_pe: cfg.epsilon.pe,
        epsilon_bar: cfg.epsilon.bar,
        epsilon_pa: cfg.epsilon.pa,
        constants: cfg.delta_constants,
    };
    let mut key_rate =
        finite_rate(cfg.v_a, &bounds, &det, outcome.net_beta, &finite, cfg.series).map_err(stage("key rate"))?;
    key_rate.transmission = ch.transmission;
    key_rate.excess_noise = ch.excess_noise;

    let k = key_rate.k_finite.unwrap_or(0.0);
    let key_length = ((k * finite.n_total as f64).floor() as usize).min(outcome.bob_bits.len());
    let pa_seed: u64 = stream(cfg.seed, Domain::PrivacyAmplification, 1).random();
    let bob_key = privacy_amplification(&outcome.bob_bits, pa_seed, key_length).map_err(stage("privacy amplification"))?;
    let alice_key =
        privacy_amplification(&outcome.alice_bits, pa_seed, key_length).map_err(stage("privacy amplification"))?;
    let keys_match = alice_key == bob_key;
    if !keys_match {
        return Err(Error::Invariant("final keys differ".into()).in_stage("privacy amplification"));
    }

    let leakage = Leakage {
        syndrome_bits_per_frame: code.parity.rows(),
        checksum_bits_per_frame: code.checksum_bits,
        bits_per_frame: outcome.leaked_bits_per_frame,
        total_bits: outcome.leaked_bits_total,
    };
    let report = SimulationReport {
        seed: cfg.seed,
        blocks: cfg.blocks,
        disclosed_blocks: pe_idx.len(),
        key_blocks: key_idx.len(),
        estimation: bounds,
        reconciliation: ReconciliationSummary::new(&code, &outcome),
        key_rate,
        reconciled_bits: outcome.bob_bits.len(),
        key_length,
        keys_match,
        leakage,
        notice: (key_length == 0).then(|| NO_POSITIVE_RATE.to_string()),
    };
    Ok(SimulationOutcome { report, alice_key, bob_key })
}

/// One row of the reconciliation benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconBenchRow {
    pub snr: f64,
    pub capacity: f64,
    pub frames: usize,
    pub frame_error_rate: f64,
    pub code_rate: f64,
    pub measured_beta: f64,
    pub net_beta: f64,
    pub leaked_bits_per_frame: usize,
    pub mean_iterations: f64,
}

/// Reconciles `frames` frames at each SNR of `snr_grid` over a lossless,
/// noiseless-detector channel with `V_A` chosen so that `t²·V_A/σ² = s`.
pub fn recon_bench(code: &CodeSpec, snr_grid: &[f64], frames: usize, seed: u64, exec: Execution) -> Result<Vec<ReconBenchRow>> {
    let det = DetectorModel::ideal();
    let ch = ChannelModel::new(1.0, 0.0, NoiseShape::Gaussian)?;
    let (slope, noise) = ch.quadrature_response(&det, 0);
    snr_grid
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::domain(format!("SNR {s} must be > 0")));
            }
            let v_a = s * noise / (slope * slope);
            let point_seed = seed.wrapping_add(i as u64);
            let points = sample_blocks(v_a, frames * code.blocks_per_frame(), point_seed, exec)?;
            let records = transmit(&points, &ch, &det, point_seed, exec)?;
            let alice: Vec<[f64; 8]> = points.iter().map(|p| p.q).collect();
            let bob: Vec<[f64; 8]> = records.iter().map(|r| r.y).collect();
            let vc = VirtualChannel { slope, noise_variance: noise, modulation_variance: v_a };
            let out = reconcile(&bob, &alice, code, &vc, point_seed, exec)?;
            if out.alice_bits != out.bob_bits {
                return Err(Error::Invariant("reconciled strings differ on a successful frame".into()));
            }
            Ok(ReconBenchRow {
                snr: s,
                capacity: out.capacity,
                frames: out.frames,
                frame_error_rate: out.frame_error_rate,
                code_rate: out.code_rate,
                measured_beta: out.measured_beta,
                net_beta: out.net_beta,
                leaked_bits_per_frame: out.leaked_bits_per_frame,
                mean_iterations: out.mean_iterations,
            })
        })
        .collect()
}
