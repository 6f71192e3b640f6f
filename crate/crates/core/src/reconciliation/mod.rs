//! Reverse reconciliation for the spherical constellation.
//!
//! The decode unit is a *frame*: one LDPC codeword `w` of length `n`,
//! repeated `m` times over `n·m` consecutive quadrature coordinates
//! (coordinate `k` of the frame carries `w[k mod n]`). A frame therefore
//! spans `n·m/8` blocks.
//!
//! For each frame Bob
//!
//! 1. draws `w` uniformly at random,
//! 2. maps each of his blocks `y` to the hypercube point `u` carrying its
//!    eight bits and publishes the [`SideInformation`] of the rotation
//!    `y/‖y‖ ↦ u/‖u‖`,
//! 3. publishes the syndrome `H·w` and a 32-bit checksum of `w`.
//!
//! Alice rotates her own blocks, forms per-coordinate LLRs
//! `2·t·(‖y‖/(2·sqrt 2))·vᵢ/σ²`, sums the `m` repeats of every bit and runs
//! coset belief propagation. A frame succeeds when the decoder converges and
//! the checksum matches; failed frames are discarded.

pub mod capacity;
pub mod decoder;
pub mod ldpc;
pub mod octonion;
pub mod privacy;
pub mod rotation;

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use capacity::{biawgn_capacity, gaussian_capacity};
pub use decoder::{CosetDecoder, DecodeOutcome};
pub use ldpc::{builtin, builtin_id, parse_builtin_id, BuiltinRate, ParityCheck};
pub use octonion::{octonion_multiply, Octonion};
pub use privacy::{checksum, privacy_amplification, CHECKSUM_BITS};
pub use rotation::{apply_rotation, bits_from_signs, map_bits_to_hypercube, rotation_from, SideInformation};

use crate::par::Execution;
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Default cap on belief-propagation iterations.
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Error-correction configuration: LDPC code concatenated with repetition.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub id: String,
    pub parity: Arc<ParityCheck>,
    pub repetition: usize,
    pub max_iterations: usize,
    pub checksum_bits: usize,
}

impl CodeSpec {
    pub fn new(id: impl Into<String>, parity: ParityCheck, repetition: usize) -> Result<Self> {
        if repetition == 0 {
            return Err(Error::usage("repetition factor must be >= 1"));
        }
        if !(parity.cols() * repetition).is_multiple_of(8) {
            return Err(Error::usage(format!(
                "code length {} times repetition {repetition} is not a whole number of blocks",
                parity.cols()
            )));
        }
        if parity.rows() >= parity.cols() {
            return Err(Error::usage("parity-check matrix has no information bits"));
        }
        Ok(CodeSpec {
            id: id.into(),
            parity: Arc::new(parity),
            repetition,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            checksum_bits: CHECKSUM_BITS,
        })
    }

    /// Resolves a built-in identifier such as `peg-r1_2-n4096`, or else reads
    /// a parity-check file.
    pub fn load(id_or_path: &str, repetition: usize) -> Result<Self> {
        let parity = match parse_builtin_id(id_or_path) {
            Some((rate, cols)) => builtin(rate, cols)?,
            None => ParityCheck::load(Path::new(id_or_path))?,
        };
        CodeSpec::new(id_or_path, parity, repetition)
    }

    pub fn code_length(&self) -> usize {
        self.parity.cols()
    }

    /// Key bits per quadrature coordinate, `(1 − rows/cols) / m`.
    pub fn rate(&self) -> f64 {
        self.parity.design_rate() / self.repetition as f64
    }

    pub fn coordinates_per_frame(&self) -> usize {
        self.code_length() * self.repetition
    }

    pub fn blocks_per_frame(&self) -> usize {
        self.coordinates_per_frame() / 8
    }

    /// Bits kept per successful frame before any leakage correction.
    pub fn information_bits(&self) -> usize {
        self.code_length() - self.parity.rows()
    }

    /// Syndrome plus checksum.
    pub fn leaked_bits_per_frame(&self) -> usize {
        self.parity.rows() + self.checksum_bits
    }
}

/// Alice's model of the virtual channel from her data to Bob's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualChannel {
    /// Slope `t` of `y = t·x + z`.
    pub slope: f64,
    /// Noise variance `σ²`.
    pub noise_variance: f64,
    /// Per-coordinate modulation variance `V_A`.
    pub modulation_variance: f64,
}

impl VirtualChannel {
    /// BI-AWGN signal-to-noise ratio `t²·V_A/σ²`.
    pub fn snr(&self) -> f64 {
        self.slope * self.slope * self.modulation_variance / self.noise_variance
    }

    fn validate(&self) -> Result<()> {
        if !(self.slope > 0.0 && self.noise_variance > 0.0 && self.modulation_variance > 0.0) {
            return Err(Error::domain(format!("invalid virtual channel {self:?}")));
        }
        Ok(())
    }
}

/// Everything Bob discloses for one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BobMessage {
    pub side_information: Vec<SideInformation>,
    pub syndrome: Vec<bool>,
    pub checksum: u32,
}

fn checksum_key(seed: u64, frame: usize) -> u64 {
    stream(seed, Domain::Reconciliation, u64::MAX - frame as u64).random()
}

/// Bob's side of one frame: returns his codeword and the public message.
pub fn bob_encode(ys: &[[f64; 8]], code: &CodeSpec, seed: u64, frame: usize) -> Result<(Vec<bool>, BobMessage)> {
    if ys.len() != code.blocks_per_frame() {
        return Err(Error::usage(format!("frame needs {} blocks, got {}", code.blocks_per_frame(), ys.len())));
    }
    let n = code.code_length();
    let mut rng = stream(seed, Domain::Reconciliation, frame as u64);
    let word: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let side_information = ys
        .iter()
        .enumerate()
        .map(|(b, y)| {
            let bits: [bool; 8] = std::array::from_fn(|i| word[(8 * b + i) % n]);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            rotation_from(y, &map_bits_to_hypercube(&bits, norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let syndrome = code.parity.syndrome(&word);
    let checksum = checksum(&word, checksum_key(seed, frame));
    Ok((word, BobMessage { side_information, syndrome, checksum }))
}

/// Per-bit LLRs of one frame, repeats already summed.
pub fn alice_llrs(xs: &[[f64; 8]], msg: &BobMessage, code: &CodeSpec, channel: &VirtualChannel) -> Vec<f64> {
    let n = code.code_length();
    let mut llrs = vec![0.0; n];
    for (b, (x, si)) in xs.iter().zip(&msg.side_information).enumerate() {
        let v = apply_rotation(si, x);
        let amplitude = si.norm_y / (2.0 * std::f64::consts::SQRT_2);
        let scale = 2.0 * channel.slope * amplitude / channel.noise_variance;
        for (i, vi) in v.iter().enumerate() {
            llrs[(8 * b + i) % n] += scale * vi;
        }
    }
    llrs
}

/// Alice's side of one frame. Returns the decoded word when the decoder
/// converged and the checksum matched.
pub fn alice_decode(
    xs: &[[f64; 8]],
    msg: &BobMessage,
    code: &CodeSpec,
    decoder: &CosetDecoder,
    channel: &VirtualChannel,
    seed: u64,
    frame: usize,
) -> (Option<Vec<bool>>, usize) {
    let llrs = alice_llrs(xs, msg, code, channel);
    let out = decoder.decode(&llrs, &msg.syndrome, code.max_iterations);
    let ok = out.converged && checksum(&out.word, checksum_key(seed, frame)) == msg.checksum;
    (ok.then_some(out.word), out.iterations)
}

/// Result of reconciling a run of frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconcileOutcome {
    pub frames: usize,
    /// Blocks beyond the last whole frame, left unused.
    pub unused_blocks: usize,
    pub success: Vec<bool>,
    /// Bob's bits of the successful frames, in frame order.
    pub bob_bits: Vec<bool>,
    /// Alice's decoded bits of the successful frames.
    pub alice_bits: Vec<bool>,
    pub frame_error_rate: f64,
    pub snr: f64,
    pub capacity: f64,
    pub code_rate: f64,
    /// `(1 − FER)·rate / C(s)`, at most 1.
    pub measured_beta: f64,
    /// As `measured_beta` with the checksum bits also charged.
    pub net_beta: f64,
    pub leaked_bits_per_frame: usize,
    pub leaked_bits_total: usize,
    pub mean_iterations: f64,
}

/// Reconciles Bob's measurements with Alice's displacements, frame by frame.
pub fn reconcile(
    bob: &[[f64; 8]],
    alice: &[[f64; 8]],
    code: &CodeSpec,
    channel: &VirtualChannel,
    seed: u64,
    exec: Execution,
) -> Result<ReconcileOutcome> {
    if bob.len() != alice.len() {
        return Err(Error::usage(format!("{} blocks for Bob but {} for Alice", bob.len(), alice.len())));
    }
    channel.validate()?;
    let per_frame = code.blocks_per_frame();
    let frames = bob.len() / per_frame;
    let decoder = CosetDecoder::new(&code.parity);
    let results = exec.map_range(frames, |f| -> Result<_> {
        let range = f * per_frame..(f + 1) * per_frame;
        let (word, msg) = bob_encode(&bob[range.clone()], code, seed, f)?;
        let (decoded, iterations) = alice_decode(&alice[range], &msg, code, &decoder, channel, seed, f);
        Ok((word, decoded, iterations))
    });

    let mut success = Vec::with_capacity(frames);
    let mut bob_bits = Vec::new();
    let mut alice_bits = Vec::new();
    let mut iterations = 0usize;
    for r in results {
        let (word, decoded, it) = r?;
        iterations += it;
        success.push(decoded.is_some());
        if let Some(d) = decoded {
            bob_bits.extend_from_slice(&word);
            alice_bits.extend(d);
        }
    }
    let good = success.iter().filter(|&&s| s).count();
    let frame_error_rate = if frames == 0 { 1.0 } else { 1.0 - good as f64 / frames as f64 };
    let snr = channel.snr();
    let cap = biawgn_capacity(snr);
    let coords = code.coordinates_per_frame() as f64;
    let beta = |bits: f64| {
        if cap > 0.0 {
            ((1.0 - frame_error_rate) * bits / coords / cap).clamp(0.0, 1.0)
        } else {
            0.0
        }
    };
    let info = code.information_bits() as f64;
    Ok(ReconcileOutcome {
        frames,
        unused_blocks: bob.len() - frames * per_frame,
        success,
        bob_bits,
        alice_bits,
        frame_error_rate,
        snr,
        capacity: cap,
        code_rate: code.rate(),
        measured_beta: beta(info),
        net_beta: beta((info - code.checksum_bits as f64).max(0.0)),
        leaked_bits_per_frame: code.leaked_bits_per_frame(),
        leaked_bits_total: frames * code.leaked_bits_per_frame(),
        mean_iterations: if frames == 0 { 0.0 } else { iterations as f64 / frames as f64 },
    })
}
