//! Syndrome-constrained belief propagation.
//!
//! Sum-product decoding with a flooding schedule. The target is the coset
//! `{x : H·x = s}`: a check node whose syndrome bit is set flips the sign of
//! every message it sends. LLRs are `ln P(0)/P(1)`.

use super::ldpc::ParityCheck;

const LLR_CLAMP: f64 = 40.0;
const TANH_CLAMP: f64 = 1.0 - 1e-15;

/// Result of one decoding attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub word: Vec<bool>,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-code decoder tables. Immutable and shareable across threads; each
/// call to [`CosetDecoder::decode`] allocates its own message buffers.
#[derive(Debug, Clone)]
pub struct CosetDecoder {
    /// Edge ranges per check, in check-major order.
    check_start: Vec<usize>,
    /// Variable of each edge.
    edge_var: Vec<u32>,
    /// Edges of each variable.
    var_edges: Vec<Vec<u32>>,
}

impl CosetDecoder {
    pub fn new(h: &ParityCheck) -> Self {
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut var_edges = vec![Vec::new(); h.cols()];
        for r in 0..h.rows() {
            check_start.push(edge_var.len());
            for &c in h.row(r) {
                var_edges[c as usize].push(edge_var.len() as u32);
                edge_var.push(c);
            }
        }
        check_start.push(edge_var.len());
        CosetDecoder { check_start, edge_var, var_edges }
    }

    pub fn code_length(&self) -> usize {
        self.var_edges.len()
    }

    fn syndrome_matches(&self, word: &[bool], syndrome: &[bool]) -> bool {
        (0..syndrome.len()).all(|r| {
            let parity = self.edge_var[self.check_start[r]..self.check_start[r + 1]]
                .iter()
                .fold(false, |acc, &v| acc ^ word[v as usize]);
            parity == syndrome[r]
        })
    }

    /// Decodes channel LLRs toward the coset of `syndrome`, stopping as soon
    /// as the hard decision satisfies every check.
    pub fn decode(&self, llrs: &[f64], syndrome: &[bool], max_iterations: usize) -> DecodeOutcome {
        assert_eq!(llrs.len(), self.code_length(), "LLR count must match code length");
        assert_eq!(syndrome.len() + 1, self.check_start.len(), "syndrome length must match rows");
        let channel: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
        let mut word: Vec<bool> = channel.iter().map(|&l| l < 0.0).collect();
        if self.syndrome_matches(&word, syndrome) {
            return DecodeOutcome { word, iterations: 0, converged: true };
        }

        let edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v as usize]).collect();
        let mut c2v = vec![0.0f64; edges];
        let mut prefix = Vec::new();

        for iteration in 1..=max_iterations {
            // Check-node update.
            for (r, &flip) in syndrome.iter().enumerate() {
                let (lo, hi) = (self.check_start[r], self.check_start[r + 1]);
                let deg = hi - lo;
                prefix.clear();
                let mut acc = 1.0;
                for &m in &v2c[lo..hi] {
                    prefix.push(acc);
                    acc *= (0.5 * m).tanh();
                }
                let sign = if flip { -1.0 } else { 1.0 };
                let mut suffix = 1.0;
                for k in (0..deg).rev() {
                    let prod = (prefix[k] * suffix).clamp(-TANH_CLAMP, TANH_CLAMP);
                    c2v[lo + k] = sign * 2.0 * prod.atanh();
                    suffix *= (0.5 * v2c[lo + k]).tanh();
                }
            }
            // Variable-node update and hard decision.
            for (v, var_edges) in self.var_edges.iter().enumerate() {
                let total = channel[v] + var_edges.iter().map(|&e| c2v[e as usize]).sum::<f64>();
                word[v] = total < 0.0;
                for &e in var_edges {
                    v2c[e as usize] = (total - c2v[e as usize]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            if self.syndrome_matches(&word, syndrome) {
                return DecodeOutcome { word, iterations: iteration, converged: true };
            }
        }
        DecodeOutcome { word, iterations: max_iterations, converged: false }
    }
}
