//! Parameter estimation from disclosed samples.
//!
//! The disclosed pairs follow `y = t·x + z` with `t = sqrt(η·T/2)` and
//! `Var(z) = σ² = 1 + η·T·ξ/2 + v_el`. Confidence intervals are Gaussian
//! quantile intervals at two-sided level `ε_PE`:
//!
//! ```text
//! t   ∈ t̂ ∓ z_ε · sqrt(σ̂² / Σx²)
//! σ²  ∈ σ̂² · (1 ∓ z_ε · sqrt(2/n))
//! ```
//!
//! The worst-case channel takes `T_min` from the lower slope bound and
//! `ξ_max` from the upper variance bound evaluated at `T_min`.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::gaussian::DetectorModel;
use crate::par::Execution;
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Sufficient statistics of a disclosed sample set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleEstimate {
    /// `Σxy / Σx²`.
    pub t_hat: f64,
    /// `(1/n)·Σ(y − t̂x)²`.
    pub sigma2_hat: f64,
    pub n_samples: u64,
    pub sum_x2: f64,
}

impl SampleEstimate {
    /// Statistics a sample of size `n` would have if every estimate landed on
    /// its expectation. Used for finite-size analysis at block lengths far
    /// beyond what can be simulated.
    pub fn expected(v_a: f64, channel_t: f64, excess_noise: f64, det: &DetectorModel, n: u64) -> Self {
        let t = (det.eta * channel_t / 2.0).sqrt();
        SampleEstimate {
            t_hat: t,
            sigma2_hat: 1.0 + det.eta * channel_t * excess_noise / 2.0 + det.v_el,
            n_samples: n,
            sum_x2: n as f64 * v_a,
        }
    }
}

/// Point estimates and worst-case channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub t_hat: f64,
    pub sigma2_hat: f64,
    pub n_samples: u64,
    pub sum_x2: f64,
    pub t_low: f64,
    pub t_high: f64,
    pub sigma2_low: f64,
    pub sigma2_high: f64,
    /// Point estimate of the channel transmission, `2·t̂²/η`.
    pub transmission_hat: f64,
    /// Point estimate of the excess noise (may be negative).
    pub xi_hat: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub epsilon_pe: f64,
    /// Normal quantile exceeded with probability `ε_PE / 2`.
    pub z_quantile: f64,
    /// Set when the bounds allow a vanishing transmission.
    pub inconclusive: bool,
}

/// Regression of `ys` on `xs` through the origin.
pub fn estimate(xs: &[f64], ys: &[f64], exec: Execution) -> Result<SampleEstimate> {
    if xs.len() != ys.len() {
        return Err(Error::usage(format!("{} x samples but {} y samples", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::Estimation(format!("need at least 2 samples, got {n}")));
    }
    let pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let (sxx, sxy) = exec.reduce_slice(
        &pairs,
        (0.0, 0.0),
        |(a, b), &(x, y)| (a + x * x, b + x * y),
        |(a, b), (c, d)| (a + c, b + d),
    );
    if !(sxx > 0.0) {
        return Err(Error::Estimation("all disclosed x samples are zero".into()));
    }
    let t_hat = sxy / sxx;
    let rss = exec.reduce_slice(
        &pairs,
        0.0,
        |acc, &(x, y)| {
            let r = y - t_hat * x;
            acc + r * r
        },
        |a, b| a + b,
    );
    Ok(SampleEstimate { t_hat, sigma2_hat: rss / n as f64, n_samples: n as u64, sum_x2: sxx })
}

/// `z` such that a standard normal exceeds it with probability `ε/2`.
pub fn z_quantile(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::domain(format!("epsilon {epsilon} not in (0, 1]")));
    }
    let normal = Normal::standard();
    Ok((-normal.inverse_cdf(epsilon / 2.0)).max(0.0))
}

/// Worst-case `(T_min, ξ_max)` compatible with `est` except with probability
/// `epsilon_pe`.
pub fn confidence_bounds(est: &SampleEstimate, epsilon_pe: f64, det: &DetectorModel) -> Result<EstimationResult> {
    det.validate()?;
    if !(epsilon_pe > 0.0 && epsilon_pe <= 1.0) {
        return Err(Error::domain(format!("epsilon_PE {epsilon_pe} not in (0, 1]")));
    }
    if est.n_samples < 2 || !(est.sum_x2 > 0.0) {
        return Err(Error::Estimation("estimate has no usable samples".into()));
    }
    let z = z_quantile(epsilon_pe)?;
    let n = est.n_samples as f64;
    let t_half = z * (est.sigma2_hat / est.sum_x2).sqrt();
    let s_half = z * (2.0 / n).sqrt();
    let t_low = est.t_hat.abs() - t_half;
    let t_high = est.t_hat.abs() + t_half;
    let sigma2_low = (est.sigma2_hat * (1.0 - s_half)).max(0.0);
    let sigma2_high = est.sigma2_hat * (1.0 + s_half);

    let to_transmission = |t: f64| 2.0 * t * t / det.eta;
    let to_xi = |sigma2: f64, transmission: f64| 2.0 * (sigma2 - 1.0 - det.v_el) / (det.eta * transmission);

    let transmission_hat = to_transmission(est.t_hat);
    let inconclusive = t_low <= 0.0;
    let t_min = if inconclusive { 0.0 } else { to_transmission(t_low).min(1.0) };
    let t_max = to_transmission(t_high).min(1.0);
    let xi_hat = if transmission_hat > 0.0 { to_xi(est.sigma2_hat, transmission_hat) } else { f64::INFINITY };
    let xi_max = if inconclusive { f64::INFINITY } else { to_xi(sigma2_high, t_min).max(0.0) };
    let xi_min = to_xi(sigma2_low, t_max).max(0.0);

    Ok(EstimationResult {
        t_hat: est.t_hat,
        sigma2_hat: est.sigma2_hat,
        n_samples: est.n_samples,
        sum_x2: est.sum_x2,
        t_low: t_low.max(0.0),
        t_high,
        sigma2_low,
        sigma2_high,
        transmission_hat,
        xi_hat,
        t_min,
        t_max,
        xi_min,
        xi_max,
        epsilon_pe,
        z_quantile: z,
        inconclusive,
    })
}

/// Splits `total` sample indices into a disclosed set of size `disclosed` and
/// the remainder, by seeded uniform subsampling. Both lists are sorted.
pub fn disclose_indices(total: usize, disclosed: usize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if disclosed > total {
        return Err(Error::usage(format!("cannot disclose {disclosed} of {total} samples")));
    }
    let mut rng = stream(seed, Domain::Subsampling, 0);
    let mut picked = sample(&mut rng, total, disclosed).into_vec();
    picked.sort_unstable();
    let mut mask = vec![false; total];
    for &i in &picked {
        mask[i] = true;
    }
    let kept = (0..total).filter(|&i| !mask[i]).collect();
    Ok((picked, kept))
}
