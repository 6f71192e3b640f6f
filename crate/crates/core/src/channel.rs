//! Linear quantum channel and heterodyne detection.
//!
//! Each quadrature is transformed as `X_out = g_X·X_in + B_X` with added noise
//! uncorrelated with the input. After heterodyne detection with efficiency
//! `η` and electronic noise `v_el`, one quadrature sample reads
//!
//! ```text
//! y = sqrt(η·g²/2)·q + z,    Var(z) = 1 + η·g²·ξ/2 + v_el
//! ```
//!
//! where `g² = T` unless asymmetric gains are configured. The noise `z` can be
//! Gaussian, uniform or Laplace; non-Gaussian shapes are variance matched.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::gaussian::DetectorModel;
use crate::modulation::ModulationPoint;
use crate::par::Execution;
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Default fibre attenuation.
pub const DEFAULT_LOSS_DB_PER_KM: f64 = 0.2;

/// Blocks per random stream when simulating in batches.
pub const BLOCKS_PER_STREAM: usize = 4096;

/// Fibre transmission `10^(−loss·d/10)`.
pub fn distance_to_transmission(distance_km: f64, loss_db_per_km: f64) -> f64 {
    10f64.powf(-loss_db_per_km * distance_km / 10.0)
}

/// Inverse of [`distance_to_transmission`].
pub fn transmission_to_distance(t: f64, loss_db_per_km: f64) -> f64 {
    -10.0 * t.log10() / loss_db_per_km
}

/// Distribution of the added noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseShape {
    #[default]
    Gaussian,
    /// Uniform on `[−sqrt(3)·σ, sqrt(3)·σ]`.
    Uniform,
    /// Laplace with scale `σ / sqrt(2)`.
    Laplace,
}

impl NoiseShape {
    /// Draws a centred sample with standard deviation `sigma`.
    pub fn sample<R: Rng + ?Sized>(self, sigma: f64, rng: &mut R) -> f64 {
        match self {
            NoiseShape::Gaussian => sigma * rng.sample::<f64, _>(StandardNormal),
            NoiseShape::Uniform => {
                let half = 3f64.sqrt() * sigma;
                rng.random_range(-half..half)
            }
            NoiseShape::Laplace => {
                let scale = sigma / 2f64.sqrt();
                // Inverse CDF on (−½, ½).
                let u: f64 = rng.random::<f64>() - 0.5;
                let mag = 1.0 - 2.0 * u.abs();
                -scale * u.signum() * mag.max(f64::MIN_POSITIVE).ln()
            }
        }
    }
}

/// Linear channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    /// Transmission `T ∈ (0, 1]`.
    pub transmission: f64,
    /// Excess noise referred to the channel input (SNU).
    pub excess_noise: f64,
    #[serde(default)]
    pub noise_shape: NoiseShape,
    /// Amplitude gain on `x` quadratures; `sqrt(T)` when absent.
    #[serde(default)]
    pub gain_x: Option<f64>,
    /// Amplitude gain on `p` quadratures; `sqrt(T)` when absent.
    #[serde(default)]
    pub gain_p: Option<f64>,
}

impl ChannelModel {
    pub fn new(transmission: f64, excess_noise: f64, noise_shape: NoiseShape) -> Result<Self> {
        let ch = ChannelModel { transmission, excess_noise, noise_shape, gain_x: None, gain_p: None };
        ch.validate()?;
        Ok(ch)
    }

    /// Channel with independent amplitude gains on the two quadratures.
    pub fn asymmetric(gain_x: f64, gain_p: f64, excess_noise: f64, noise_shape: NoiseShape) -> Result<Self> {
        let t = 0.5 * (gain_x * gain_x + gain_p * gain_p);
        let ch = ChannelModel {
            transmission: t,
            excess_noise,
            noise_shape,
            gain_x: Some(gain_x),
            gain_p: Some(gain_p),
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.transmission > 0.0 && self.transmission <= 1.0) {
            return Err(Error::domain(format!("transmission {} not in (0, 1]", self.transmission)));
        }
        if !(self.excess_noise >= 0.0 && self.excess_noise.is_finite()) {
            return Err(Error::domain(format!("excess noise {} must be >= 0", self.excess_noise)));
        }
        for g in [self.gain_x, self.gain_p].into_iter().flatten() {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::domain(format!("quadrature gain {g} not in (0, 1]")));
            }
        }
        Ok(())
    }

    /// Power transmission of the `x` (`quadrature = 0`) or `p` (`1`) quadrature.
    pub fn quadrature_transmission(&self, quadrature: usize) -> f64 {
        let gain = if quadrature.is_multiple_of(2) { self.gain_x } else { self.gain_p };
        gain.map_or(self.transmission, |g| g * g)
    }

    /// Signal slope `sqrt(η·T_q/2)` and noise variance for one quadrature.
    pub fn quadrature_response(&self, det: &DetectorModel, quadrature: usize) -> (f64, f64) {
        let t = self.quadrature_transmission(quadrature);
        let slope = (det.eta * t / 2.0).sqrt();
        let noise = 1.0 + det.eta * t * self.excess_noise / 2.0 + det.v_el;
        (slope, noise)
    }
}

/// Bob's heterodyne outcomes for one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub y: [f64; 8],
    pub block: u64,
}

impl MeasurementRecord {
    pub fn norm(&self) -> f64 {
        self.y.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Passes one block through the channel.
pub fn transmit_block<R: Rng + ?Sized>(
    point: &ModulationPoint,
    ch: &ChannelModel,
    det: &DetectorModel,
    rng: &mut R,
) -> MeasurementRecord {
    let mut y = [0.0; 8];
    for (i, out) in y.iter_mut().enumerate() {
        let (slope, noise) = ch.quadrature_response(det, i);
        *out = slope * point.q[i] + ch.noise_shape.sample(noise.sqrt(), rng);
    }
    MeasurementRecord { y, block: point.block }
}

/// Simulates the quantum phase for a sequence of blocks.
///
/// Blocks are processed in groups of [`BLOCKS_PER_STREAM`]; group `g` draws
/// from stream `g` of the channel domain under `seed`, so the output does not
/// depend on `exec`.
pub fn transmit(
    points: &[ModulationPoint],
    ch: &ChannelModel,
    det: &DetectorModel,
    seed: u64,
    exec: Execution,
) -> Result<Vec<MeasurementRecord>> {
    ch.validate()?;
    det.validate()?;
    Ok(exec.flat_map_chunks(points, BLOCKS_PER_STREAM, |group, chunk| {
        let mut rng = stream(seed, Domain::Channel, group as u64);
        chunk.iter().map(|p| transmit_block(p, ch, det, &mut rng)).collect()
    }))
}

/// Signal-to-noise ratio of one quadrature sample,
/// `(η·T·V_A/2) / (1 + η·T·ξ/2 + v_el)`.
pub fn effective_snr(v_a: f64, ch: &ChannelModel, det: &DetectorModel) -> f64 {
    let t = det.eta * ch.transmission;
    (t * v_a / 2.0) / (1.0 + t * ch.excess_noise / 2.0 + det.v_el)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::sample_sphere_point;
    use approx::assert_relative_eq;

    fn moments(xs: impl Iterator<Item = f64>) -> (f64, f64, f64, usize) {
        let (mut n, mut s, mut s2, mut s4) = (0usize, 0.0, 0.0, 0.0);
        for x in xs {
            n += 1;
            s += x;
            s2 += x * x;
            s4 += x.powi(4);
        }
        let nf = n as f64;
        let mean = s / nf;
        let var = s2 / nf - mean * mean;
        (mean, var, s4 / nf, n)
    }

    fn points(v_a: f64, n: usize, seed: u64) -> Vec<ModulationPoint> {
        let mut rng = stream(seed, Domain::Modulation, 0);
        (0..n).map(|i| sample_sphere_point(v_a, i as u64, &mut rng).unwrap()).collect()
    }

    #[test]
    fn distance_conversions() {
        assert_eq!(distance_to_transmission(0.0, 0.2), 1.0);
        assert_relative_eq!(distance_to_transmission(50.0, 0.2), 0.1, max_relative = 1e-14);
        assert_relative_eq!(distance_to_transmission(25.0, 0.2), 10f64.powf(-0.5), max_relative = 1e-14);
        assert_relative_eq!(transmission_to_distance(0.1, 0.2), 50.0, max_relative = 1e-12);
    }

    #[test]
    fn snr_values() {
        let det = DetectorModel::ideal();
        let ch = ChannelModel::new(1.0, 0.0, NoiseShape::Gaussian).unwrap();
        assert_eq!(effective_snr(0.0, &ch, &det), 0.0);
        assert_relative_eq!(effective_snr(2.0, &ch, &det), 1.0);
    }

    #[test]
    fn shot_noise_floor() {
        let det = DetectorModel::ideal();
        let ch = ChannelModel::new(1.0, 0.0, NoiseShape::Gaussian).unwrap();
        let zeros: Vec<_> = (0..125_000).map(|i| ModulationPoint { q: [0.0; 8], block: i }).collect();
        let out = transmit(&zeros, &ch, &det, 3, Execution::Parallel).unwrap();
        let (mean, var, m4, n) = moments(out.iter().flat_map(|r| r.y));
        let se = ((m4 - var * var) / n as f64).sqrt();
        assert!(mean.abs() < 4.0 * (var / n as f64).sqrt());
        assert!((var - 1.0).abs() < 4.0 * se, "var = {var}");
    }

    #[test]
    fn bob_variance_matches_closed_form() {
        let det = DetectorModel { eta: 0.6, v_el: 0.0, trusted: true };
        let ch = ChannelModel::new(0.5, 0.02, NoiseShape::Gaussian).unwrap();
        let pts = points(1.0, 125_000, 4);
        let out = transmit(&pts, &ch, &det, 5, Execution::Parallel).unwrap();
        let (_, var, m4, n) = moments(out.iter().flat_map(|r| r.y));
        let expected = 0.6 * 0.5 * 1.02 / 2.0 + 1.0;
        let se = ((m4 - var * var) / n as f64).sqrt();
        assert!((var - expected).abs() < 4.0 * se, "{var} vs {expected}");
    }

    #[test]
    fn heterodyne_of_gamma_bob_mode() {
        // Ideal detector: per-quadrature variance (b + 1)/2, b = 1 + T·V_A + T·ξ.
        let det = DetectorModel::ideal();
        let (t, xi, v_a) = (0.3, 0.05, 2.0);
        let ch = ChannelModel::new(t, xi, NoiseShape::Gaussian).unwrap();
        let out = transmit(&points(v_a, 125_000, 6), &ch, &det, 7, Execution::Parallel).unwrap();
        let (_, var, m4, n) = moments(out.iter().flat_map(|r| r.y));
        let b = 1.0 + t * v_a + t * xi;
        let se = ((m4 - var * var) / n as f64).sqrt();
        assert!((var - (b + 1.0) / 2.0).abs() < 4.0 * se);
    }

    #[test]
    fn noise_shapes_are_moment_matched_and_independent_of_input() {
        let det = DetectorModel { eta: 0.8, v_el: 0.01, trusted: true };
        let pts = points(1.0, 125_000, 8);
        let mut variances = Vec::new();
        for shape in [NoiseShape::Gaussian, NoiseShape::Uniform, NoiseShape::Laplace] {
            let ch = ChannelModel::new(0.4, 0.1, shape).unwrap();
            let out = transmit(&pts, &ch, &det, 9, Execution::Parallel).unwrap();
            let (slope, noise) = ch.quadrature_response(&det, 0);
            let residuals: Vec<f64> = pts
                .iter()
                .zip(&out)
                .flat_map(|(p, r)| (0..8).map(move |i| r.y[i] - slope * p.q[i]))
                .collect();
            let (mean, var, m4, n) = moments(residuals.iter().copied());
            let nf = n as f64;
            assert!(mean.abs() < 4.0 * (noise / nf).sqrt(), "{shape:?} mean {mean}");
            let se = ((m4 - var * var) / nf).sqrt();
            assert!((var - noise).abs() < 4.0 * se, "{shape:?} var {var} vs {noise}");
            // Input/noise covariance.
            let cov: f64 = pts
                .iter()
                .flat_map(|p| p.q)
                .zip(residuals.iter())
                .map(|(q, z)| q * z)
                .sum::<f64>()
                / nf;
            assert!(cov.abs() < 4.0 * (noise * 1.0 / nf).sqrt(), "{shape:?} cov {cov}");
            variances.push(var);
        }
        assert!((variances[0] - variances[1]).abs() < 0.01);
    }

    #[test]
    fn asymmetric_gains() {
        let det = DetectorModel::ideal();
        let ch = ChannelModel::asymmetric(0.8, 0.5, 0.0, NoiseShape::Gaussian).unwrap();
        let v_a = 1.5;
        let out = transmit(&points(v_a, 125_000, 10), &ch, &det, 11, Execution::Parallel).unwrap();
        for (quad, gain) in [(0usize, 0.8f64), (1, 0.5)] {
            let (_, var, m4, n) =
                moments(out.iter().flat_map(|r| (0..4).map(move |k| r.y[2 * k + quad])));
            let expected = gain * gain * v_a / 2.0 + 1.0;
            let se = ((m4 - var * var) / n as f64).sqrt();
            assert!((var - expected).abs() < 4.0 * se, "quad {quad}: {var} vs {expected}");
        }
    }

    #[test]
    fn transmit_is_execution_independent() {
        let det = DetectorModel { eta: 0.6, v_el: 0.0, trusted: true };
        let ch = ChannelModel::new(0.1, 0.01, NoiseShape::Laplace).unwrap();
        let pts = points(1.0, 10_000, 12);
        let a = transmit(&pts, &ch, &det, 13, Execution::Sequential).unwrap();
        let b = transmit(&pts, &ch, &det, 13, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_channels_rejected() {
        assert!(ChannelModel::new(0.0, 0.0, NoiseShape::Gaussian).is_err());
        assert!(ChannelModel::new(1.1, 0.0, NoiseShape::Gaussian).is_err());
        assert!(ChannelModel::new(0.5, -0.1, NoiseShape::Gaussian).is_err());
    }
}
