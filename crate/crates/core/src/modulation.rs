//! Alice's 8-dimensional spherical constellation and the correlation
//! quantities of its entanglement-based description.
//!
//! Four successive coherent states form one block of eight quadrature
//! displacements `q[0..8]`, laid out as `(x₀, p₀, x₁, p₁, x₂, p₂, x₃, p₃)`.
//! Each block is uniform on the sphere `Σ qᵢ² = 8·V_A`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::BLOCKS_PER_STREAM;
use crate::par::Execution;
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Default relative truncation tolerance of the `Z` series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
const SERIES_TERM_CAP: usize = 1_000_000;

/// One block of four coherent states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationPoint {
    pub q: [f64; 8],
    pub block: u64,
}

impl ModulationPoint {
    pub fn norm(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Draws a point uniformly on the sphere of radius `sqrt(8·V_A)`: eight
/// standard normals, normalised.
pub fn sample_sphere_point<R: Rng + ?Sized>(v_a: f64, block: u64, rng: &mut R) -> Result<ModulationPoint> {
    if !(v_a > 0.0 && v_a.is_finite()) {
        return Err(Error::domain(format!("modulation variance {v_a} must be > 0")));
    }
    let radius = (8.0 * v_a).sqrt();
    loop {
        let mut q = [0.0f64; 8];
        for x in q.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            q.iter_mut().for_each(|x| *x *= radius / norm);
            return Ok(ModulationPoint { q, block });
        }
    }
}

/// Draws `count` blocks. Group `g` of [`BLOCKS_PER_STREAM`] blocks uses
/// stream `g` of the modulation domain, so the result does not depend on
/// `exec`.
pub fn sample_blocks(v_a: f64, count: usize, seed: u64, exec: Execution) -> Result<Vec<ModulationPoint>> {
    if !(v_a > 0.0 && v_a.is_finite()) {
        return Err(Error::domain(format!("modulation variance {v_a} must be > 0")));
    }
    let groups = count.div_ceil(BLOCKS_PER_STREAM);
    let parts = exec.map_range(groups, |g| {
        let mut rng = stream(seed, Domain::Modulation, g as u64);
        let start = g * BLOCKS_PER_STREAM;
        let end = (start + BLOCKS_PER_STREAM).min(count);
        (start..end)
            .map(|b| sample_sphere_point(v_a, b as u64, &mut rng).expect("validated variance"))
            .collect::<Vec<_>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Correlation `Z_TMS = sqrt(V_A² + 2·V_A)` of a two-mode squeezed vacuum.
pub fn z_tms(v_a: f64) -> f64 {
    (v_a * v_a + 2.0 * v_a).sqrt()
}

/// Which power base the `Z` series uses.
///
/// The series is `Z = ½·e^(−2V_A)·Σₖ sqrt(k+4)/k! · x^(k+½)`. Expanding the
/// correlation `⟨x_A x_B⟩` of the purification over 4-mode Fock shells gives
/// `x = 4α² = 2·V_A`; [`ZSeries::LiteralVa`] keeps `x = V_A` for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZSeries {
    /// `x = 2·V_A`. Recovers `Z → Z_TMS` for small and large `V_A`.
    #[default]
    FockShell,
    /// `x = V_A`.
    LiteralVa,
}

impl ZSeries {
    fn base(self, v_a: f64) -> f64 {
        match self {
            ZSeries::FockShell => 2.0 * v_a,
            ZSeries::LiteralVa => v_a,
        }
    }
}

/// Sums the `Z` series to relative accuracy `rel_tol`.
///
/// Returns `(Z, terms_used)`. Terms follow the recurrence
/// `t_{k+1} = t_k · x/(k+1) · sqrt((k+5)/(k+4))` in log space; summation stops
/// once the geometric tail bound `t_{k+1} / (1 − r)` (with `r` the current,
/// decreasing term ratio) drops below `rel_tol` times the partial sum.
pub fn z_correlation(v_a: f64, rel_tol: f64, series: ZSeries) -> Result<(f64, usize)> {
    if !(v_a > 0.0 && v_a.is_finite()) {
        return Err(Error::domain(format!("modulation variance {v_a} must be > 0")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::domain("series tolerance must be > 0"));
    }
    let x = series.base(v_a);
    let ln_x = x.ln();
    // ln t₀ = ln(½ · e^(−2V_A) · 2 · x^½)
    let mut ln_term = -2.0 * v_a + 0.5 * ln_x;
    let mut sum = 0.0;
    for k in 0..SERIES_TERM_CAP {
        let term = ln_term.exp();
        sum += term;
        let kf = k as f64;
        let ln_ratio = ln_x - (kf + 1.0).ln() + 0.5 * ((kf + 5.0) / (kf + 4.0)).ln();
        let ratio = ln_ratio.exp();
        ln_term += ln_ratio;
        // Ratios decrease monotonically once k + 1 > x, so the tail is
        // bounded by a geometric series.
        if ratio < 1.0 && kf + 1.0 > x {
            let tail = ln_term.exp() / (1.0 - ratio);
            if tail <= rel_tol * sum {
                return Ok((sum, k + 1));
            }
        }
    }
    Err(Error::Numeric(format!(
        "Z series did not converge in {SERIES_TERM_CAP} terms for V_A = {v_a}"
    )))
}

/// Correlation summary of the modulation and its Gaussian-equivalent penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSummary {
    pub v_a: f64,
    pub z: f64,
    pub z_tms: f64,
    /// `F = (Z_TMS / Z)²`.
    pub f: f64,
    /// Equivalent excess noise `(F − 1)·V_A`.
    pub delta_xi: f64,
    pub truncation_terms: usize,
    pub truncation_bound: f64,
    pub series: ZSeries,
}

impl CorrelationSummary {
    pub fn compute(v_a: f64, series: ZSeries) -> Result<Self> {
        let (z, terms) = z_correlation(v_a, DEFAULT_SERIES_TOL, series)?;
        Ok(Self::from_z(v_a, z, terms, series))
    }

    /// Builds the summary from an externally supplied `Z`.
    pub fn from_z(v_a: f64, z: f64, truncation_terms: usize, series: ZSeries) -> Self {
        let z_tms = z_tms(v_a);
        let f = (z_tms / z).powi(2);
        CorrelationSummary {
            v_a,
            z,
            z_tms,
            f,
            delta_xi: (f - 1.0) * v_a,
            truncation_terms,
            truncation_bound: DEFAULT_SERIES_TOL,
            series,
        }
    }
}

/// Gaussian-equivalent channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalentChannel {
    /// `T_G = T / F`.
    pub t_g: f64,
    /// `ξ_G = F·ξ + (F − 1)·V_A`.
    pub xi_g: f64,
    pub summary: CorrelationSummary,
}

/// Maps a physical channel `(T, ξ)` onto the Gaussian-modulation channel whose
/// Holevo bound covers the spherical modulation.
pub fn gaussian_equivalent_channel(v_a: f64, t: f64, xi: f64, series: ZSeries) -> Result<EquivalentChannel> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("transmission {t} not in (0, 1]")));
    }
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("excess noise {xi} must be >= 0")));
    }
    let summary = CorrelationSummary::compute(v_a, series)?;
    Ok(equivalent_from_summary(t, xi, summary))
}

pub fn equivalent_from_summary(t: f64, xi: f64, summary: CorrelationSummary) -> EquivalentChannel {
    let f = summary.f;
    EquivalentChannel {
        t_g: t / f,
        xi_g: f * xi + (f - 1.0) * summary.v_a,
        summary,
    }
}
