//! Gaussian-state algebra: covariance matrices, symplectic spectra, von
//! Neumann entropies and the Holevo bound for heterodyne detection.
//!
//! Covariance matrices use the quadrature ordering `(x₁, p₁, x₂, p₂, …)` and
//! the symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]`. Eve is assumed to hold the
//! purification of Alice and Bob's joint state, so `S(E) = S(AB)` and, after
//! Bob's heterodyne measurement, `S(E|y)` equals the entropy of the remaining
//! trusted modes conditioned on `y`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::modulation::z_tms;
use crate::{Error, Result};

/// Slack allowed below the Heisenberg bound before a matrix is rejected.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Two-mode covariance matrix in standard form
/// `[[a·I₂, c·σ_z], [c·σ_z, b·I₂]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeCov {
    /// Alice-mode quadrature variance (SNU).
    pub a: f64,
    /// Bob-mode quadrature variance (SNU).
    pub b: f64,
    /// Quadrature correlation (SNU).
    pub c: f64,
}

impl TwoModeCov {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::domain(format!("non-finite covariance entries ({a}, {b}, {c})")));
        }
        if a < 1.0 - PHYSICALITY_TOL || b < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Physicality(format!(
                "mode variances ({a}, {b}) below the vacuum level"
            )));
        }
        Ok(TwoModeCov { a, b, c })
    }

    /// Symplectic eigenvalues `(ν₁, ν₂)` with `ν₁ ≥ ν₂`.
    ///
    /// `ν²` are the roots of `x² − Δx + D` with `Δ = a² + b² − 2c²` and
    /// `D = (ab − c²)²`. The smaller root is taken as `D / ν₁²` to avoid
    /// cancellation.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        let TwoModeCov { a, b, c } = *self;
        let delta = a * a + b * b - 2.0 * c * c;
        let det = (a * b - c * c).powi(2);
        let disc = (delta * delta - 4.0 * det).max(0.0);
        let large_sq = 0.5 * (delta + disc.sqrt());
        if large_sq <= 0.0 {
            return Err(Error::Physicality(format!("degenerate spectrum for {self:?}")));
        }
        let small_sq = det / large_sq;
        let (nu1, nu2) = (large_sq.sqrt(), small_sq.sqrt());
        if nu2 < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Physicality(format!(
                "symplectic eigenvalue {nu2} < 1 for {self:?}"
            )));
        }
        Ok((nu1, nu2))
    }

    /// Dense 4×4 matrix in `(x_A, p_A, x_B, p_B)` ordering.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let TwoModeCov { a, b, c } = *self;
        DMatrix::from_row_slice(
            4,
            4,
            &[
                a, 0.0, c, 0.0, //
                0.0, a, 0.0, -c, //
                c, 0.0, b, 0.0, //
                0.0, -c, 0.0, b,
            ],
        )
    }

    /// Entropy-generating conditional variance of Alice's mode after Bob's
    /// heterodyne: `a − c² / (b + 1)`.
    pub fn alice_given_heterodyne(&self) -> f64 {
        self.a - self.c * self.c / (self.b + 1.0)
    }
}

/// Detector imperfections on Bob's side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    /// Quantum efficiency in `(0, 1]`.
    pub eta: f64,
    /// Electronic noise variance per heterodyne output (SNU).
    pub v_el: f64,
    /// When true the detector noise is not attributed to Eve.
    pub trusted: bool,
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel::ideal()
    }
}

impl DetectorModel {
    pub fn new(eta: f64, v_el: f64, trusted: bool) -> Result<Self> {
        let det = DetectorModel { eta, v_el, trusted };
        det.validate()?;
        Ok(det)
    }

    /// Unit efficiency, no electronic noise.
    pub fn ideal() -> Self {
        DetectorModel { eta: 1.0, v_el: 0.0, trusted: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::domain(format!("detector efficiency {} not in (0, 1]", self.eta)));
        }
        if !(self.v_el >= 0.0 && self.v_el.is_finite()) {
            return Err(Error::domain(format!("electronic noise {} must be >= 0", self.v_el)));
        }
        Ok(())
    }
}

/// Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue `ν`.
pub fn g_entropy(nu: f64) -> Result<f64> {
    if !nu.is_finite() || nu < 1.0 - PHYSICALITY_TOL {
        return Err(Error::domain(format!("symplectic eigenvalue {nu} < 1")));
    }
    let nu = nu.max(1.0);
    let plus = 0.5 * (nu + 1.0);
    let minus = 0.5 * (nu - 1.0);
    // plus·log₂(plus) − minus·log₂(minus), rearranged to avoid cancellation
    // between two large terms.
    let tail = if minus > 0.0 {
        minus * (1.0 / minus).ln_1p() / std::f64::consts::LN_2
    } else {
        0.0
    };
    Ok(plus.log2() + tail)
}

fn entropy_sum(nus: &[f64]) -> Result<f64> {
    nus.iter().try_fold(0.0, |acc, &nu| Ok(acc + g_entropy(nu)?))
}

/// Symplectic form `⊕ [[0, 1], [−1, 0]]` on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic spectrum of an `n`-mode covariance matrix, sorted descending.
///
/// The squared eigenvalues are the (doubly degenerate) eigenvalues of the
/// symmetric matrix `Γ^½ Ωᵀ Γ Ω Γ^½`.
pub fn symplectic_spectrum(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || cov.ncols() != dim {
        return Err(Error::usage(format!("covariance matrix must be 2n×2n, got {}×{}", dim, cov.ncols())));
    }
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::Physicality("covariance matrix is not positive definite".into()));
    }
    let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let omega = symplectic_form(dim / 2);
    let inner = &root * omega.transpose() * &sym * &omega * &root;
    let inner = (&inner + inner.transpose()) * 0.5;
    let mut sq: Vec<f64> = SymmetricEigen::new(inner).eigenvalues.iter().copied().collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    let nus: Vec<f64> = sq
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect();
    if let Some(&min) = nus.last() {
        if min < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Physicality(format!("symplectic eigenvalue {min} < 1")));
        }
    }
    Ok(nus)
}

/// Covariance of the modes in `keep` conditioned on a heterodyne measurement
/// of mode `measured`: `Γ_X − C (Γ_B + I)⁻¹ Cᵀ`.
pub fn condition_on_heterodyne(cov: &DMatrix<f64>, measured: usize, keep: &[usize]) -> DMatrix<f64> {
    let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let b_idx = [2 * measured, 2 * measured + 1];
    let k = idx.len();
    let gamma_x = DMatrix::from_fn(k, k, |i, j| cov[(idx[i], idx[j])]);
    let gamma_b = DMatrix::from_fn(2, 2, |i, j| cov[(b_idx[i], b_idx[j])]);
    let cross = DMatrix::from_fn(k, 2, |i, j| cov[(idx[i], b_idx[j])]);
    let shifted = gamma_b + DMatrix::identity(2, 2);
    let inv = shifted
        .try_inverse()
        .expect("heterodyne-shifted block is positive definite");
    gamma_x - &cross * inv * cross.transpose()
}

/// Holevo information `χ(y;E)` in bits per mode between Bob's heterodyne
/// outcome and Eve, for Gaussian modulation variance `v_a` through a channel
/// with transmission `t_g` and input-referred excess noise `xi_g`.
///
/// The state is the two-mode squeezed vacuum with `a = V_A + 1`,
/// `b = 1 + T_G·V_A + T_G·ξ_G` and `c = sqrt(T_G)·Z_TMS(V_A)`.
///
/// * Untrusted detector: efficiency and electronic noise are absorbed into the
///   channel, `T ← η·T_G` and `ξ ← ξ_G + 2·v_el / (η·T_G)`.
/// * Trusted detector: Bob's mode passes a beamsplitter of transmittance `η`
///   whose other port carries half of an EPR pair of variance
///   `1 + 2·v_el / (1 − η)`; both ancilla modes are conditioned on together
///   with Alice's.
pub fn holevo_bound(v_a: f64, t_g: f64, xi_g: f64, det: &DetectorModel) -> Result<f64> {
    if !(v_a >= 0.0 && v_a.is_finite()) {
        return Err(Error::domain(format!("modulation variance {v_a} must be >= 0")));
    }
    if !(t_g > 0.0 && t_g <= 1.0 + PHYSICALITY_TOL) {
        return Err(Error::domain(format!("transmission {t_g} not in (0, 1]")));
    }
    if !xi_g.is_finite() {
        return Err(Error::domain("excess noise must be finite"));
    }
    det.validate()?;
    let t_g = t_g.min(1.0);
    if !det.trusted || det.eta == 1.0 {
        if det.trusted && det.v_el > 0.0 {
            return Err(Error::domain(
                "trusted electronic noise needs eta < 1 (beamsplitter model)",
            ));
        }
        let t = det.eta * t_g;
        let xi = xi_g + 2.0 * det.v_el / t;
        let cov = channel_state(v_a, t, xi)?;
        let (nu1, nu2) = cov.symplectic_eigenvalues()?;
        let nu3 = cov.alice_given_heterodyne();
        let chi = g_entropy(nu1)? + g_entropy(nu2)? - g_entropy(nu3)?;
        return Ok(chi.max(0.0));
    }

    let cov = channel_state(v_a, t_g, xi_g)?;
    let (nu1, nu2) = cov.symplectic_eigenvalues()?;
    let s_ab = g_entropy(nu1)? + g_entropy(nu2)?;

    let eta = det.eta;
    let v = 1.0 + 2.0 * det.v_el / (1.0 - eta);
    // Modes: 0 = A, 1 = B, 2 = F0 (detector port), 3 = G (ancilla partner).
    let mut full = DMatrix::zeros(8, 8);
    full.view_mut((0, 0), (4, 4)).copy_from(&cov.to_matrix());
    let ancilla = TwoModeCov { a: v, b: v, c: (v * v - 1.0).max(0.0).sqrt() };
    full.view_mut((4, 4), (4, 4)).copy_from(&ancilla.to_matrix());
    let mut bs = DMatrix::identity(8, 8);
    let (te, re) = (eta.sqrt(), (1.0 - eta).sqrt());
    for q in 0..2 {
        bs[(2 + q, 2 + q)] = te;
        bs[(2 + q, 4 + q)] = re;
        bs[(4 + q, 2 + q)] = -re;
        bs[(4 + q, 4 + q)] = te;
    }
    let mixed = &bs * full * bs.transpose();
    let cond = condition_on_heterodyne(&mixed, 1, &[0, 2, 3]);
    let s_cond = entropy_sum(&symplectic_spectrum(&cond)?)?;
    Ok((s_ab - s_cond).max(0.0))
}

/// Covariance after a channel `(t, xi)` acting on Bob's half of a two-mode
/// squeezed vacuum with modulation variance `v_a`.
pub fn channel_state(v_a: f64, t: f64, xi: f64) -> Result<TwoModeCov> {
    TwoModeCov::new(v_a + 1.0, 1.0 + t * v_a + t * xi, t.sqrt() * z_tms(v_a))
}
