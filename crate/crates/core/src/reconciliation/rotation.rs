//! Rotation side information and the hypercube mapping.
//!
//! Bob maps his measurement `y` onto a hypercube point `u` of the same norm
//! and publishes the coefficients `αᵢ = ⟨û, eᵢ·ŷ⟩`. The map
//! `M = Σ αᵢ·L(eᵢ)` is left multiplication by the unit octonion `α`, hence
//! orthogonal, and it sends `ŷ` to `û`. When `y` is uniform on the sphere,
//! `α` is uniform on the sphere whatever `u` is, so the coefficients carry no
//! information about Bob's bits.

use serde::{Deserialize, Serialize};

use super::octonion::Octonion;
use crate::{Error, Result};

/// Rotation coefficients and the norm of Bob's vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideInformation {
    pub alpha: [f64; 8],
    pub norm_y: f64,
}

fn unit(v: &[f64; 8], what: &str) -> Result<Octonion> {
    let o = Octonion(*v);
    let n = o.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::DegenerateInput(format!("{what} has zero norm")));
    }
    Ok(o.scale(1.0 / n))
}

/// Coefficients of the rotation mapping `y / ‖y‖` to `u / ‖u‖`.
pub fn rotation_from(y: &[f64; 8], u: &[f64; 8]) -> Result<SideInformation> {
    let y_hat = unit(y, "y")?;
    let u_hat = unit(u, "u")?;
    let mut alpha = [0.0; 8];
    for (i, a) in alpha.iter_mut().enumerate() {
        *a = u_hat.dot(&(Octonion::basis(i) * y_hat));
    }
    Ok(SideInformation { alpha, norm_y: Octonion(*y).norm() })
}

impl SideInformation {
    /// The orthogonal matrix `Σ αᵢ·L(eᵢ)`, row major.
    pub fn matrix(&self) -> [[f64; 8]; 8] {
        Octonion(self.alpha).left_matrix()
    }
}

/// Applies the published rotation to `x`.
pub fn apply_rotation(si: &SideInformation, x: &[f64; 8]) -> [f64; 8] {
    (Octonion(si.alpha) * Octonion(*x)).0
}

/// Hypercube point with coordinates `(−1)^bitᵢ · norm_y / (2·sqrt(2))`.
pub fn map_bits_to_hypercube(bits: &[bool; 8], norm_y: f64) -> [f64; 8] {
    let side = norm_y / (2.0 * std::f64::consts::SQRT_2);
    bits.map(|b| if b { -side } else { side })
}

/// Recovers bits from coordinate signs (negative means 1).
pub fn bits_from_signs(v: &[f64; 8]) -> [bool; 8] {
    v.map(|x| x < 0.0)
}
