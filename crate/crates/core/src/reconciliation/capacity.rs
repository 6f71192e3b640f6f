//! Capacity of the binary-input AWGN channel.

use std::sync::OnceLock;

/// Number of Gauss–Hermite nodes.
pub const QUADRATURE_NODES: usize = 96;

/// Nodes and weights for `∫ f(w)·φ(w) dw` with `φ` the standard normal
/// density (probabilists' Hermite rule, weights summing to one).
fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_hermite(QUADRATURE_NODES);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        // Physicists' rule ∫ e^{−x²} f(x) dx → standard normal: w = √2·x.
        let nodes = x.iter().map(|x| x * std::f64::consts::SQRT_2).collect();
        let weights = w.iter().map(|w| w / sqrt_pi).collect();
        (nodes, weights)
    })
}

/// Physicists' Gauss–Hermite rule by Newton iteration on the orthonormal
/// recurrence.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `C(s) = 1 − E_w[log₂(1 + e^(−2s − 2·sqrt(s)·w))]`, `w ~ N(0, 1)`, in bits
/// per channel use. `s` is the ratio of squared amplitude to noise variance.
pub fn biawgn_capacity(s: f64) -> f64 {
    if !(s > 0.0) {
        return 0.0;
    }
    let (nodes, weights) = rule();
    let rs = s.sqrt();
    let expected: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(w, weight)| weight * softplus(-2.0 * s - 2.0 * rs * w))
        .sum();
    (1.0 - expected / std::f64::consts::LN_2).clamp(0.0, 1.0)
}

/// Mutual information of the unconstrained Gaussian channel, `½·log₂(1 + s)`.
pub fn gaussian_capacity(s: f64) -> f64 {
    0.5 * (1.0 + s.max(0.0)).log2()
}
