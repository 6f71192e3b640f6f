//! Octonion arithmetic.
//!
//! Octonions are pairs of quaternions `(a, b)` multiplied by the
//! Cayley–Dickson rule
//!
//! ```text
//! (a, b)·(c, d) = (a·c − d̄·b,  d·a + b·c̄)
//! ```
//!
//! with `e₀..e₃ = (1, i, j, k)` in the first half and `e₄..e₇` in the second.
//! The resulting table of basis products `eᵢ·eⱼ` (row `i`, column `j`) is:
//!
//! ```text
//!        e0   e1   e2   e3   e4   e5   e6   e7
//!  e0 |  e0   e1   e2   e3   e4   e5   e6   e7
//!  e1 |  e1  -e0   e3  -e2   e5  -e4  -e7   e6
//!  e2 |  e2  -e3  -e0   e1   e6   e7  -e4  -e5
//!  e3 |  e3   e2  -e1  -e0   e7  -e6   e5  -e4
//!  e4 |  e4  -e5  -e6  -e7  -e0   e1   e2   e3
//!  e5 |  e5   e4  -e7   e6  -e1  -e0  -e3   e2
//!  e6 |  e6   e7   e4  -e5  -e2   e3  -e0  -e1
//!  e7 |  e7  -e6   e5   e4  -e3  -e2   e1  -e0
//! ```
//!
//! Left multiplication by a unit octonion is an orthogonal map of `R⁸`, and
//! for any unit `y` the vectors `eᵢ·y` form an orthonormal basis.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Octonion(pub [f64; 8]);

type Quat = [f64; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

impl Octonion {
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    /// Basis element `eᵢ`.
    pub fn basis(i: usize) -> Octonion {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    fn halves(&self) -> (Quat, Quat) {
        let c = &self.0;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }

    fn from_halves(a: Quat, b: Quat) -> Octonion {
        Octonion([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, other: &Octonion) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: f64) -> Octonion {
        Octonion(self.0.map(|x| x * k))
    }

    /// Matrix of `x ↦ self·x`, row major.
    pub fn left_matrix(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for j in 0..8 {
            let col = *self * Octonion::basis(j);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.0[i];
            }
        }
        m
    }
}

impl Mul for Octonion {
    type Output = Octonion;

    fn mul(self, rhs: Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        let ac = qmul(a, c);
        let db = qmul(qconj(d), b);
        let da = qmul(d, a);
        let bc = qmul(b, qconj(c));
        Octonion::from_halves(
            [ac[0] - db[0], ac[1] - db[1], ac[2] - db[2], ac[3] - db[3]],
            [da[0] + bc[0], da[1] + bc[1], da[2] + bc[2], da[3] + bc[3]],
        )
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        c.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

/// `a·b` on raw component arrays.
pub fn octonion_multiply(a: &[f64; 8], b: &[f64; 8]) -> [f64; 8] {
    (Octonion(*a) * Octonion(*b)).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Domain};
    use proptest::prelude::*;
    use rand::Rng;

    fn random(rng: &mut impl Rng) -> Octonion {
        Octonion(std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn identity() {
        let mut rng = stream(1, Domain::Test, 0);
        for _ in 0..100 {
            let a = random(&mut rng);
            assert_eq!(a * Octonion::ONE, a);
            assert_eq!(Octonion::ONE * a, a);
        }
    }

    #[test]
    fn imaginary_units_square_to_minus_one_and_anticommute() {
        for i in 1..8 {
            assert_eq!(Octonion::basis(i) * Octonion::basis(i), -Octonion::ONE);
            for j in 1..8 {
                if i != j {
                    let ij = Octonion::basis(i) * Octonion::basis(j);
                    let ji = Octonion::basis(j) * Octonion::basis(i);
                    assert_eq!(ij, -ji);
                }
            }
        }
    }

    #[test]
    fn left_multiplication_is_orthogonal_for_unit_octonions() {
        let mut rng = stream(2, Domain::Test, 0);
        let a = random(&mut rng);
        let a = a.scale(1.0 / a.norm());
        let m = a.left_matrix();
        for i in 0..8 {
            for j in 0..8 {
                let dot: f64 = (0..8).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in prop::array::uniform8(-10.0f64..10.0), b in prop::array::uniform8(-10.0f64..10.0)) {
            let (a, b) = (Octonion(a), Octonion(b));
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn alternative_law(a in prop::array::uniform8(-3.0f64..3.0), b in prop::array::uniform8(-3.0f64..3.0)) {
            let (a, b) = (Octonion(a), Octonion(b));
            let lhs = (a * a) * b;
            let rhs = a * (a * b);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        }
    }
}
