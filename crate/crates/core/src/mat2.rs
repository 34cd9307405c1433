//! Real 2x2 matrices acting on the plane of central charges.
//!
//! A charge `x + iy` is identified with the column vector `(x, y)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

use crate::error::{Error, Result};

/// Condition number above which a 2x2 matrix is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, d)
    }

    /// Counter-clockwise rotation by `angle` radians.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn scale(self, k: f64) -> Self {
        let m = self.0;
        Mat2::new(k * m[0][0], k * m[0][1], k * m[1][0], k * m[1][1])
    }

    pub fn det(&self) -> f64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = self.0;
        Mat2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn apply_c(&self, z: Complex64) -> Complex64 {
        let [x, y] = self.apply([z.re, z.im]);
        Complex64::new(x, y)
    }

    /// Singular values `(s_max, s_min)`.
    pub fn singular_values(&self) -> (f64, f64) {
        let m = self.0;
        // Closed form for 2x2: s_max, s_min = (sqrt(q + r) +- sqrt(q - r)) / 2 style via
        // the Frobenius norm and |det|.
        let fro2 = m.iter().flatten().map(|x| x * x).sum::<f64>();
        let det = self.det().abs();
        let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
        let smax = ((fro2 + disc) / 2.0).sqrt();
        let smin = if smax > 0.0 { det / smax } else { 0.0 };
        (smax, smin)
    }

    /// Operator norm induced by the Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.singular_values().0
    }

    pub fn condition(&self) -> f64 {
        let (smax, smin) = self.singular_values();
        if smin == 0.0 {
            f64::INFINITY
        } else {
            smax / smin
        }
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let cond = self.condition();
        if !(cond <= SINGULAR_CONDITION) {
            return Err(Error::SingularMatrix(cond));
        }
        let m = self.0;
        let det = self.det();
        Ok(Mat2::new(m[1][1] / det, -m[0][1] / det, -m[1][0] / det, m[0][0] / det))
    }

    /// Eigenvalues as complex numbers, larger modulus first.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let tr = self.trace();
        let det = self.det();
        let disc = tr * tr / 4.0 - det;
        let half = tr / 2.0;
        if disc >= 0.0 {
            let s = disc.sqrt();
            // avoid cancellation for the smaller root
            let big = if half >= 0.0 { half + s } else { half - s };
            let small = if big != 0.0 { det / big } else { half - s };
            (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
        } else {
            let s = (-disc).sqrt();
            (Complex64::new(half, s), Complex64::new(half, -s))
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        a.norm().max(b.norm())
    }

    pub fn powi(&self, n: u32) -> Mat2 {
        let mut result = Mat2::IDENTITY;
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }

    pub fn approx_eq(&self, other: &Mat2, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = self.0;
        let b = rhs.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// A matrix stored as `exp(log_scale) * unit` with `unit` of max-abs entry 1,
/// so that large powers do not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2 {
    pub unit: Mat2,
    pub log_scale: f64,
}

impl ScaledMat2 {
    pub fn from_mat(m: Mat2) -> Self {
        ScaledMat2 { unit: m, log_scale: 0.0 }.normalized()
    }

    pub fn identity() -> Self {
        ScaledMat2 { unit: Mat2::IDENTITY, log_scale: 0.0 }
    }

    fn normalized(self) -> Self {
        let s = self.unit.max_abs();
        if s == 0.0 || !s.is_finite() {
            return self;
        }
        ScaledMat2 { unit: self.unit.scale(1.0 / s), log_scale: self.log_scale + s.ln() }
    }

    pub fn mul(&self, other: &ScaledMat2) -> ScaledMat2 {
        ScaledMat2 { unit: self.unit * other.unit, log_scale: self.log_scale + other.log_scale }
            .normalized()
    }

    pub fn pow(m: Mat2, n: u64) -> ScaledMat2 {
        let mut result = ScaledMat2::identity();
        let mut base = ScaledMat2::from_mat(m);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn log_norm(&self) -> f64 {
        self.log_scale + self.unit.norm().ln()
    }

    /// Materializes the matrix; overflows to infinity for huge scales.
    pub fn to_mat(&self) -> Mat2 {
        self.unit.scale(self.log_scale.exp())
    }
}

/// Phase of a nonzero vector under the convention `(cos pi phi, sin pi phi)` has phase `phi`;
/// the value lies in `(-1, 1]`.
pub fn phase_of(v: [f64; 2]) -> f64 {
    let p = v[1].atan2(v[0]) / std::f64::consts::PI;
    if p <= -1.0 {
        p + 2.0
    } else {
        p
    }
}

pub fn unit_at_phase(phi: f64) -> [f64; 2] {
    let (s, c) = (std::f64::consts::PI * phi).sin_cos();
    [c, s]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal() {
        let (a, b) = Mat2::diag(3.0, -0.5).singular_values();
        assert!((a - 3.0).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inverse_rejects_singular() {
        assert!(matches!(Mat2::new(1.0, 2.0, 2.0, 4.0).inverse(), Err(Error::SingularMatrix(_))));
        let m = Mat2::new(2.0, 1.0, 1.0, 1.0);
        assert!((m * m.inverse().unwrap()).approx_eq(&Mat2::IDENTITY, 1e-14));
    }

    #[test]
    fn scaled_power_matches_direct_power() {
        let m = Mat2::new(2.0, 1.0, 1.0, 1.0);
        let direct = m.powi(20);
        let scaled = ScaledMat2::pow(m, 20).to_mat();
        assert!(direct.approx_eq(&scaled, 1e-12));
        let huge = ScaledMat2::pow(m, 1 << 20);
        let expected = (1u64 << 20) as f64 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((huge.log_norm() - expected).abs() / expected < 1e-10);
    }

    #[test]
    fn phase_convention() {
        assert_eq!(phase_of([1.0, 0.0]), 0.0);
        assert_eq!(phase_of([-1.0, 0.0]), 1.0);
        assert!((phase_of([0.0, 1.0]) - 0.5).abs() < 1e-15);
        assert!((phase_of([0.0, -1.0]) + 0.5).abs() < 1e-15);
    }
}
