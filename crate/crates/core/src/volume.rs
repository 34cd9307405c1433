//! Categorical volume from the Euler pairing and its behaviour under the cover action.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cover::CoverElem;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::mat2::Mat2;
use crate::stability::{CentralCharge, CompatibleTriple};

/// Volumes at or below this count as zero.
pub const VOLUME_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPairing")]
pub struct EulerPairing {
    chi: IntMatrix,
    cy_parity: Option<i64>,
}

#[derive(Deserialize)]
struct RawPairing {
    chi: IntMatrix,
    #[serde(default)]
    cy_parity: Option<i64>,
}

impl TryFrom<RawPairing> for EulerPairing {
    type Error = Error;
    fn try_from(raw: RawPairing) -> Result<Self> {
        EulerPairing::new(raw.chi, raw.cy_parity)
    }
}

fn is_antisymmetric(chi: &IntMatrix) -> bool {
    let r = chi.dim();
    (0..r).all(|i| (0..r).all(|j| (chi.get(i, j) + chi.get(j, i)).is_zero()))
}

impl EulerPairing {
    /// With an odd `cy_parity` the pairing must be antisymmetric.
    pub fn new(chi: IntMatrix, cy_parity: Option<i64>) -> Result<Self> {
        if matches!(cy_parity, Some(d) if d % 2 != 0) && !is_antisymmetric(&chi) {
            return Err(Error::NotOddCY);
        }
        Ok(EulerPairing { chi, cy_parity })
    }

    pub fn chi(&self) -> &IntMatrix {
        &self.chi
    }

    pub fn cy_parity(&self) -> Option<i64> {
        self.cy_parity
    }

    pub fn is_odd_cy(&self) -> bool {
        matches!(self.cy_parity, Some(d) if d % 2 != 0) && is_antisymmetric(&self.chi)
    }

    fn require_odd_cy(&self) -> Result<()> {
        if self.is_odd_cy() {
            Ok(())
        } else {
            Err(Error::NotOddCY)
        }
    }

    /// `chi^{ij}`, the entries of the rational inverse, as floats.
    pub fn inverse_f64(&self) -> Result<Vec<Vec<f64>>> {
        let inv = self.chi.rational_inverse().ok_or(Error::SingularPairing)?;
        Ok(inv.iter().map(|row| row.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()).collect())
    }
}

fn check_rank(z: &CentralCharge, chi: &EulerPairing) -> Result<()> {
    if z.rank() != chi.chi().dim() {
        return Err(Error::DimensionMismatch { expected: chi.chi().dim(), got: z.rank() });
    }
    Ok(())
}

/// `sum chi^{ij} Z(v_i) conj Z(v_j)` in the standard basis.
pub fn volume_sum(z: &CentralCharge, chi: &EulerPairing) -> Result<Complex64> {
    check_rank(z, chi)?;
    let inv = chi.inverse_f64()?;
    let cols = z.columns();
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, row) in inv.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            sum += cols[i] * cols[j].conj() * c;
        }
    }
    Ok(sum)
}

pub fn volume(z: &CentralCharge, chi: &EulerPairing) -> Result<f64> {
    Ok(volume_sum(z, chi)?.norm())
}

/// `sum chi^{ij} Z(v_i) Z(v_j)`, zero for an antisymmetric pairing.
pub fn auxiliary_sum(z: &CentralCharge, chi: &EulerPairing) -> Result<Complex64> {
    check_rank(z, chi)?;
    let inv = chi.inverse_f64()?;
    let cols = z.columns();
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, row) in inv.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            sum += cols[i] * cols[j] * c;
        }
    }
    Ok(sum)
}

/// `(alpha, beta)` with `m z = alpha z + beta conj z` for a real 2x2 matrix `m`.
pub fn complex_linear_parts(m: &Mat2) -> (Complex64, Complex64) {
    let [[a, b], [c, d]] = m.0;
    (Complex64::new((a + d) / 2.0, (c - b) / 2.0), Complex64::new((a - d) / 2.0, (b + c) / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeTransform {
    pub volume_before: f64,
    pub volume_after: f64,
    pub det_inverse: f64,
    /// `|alpha|^2 - |beta|^2` for the parts of `M^{-1}`; equals `det M^{-1}`.
    pub det_from_parts: f64,
    pub relative_discrepancy: f64,
    pub pass: bool,
}

/// Compare `vol(sigma . g)` with `det(M_g^{-1}) vol(sigma)`, the charge of `sigma . g` being `M_g^{-1} Z`.
pub fn vol_transform_check(z: &CentralCharge, chi: &EulerPairing, g: &CoverElem, tol: f64) -> Result<VolumeTransform> {
    chi.require_odd_cy()?;
    let minv = g.m().inverse()?;
    let before = volume(z, chi)?;
    let after = volume(&z.transform(&minv), chi)?;
    let det_inverse = minv.det();
    let (alpha, beta) = complex_linear_parts(&minv);
    let predicted = det_inverse * before;
    let relative_discrepancy = if before > 0.0 {
        (after - predicted).abs() / before.max(predicted.abs())
    } else {
        after
    };
    Ok(VolumeTransform {
        volume_before: before,
        volume_after: after,
        det_inverse,
        det_from_parts: alpha.norm_sqr() - beta.norm_sqr(),
        relative_discrepancy,
        pass: relative_discrepancy <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetOneOutcome {
    /// Positive volume and `det M_g = 1`.
    Pass,
    /// Positive volume with `det M_g != 1`; impossible for a compatible triple.
    Contradiction,
    /// The volume vanishes, so no constraint on `det M_g`.
    NoConstraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetOneReport {
    pub triple_verified: bool,
    pub volume: f64,
    pub det: f64,
    /// `P^T chi P = chi`.
    pub pairing_preserved: bool,
    pub outcome: DetOneOutcome,
}

/// For a compatible triple in the odd Calabi-Yau case with positive volume, `det M_g` must be 1.
/// Unverified input is evaluated too, so that contradictions can be exhibited.
pub fn det_one_necessity(triple: &CompatibleTriple, chi: &EulerPairing, tol: f64) -> Result<DetOneReport> {
    chi.require_odd_cy()?;
    let vol = volume(triple.sigma().z(), chi)?;
    let det = triple.g().m().det();
    let p = triple.auto().p();
    let pairing_preserved = p.transpose().mul(chi.chi())?.mul(p)? == *chi.chi();
    let outcome = if vol <= VOLUME_ZERO {
        DetOneOutcome::NoConstraint
    } else if (det - 1.0).abs() <= tol {
        DetOneOutcome::Pass
    } else {
        DetOneOutcome::Contradiction
    };
    Ok(DetOneReport { triple_verified: triple.verified(), volume: vol, det, pairing_preserved, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symplectic2() -> EulerPairing {
        EulerPairing::new(IntMatrix::from_rows(&[[0, 1], [-1, 0]]), Some(3)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn volume_examples() {
        let chi = symplectic2();
        let zero = CentralCharge::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(volume(&zero, &chi).unwrap(), 0.0);
        let z = CentralCharge::from_columns(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((volume(&z, &chi).unwrap() - 2.0).abs() < 1e-15);
        assert!(auxiliary_sum(&z, &chi).unwrap().norm() < 1e-15);
    }

    #[test]
    fn volume_is_basis_independent() {
        // New basis P e_j: chi' = P^T chi P and Z' = Z P.
        let chi = symplectic2();
        let p = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let chi2 = EulerPairing::new(p.transpose().mul(chi.chi()).unwrap().mul(&p).unwrap(), Some(3)).unwrap();
        let z = CentralCharge::from_columns(&[c(0.3, 1.1), c(-0.7, 0.4)]).unwrap();
        let v1 = volume(&z, &chi).unwrap();
        let v2 = volume(&z.compose(&p).unwrap(), &chi2).unwrap();
        assert!((v1 - v2).abs() < 1e-12 * v1);
    }

    #[test]
    fn transform_law_examples() {
        let chi = symplectic2();
        let z = CentralCharge::from_columns(&[c(1.0, 0.2), c(0.1, 1.0)]).unwrap();
        let id = vol_transform_check(&z, &chi, &CoverElem::identity(), 1e-12).unwrap();
        assert!(id.pass && id.volume_after == id.volume_before);
        let r = vol_transform_check(&z, &chi, &CoverElem::from_complex(c(0.0, 1.0)), 1e-10).unwrap();
        assert!(r.pass);
        assert!((r.volume_after / r.volume_before - (2.0 * std::f64::consts::PI).exp()).abs() < 1e-6);
        assert!((r.det_from_parts - r.det_inverse).abs() < 1e-9 * r.det_inverse);
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(matches!(EulerPairing::new(IntMatrix::from_rows(&[[1, 0], [0, 1]]), Some(3)), Err(Error::NotOddCY)));
        let even = EulerPairing::new(IntMatrix::from_rows(&[[1, 0], [0, 1]]), Some(2)).unwrap();
        let z = CentralCharge::from_columns(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(matches!(vol_transform_check(&z, &even, &CoverElem::identity(), 1e-9), Err(Error::NotOddCY)));
        let singular = EulerPairing::new(IntMatrix::from_rows(&[[0, 0], [0, 0]]), Some(1)).unwrap();
        assert!(matches!(volume(&z, &singular), Err(Error::SingularPairing)));
    }

    #[test]
    fn complex_parts_reproduce_the_matrix() {
        let m = Mat2::new(1.5, -0.3, 0.7, 2.0);
        let (a, b) = complex_linear_parts(&m);
        let z = c(0.4, -1.3);
        assert!((a * z + b * z.conj() - m.apply_c(z)).norm() < 1e-15);
        assert!((a.norm_sqr() - b.norm_sqr() - m.det()).abs() < 1e-14);
    }
}
