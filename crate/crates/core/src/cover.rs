//! The universal cover of GL+(2,R): pairs `(M, f)` with `f` an increasing lift of the
//! circle map induced by `M`, stored through `f(0)`.
//!
//! Phase convention: the vector `(cos pi phi, sin pi phi)` has phase `phi`, so a full
//! turn of the plane is a phase change of 2 and `f(phi + 1) = f(phi) + 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::mat2::{phase_of, unit_at_phase, Mat2, ScaledMat2};

/// Slack allowed in the congruence `f0 = arg(M e1) / pi (mod 2)`.
pub const LIFT_TOL: f64 = 1e-9;

/// Reduce `x` modulo 2 into `[lo, lo + 2)`.
fn reduce_mod2(x: f64, lo: f64) -> f64 {
    lo + (x - lo).rem_euclid(2.0)
}

/// Evaluate the lift of the circle map of `m` normalized by `f(0) = f0`.
///
/// Only the direction of `m` matters, so `m` may be any positive multiple of the
/// actual matrix (for instance the unit part of a [`ScaledMat2`]).
pub fn evaluate_lift(m: &Mat2, f0: f64, phi: f64) -> f64 {
    let k = phi.floor();
    let r = phi - k;
    let theta0 = phase_of(m.apply([1.0, 0.0]));
    let theta = phase_of(m.apply(unit_at_phase(r)));
    // f(r) - f(0) lies in [0, 1) for r in [0, 1); the window absorbs rounding near both ends.
    let delta = reduce_mod2(theta - theta0, -0.5);
    f0 + k + delta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElem")]
pub struct CoverElem {
    m: Mat2,
    f0: f64,
}

#[derive(Deserialize)]
struct RawElem {
    m: Mat2,
    f0: f64,
}

impl TryFrom<RawElem> for CoverElem {
    type Error = Error;
    fn try_from(raw: RawElem) -> Result<Self> {
        CoverElem::lift_from(raw.m, raw.f0)
    }
}

impl CoverElem {
    pub fn lift_from(m: Mat2, f0: f64) -> Result<Self> {
        if !m.is_finite() || !f0.is_finite() {
            return Err(Error::InvalidData("non-finite matrix or lift value".into()));
        }
        let det = m.det();
        if !(det > 0.0) {
            return Err(Error::NonPositiveDeterminant(det));
        }
        let expected = phase_of(m.apply([1.0, 0.0]));
        let offset = reduce_mod2(f0 - expected, -1.0);
        if offset.abs() > LIFT_TOL {
            return Err(Error::InvalidLift { f0, expected, offset });
        }
        Ok(CoverElem { m, f0 })
    }

    /// The lift with `f(0)` closest to `near` among those over `m`.
    pub fn lift_near(m: Mat2, near: f64) -> Result<Self> {
        let base = phase_of(m.apply([1.0, 0.0]));
        let f0 = base + 2.0 * ((near - base) / 2.0).round();
        Self::lift_from(m, f0)
    }

    pub fn identity() -> Self {
        CoverElem { m: Mat2::IDENTITY, f0: 0.0 }
    }

    /// `M = e^{-pi Im a} rot(pi Re a)`, `f(phi) = phi + Re a`.
    pub fn from_complex(alpha: Complex64) -> Self {
        let m = Mat2::rotation(PI * alpha.re).scale((-PI * alpha.im).exp());
        CoverElem { m, f0: alpha.re }
    }

    /// The deck transformation `phi -> phi + k`.
    pub fn shift(k: i64) -> Self {
        Self::from_complex(Complex64::new(k as f64, 0.0))
    }

    pub fn m(&self) -> &Mat2 {
        &self.m
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn evaluate(&self, phi: f64) -> f64 {
        evaluate_lift(&self.m, self.f0, phi)
    }

    /// `self` after `other`: `(M1 M2, f1(f2(0)))`.
    pub fn compose(&self, other: &CoverElem) -> CoverElem {
        let m = self.m * other.m;
        let f0 = self.evaluate(other.f0);
        CoverElem { m, f0: snap(&m, f0) }
    }

    pub fn inverse(&self) -> Result<CoverElem> {
        let minv = self.m.inverse()?;
        // f^{-1}(0) = c with f(c) = 0, and c is congruent to arg(M^{-1} e1) / pi.
        let c = phase_of(minv.apply([1.0, 0.0]));
        let shift = (self.evaluate(c) / 2.0).round();
        Ok(CoverElem { m: minv, f0: c - 2.0 * shift })
    }

    /// `f^{-1}(y)`, by inverting on the monotone branch.
    pub fn evaluate_inverse(&self, y: f64) -> Result<f64> {
        Ok(self.inverse()?.evaluate(y))
    }

    /// `g^n`, with `f^n(0)` tracked by iteration and re-lifted onto `M^n`.
    pub fn power(&self, n: i64) -> Result<CoverElem> {
        let base = if n < 0 { self.inverse()? } else { *self };
        let k = n.unsigned_abs();
        let m = base.m.powi(u32::try_from(k).map_err(|_| Error::InvalidData("power exponent too large".into()))?);
        if !m.is_finite() {
            return Err(Error::InvalidData(format!("matrix power {n} overflows")));
        }
        let f0 = base.iterate(0.0, k);
        Ok(CoverElem { m, f0: snap(&m, f0) })
    }

    /// `f^n(phi)` by direct iteration.
    pub fn iterate(&self, phi: f64, n: u64) -> f64 {
        (0..n).fold(phi, |x, _| self.evaluate(x))
    }

    /// The orbit `f^k(phi)` for `k = 0..=n`.
    pub fn orbit(&self, phi: f64, n: u64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut x = phi;
        out.push(x);
        for _ in 0..n {
            x = self.evaluate(x);
            out.push(x);
        }
        out
    }

    /// `M^n` kept in scaled form together with `f^n(0)`, for exponents where the
    /// plain matrix power would overflow.
    pub fn scaled_power(&self, n: u64) -> (ScaledMat2, f64) {
        let p = ScaledMat2::pow(self.m, n);
        let f0 = self.iterate(0.0, n);
        (p, snap(&p.unit, f0))
    }

    pub fn approx_eq(&self, other: &CoverElem, tol: f64) -> bool {
        self.m.approx_eq(&other.m, tol) && (self.f0 - other.f0).abs() <= tol * (1.0 + self.f0.abs())
    }
}

/// Move `f0` to the exact congruence class of `arg(M e1) / pi`.
fn snap(m: &Mat2, f0: f64) -> f64 {
    let base = phase_of(m.apply([1.0, 0.0]));
    let k = ((f0 - base) / 2.0).round();
    let snapped = base + 2.0 * k;
    if (snapped - f0).abs() <= 1e-6 {
        snapped
    } else {
        f0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationNumber {
    /// Least-squares slope of `f^k(0)` against `k`, `k = 0..=n_max`.
    pub estimate: f64,
    /// `f^n(0) / n` at `n = n_max`.
    pub naive: f64,
    /// `f^n(0) - f^{n-1}(0)` at `n = n_max`.
    pub last_increment: f64,
    pub n_max: u64,
}

/// Poincare translation number `lim f^n(0) / n`.
pub fn translation_number(g: &CoverElem, n_max: u64) -> Result<TranslationNumber> {
    if n_max < 16 {
        return Err(Error::PreconditionViolated(format!("n_max = {n_max} must be at least 16")));
    }
    let orbit = g.orbit(0.0, n_max);
    let ks: Vec<f64> = (0..=n_max).map(|k| k as f64).collect();
    let fit = line_fit(&ks, &orbit).expect("at least two points");
    let last = orbit[n_max as usize];
    Ok(TranslationNumber {
        estimate: fit.slope,
        naive: last / n_max as f64,
        last_increment: last - orbit[n_max as usize - 1],
        n_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugacyType {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ConjugacyType,
    /// `tr(M) / sqrt(det M)`.
    pub normalized_trace: f64,
    /// `M / sqrt(det M)` is `+-I`.
    pub central: bool,
    /// `M = diag(l, 1/l)` or `diag(1/l, l)` with `|l| > 1`; holds `l`.
    pub pseudo_anosov_literal: Option<f64>,
    /// `det M = 1` and `|tr M| > 2`: diagonalizable with reciprocal real eigenvalues; holds the larger one.
    pub pseudo_anosov_conjugate: Option<f64>,
    /// `M` is a positive multiple of a rotation.
    pub gepner_shape: bool,
    /// The `alpha` with `g = from_complex(alpha)` when `gepner_shape` holds.
    #[serde(with = "crate::serde_util::opt_complex")]
    pub gepner_alpha: Option<Complex64>,
}

pub fn classify(g: &CoverElem, tol: f64) -> Classification {
    let m = g.m;
    let det = m.det();
    let root = det.sqrt();
    let normalized = m.scale(1.0 / root);
    let t = normalized.trace();
    let kind = if (t.abs() - 2.0).abs() <= tol {
        ConjugacyType::Parabolic
    } else if t.abs() < 2.0 {
        ConjugacyType::Elliptic
    } else {
        ConjugacyType::Hyperbolic
    };
    let central = normalized.approx_eq(&Mat2::IDENTITY, tol) || normalized.approx_eq(&Mat2::IDENTITY.scale(-1.0), tol);
    let [[a, b], [c, d]] = m.0;
    let scale = m.max_abs();

    let det_one = (det - 1.0).abs() <= tol;
    let diagonal = b.abs() <= tol * scale && c.abs() <= tol * scale;
    let pseudo_anosov_literal = (diagonal && det_one)
        .then(|| if a.abs() > d.abs() { a } else { d })
        .filter(|l| l.abs() > 1.0 + tol);
    let pseudo_anosov_conjugate = (det_one && t.abs() > 2.0 + tol).then(|| m.eigenvalues().0.re);

    let gepner_shape = (a - d).abs() <= tol * scale && (b + c).abs() <= tol * scale;
    let gepner_alpha = gepner_shape.then(|| Complex64::new(g.f0, -root.ln() / PI));
    Classification {
        kind,
        normalized_trace: t,
        central,
        pseudo_anosov_literal,
        pseudo_anosov_conjugate,
        gepner_shape,
        gepner_alpha,
    }
}
