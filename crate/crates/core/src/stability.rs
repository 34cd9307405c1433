//! Stability conditions restricted to finite test data, and compatible triples.
//!
//! A stability condition is a central charge on the lattice together with a finite
//! list of semistable classes and their phases. Every supremum over objects is
//! evaluated over this list.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cover::CoverElem;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::mat2::{phase_of, Mat2};

/// Relative tolerance for `Z(v) = |Z(v)| e^{i pi phi}`.
pub const PHASE_TOL: f64 = 1e-9;

/// Linear map `Z : Z^r -> C`, stored as the 2 x r real matrix of real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CentralCharge {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for CentralCharge {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let [re, im]: [Vec<f64>; 2] = rows
            .try_into()
            .map_err(|r: Vec<Vec<f64>>| Error::DimensionMismatch { expected: 2, got: r.len() })?;
        CentralCharge::new(re, im)
    }
}

impl From<CentralCharge> for Vec<Vec<f64>> {
    fn from(z: CentralCharge) -> Self {
        vec![z.re, z.im]
    }
}

impl CentralCharge {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch { expected: re.len(), got: im.len() });
        }
        if re.is_empty() {
            return Err(Error::InvalidData("central charge of rank 0".into()));
        }
        if re.iter().chain(&im).any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("non-finite central charge entry".into()));
        }
        Ok(CentralCharge { re, im })
    }

    /// Charge with `Z(e_j) = cols[j]`.
    pub fn from_columns(cols: &[Complex64]) -> Result<Self> {
        Self::new(cols.iter().map(|z| z.re).collect(), cols.iter().map(|z| z.im).collect())
    }

    pub fn rank(&self) -> usize {
        self.re.len()
    }

    pub fn column(&self, j: usize) -> Complex64 {
        Complex64::new(self.re[j], self.im[j])
    }

    pub fn columns(&self) -> Vec<Complex64> {
        (0..self.rank()).map(|j| self.column(j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.re.iter().chain(&self.im).fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    /// `M . Z`.
    pub fn transform(&self, m: &Mat2) -> CentralCharge {
        let cols: Vec<Complex64> = self.columns().iter().map(|&z| m.apply_c(z)).collect();
        CentralCharge::from_columns(&cols).expect("same rank")
    }

    /// `Z . P` for an integer matrix `P`.
    pub fn compose(&self, p: &IntMatrix) -> Result<CentralCharge> {
        if p.dim() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: p.dim() });
        }
        let r = self.rank();
        let cols: Vec<Complex64> = (0..r)
            .map(|j| (0..r).map(|i| self.column(i) * p.get(i, j).to_f64().unwrap_or(f64::NAN)).sum())
            .collect();
        CentralCharge::from_columns(&cols)
    }
}

/// `Z(v)` as a complex number.
pub fn charge_of(z: &CentralCharge, v: &[i64]) -> Result<Complex64> {
    if v.len() != z.rank() {
        return Err(Error::DimensionMismatch { expected: z.rank(), got: v.len() });
    }
    Ok(v.iter().enumerate().map(|(j, &x)| z.column(j) * x as f64).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemistableDatum {
    pub v: Vec<i64>,
    pub phase: f64,
}

impl SemistableDatum {
    pub fn new(v: Vec<i64>, phase: f64) -> Self {
        SemistableDatum { v, phase }
    }
}

fn is_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

/// Charge below this (relative to the entry scale) counts as zero.
fn zero_charge(z: &CentralCharge, v: &[i64], c: Complex64) -> bool {
    let l1: f64 = v.iter().map(|x| x.unsigned_abs() as f64).sum();
    c.norm() <= 1e-12 * (1.0 + z.max_abs() * l1)
}

/// Relative phase residual `|c - |c| e^{i pi phi}| / |c|`; zero charges give `None`.
fn phase_residual(c: Complex64, phi: f64) -> Option<f64> {
    let m = c.norm();
    (m > 0.0).then(|| (c - Complex64::from_polar(m, PI * phi)).norm() / m)
}

fn check_datum(z: &CentralCharge, d: &SemistableDatum, weak: bool, tol: f64) -> Result<()> {
    let c = charge_of(z, &d.v)?;
    if zero_charge(z, &d.v, c) {
        if weak && is_integer(d.phase, tol) {
            return Ok(());
        }
        return Err(Error::InvalidData(format!("class {:?} has zero charge at phase {}", d.v, d.phase)));
    }
    let res = phase_residual(c, d.phase).unwrap_or(f64::INFINITY);
    if res > tol {
        return Err(Error::InvalidData(format!(
            "class {:?} has charge phase {} but is listed at phase {} (residual {res:.3e})",
            d.v,
            phase_of([c.re, c.im]),
            d.phase
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStability")]
pub struct StabilityData {
    rank: usize,
    #[serde(rename = "Z")]
    z: CentralCharge,
    semistables: Vec<SemistableDatum>,
    /// Support constant for the max-norm: `|v|_inf <= C |Z(v)|`.
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    support_c: Option<f64>,
    weak: bool,
}

#[derive(Deserialize)]
struct RawStability {
    rank: Option<usize>,
    #[serde(rename = "Z")]
    z: CentralCharge,
    semistables: Vec<SemistableDatum>,
    #[serde(rename = "C", default)]
    support_c: Option<f64>,
    #[serde(default)]
    weak: bool,
}

impl TryFrom<RawStability> for StabilityData {
    type Error = Error;
    fn try_from(raw: RawStability) -> Result<Self> {
        if let Some(r) = raw.rank {
            if r != raw.z.rank() {
                return Err(Error::DimensionMismatch { expected: r, got: raw.z.rank() });
            }
        }
        StabilityData::new(raw.z, raw.semistables, raw.support_c, raw.weak)
    }
}

impl StabilityData {
    pub fn new(z: CentralCharge, semistables: Vec<SemistableDatum>, support_c: Option<f64>, weak: bool) -> Result<Self> {
        Self::with_tolerance(z, semistables, support_c, weak, PHASE_TOL)
    }

    pub fn with_tolerance(
        z: CentralCharge,
        semistables: Vec<SemistableDatum>,
        support_c: Option<f64>,
        weak: bool,
        tol: f64,
    ) -> Result<Self> {
        if semistables.is_empty() {
            return Err(Error::InvalidData("no semistable data".into()));
        }
        for d in &semistables {
            check_datum(&z, d, weak, tol)?;
        }
        if let Some(c) = support_c {
            if !(c > 0.0) {
                return Err(Error::InvalidData(format!("support constant {c} must be positive")));
            }
            for d in &semistables {
                let norm = d.v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as f64;
                let charge = charge_of(&z, &d.v)?.norm();
                if norm > c * charge * (1.0 + tol) && !(weak && zero_charge(&z, &d.v, charge_of(&z, &d.v)?)) {
                    return Err(Error::InvalidData(format!("support property fails for class {:?}", d.v)));
                }
            }
        }
        Ok(StabilityData { rank: z.rank(), z, semistables, support_c, weak })
    }

    /// Stability data whose semistables are the basis vectors at the phases of their charges.
    pub fn from_basis_charges(cols: &[Complex64]) -> Result<Self> {
        let z = CentralCharge::from_columns(cols)?;
        let r = cols.len();
        let semistables = cols
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let mut v = vec![0; r];
                v[j] = 1;
                SemistableDatum::new(v, phase_of([c.re, c.im]))
            })
            .collect();
        Self::new(z, semistables, None, false)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn z(&self) -> &CentralCharge {
        &self.z
    }

    pub fn semistables(&self) -> &[SemistableDatum] {
        &self.semistables
    }

    pub fn support_c(&self) -> Option<f64> {
        self.support_c
    }

    pub fn weak(&self) -> bool {
        self.weak
    }

    pub fn charges(&self) -> Vec<Complex64> {
        self.semistables.iter().map(|d| charge_of(&self.z, &d.v).expect("validated")).collect()
    }

    pub fn approx_eq(&self, other: &StabilityData, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()));
        self.rank == other.rank
            && self.weak == other.weak
            && self.semistables.len() == other.semistables.len()
            && self.z.columns().iter().zip(other.z.columns()).all(|(a, b)| close(a.re, b.re) && close(a.im, b.im))
            && self
                .semistables
                .iter()
                .zip(&other.semistables)
                .all(|(a, b)| a.v == b.v && close(a.phase, b.phase))
            && match (self.support_c, other.support_c) {
                (None, None) => true,
                (Some(a), Some(b)) => close(a, b),
                _ => false,
            }
    }
}

/// Harder-Narasimhan data: semistable factors with strictly decreasing phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SemistableDatum>", into = "Vec<SemistableDatum>")]
pub struct HNObject {
    factors: Vec<SemistableDatum>,
}

impl TryFrom<Vec<SemistableDatum>> for HNObject {
    type Error = Error;
    fn try_from(factors: Vec<SemistableDatum>) -> Result<Self> {
        HNObject::new(factors)
    }
}

impl From<HNObject> for Vec<SemistableDatum> {
    fn from(e: HNObject) -> Self {
        e.factors
    }
}

impl HNObject {
    pub fn new(factors: Vec<SemistableDatum>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidData("HN object needs at least one factor".into()));
        }
        if let Some(w) = factors.windows(2).find(|w| !(w[0].phase > w[1].phase)) {
            return Err(Error::InvalidData(format!(
                "HN phases must strictly decrease, found {} then {}",
                w[0].phase, w[1].phase
            )));
        }
        Ok(HNObject { factors })
    }

    pub fn single(d: SemistableDatum) -> Self {
        HNObject { factors: vec![d] }
    }

    pub fn factors(&self) -> &[SemistableDatum] {
        &self.factors
    }

    /// Check every factor against a central charge.
    pub fn validate(&self, z: &CentralCharge, weak: bool, tol: f64) -> Result<()> {
        self.factors.iter().try_for_each(|d| check_datum(z, d, weak, tol))
    }

    /// The class of the object, the sum of its factor classes.
    pub fn class(&self) -> Result<Vec<i64>> {
        let r = self.factors[0].v.len();
        let mut out = vec![0i64; r];
        for f in &self.factors {
            if f.v.len() != r {
                return Err(Error::DimensionMismatch { expected: r, got: f.v.len() });
            }
            for (o, x) in out.iter_mut().zip(&f.v) {
                *o = o.checked_add(*x).ok_or(Error::LatticeOverflow)?;
            }
        }
        Ok(out)
    }
}

/// `m_t(E) = sum |Z(E_i)| e^{phi_i t}`.
pub fn mass(e: &HNObject, z: &CentralCharge, t: f64) -> Result<f64> {
    e.factors.iter().try_fold(0.0, |acc, f| Ok(acc + charge_of(z, &f.v)?.norm() * (f.phase * t).exp()))
}

/// `(phi^+, phi^-)`: the first and last HN phases.
pub fn phases(e: &HNObject) -> (f64, f64) {
    (e.factors[0].phase, e.factors[e.factors.len() - 1].phase)
}

/// Whether the charges span R^2, with relative rank threshold 1e-9.
pub fn spanning_charges(charges: &[Complex64]) -> bool {
    // Gram matrix of the 2 x k charge matrix; its eigenvalues are the squared singular values.
    let (mut a, mut b, mut d) = (0.0, 0.0, 0.0);
    for c in charges {
        a += c.re * c.re;
        b += c.re * c.im;
        d += c.im * c.im;
    }
    let (smax2, smin2) = Mat2::new(a, b, b, d).singular_values();
    smax2 > 0.0 && (smin2 / smax2).sqrt() > 1e-9
}

pub fn spanning_image(s: &StabilityData) -> bool {
    spanning_charges(&s.charges())
}

/// A lattice automorphism `[Phi]` with a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAuto")]
pub struct AutoequivalenceData {
    #[serde(rename = "P")]
    p: IntMatrix,
    label: String,
    /// Nonsingular but not invertible over the integers; only forward iterates make sense.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    synthetic: bool,
}

#[derive(Deserialize)]
struct RawAuto {
    #[serde(rename = "P")]
    p: IntMatrix,
    #[serde(default)]
    label: String,
    #[serde(default)]
    synthetic: bool,
}

impl TryFrom<RawAuto> for AutoequivalenceData {
    type Error = Error;
    fn try_from(raw: RawAuto) -> Result<Self> {
        if raw.synthetic {
            AutoequivalenceData::synthetic(raw.p, raw.label)
        } else {
            AutoequivalenceData::new(raw.p, raw.label)
        }
    }
}

impl AutoequivalenceData {
    pub fn new(p: IntMatrix, label: impl Into<String>) -> Result<Self> {
        let det = p.det();
        if det.abs() != BigInt::from(1) {
            return Err(Error::InvalidData(format!("lattice map has determinant {det}, expected +-1")));
        }
        Ok(AutoequivalenceData { p, label: label.into(), synthetic: false })
    }

    /// A nonsingular lattice endomorphism standing in for an autoequivalence.
    pub fn synthetic(p: IntMatrix, label: impl Into<String>) -> Result<Self> {
        if p.det().is_zero() {
            return Err(Error::InvalidData("lattice map is singular".into()));
        }
        Ok(AutoequivalenceData { p, label: label.into(), synthetic: true })
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn power(&self, k: u32) -> AutoequivalenceData {
        AutoequivalenceData { p: self.p.pow(k), label: format!("({})^{k}", self.label), synthetic: self.synthetic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwineReport {
    pub pass: bool,
    /// `max_j |Z(P e_j) - M Z(e_j)| / (1 + |Z(e_j)|)`.
    pub residual: f64,
    pub worst_basis_index: usize,
}

/// Check `Z . P = M . Z` on basis vectors.
pub fn check_charge_intertwine(z: &CentralCharge, auto: &AutoequivalenceData, m: &Mat2, tol: f64) -> Result<IntertwineReport> {
    let zp = z.compose(auto.p())?;
    let mut residual = 0.0_f64;
    let mut worst = 0;
    for j in 0..z.rank() {
        let zj = z.column(j);
        let r = (zp.column(j) - m.apply_c(zj)).norm() / (1.0 + zj.norm());
        if r > residual {
            residual = r;
            worst = j;
        }
    }
    Ok(IntertwineReport { pass: residual <= tol, residual, worst_basis_index: worst })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeartWindowReport {
    pub pass: bool,
    pub psi: f64,
    /// Images came from a supplied witness rather than transported semistables.
    pub used_witness: bool,
    /// `(index, phase)` of every image outside `(psi, psi + 1]`.
    pub violations: Vec<(usize, f64)>,
}

/// Whether every image phase lies in `(psi, psi + 1]`.
pub fn check_heart_window(images: &[SemistableDatum], psi: f64) -> bool {
    heart_window_report(images, psi, 0.0, false).pass
}

pub fn heart_window_report(images: &[SemistableDatum], psi: f64, tol: f64, used_witness: bool) -> HeartWindowReport {
    let violations: Vec<(usize, f64)> = images
        .iter()
        .enumerate()
        .filter(|(_, d)| !(d.phase > psi - tol && d.phase <= psi + 1.0 + tol))
        .map(|(i, d)| (i, d.phase))
        .collect();
    HeartWindowReport { pass: violations.is_empty(), psi, used_witness, violations }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub pass: bool,
    /// Largest relative phase residual of `(P v, f(phi))` against `Z`.
    pub residual: f64,
    pub worst_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatibilityCheck {
    ChargeIntertwine,
    HeartWindow,
    PhaseTransport,
}

impl CompatibilityCheck {
    pub fn describe(&self) -> &'static str {
        match self {
            CompatibilityCheck::ChargeIntertwine => "Z(P v) != M Z(v): charges do not intertwine",
            CompatibilityCheck::HeartWindow => "the image of the heart leaves the window (psi, psi + 1]",
            CompatibilityCheck::PhaseTransport => "a transported semistable has inconsistent phase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tol: f64,
    pub intertwine: IntertwineReport,
    pub heart_window: HeartWindowReport,
    pub transport: TransportReport,
    /// Failed checks in evaluation order.
    pub failures: Vec<CompatibilityCheck>,
    pub first_failure: Option<CompatibilityCheck>,
}

/// `(Phi, sigma, g)` with the outcome of the compatibility checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibleTriple {
    auto: AutoequivalenceData,
    sigma: StabilityData,
    g: CoverElem,
    verified: bool,
    spanning: bool,
    report: VerificationReport,
}

impl CompatibleTriple {
    pub fn auto(&self) -> &AutoequivalenceData {
        &self.auto
    }
    pub fn sigma(&self) -> &StabilityData {
        &self.sigma
    }
    pub fn g(&self) -> &CoverElem {
        &self.g
    }
    pub fn verified(&self) -> bool {
        self.verified
    }
    pub fn spanning(&self) -> bool {
        self.spanning
    }
    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::UnverifiedTriple)
        }
    }

    /// `(Phi^k, sigma, g^k)`, re-verified.
    pub fn power(&self, k: u32) -> Result<CompatibleTriple> {
        let g = self.g.power(k as i64)?;
        verify_triple(&self.auto.power(k), &self.sigma, &g, self.report.tol)
    }
}

/// Move a datum to phase in `(0, 1]` by an integer shift, which negates the class for odd shifts.
fn normalize_to_heart(d: &SemistableDatum) -> Result<SemistableDatum> {
    let k = d.phase.ceil() - 1.0;
    let sign = if (k as i64).rem_euclid(2) == 0 { 1 } else { -1 };
    let v = d.v.iter().map(|x| x.checked_mul(sign).ok_or(Error::LatticeOverflow)).collect::<Result<_>>()?;
    Ok(SemistableDatum { v, phase: d.phase - k })
}

/// `(P v, f(phi))`.
pub fn transport_datum(d: &SemistableDatum, p: &IntMatrix, g: &CoverElem) -> Result<SemistableDatum> {
    Ok(SemistableDatum { v: p.apply_i64(&d.v)?, phase: g.evaluate(d.phase) })
}

pub fn verify_triple(auto: &AutoequivalenceData, sigma: &StabilityData, g: &CoverElem, tol: f64) -> Result<CompatibleTriple> {
    verify_triple_with_images(auto, sigma, g, None, tol)
}

/// Compatibility check. `images`, when given, are the claimed images of heart
/// generators and replace the transported semistables in the heart-window check.
pub fn verify_triple_with_images(
    auto: &AutoequivalenceData,
    sigma: &StabilityData,
    g: &CoverElem,
    images: Option<&[SemistableDatum]>,
    tol: f64,
) -> Result<CompatibleTriple> {
    if auto.p().dim() != sigma.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), got: auto.p().dim() });
    }
    let z = sigma.z();
    let intertwine = check_charge_intertwine(z, auto, g.m(), tol)?;

    let psi = g.evaluate(0.0);
    let heart_window = match images {
        Some(imgs) => {
            for d in imgs {
                check_datum(z, d, sigma.weak(), PHASE_TOL.max(tol))?;
            }
            heart_window_report(imgs, psi, tol, true)
        }
        None => {
            let transported = sigma
                .semistables()
                .iter()
                .map(|d| transport_datum(&normalize_to_heart(d)?, auto.p(), g))
                .collect::<Result<Vec<_>>>()?;
            heart_window_report(&transported, psi, tol, false)
        }
    };

    let mut residual = 0.0_f64;
    let mut worst = None;
    for (i, d) in sigma.semistables().iter().enumerate() {
        let t = transport_datum(d, auto.p(), g)?;
        let c = charge_of(z, &t.v)?;
        let r = if zero_charge(z, &t.v, c) {
            if sigma.weak() && is_integer(t.phase, tol) {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            phase_residual(c, t.phase).unwrap_or(f64::INFINITY)
        };
        if r > residual || (worst.is_none() && r.is_infinite()) {
            residual = r;
            worst = Some(i);
        }
    }
    let transport = TransportReport { pass: residual <= tol, residual, worst_index: worst };

    let mut failures = Vec::new();
    if !intertwine.pass {
        failures.push(CompatibilityCheck::ChargeIntertwine);
    }
    if !heart_window.pass {
        failures.push(CompatibilityCheck::HeartWindow);
    }
    if !transport.pass {
        failures.push(CompatibilityCheck::PhaseTransport);
    }
    let report = VerificationReport { tol, intertwine, heart_window, transport, first_failure: failures.first().copied(), failures };
    Ok(CompatibleTriple {
        auto: auto.clone(),
        sigma: sigma.clone(),
        g: *g,
        verified: report.failures.is_empty(),
        spanning: spanning_image(sigma),
        report,
    })
}

/// `Phi` applied to HN data: `(v, phi) -> (P v, f_g(phi))`.
pub fn apply_auto(e: &HNObject, triple: &CompatibleTriple) -> Result<HNObject> {
    triple.require_verified()?;
    let factors = e
        .factors()
        .iter()
        .map(|d| transport_datum(d, triple.auto().p(), triple.g()))
        .collect::<Result<Vec<_>>>()?;
    HNObject::new(factors)
}

/// Right action `sigma . g`: `Z -> M^{-1} Z`, phases `phi -> f^{-1}(phi)`.
pub fn act_on_stability(sigma: &StabilityData, g: &CoverElem) -> Result<StabilityData> {
    let ginv = g.inverse()?;
    let z = sigma.z().transform(ginv.m());
    let semistables = sigma.semistables().iter().map(|d| SemistableDatum::new(d.v.clone(), ginv.evaluate(d.phase))).collect();
    let support_c = sigma.support_c().map(|c| c * g.m().norm());
    StabilityData::new(z, semistables, support_c, sigma.weak())
}

/// Left action `Phi . sigma`: `Z -> Z . P^{-1}`, semistables `(v, phi) -> (P v, phi)`.
pub fn act_by_auto(sigma: &StabilityData, auto: &AutoequivalenceData) -> Result<StabilityData> {
    let pinv = auto.p().unimodular_inverse()?;
    let z = sigma.z().compose(&pinv)?;
    let semistables = sigma
        .semistables()
        .iter()
        .map(|d| Ok(SemistableDatum::new(auto.p().apply_i64(&d.v)?, d.phase)))
        .collect::<Result<Vec<_>>>()?;
    let row_norm = auto
        .p()
        .rows()
        .map(|r| r.iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).sum::<f64>())
        .fold(0.0, f64::max);
    let support_c = sigma.support_c().map(|c| c * row_norm);
    StabilityData::new(z, semistables, support_c, sigma.weak())
}

/// Serialized triple: automorphism, stability data, cover element and an optional
/// witness for the images of heart generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub auto: AutoequivalenceData,
    pub sigma: StabilityData,
    pub g: CoverElem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<SemistableDatum>>,
}

impl TripleSpec {
    pub fn verify(&self, tol: f64) -> Result<CompatibleTriple> {
        verify_triple_with_images(&self.auto, &self.sigma, &self.g, self.images.as_deref(), tol)
    }
}

/// Why no window `(psi, psi + 1]` can hold the images of both simples under the
/// spherical twist along the first simple of the A2 quiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GinzburgCertificate {
    pub d: i64,
    pub phase1: f64,
    pub phase2: f64,
    /// Shift `1 - d` taking the first simple to its image.
    pub gap: f64,
    /// Half-open range of `psi` allowed by the image of the first simple: `[p1 - d, p1 + 1 - d)`.
    pub psi_from_first: (f64, f64),
    /// Range allowed by the image of the second simple, whose HN phases are `p2 > p1`: `[p2 - 1, p1)`.
    pub psi_from_second: (f64, f64),
    pub feasible: bool,
    /// The extension would need `arg z2 <= arg(z1 + z2) <= arg z1`, which fails.
    pub ordering_violated: bool,
}

pub fn ginzburg_infeasibility(z1: Complex64, z2: Complex64, d: i64) -> Result<GinzburgCertificate> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::PreconditionViolated(format!("d = {d} must be an odd integer at least 3")));
    }
    let in_half_plane = |z: Complex64| z.norm() > 0.0 && (z.im > 0.0 || (z.im == 0.0 && z.re > 0.0));
    if !in_half_plane(z1) || !in_half_plane(z2) {
        return Err(Error::PreconditionViolated("charges must lie in the half-plane of phases [0, 1)".into()));
    }
    let p1 = phase_of([z1.re, z1.im]);
    let p2 = phase_of([z2.re, z2.im]);
    if !(p2 > p1) {
        return Err(Error::PreconditionViolated(format!("need arg z2 > arg z1, got phases {p1} and {p2}")));
    }
    let df = d as f64;
    let first = (p1 - df, p1 + 1.0 - df);
    let second = (p2 - 1.0, p1);
    let feasible = first.0.max(second.0) < first.1.min(second.1);
    let q = phase_of({
        let s = z1 + z2;
        [s.re, s.im]
    });
    let ordering_violated = !(p2 <= q && q <= p1);
    Ok(GinzburgCertificate { d, phase1: p1, phase2: p2, gap: 1.0 - df, psi_from_first: first, psi_from_second: second, feasible, ordering_violated })
}

/// The A2 data: `z_i = e^{i pi phase_i}`, `P` sending `[S1] -> [S1]`, `[S2] -> [S1] + [S2]`,
/// `M` the real map with `z1 -> z1`, `z2 -> z1 + z2`, and the images of the two simples
/// as a heart-window witness.
pub fn ginzburg_triple_spec(phase1: f64, phase2: f64, d: i64) -> Result<TripleSpec> {
    let z1 = Complex64::from_polar(1.0, PI * phase1);
    let z2 = Complex64::from_polar(1.0, PI * phase2);
    ginzburg_infeasibility(z1, z2, d)?;
    let zmat = Mat2::new(z1.re, z2.re, z1.im, z2.im);
    let p = Mat2::new(1.0, 1.0, 0.0, 1.0);
    let m = zmat * p * zmat.inverse()?;
    let sigma = StabilityData::new(
        CentralCharge::from_columns(&[z1, z2])?,
        vec![SemistableDatum::new(vec![1, 0], phase1), SemistableDatum::new(vec![0, 1], phase2)],
        None,
        false,
    )?;
    let auto = AutoequivalenceData::new(IntMatrix::from_rows(&[[1, 1], [0, 1]]), format!("spherical twist, d = {d}"))?;
    let g = CoverElem::lift_near(m, 0.0)?;
    let s = z1 + z2;
    let images = vec![
        SemistableDatum::new(vec![1, 0], phase1 + 1.0 - d as f64),
        SemistableDatum::new(vec![1, 1], phase_of([s.re, s.im])),
    ];
    Ok(TripleSpec { auto, sigma, g, images: Some(images) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn curve_charge() -> CentralCharge {
        // Z(rk, deg) = -deg + i rk
        CentralCharge::new(vec![0.0, -1.0], vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn charge_examples() {
        let z = curve_charge();
        assert_eq!(charge_of(&z, &[0, 0]).unwrap(), c(0.0, 0.0));
        assert_eq!(charge_of(&z, &[1, 0]).unwrap(), c(0.0, 1.0));
        assert_eq!(charge_of(&z, &[0, 1]).unwrap(), c(-1.0, 0.0));
        assert!(matches!(charge_of(&z, &[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mass_and_phases() {
        let z = CentralCharge::from_columns(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let e = HNObject::new(vec![SemistableDatum::new(vec![-1, 0], 1.0), SemistableDatum::new(vec![1, 0], 0.0)]).unwrap();
        e.validate(&z, false, PHASE_TOL).unwrap();
        assert_eq!(mass(&e, &z, 0.0).unwrap(), 2.0);
        assert!((mass(&e, &z, 1.0).unwrap() - (1f64.exp() + 1.0)).abs() < 1e-15);
        assert_eq!(phases(&e), (1.0, 0.0));
        assert!(HNObject::new(vec![SemistableDatum::new(vec![1, 0], 0.0), SemistableDatum::new(vec![1, 0], 0.0)]).is_err());
    }

    #[test]
    fn spanning_examples() {
        assert!(spanning_charges(&[c(1.0, 0.0), c(0.0, 1.0)]));
        assert!(!spanning_charges(&[c(1.0, 0.0), c(2.0, 0.0), c(-3.0, 0.0)]));
    }

    #[test]
    fn validation_rejects_wrong_phase() {
        let z = curve_charge();
        assert!(StabilityData::new(z.clone(), vec![SemistableDatum::new(vec![1, 0], 0.5)], None, false).is_ok());
        assert!(StabilityData::new(z.clone(), vec![SemistableDatum::new(vec![1, 0], 0.25)], None, false).is_err());
        assert!(StabilityData::new(z.clone(), vec![SemistableDatum::new(vec![1, 0], 0.5)], Some(0.5), false).is_err());
        let zero = CentralCharge::new(vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
        let d = vec![SemistableDatum::new(vec![0, 1], 1.0)];
        assert!(StabilityData::new(zero.clone(), d.clone(), None, false).is_err());
        assert!(StabilityData::new(zero, d, None, true).is_ok());
    }

    #[test]
    fn heart_window_examples() {
        let d = |p: f64| SemistableDatum::new(vec![1], p);
        assert!(check_heart_window(&[d(0.2), d(1.0)], 0.0));
        assert!(!check_heart_window(&[d(0.5), d(1.7)], 0.0));
        assert!(check_heart_window(&[d(3.2), d(4.0)], 3.0));
    }

    #[test]
    fn identity_triple_verifies() {
        let sigma = StabilityData::from_basis_charges(&[c(1.0, 0.0), c(0.3, 1.0)]).unwrap();
        let auto = AutoequivalenceData::new(IntMatrix::identity(2), "id").unwrap();
        let t = verify_triple(&auto, &sigma, &CoverElem::identity(), 1e-9).unwrap();
        assert!(t.verified() && t.spanning());
    }

    #[test]
    fn ginzburg_fails_on_heart_window() {
        let spec = ginzburg_triple_spec(0.3, 0.6, 3).unwrap();
        let t = spec.verify(1e-9).unwrap();
        assert!(t.report().intertwine.pass);
        assert!(t.report().intertwine.residual <= 1e-12);
        assert!(!t.verified());
        assert_eq!(t.report().first_failure, Some(CompatibilityCheck::HeartWindow));
        let cert = ginzburg_infeasibility(Complex64::from_polar(1.0, 0.3 * PI), Complex64::from_polar(1.0, 0.6 * PI), 3).unwrap();
        assert!(!cert.feasible && cert.ordering_violated);
        assert_eq!(cert.gap, -2.0);
        assert!(ginzburg_infeasibility(c(1.0, 1.0), c(-1.0, 1.0), 1).is_err());
        assert!(ginzburg_infeasibility(c(-1.0, 1.0), c(1.0, 1.0), 3).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"rank": 2, "Z": [[0, -1], [1, 0]], "semistables": [{"v": [1, 0], "phase": 0.5}, {"v": [0, 1], "phase": 1.0}], "weak": false}"#;
        let s: StabilityData = serde_json::from_str(text).unwrap();
        assert_eq!(s.rank(), 2);
        let back: StabilityData = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"rank": 3, "Z": [[0, -1], [1, 0]], "semistables": [{"v": [1, 0], "phase": 0.5}]}"#;
        assert!(serde_json::from_str::<StabilityData>(bad).is_err());
    }
}
