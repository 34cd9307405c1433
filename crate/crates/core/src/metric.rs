//! Bridgeland-type distance on stability data, the quotient by the complex action and
//! the stable translation length of a compatible triple.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cover::{evaluate_lift, CoverElem};
use crate::error::{Error, Result};
use crate::mat2::{Mat2, ScaledMat2};
use crate::stability::{
    act_on_stability, charge_of, mass, phases, spanning_charges, CompatibleTriple, HNObject, SemistableDatum,
    StabilityData,
};

/// Points of the uniform grid on `[0, 1)` used for the phase supremum.
pub const PHASE_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub n: u64,
    #[serde(with = "crate::serde_util::complex")]
    pub alpha_opt: Complex64,
    pub distance: f64,
    pub a_value: f64,
    pub b_value: f64,
}

/// How the supremum over directions in the B functional is taken.
#[derive(Debug, Clone, PartialEq)]
pub enum NormMode {
    /// Operator norm on R^2.
    Operator,
    /// `sup_{v in S} |M v| / |v|` over a finite spanning set of charges.
    Semistable(Vec<Complex64>),
}

/// `M_g^n` in scaled form and the lift value `f^n(0)`.
fn power_data(g: &CoverElem, n: u64) -> (ScaledMat2, f64) {
    g.scaled_power(n)
}

/// Phases in `[0, 1)` where `f - id` for the linear map `u` can be extremal:
/// the circle map has derivative `det u / |u e|^2`, equal to 1 exactly there.
fn critical_phases(u: &Mat2) -> Vec<f64> {
    let g = u.transpose() * *u;
    let (p, q, r) = (g.0[0][0], g.0[0][1], g.0[1][1]);
    let amp = ((p - r) / 2.0).hypot(q);
    if amp == 0.0 {
        return Vec::new();
    }
    let c = (u.det() - (p + r) / 2.0) / amp;
    if c.abs() > 1.0 {
        return Vec::new();
    }
    let psi = q.atan2((p - r) / 2.0);
    let a = c.acos();
    [psi + a, psi - a].iter().map(|two_theta| (two_theta / (2.0 * PI)).rem_euclid(1.0)).collect()
}

/// `(min, max)` of `f^n(phi) - phi` over the grid, the critical phases and `extra`.
fn displacement_range(unit: &Mat2, f0: f64, extra: &[f64], grid: bool) -> (f64, f64) {
    let mut pts: Vec<f64> = extra.to_vec();
    if grid {
        pts.extend((0..PHASE_GRID).map(|i| i as f64 / PHASE_GRID as f64));
        pts.extend(critical_phases(unit));
    }
    pts.iter().map(|&p| evaluate_lift(unit, f0, p) - p).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), h| {
        (lo.min(h), hi.max(h))
    })
}

/// `A_{n,alpha} = sup_phi |f_g^n(phi) + Re alpha - phi|` over `phases`, plus the phase grid
/// and the critical phases when `grid` is set.
pub fn a_functional(g: &CoverElem, n: u64, alpha: Complex64, phases: &[f64], grid: bool) -> Result<f64> {
    if phases.is_empty() && !grid {
        return Err(Error::InvalidData("no phases for the A functional".into()));
    }
    let (p, f0) = power_data(g, n);
    let (lo, hi) = displacement_range(&p.unit, f0, phases, grid);
    Ok((hi + alpha.re).max(-(lo + alpha.re)))
}

/// `(log ||M^n||, log ||M^{-n}||)` in the chosen norm.
///
/// `M^{-n}` is taken as `adj(U) e^{L - n log det M}` for `M^n = e^L U`, which stays
/// accurate when `U` is nearly singular.
fn log_norm_pair(g: &CoverElem, n: u64, mode: &NormMode) -> Result<(f64, f64)> {
    let (p, _) = power_data(g, n);
    let log_det = g.m().det().ln();
    let [[a, b], [c, d]] = p.unit.0;
    let adj = Mat2::new(d, -b, -c, a);
    let inv_scale = p.log_scale - n as f64 * log_det;
    match mode {
        NormMode::Operator => Ok((p.log_scale + p.unit.norm().ln(), inv_scale + adj.norm().ln())),
        NormMode::Semistable(set) => {
            if !spanning_charges(set) {
                return Err(Error::NonSpanningSet);
            }
            let sup = |m: &Mat2| {
                set.iter()
                    .filter(|v| v.norm() > 0.0)
                    .map(|v| (m.apply_c(*v).norm() / v.norm()).ln())
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            Ok((p.log_scale + sup(&p.unit), inv_scale + sup(&adj)))
        }
    }
}

/// `B_{n,alpha} = max(log ||M^{-1}||, log ||M||)` for `M = M_alpha M_g^n`.
pub fn b_functional(g: &CoverElem, n: u64, alpha: Complex64, mode: &NormMode) -> Result<f64> {
    let (up, down) = log_norm_pair(g, n, mode)?;
    let s = PI * alpha.im;
    Ok((up - s).max(down + s))
}

/// `alpha = -f^n(0) + i (n / 2 pi) log det M_g`, the explicit choice that bounds both functionals.
pub fn seed_alpha(g: &CoverElem, n: u64) -> Complex64 {
    let (_, f0) = power_data(g, n);
    Complex64::new(-f0, n as f64 * g.m().det().ln() / (2.0 * PI))
}

/// Distance from `sigma` to the complex orbit of `Phi^n sigma`, minimized over `alpha`.
///
/// The real part of `alpha` only enters A and the imaginary part only B, each as the max of
/// an increasing and a decreasing affine function, so both minima are attained in closed form.
fn minimize(g: &CoverElem, n: u64, phases: &[f64], grid: bool, mode: &NormMode) -> Result<MetricSample> {
    let (p, f0) = power_data(g, n);
    let (lo, hi) = displacement_range(&p.unit, f0, phases, grid);
    let re = -(hi + lo) / 2.0;
    let (up, down) = log_norm_pair(g, n, mode)?;
    let im = (up - down) / (2.0 * PI);
    let alpha = Complex64::new(re, im);
    let a_value = (hi - lo) / 2.0;
    let b_value = (up + down) / 2.0;
    Ok(MetricSample { n, alpha_opt: alpha, distance: a_value.max(b_value), a_value, b_value })
}

/// Quotient distance `inf_alpha d(sigma, Phi^n sigma alpha)` with the phase supremum over the
/// grid and the listed semistable phases and the operator norm.
pub fn quotient_distance(triple: &CompatibleTriple, n: u64) -> Result<MetricSample> {
    triple.require_verified()?;
    let phases: Vec<f64> = triple.sigma().semistables().iter().map(|d| d.phase).collect();
    minimize(triple.g(), n, &phases, true, &NormMode::Operator)
}

/// The orbit `(P^k v, f^k(phi))`, `|k| <= window`, of the listed semistables, as
/// `(charge, phase)`. Charges are obtained as `M^k Z(v)`.
pub fn semistable_orbit(triple: &CompatibleTriple, window: u64) -> Result<Vec<(Complex64, f64)>> {
    let g = triple.g();
    let ginv = g.inverse()?;
    let mut out = Vec::new();
    for d in triple.sigma().semistables() {
        let z0 = charge_of(triple.sigma().z(), &d.v)?;
        if z0.norm() == 0.0 {
            continue;
        }
        out.push((z0, d.phase));
        for step in [g, &ginv] {
            let (mut z, mut phi) = (z0, d.phase);
            for _ in 0..window {
                z = step.m().apply_c(z);
                z /= z.norm();
                phi = step.evaluate(phi);
                out.push((z, phi));
            }
        }
    }
    Ok(out)
}

/// Quotient distance with both suprema restricted to the semistable orbit `|k| <= 2n`.
pub fn quotient_distance_semistable(triple: &CompatibleTriple, n: u64) -> Result<MetricSample> {
    triple.require_verified()?;
    let orbit = semistable_orbit(triple, 2 * n.max(1))?;
    let phases: Vec<f64> = orbit.iter().map(|x| x.1).collect();
    let charges: Vec<Complex64> = orbit.iter().map(|x| x.0).collect();
    minimize(triple.g(), n, &phases, false, &NormMode::Semistable(charges))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationLength {
    /// `d_{n_max} / n_max`.
    pub estimate: f64,
    /// `log(rho(M_g) / sqrt(det M_g))`.
    pub closed_form: f64,
    /// `min_n d_n / n`, the infimum in the subadditive limit.
    pub fekete_min: f64,
    /// Displacement at `n = 1`, an upper bound for the stable length.
    pub displacement: f64,
    pub samples: Vec<MetricSample>,
}

pub fn closed_form_translation_length(g: &CoverElem) -> f64 {
    (g.m().spectral_radius() / g.m().det().sqrt()).ln()
}

pub fn stable_translation_length(triple: &CompatibleTriple, n_max: u64) -> Result<TranslationLength> {
    triple.require_verified()?;
    if n_max == 0 {
        return Err(Error::PreconditionViolated("n_max must be positive".into()));
    }
    let samples = (1..=n_max).map(|n| quotient_distance(triple, n)).collect::<Result<Vec<_>>>()?;
    let last = samples.last().unwrap();
    Ok(TranslationLength {
        estimate: last.distance / n_max as f64,
        closed_form: closed_form_translation_length(triple.g()),
        fekete_min: samples.iter().map(|s| s.distance / s.n as f64).fold(f64::INFINITY, f64::min),
        displacement: samples[0].distance,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConsistency {
    /// `(B(n) - B(n/2)) / (n/2)` with operator norms.
    pub operator_rate: f64,
    /// The same with the semistable-orbit norm.
    pub semistable_rate: f64,
    /// `log(rho / sqrt(det))`.
    pub expected: f64,
}

/// Growth rates of the optimal B value in the two norms.
pub fn norm_consistency(triple: &CompatibleTriple, n: u64) -> Result<NormConsistency> {
    let half = (n / 2).max(1);
    let op = |k| quotient_distance(triple, k).map(|s| s.b_value);
    let ss = |k| quotient_distance_semistable(triple, k).map(|s| s.b_value);
    let dn = (n - half) as f64;
    Ok(NormConsistency {
        operator_rate: (op(n)? - op(half)?) / dn,
        semistable_rate: (ss(n)? - ss(half)?) / dn,
        expected: closed_form_translation_length(triple.g()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbValue {
    pub value: f64,
    /// False when the supremum over all objects is only bounded below by the listed ones.
    pub exact: bool,
}

fn db_term(sigma: &StabilityData, e_sigma: &HNObject, tau: &StabilityData, e_tau: &HNObject) -> Result<f64> {
    let (sp, sm) = phases(e_sigma);
    let (tp, tm) = phases(e_tau);
    let ms = mass(e_sigma, sigma.z(), 0.0)?;
    let mt = mass(e_tau, tau.z(), 0.0)?;
    let log_ratio = if ms > 0.0 && mt > 0.0 { (ms / mt).ln().abs() } else { 0.0 };
    Ok((sp - tp).abs().max((sm - tm).abs()).max(log_ratio))
}

/// `sup |phi^+ diff|, |phi^- diff|, |log mass ratio|` over objects given by their HN data
/// with respect to each side. A lower bound for the distance.
pub fn db_over_set(sigma: &StabilityData, tau: &StabilityData, objects: &[(HNObject, HNObject)]) -> Result<DbValue> {
    if sigma.rank() != tau.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), got: tau.rank() });
    }
    let mut value = 0.0_f64;
    for (es, et) in objects {
        for f in es.factors().iter().chain(et.factors()) {
            if f.v.len() != sigma.rank() {
                return Err(Error::DimensionMismatch { expected: sigma.rank(), got: f.v.len() });
            }
        }
        value = value.max(db_term(sigma, es, tau, et)?);
    }
    Ok(DbValue { value, exact: false })
}

/// Distance from `sigma` to `sigma . g` over the listed semistables and `extra` objects.
/// The HN data on the other side is `(v, f^{-1}(phi))`, and the supremum reduces to
/// semistable objects, so the value is exact for the listed classes.
pub fn db_orbit(sigma: &StabilityData, g: &CoverElem, extra: &[HNObject]) -> Result<DbValue> {
    let tau = act_on_stability(sigma, g)?;
    let ginv = g.inverse()?;
    let transport = |e: &HNObject| {
        HNObject::new(e.factors().iter().map(|d| SemistableDatum::new(d.v.clone(), ginv.evaluate(d.phase))).collect())
    };
    let mut value = 0.0_f64;
    let singles: Vec<HNObject> = sigma.semistables().iter().cloned().map(HNObject::single).collect();
    for e in singles.iter().chain(extra) {
        value = value.max(db_term(sigma, e, &tau, &transport(e)?)?);
    }
    Ok(DbValue { value, exact: true })
}
