//! Mass growth, shifting numbers, Hom-table entropy and the inequality suite for
//! compatible triples.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::cover::{translation_number, CoverElem};
use crate::error::{Error, Result};
use crate::fit::{growth_fit, line_fit};
use crate::lattice::{poly_growth_rate, spectral_radius, SpectralOptions};
use crate::mat2::Mat2;
use crate::stability::{charge_of, CompatibleTriple, HNObject, SemistableDatum, StabilityData};

/// Fits use the samples with `n >= n_max / TAIL_DIVISOR`.
pub const TAIL_DIVISOR: u64 = 4;

/// Slack for the inequality suite and the linearity check.
pub const SUITE_TOL: f64 = 5e-2;

pub const DEFAULT_T_GRID: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub exp_rate: f64,
    pub poly_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyMethod {
    /// `poly` coefficient of the joint fit `rate n + poly ln n + c`.
    JointFit,
    /// Slope against `ln n` after subtracting `n` times the closed-form rate.
    ClosedFormSubtracted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDiagnostics {
    pub window: (u64, u64),
    pub fit_residual: f64,
    pub poly_method: PolyMethod,
    /// `max value(n) / n` over the tail window.
    pub ratio_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub t: Option<f64>,
    pub samples: Vec<(u64, f64)>,
    pub exp_rate: f64,
    pub poly_rate: f64,
    pub closed_form: Option<ClosedForm>,
    pub diagnostics: GrowthDiagnostics,
}

impl GrowthReport {
    /// Samples as CSV with header `n,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in &self.samples {
            out.push_str(&format!("{n},{v:.12e}\n"));
        }
        out
    }
}

fn tail_of(samples: &[(u64, f64)]) -> Result<(u64, u64, Vec<f64>, Vec<f64>)> {
    let n_max = samples.last().map(|s| s.0).ok_or(Error::InvalidData("no samples".into()))?;
    let lo = (n_max / TAIL_DIVISOR).max(1);
    let (ns, ys): (Vec<f64>, Vec<f64>) =
        samples.iter().filter(|(n, _)| *n >= lo).map(|(n, y)| (*n as f64, *y)).unzip();
    Ok((lo, n_max, ns, ys))
}

/// Fit a raw sequence `(n, value)` with `value ~ rate n + poly ln n + c` on the tail window.
/// Samples must be strictly increasing in `n`, finite and start at `n >= 1`.
pub fn fit_growth_sequence(samples: Vec<(u64, f64)>, t: Option<f64>) -> Result<GrowthReport> {
    if samples.is_empty() {
        return Err(Error::InvalidData("no samples".into()));
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) || samples[0].0 == 0 {
        return Err(Error::InvalidData("sample indices must be positive and strictly increasing".into()));
    }
    if samples.iter().any(|s| !s.1.is_finite()) {
        return Err(Error::InvalidData("non-finite sample value".into()));
    }
    let (lo, n_max, ns, ys) = tail_of(&samples)?;
    let ratio_estimate = ns.iter().zip(&ys).map(|(n, y)| y / n).fold(f64::NEG_INFINITY, f64::max);
    let (exp_rate, poly_rate, fit_residual) = match growth_fit(&ns, &ys) {
        Some(f) => (f.rate, f.poly, f.residual),
        None => match line_fit(&ns, &ys) {
            Some(l) => (l.slope, 0.0, l.residual),
            None => (ys[0] / ns[0], 0.0, f64::INFINITY),
        },
    };
    Ok(GrowthReport {
        t,
        samples,
        exp_rate,
        poly_rate,
        closed_form: None,
        diagnostics: GrowthDiagnostics { window: (lo, n_max), fit_residual, poly_method: PolyMethod::JointFit, ratio_estimate },
    })
}

/// `s` of a real 2x2 matrix: 1 for a non-scalar matrix with a repeated eigenvalue, else 0.
pub fn mat2_poly_growth(m: &Mat2, tol: f64) -> usize {
    let tr = m.trace();
    let disc = tr * tr - 4.0 * m.det();
    let scale = tr * tr + 4.0 * m.det().abs();
    let repeated = disc.abs() <= tol * scale.max(f64::MIN_POSITIVE);
    let scalar = m.0[0][1].abs() <= tol * m.max_abs()
        && m.0[1][0].abs() <= tol * m.max_abs()
        && (m.0[0][0] - m.0[1][1]).abs() <= tol * m.max_abs();
    usize::from(repeated && !scalar)
}

/// `(log rho(M_g), s(M_g))`.
pub fn closed_form_rates(g: &CoverElem) -> (f64, usize) {
    (g.m().spectral_radius().ln(), mat2_poly_growth(g.m(), 1e-9))
}

/// Per-factor log-modulus and phase of `Phi^n E` at each scheduled `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassTrajectory {
    ns: Vec<u64>,
    /// `states[i][j] = (log |Z(Phi^n E_j)|, phase)` at `n = ns[i]`.
    states: Vec<Vec<(f64, f64)>>,
}

impl MassTrajectory {
    /// Iterate `(v, phi) -> (P v, f_g(phi))` on the seed factors, tracking charges as
    /// unit vectors with a separate log-modulus.
    pub fn compute(g: &CoverElem, sigma: &StabilityData, seed: &HNObject, schedule: &[u64]) -> Result<Self> {
        let mut ns: Vec<u64> = schedule.to_vec();
        ns.sort_unstable();
        ns.dedup();
        ns.retain(|&n| n > 0);
        if ns.is_empty() {
            return Err(Error::InvalidData("empty schedule".into()));
        }
        let mut units = Vec::new();
        let mut logs = Vec::new();
        let mut phases = Vec::new();
        for f in seed.factors() {
            let c = charge_of(sigma.z(), &f.v)?;
            let r = c.norm();
            if r > 0.0 {
                units.push([c.re / r, c.im / r]);
                logs.push(r.ln());
                phases.push(f.phase);
            }
        }
        if units.is_empty() {
            return Err(Error::InvalidData("seed has zero mass".into()));
        }
        let m = *g.m();
        let mut states = Vec::with_capacity(ns.len());
        let mut next = 0;
        let n_max = *ns.last().unwrap();
        for step in 1..=n_max {
            for j in 0..units.len() {
                let w = m.apply(units[j]);
                let r = w[0].hypot(w[1]);
                units[j] = [w[0] / r, w[1] / r];
                logs[j] += r.ln();
                phases[j] = g.evaluate(phases[j]);
            }
            if ns[next] == step {
                states.push(logs.iter().copied().zip(phases.iter().copied()).collect());
                next += 1;
            }
        }
        Ok(MassTrajectory { ns, states })
    }

    pub fn ns(&self) -> &[u64] {
        &self.ns
    }

    /// `log m_t` at the `i`-th scheduled index, by log-sum-exp.
    pub fn log_mass(&self, i: usize, t: f64) -> f64 {
        let terms: Vec<f64> = self.states[i].iter().map(|(l, p)| l + p * t).collect();
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + terms.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
    }

    pub fn log_masses(&self, t: f64) -> Vec<(u64, f64)> {
        (0..self.ns.len()).map(|i| (self.ns[i], self.log_mass(i, t))).collect()
    }

    /// `(n, phi^+, phi^-)` of `Phi^n E`.
    pub fn phase_extremes(&self) -> Vec<(u64, f64, f64)> {
        self.ns
            .iter()
            .zip(&self.states)
            .map(|(&n, s)| {
                let hi = s.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
                let lo = s.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
                (n, hi, lo)
            })
            .collect()
    }
}

/// The HN object of the direct sum of all listed semistables: classes of equal phase
/// are merged and factors ordered by decreasing phase.
pub fn generator_seed(sigma: &StabilityData) -> Result<HNObject> {
    let mut by_phase: Vec<SemistableDatum> = Vec::new();
    let mut sorted: Vec<&SemistableDatum> = sigma.semistables().iter().collect();
    sorted.sort_by(|a, b| b.phase.total_cmp(&a.phase));
    for d in sorted {
        match by_phase.last_mut() {
            Some(last) if last.phase == d.phase => {
                for (x, y) in last.v.iter_mut().zip(&d.v) {
                    *x = x.checked_add(*y).ok_or(Error::LatticeOverflow)?;
                }
            }
            _ => by_phase.push(d.clone()),
        }
    }
    HNObject::new(by_phase)
}

fn mass_report_from(trajectory: &MassTrajectory, triple: &CompatibleTriple, t: f64) -> Result<GrowthReport> {
    let mut report = fit_growth_sequence(trajectory.log_masses(t), Some(t))?;
    if triple.spanning() {
        let (lr, s) = closed_form_rates(triple.g());
        report.closed_form = Some(ClosedForm { exp_rate: lr, poly_rate: Some(s as f64) });
    }
    Ok(report)
}

/// `log m_{sigma,t}(Phi^n E)` over the schedule, with `exp_rate` the fitted growth rate.
pub fn mass_growth(triple: &CompatibleTriple, seed: &HNObject, t: f64, schedule: &[u64]) -> Result<GrowthReport> {
    triple.require_verified()?;
    let traj = MassTrajectory::compute(triple.g(), triple.sigma(), seed, schedule)?;
    mass_report_from(&traj, triple, t)
}

fn pol_report_from(trajectory: &MassTrajectory, triple: &CompatibleTriple, t: f64) -> Result<GrowthReport> {
    let mut report = mass_report_from(trajectory, triple, t)?;
    // The closed-form rate is only known at t = 0; elsewhere the shifting number would
    // enter multiplied by n and amplify its estimation error.
    if let (Some(cf), true) = (report.closed_form, t == 0.0) {
        let (lo, n_max, ns, ys) = tail_of(&report.samples)?;
        let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
        let rem: Vec<f64> = ns.iter().zip(&ys).map(|(n, y)| y - n * cf.exp_rate).collect();
        if let Some(l) = line_fit(&xs, &rem) {
            report.poly_rate = l.slope;
            report.diagnostics.fit_residual = l.residual;
            report.diagnostics.window = (lo, n_max);
            report.diagnostics.poly_method = PolyMethod::ClosedFormSubtracted;
        }
    }
    Ok(report)
}

/// Polynomial mass growth: the `ln n` rate of `log m_{sigma,t}(Phi^n E) - n h_{sigma,t}`.
pub fn pol_mass_growth(triple: &CompatibleTriple, seed: &HNObject, t: f64, schedule: &[u64]) -> Result<GrowthReport> {
    triple.require_verified()?;
    let traj = MassTrajectory::compute(triple.g(), triple.sigma(), seed, schedule)?;
    pol_report_from(&traj, triple, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftingNumbers {
    pub upper: f64,
    pub lower: f64,
    pub translation_number: f64,
    /// `max(|upper - tn|, |lower - tn|)`.
    pub discrepancy: f64,
    pub n_max: u64,
}

/// Least-squares slopes of `f^n(phi^+)` and `f^n(phi^-)` over `n = 0..=n_max`.
pub fn shifting_numbers(triple: &CompatibleTriple, seed: &HNObject, n_max: u64) -> Result<ShiftingNumbers> {
    triple.require_verified()?;
    let tn = translation_number(triple.g(), n_max)?;
    let (hi, lo) = crate::stability::phases(seed);
    let ks: Vec<f64> = (0..=n_max).map(|k| k as f64).collect();
    let slope = |phi: f64| line_fit(&ks, &triple.g().orbit(phi, n_max)).map(|l| l.slope).unwrap_or(f64::NAN);
    let (upper, lower) = (slope(hi), slope(lo));
    Ok(ShiftingNumbers {
        upper,
        lower,
        translation_number: tn.estimate,
        discrepancy: (upper - tn.estimate).abs().max((lower - tn.estimate).abs()),
        n_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolShiftingNumbers {
    pub upper: f64,
    pub lower: f64,
    pub window: (u64, u64),
    /// `(f^n(phi^+) - f^n(phi^-)) / ln n` at `n = n_max`; tends to 0.
    pub sublinearity: f64,
}

/// `ln n` rates of `f^n(phi^+) - n nu` and `f^n(phi^-) - n nu`, from the joint fit
/// `f^n(phi) ~ nu n + rate ln n + c` on the tail window.
pub fn pol_shifting_numbers(triple: &CompatibleTriple, seed: &HNObject, n_max: u64) -> Result<PolShiftingNumbers> {
    triple.require_verified()?;
    if n_max < 16 {
        return Err(Error::PreconditionViolated(format!("n_max = {n_max} must be at least 16")));
    }
    let (hi, lo) = crate::stability::phases(seed);
    let start = (n_max / TAIL_DIVISOR).max(1);
    let ns: Vec<f64> = (start..=n_max).map(|k| k as f64).collect();
    let orbit_hi = triple.g().orbit(hi, n_max);
    let orbit_lo = triple.g().orbit(lo, n_max);
    let rate = |orbit: &[f64]| {
        let ys = &orbit[start as usize..];
        growth_fit(&ns, ys).map(|f| f.poly).unwrap_or(f64::NAN)
    };
    let last = n_max as usize;
    Ok(PolShiftingNumbers {
        upper: rate(&orbit_hi),
        lower: rate(&orbit_lo),
        window: (start, n_max),
        sublinearity: (orbit_hi[last] - orbit_lo[last]) / (n_max as f64).ln(),
    })
}

/// `dim Hom(G, Phi^n G'[k])` for `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<HomEntry>", into = "Vec<HomEntry>")]
pub struct HomTable {
    entries: BTreeMap<(u64, i64), u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEntry {
    pub n: u64,
    pub k: i64,
    pub dim: u64,
}

impl TryFrom<Vec<HomEntry>> for HomTable {
    type Error = Error;
    fn try_from(v: Vec<HomEntry>) -> Result<Self> {
        let mut table = HomTable::default();
        for e in v {
            if e.n == 0 {
                return Err(Error::InvalidData("Hom table rows start at n = 1".into()));
            }
            if table.entries.insert((e.n, e.k), e.dim).is_some() {
                return Err(Error::InvalidData(format!("duplicate Hom entry at n = {}, k = {}", e.n, e.k)));
            }
        }
        Ok(table)
    }
}

impl From<HomTable> for Vec<HomEntry> {
    fn from(t: HomTable) -> Self {
        t.entries.into_iter().map(|((n, k), dim)| HomEntry { n, k, dim }).collect()
    }
}

impl HomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table with `dim(n, k) = f(n, k)` for `1 <= n <= n_max` and `k` in `ks`.
    pub fn from_fn(n_max: u64, ks: std::ops::RangeInclusive<i64>, mut f: impl FnMut(u64, i64) -> u64) -> Self {
        let mut t = HomTable::new();
        for n in 1..=n_max {
            for k in ks.clone() {
                t.set(n, k, f(n, k));
            }
        }
        t
    }

    pub fn set(&mut self, n: u64, k: i64, dim: u64) {
        assert!(n >= 1, "Hom table rows start at n = 1");
        self.entries.insert((n, k), dim);
    }

    pub fn get(&self, n: u64, k: i64) -> u64 {
        self.entries.get(&(n, k)).copied().unwrap_or(0)
    }

    pub fn n_max(&self) -> u64 {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.values().all(|&d| d == 0)
    }

    /// Nonzero `(k, dim)` at row `n`.
    pub fn row(&self, n: u64) -> Vec<(i64, u64)> {
        self.entries.range((n, i64::MIN)..=(n, i64::MAX)).filter(|(_, &d)| d > 0).map(|(&(_, k), &d)| (k, d)).collect()
    }

    fn rows(&self) -> Vec<u64> {
        let mut ns: Vec<u64> = self.entries.iter().filter(|(_, &d)| d > 0).map(|(&(n, _), _)| n).collect();
        ns.dedup();
        ns
    }

    /// `log eps_t(n) = log sum_k dim(n, k) e^{-k t}`; `None` for an empty row.
    pub fn log_epsilon(&self, n: u64, t: f64) -> Option<f64> {
        let terms: Vec<f64> = self.row(n).iter().map(|&(k, d)| (d as f64).ln() - k as f64 * t).collect();
        if terms.is_empty() {
            return None;
        }
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(top + terms.iter().map(|x| (x - top).exp()).sum::<f64>().ln())
    }
}

fn hom_samples(table: &HomTable, t: f64) -> Result<Vec<(u64, f64)>> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(table.rows().into_iter().filter_map(|n| table.log_epsilon(n, t).map(|y| (n, y))).collect())
}

/// Entropy `h_t` as the growth rate of `log eps_t(G, Phi^n G')`.
pub fn entropy_from_hom(table: &HomTable, t: f64) -> Result<GrowthReport> {
    fit_growth_sequence(hom_samples(table, t)?, Some(t))
}

/// Polynomial entropy: the `ln n` rate once the linear term is removed.
pub fn pol_entropy_from_hom(table: &HomTable, t: f64) -> Result<GrowthReport> {
    entropy_from_hom(table, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonBounds {
    /// `(n, eps^+)`, `eps^+ = max{k : Hom(G, Phi^n G'[-k]) != 0}`.
    pub eps_plus: Vec<(u64, i64)>,
    /// `(n, eps^-)`, the corresponding minimum.
    pub eps_minus: Vec<(u64, i64)>,
    pub nu_upper: f64,
    pub nu_lower: f64,
}

pub fn epsilon_bounds_from_hom(table: &HomTable) -> Result<EpsilonBounds> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut eps_plus = Vec::new();
    let mut eps_minus = Vec::new();
    for n in table.rows() {
        let row = table.row(n);
        // Hom(G, F[-k]) sits at shift -k in the table.
        eps_plus.push((n, -row.iter().map(|x| x.0).min().unwrap()));
        eps_minus.push((n, -row.iter().map(|x| x.0).max().unwrap()));
    }
    let slope = |v: &[(u64, i64)]| {
        let xs: Vec<f64> = v.iter().map(|x| x.0 as f64).collect();
        let ys: Vec<f64> = v.iter().map(|x| x.1 as f64).collect();
        match line_fit(&xs, &ys) {
            Some(l) => l.slope,
            None => ys[0] / xs[0],
        }
    };
    Ok(EpsilonBounds { nu_upper: slope(&eps_plus), nu_lower: slope(&eps_minus), eps_plus, eps_minus })
}

/// Sample schedules and grids used by the suite and the linearity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub schedule: Vec<u64>,
    pub t_grid: Vec<f64>,
    /// Orbit length for the shifting numbers.
    pub shift_n_max: u64,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            schedule: crate::fit::linear_schedule(2048, 2048),
            t_grid: DEFAULT_T_GRID.to_vec(),
            shift_n_max: 4096,
            tol: SUITE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityRow {
    pub name: String,
    pub t: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` for an inequality `lhs >= rhs`.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub tol: f64,
    pub h_sigma: f64,
    pub h_sigma_pol: f64,
    pub log_rho_p: f64,
    pub s_p: usize,
    pub shifting: ShiftingNumbers,
    pub pol_shifting: Option<PolShiftingNumbers>,
    pub rows: Vec<InequalityRow>,
    pub violations: usize,
}

struct SuiteRows {
    tol: f64,
    rows: Vec<InequalityRow>,
}

impl SuiteRows {
    fn ge(&mut self, name: &str, t: Option<f64>, lhs: f64, rhs: f64) {
        let slack = lhs - rhs;
        self.rows.push(InequalityRow { name: name.into(), t, lhs, rhs, slack, pass: slack >= -self.tol });
    }
}

/// Fitted mass growth at every grid point, computed from one trajectory.
struct GridFits {
    exp: Vec<(f64, f64)>,
    pol: Vec<(f64, f64)>,
    h_sigma: f64,
    h_sigma_pol: f64,
}

fn grid_fits(triple: &CompatibleTriple, seed: &HNObject, cfg: &SuiteConfig) -> Result<GridFits> {
    let traj = MassTrajectory::compute(triple.g(), triple.sigma(), seed, &cfg.schedule)?;
    let mut exp = Vec::new();
    let mut pol = Vec::new();
    for &t in &cfg.t_grid {
        exp.push((t, mass_report_from(&traj, triple, t)?.exp_rate));
        pol.push((t, pol_report_from(&traj, triple, t)?.poly_rate));
    }
    let h0 = pol_report_from(&traj, triple, 0.0)?;
    Ok(GridFits { exp, pol, h_sigma: h0.exp_rate, h_sigma_pol: h0.poly_rate })
}

/// Every applicable inequality between mass growth, spectral data of `[Phi]` and the
/// shifting numbers, evaluated at fitted values on the configured t-grid.
pub fn yomdin_suite(
    triple: &CompatibleTriple,
    seed: &HNObject,
    hom_table: Option<&HomTable>,
    cfg: &SuiteConfig,
) -> Result<InequalityReport> {
    triple.require_verified()?;
    let opts = SpectralOptions::default();
    let p = triple.auto().p();
    let log_rho_p = spectral_radius(p, opts.root_tol)?.ln();
    let s_p = poly_growth_rate(p, &opts)?;
    let fits = grid_fits(triple, seed, cfg)?;
    let shifting = shifting_numbers(triple, seed, cfg.shift_n_max)?;
    let (nu_up, nu_lo) = (shifting.upper, shifting.lower);
    let h = fits.h_sigma;
    let mut r = SuiteRows { tol: cfg.tol, rows: Vec::new() };

    r.ge("mass growth >= log spectral radius", None, h, log_rho_p);
    if (h - log_rho_p).abs() <= cfg.tol {
        r.ge("polynomial mass growth >= polynomial spectral growth", None, fits.h_sigma_pol, s_p as f64);
    }
    for &(t, ht) in &fits.exp {
        let nu = if t >= 0.0 { nu_up } else { nu_lo };
        r.ge("h_t >= nu t", Some(t), ht, nu * t);
        r.ge("h + nu t >= h_t", Some(t), h + nu * t, ht);
        let other = if t >= 0.0 { nu_lo } else { nu_up };
        r.ge("h_t >= h + nu' t", Some(t), ht, h + other * t);
    }

    let entropy_zero = log_rho_p.abs() <= 1e-12 && h.abs() <= cfg.tol;
    let pol_shifting = if entropy_zero {
        let ps = pol_shifting_numbers(triple, seed, cfg.shift_n_max)?;
        let hp = fits.h_sigma_pol;
        for &(t, hpt) in &fits.pol {
            let nu = if t >= 0.0 { ps.upper } else { ps.lower };
            r.ge("pol h_t >= nu_pol t", Some(t), hpt, nu * t);
            r.ge("pol h + nu_pol t >= pol h_t", Some(t), hp + nu * t, hpt);
            let other = if t >= 0.0 { ps.lower } else { ps.upper };
            r.ge("pol h_t >= pol h + nu_pol' t", Some(t), hpt, hp + other * t);
        }
        Some(ps)
    } else {
        None
    };

    if let Some(table) = hom_table {
        let eps = epsilon_bounds_from_hom(table)?;
        let h_cat = entropy_from_hom(table, 0.0)?.exp_rate;
        r.ge("categorical entropy >= log spectral radius", None, h_cat, log_rho_p);
        for &t in &cfg.t_grid {
            let ht = entropy_from_hom(table, t)?.exp_rate;
            let nu = if t >= 0.0 { eps.nu_upper } else { eps.nu_lower };
            r.ge("entropy h_t >= nu t", Some(t), ht, nu * t);
            r.ge("h_cat + nu t >= entropy h_t", Some(t), h_cat + nu * t, ht);
        }
    }

    let violations = r.rows.iter().filter(|x| !x.pass).count();
    Ok(InequalityReport {
        tol: cfg.tol,
        h_sigma: h,
        h_sigma_pol: fits.h_sigma_pol,
        log_rho_p,
        s_p,
        shifting,
        pol_shifting,
        rows: r.rows,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearityRow {
    pub t: f64,
    pub fitted: f64,
    pub predicted: f64,
    pub deviation: f64,
    /// Entropy `h_t` from a supplied Hom table.
    pub hom_entropy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolLinearity {
    pub intercept: f64,
    pub slope: f64,
    pub rows: Vec<(f64, f64)>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearityReport {
    pub h_sigma: f64,
    pub nu_upper: f64,
    pub translation_number: f64,
    pub nu_discrepancy: f64,
    pub rows: Vec<LinearityRow>,
    pub max_deviation: f64,
    /// Present when the mass growth vanishes.
    pub polynomial: Option<PolLinearity>,
    /// `max |h_t - h_{sigma,t}|` over the grid when a Hom table is supplied.
    pub hom_gap: Option<f64>,
    pub pass: bool,
}

/// Fit `h_{sigma,t}` on the grid and compare with the line `h_sigma + nu t`.
pub fn linearity_check(
    triple: &CompatibleTriple,
    seed: &HNObject,
    hom_table: Option<&HomTable>,
    cfg: &SuiteConfig,
) -> Result<LinearityReport> {
    triple.require_verified()?;
    let fits = grid_fits(triple, seed, cfg)?;
    let sh = shifting_numbers(triple, seed, cfg.shift_n_max)?;
    let mut rows = Vec::new();
    for &(t, fitted) in &fits.exp {
        let predicted = fits.h_sigma + sh.upper * t;
        let hom_entropy = match hom_table {
            Some(tab) => Some(entropy_from_hom(tab, t)?.exp_rate),
            None => None,
        };
        rows.push(LinearityRow { t, fitted, predicted, deviation: (fitted - predicted).abs(), hom_entropy });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let hom_gap = hom_table.map(|_| rows.iter().map(|r| (r.hom_entropy.unwrap() - r.fitted).abs()).fold(0.0, f64::max));
    let polynomial = if fits.h_sigma.abs() <= cfg.tol {
        let ps = pol_shifting_numbers(triple, seed, cfg.shift_n_max)?;
        let intercept = fits.h_sigma_pol;
        let max_deviation = fits.pol.iter().map(|(t, v)| (v - intercept - ps.upper * t).abs()).fold(0.0, f64::max);
        Some(PolLinearity { intercept, slope: ps.upper, rows: fits.pol.clone(), max_deviation })
    } else {
        None
    };
    Ok(LinearityReport {
        h_sigma: fits.h_sigma,
        nu_upper: sh.upper,
        translation_number: sh.translation_number,
        nu_discrepancy: sh.discrepancy,
        pass: max_deviation <= cfg.tol && sh.discrepancy <= 2e-3,
        rows,
        max_deviation,
        polynomial,
        hom_gap,
    })
}

/// `(Phi^k, sigma, g^k)`, re-verified.
pub fn power_triple(triple: &CompatibleTriple, k: u32) -> Result<CompatibleTriple> {
    triple.power(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{geometric_schedule, linear_schedule};
    use crate::lattice::IntMatrix;
    use crate::stability::{verify_triple, AutoequivalenceData, StabilityData};
    use num_complex::Complex64;

    fn triple_from(p: &[[i64; 2]; 2], zcols: [Complex64; 2], near: f64) -> CompatibleTriple {
        let sigma = StabilityData::from_basis_charges(&zcols).unwrap();
        let pf = Mat2::new(p[0][0] as f64, p[0][1] as f64, p[1][0] as f64, p[1][1] as f64);
        let zm = Mat2::new(zcols[0].re, zcols[1].re, zcols[0].im, zcols[1].im);
        let m = zm * pf * zm.inverse().unwrap();
        let g = CoverElem::lift_near(m, near).unwrap();
        let auto = AutoequivalenceData::new(IntMatrix::from_rows(p), "test").unwrap();
        let t = verify_triple(&auto, &sigma, &g, 1e-9).unwrap();
        assert!(t.verified(), "{:?}", t.report());
        t
    }

    fn std_basis() -> [Complex64; 2] {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
    }

    #[test]
    fn identity_triple_is_flat() {
        let t = triple_from(&[[1, 0], [0, 1]], std_basis(), 0.0);
        let seed = generator_seed(t.sigma()).unwrap();
        let r = mass_growth(&t, &seed, 0.0, &geometric_schedule(1024, 4)).unwrap();
        assert!(r.exp_rate.abs() < 1e-12);
        let p = pol_mass_growth(&t, &seed, 0.0, &geometric_schedule(1024, 4)).unwrap();
        assert!(p.poly_rate.abs() < 1e-9);
    }

    #[test]
    fn hyperbolic_rate() {
        let t = triple_from(&[[2, 1], [1, 1]], std_basis(), 0.0);
        let seed = generator_seed(t.sigma()).unwrap();
        let r = mass_growth(&t, &seed, 0.0, &linear_schedule(2048, 2048)).unwrap();
        let lr = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.exp_rate - lr).abs() < 1e-3, "{}", r.exp_rate);
        assert!((r.closed_form.unwrap().exp_rate - lr).abs() < 1e-12);
    }

    #[test]
    fn diagonal_hyperbolic_has_no_poly_term() {
        let t = triple_from(&[[2, 1], [1, 1]], std_basis(), 0.0);
        let seed = generator_seed(t.sigma()).unwrap();
        let p = pol_mass_growth(&t, &seed, 0.0, &geometric_schedule(1 << 16, 8)).unwrap();
        assert!(p.poly_rate.abs() < 0.05, "{}", p.poly_rate);
    }

    #[test]
    fn unipotent_poly_rate() {
        let t = triple_from(&[[1, 0], [3, 1]], [Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)], 0.0);
        let seed = generator_seed(t.sigma()).unwrap();
        let r = pol_mass_growth(&t, &seed, 0.0, &geometric_schedule(1 << 20, 16)).unwrap();
        assert!(r.exp_rate.abs() < 1e-3);
        assert!((r.poly_rate - 1.0).abs() < 0.15, "{}", r.poly_rate);
    }

    #[test]
    fn shifting_numbers_of_translations() {
        let sigma = StabilityData::from_basis_charges(&std_basis()).unwrap();
        let auto = AutoequivalenceData::new(IntMatrix::from_rows(&[[-1, 0], [0, -1]]), "[1]").unwrap();
        let t = verify_triple(&auto, &sigma, &CoverElem::shift(1), 1e-9).unwrap();
        assert!(t.verified());
        let seed = generator_seed(&sigma).unwrap();
        let s = shifting_numbers(&t, &seed, 256).unwrap();
        assert!((s.upper - 1.0).abs() < 1e-12 && (s.lower - 1.0).abs() < 1e-12);
        let ps = pol_shifting_numbers(&t, &seed, 256).unwrap();
        assert!(ps.upper.abs() < 1e-9 && ps.lower.abs() < 1e-9);
    }

    #[test]
    fn hom_table_examples() {
        let single = HomTable::from_fn(64, 0..=0, |_, _| 1);
        assert!(entropy_from_hom(&single, 0.7).unwrap().exp_rate.abs() < 1e-12);
        let p1 = HomTable::from_fn(1024, 0..=0, |n, _| n + 1);
        for t in DEFAULT_T_GRID {
            assert!(entropy_from_hom(&p1, t).unwrap().exp_rate.abs() < 1e-3);
        }
        let pr = pol_entropy_from_hom(&p1, 0.0).unwrap().poly_rate;
        assert!((pr - 1.0).abs() < 0.15, "{pr}");
        let sq = HomTable::from_fn(1024, 0..=0, |n, _| n * n + 1);
        assert!((pol_entropy_from_hom(&sq, 0.0).unwrap().poly_rate - 2.0).abs() < 0.15);
        let geo = HomTable::from_fn(60, 0..=0, |n, _| 1u64 << n);
        assert!((entropy_from_hom(&geo, 0.0).unwrap().exp_rate - 2f64.ln()).abs() < 1e-9);
        assert!(matches!(entropy_from_hom(&HomTable::new(), 0.0), Err(Error::EmptyTable)));
    }

    #[test]
    fn epsilon_bound_examples() {
        let zero = HomTable::from_fn(32, 0..=0, |_, _| 1);
        let e = epsilon_bounds_from_hom(&zero).unwrap();
        assert_eq!((e.nu_upper, e.nu_lower), (0.0, 0.0));
        let mut two = HomTable::new();
        for n in 1..=32u64 {
            two.set(n, -(n as i64), 1);
            two.set(n, 0, 1);
        }
        let e = epsilon_bounds_from_hom(&two).unwrap();
        assert!((e.nu_upper - 1.0).abs() < 1e-12 && e.nu_lower.abs() < 1e-12);
        let mut shifted = HomTable::new();
        for n in 1..=32u64 {
            for (k, d) in two.row(n) {
                shifted.set(n, k - 2 * n as i64, d);
            }
        }
        let s = epsilon_bounds_from_hom(&shifted).unwrap();
        assert!((s.nu_upper - 3.0).abs() < 1e-12 && (s.nu_lower - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hom_table_json() {
        let t = HomTable::from_fn(2, -1..=0, |n, k| n + k.unsigned_abs());
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<HomTable>(&text).unwrap(), t);
    }

    #[test]
    fn suite_and_linearity_on_identity() {
        let t = triple_from(&[[1, 0], [0, 1]], std_basis(), 0.0);
        let seed = generator_seed(t.sigma()).unwrap();
        let cfg = SuiteConfig { schedule: geometric_schedule(1024, 8), shift_n_max: 256, ..Default::default() };
        let rep = yomdin_suite(&t, &seed, None, &cfg).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.rows.iter().all(|r| r.slack.abs() < 1e-9), "{:?}", rep.rows);
        let lin = linearity_check(&t, &seed, None, &cfg).unwrap();
        assert!(lin.pass && lin.max_deviation < 1e-9);
    }

    #[test]
    fn mat2_poly_growth_cases() {
        assert_eq!(mat2_poly_growth(&Mat2::new(1.0, 5.0, 0.0, 1.0), 1e-9), 1);
        assert_eq!(mat2_poly_growth(&Mat2::IDENTITY, 1e-9), 0);
        assert_eq!(mat2_poly_growth(&Mat2::diag(2.0, 0.5), 1e-9), 0);
    }
}
