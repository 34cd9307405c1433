//! Least-squares fits used to read growth rates off sampled sequences.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Simple linear regression `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn line_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = rms(xs.iter().zip(ys).map(|(x, y)| y - slope * x - intercept), n);
    Some(LineFit { slope, intercept, residual })
}

/// Fit of `y = rate * n + poly * ln n + c`, the asymptotic shape of
/// `log ||A^n||` for a matrix with Jordan blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub rate: f64,
    pub poly: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn growth_fit(ns: &[f64], ys: &[f64]) -> Option<GrowthFit> {
    let n = ns.len();
    if n < 3 {
        return None;
    }
    // Center and scale the regressors; the raw columns n and ln n are badly conditioned.
    let n_scale = ns.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(1.0);
    let logs: Vec<f64> = ns.iter().map(|x| x.ln()).collect();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => ns[i] / n_scale,
        1 => logs[i],
        _ => 1.0,
    });
    let b = DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&b, 1e-12).ok()?;
    let rate = coef[0] / n_scale;
    let poly = coef[1];
    let intercept = coef[2];
    let residual = rms((0..n).map(|i| ys[i] - rate * ns[i] - poly * logs[i] - intercept), n);
    if !(rate.is_finite() && poly.is_finite()) {
        return None;
    }
    Some(GrowthFit { rate, poly, intercept, residual })
}

/// Geometric schedule `round(2^(k / per_octave))` up to and including `n_max`, deduplicated.
pub fn geometric_schedule(n_max: u64, per_octave: u32) -> Vec<u64> {
    let per_octave = per_octave.max(1);
    let mut out: Vec<u64> = Vec::new();
    let mut k = 0u32;
    loop {
        let n = 2f64.powf(k as f64 / per_octave as f64).round() as u64;
        if n >= n_max {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
        k += 1;
    }
    out.push(n_max.max(1));
    out.dedup();
    out
}

/// `count` evenly spaced points ending at `n_max`.
pub fn linear_schedule(n_max: u64, count: u64) -> Vec<u64> {
    let count = count.clamp(1, n_max.max(1));
    let mut out: Vec<u64> = (1..=count).map(|i| (i * n_max / count).max(1)).collect();
    out.dedup();
    out
}

fn rms(res: impl Iterator<Item = f64>, n: usize) -> f64 {
    (res.map(|r| r * r).sum::<f64>() / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_growth_model() {
        let ns: Vec<f64> = (0..40).map(|k| 2f64.powf(6.0 + k as f64 / 4.0)).collect();
        let ys: Vec<f64> = ns.iter().map(|n| 0.7 * n + 2.0 * n.ln() - 1.5).collect();
        let f = growth_fit(&ns, &ys).unwrap();
        assert!((f.rate - 0.7).abs() < 1e-10);
        assert!((f.poly - 2.0).abs() < 1e-6);
        assert!(f.residual < 1e-6);
    }

    #[test]
    fn schedules_are_strictly_increasing() {
        let g = geometric_schedule(1 << 20, 4);
        assert_eq!(g.first(), Some(&1));
        assert_eq!(g.last(), Some(&(1 << 20)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(geometric_schedule(16, 1), vec![1, 2, 4, 8, 16]);
        assert_eq!(linear_schedule(10, 5), vec![2, 4, 6, 8, 10]);
    }

    #[test]
    fn line_fit_exact() {
        let xs = [1.0, 2.0, 3.0];
        let f = line_fit(&xs, &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(line_fit(&[1.0], &[1.0]).is_none());
    }
}
