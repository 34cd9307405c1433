//! Norm-growth estimation of `rho(A)` and `s(A)` from sampled powers.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::fit::growth_fit;

/// Samples below `n_max / TAIL_RATIO` are excluded from the fit.
pub const TAIL_RATIO: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub rho_est: f64,
    pub s_est: f64,
    /// RMS residual of the joint fit; infinite when no power is nonzero.
    pub residual: f64,
    pub window: (u64, u64),
    /// `(n, log ||A^n||_inf)`; nilpotent tails are omitted.
    pub samples: Vec<(u64, f64)>,
}

/// Matrix kept as `exp(log_scale) * unit` with unit max-abs entry 1.
#[derive(Clone)]
struct Scaled {
    unit: DMatrix<f64>,
    log_scale: f64,
}

impl Scaled {
    fn new(m: DMatrix<f64>, log_scale: f64) -> Self {
        let s = m.amax();
        if s == 0.0 {
            return Scaled { unit: m, log_scale: f64::NEG_INFINITY };
        }
        Scaled { unit: m / s, log_scale: log_scale + s.ln() }
    }

    fn mul(&self, other: &Scaled) -> Scaled {
        Scaled::new(&self.unit * &other.unit, self.log_scale + other.log_scale)
    }

    fn log_inf_norm(&self) -> f64 {
        let row_max = self.unit.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
        if row_max == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.log_scale + row_max.ln()
        }
    }
}

/// Log of the infinity norm of `A^n` for every `n` in `schedule`, via cached repeated squaring.
pub fn log_norm_powers(a: &IntMatrix, schedule: &[u64]) -> Vec<(u64, f64)> {
    let n = a.dim();
    let base = DMatrix::from_fn(n, n, |i, j| a.get(i, j).to_f64().unwrap_or(f64::NAN));
    let top = schedule.iter().copied().max().unwrap_or(0);
    let mut squarings = vec![Scaled::new(base, 0.0)];
    while (1u64 << (squarings.len() - 1)) < top.max(1) && squarings.len() < 64 {
        let last = squarings.last().unwrap();
        squarings.push(last.mul(last));
    }
    schedule
        .iter()
        .map(|&k| {
            let mut acc = Scaled::new(DMatrix::identity(n, n), 0.0);
            for (bit, sq) in squarings.iter().enumerate() {
                if k >> bit & 1 == 1 {
                    acc = acc.mul(sq);
                }
            }
            (k, acc.log_inf_norm())
        })
        .collect()
}

/// Fit `log ||A^n|| ~ n log rho + s log n + c` over the tail of `schedule`.
pub fn growth_rate_estimate(a: &IntMatrix, schedule: &[u64]) -> GrowthEstimate {
    let all = log_norm_powers(a, schedule);
    let n_max = schedule.iter().copied().max().unwrap_or(0);
    let lo = (n_max / TAIL_RATIO).max(schedule.iter().copied().min().unwrap_or(0)).max(1);
    let samples: Vec<(u64, f64)> = all.into_iter().filter(|(_, y)| y.is_finite()).collect();
    let tail: Vec<&(u64, f64)> = samples.iter().filter(|(k, _)| *k >= lo).collect();
    let ns: Vec<f64> = tail.iter().map(|(k, _)| *k as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|(_, y)| *y).collect();
    match growth_fit(&ns, &ys) {
        Some(f) => GrowthEstimate { rho_est: f.rate.exp(), s_est: f.poly, residual: f.residual, window: (lo, n_max), samples },
        None => GrowthEstimate { rho_est: 0.0, s_est: 0.0, residual: f64::INFINITY, window: (lo, n_max), samples },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::geometric_schedule;

    #[test]
    fn identity_is_flat() {
        let e = growth_rate_estimate(&IntMatrix::identity(3), &geometric_schedule(1 << 20, 1));
        assert!((e.rho_est - 1.0).abs() < 1e-12 && e.s_est.abs() < 1e-9);
    }

    #[test]
    fn unipotent_block() {
        let e = growth_rate_estimate(&IntMatrix::from_rows(&[[1, 3], [0, 1]]), &geometric_schedule(1 << 20, 4));
        assert!((e.rho_est - 1.0).abs() < 1e-6, "{e:?}");
        assert!((e.s_est - 1.0).abs() < 0.1, "{e:?}");
    }

    #[test]
    fn golden_matrix() {
        let e = growth_rate_estimate(&IntMatrix::from_rows(&[[2, 1], [1, 1]]), &geometric_schedule(1 << 20, 4));
        assert!((e.rho_est - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn nilpotent_gives_zero() {
        let e = growth_rate_estimate(&IntMatrix::from_rows(&[[0, 1], [0, 0]]), &geometric_schedule(1024, 2));
        assert_eq!(e.rho_est, 0.0);
        assert_eq!(e.samples.len(), 1);
    }
}
