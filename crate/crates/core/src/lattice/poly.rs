//! Polynomials over Q and a simultaneous root finder for their square-free parts.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients, ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        QPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &QPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &QPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = divisor.degree();
        if self.0.len() < divisor.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.0.len() - dd];
        let lead = divisor.lead();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn exact_div(&self, divisor: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero());
        q
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Integer coefficients of a polynomial known to lie in Z[x].
    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

/// Square-free decomposition `p = c * prod q_i^i` (Yun); returns the nonconstant `(q_i, i)`.
pub fn squarefree_decomposition(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0);
    let c = dp.exact_div(&a0);
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a);
        let c = d.exact_div(&a);
        d = c.sub(&b.derivative());
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Relative residual `|p(z)| / sum |c_k| |z|^k`.
pub fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let (mut val, mut scale) = (Complex64::zero(), 0.0);
    let r = z.norm();
    for &c in coeffs.iter().rev() {
        val = val * z + c;
        scale = scale * r + c.abs();
    }
    if scale == 0.0 {
        0.0
    } else {
        val.norm() / scale
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let (mut p, mut dp) = (Complex64::zero(), Complex64::zero());
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

const ABERTH_MAX_ITER: usize = 500;

/// All roots of a square-free integer polynomial (ascending coefficients), each with its
/// relative residual. Fails if some residual exceeds `tol`.
pub fn squarefree_roots(int_coeffs: &[BigInt], tol: f64) -> Result<Vec<(Complex64, f64)>> {
    let coeffs: Vec<f64> = int_coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::RootFindingDiverged { residual: f64::INFINITY, tol });
    }
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();

    let mut roots: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(-monic[0], 0.0)]
    } else {
        // Fujiwara bound for the starting circle; the small angular offset breaks symmetry.
        let bound = (0..n)
            .map(|k| (monic[k].abs() / if k == 0 { 2.0 } else { 1.0 }).powf(1.0 / (n - k) as f64))
            .fold(0.0_f64, f64::max)
            * 2.0;
        let radius = bound.max(1e-3);
        let center = -monic[n - 1] / n as f64;
        (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                Complex64::new(center, 0.0) + Complex64::from_polar(radius * 0.5, theta)
            })
            .collect()
    };

    if n > 1 {
        for _ in 0..ABERTH_MAX_ITER {
            let mut max_step = 0.0_f64;
            for k in 0..n {
                let z = roots[k];
                let (p, dp) = horner(&monic, z);
                if p == Complex64::zero() {
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z - roots[j]).inv()).sum();
                let w = ratio / (Complex64::one() - ratio * repulsion);
                if w.is_finite() {
                    roots[k] = z - w;
                    max_step = max_step.max(w.norm() / z.norm().max(1.0));
                }
            }
            if max_step < 1e-16 {
                break;
            }
        }
    }

    let mut out = Vec::with_capacity(n);
    let mut worst = 0.0_f64;
    for z0 in roots {
        let mut z = z0;
        let mut res = relative_residual(&monic, z);
        for _ in 0..3 {
            let (p, dp) = horner(&monic, z);
            if dp == Complex64::zero() {
                break;
            }
            let cand = z - p / dp;
            let r = relative_residual(&monic, cand);
            if r < res {
                z = cand;
                res = r;
            } else {
                break;
            }
        }
        // Roots of real polynomials come in conjugate pairs; snap near-real values.
        if z.im.abs() <= 1e-14 * z.norm().max(1.0) && relative_residual(&monic, Complex64::new(z.re, 0.0)) <= res.max(tol) {
            z.im = 0.0;
            res = relative_residual(&monic, z);
        }
        worst = worst.max(res);
        out.push((z, res));
    }
    if !(worst <= tol) {
        return Err(Error::RootFindingDiverged { residual: worst, tol });
    }
    Ok(out)
}
