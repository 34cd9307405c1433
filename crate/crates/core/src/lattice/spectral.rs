//! Characteristic and minimal polynomials, eigenvalues, spectral radius and Jordan structure.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::poly::{squarefree_decomposition, squarefree_roots, QPoly};
use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Largest dimension for which the minimal polynomial is computed exactly.
pub const MAX_EXACT_MIN_POLY_DIM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// Certification bound on relative root residuals.
    pub root_tol: f64,
    /// Relative tolerance for membership in the top-modulus class.
    pub cluster_tol: f64,
    /// Singular values below `rank_tol * s_max` count as zero.
    pub rank_tol: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { root_tol: 1e-9, cluster_tol: 1e-7, rank_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    #[serde(with = "crate::serde_util::complex")]
    pub value: Complex64,
    pub modulus: f64,
    pub multiplicity: usize,
    pub residual: f64,
    /// Jordan block sizes, descending.
    pub jordan_blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub dim: usize,
    /// Ascending, monic.
    #[serde(with = "crate::serde_util::bigint_strings")]
    pub char_poly: Vec<BigInt>,
    #[serde(with = "crate::serde_util::bigint_strings")]
    pub min_poly: Vec<BigInt>,
    /// False when `min_poly` is the characteristic polynomial used as a stand-in.
    pub min_poly_exact: bool,
    /// Sorted by decreasing modulus.
    pub eigenvalues: Vec<Eigenvalue>,
    pub rho: f64,
    /// `None` for nilpotent input.
    pub s: Option<usize>,
    pub top_class_size: usize,
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, ascending and monic.
/// Every division is exact over Z.
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n);
    for k in 1..=n {
        m = a.mul(&m).expect("same dimension").add_scalar(&coeffs[n + 1 - k]);
        let am = a.mul(&m).expect("same dimension");
        coeffs[n - k] = -am.trace() / BigInt::from(k);
    }
    coeffs
}

/// Exact minimal polynomial by finding the first linear dependency among
/// `I, A, A^2, ...` over Q.
pub fn minimal_polynomial(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.dim();
    let mut basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let mut power = IntMatrix::identity(n);
    for k in 0..=n {
        let mut v: Vec<BigRational> = power.entries().iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut combo = vec![BigRational::zero(); n + 1];
        combo[k] = BigRational::one();
        for (pivot, bv, bc) in &basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = &v[*pivot] / &bv[*pivot];
            for (x, y) in v.iter_mut().zip(bv) {
                *x -= &f * y;
            }
            for (x, y) in combo.iter_mut().zip(bc) {
                *x -= &f * y;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                combo.truncate(k + 1);
                return QPoly::new(combo).to_integer_coeffs().expect("monic divisor of an integer polynomial is integral");
            }
            Some(p) => basis.push((p, v, combo)),
        }
        power = power.mul(a).expect("same dimension");
    }
    unreachable!("Cayley-Hamilton bounds the degree by the dimension")
}

fn f64_coeffs(c: &[BigInt]) -> Vec<f64> {
    c.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Distinct eigenvalues with algebraic multiplicity and residual, unordered.
fn eigen_roots(cp: &[BigInt], tol: f64) -> Result<Vec<(Complex64, usize, f64)>> {
    let mut out = Vec::new();
    for (q, mult) in squarefree_decomposition(&QPoly::from_ints(cp)) {
        for (z, res) in squarefree_roots(&q.primitive_part(), tol)? {
            out.push((z, mult, res));
        }
    }
    Ok(out)
}

/// Largest modulus among the roots of the characteristic polynomial.
pub fn spectral_radius(a: &IntMatrix, tol: f64) -> Result<f64> {
    let roots = eigen_roots(&char_poly(a), tol)?;
    Ok(roots.iter().map(|(z, _, _)| z.norm()).fold(0.0, f64::max))
}

fn to_complex(a: &IntMatrix) -> DMatrix<Complex64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(a.get(i, j).to_f64().unwrap_or(f64::NAN), 0.0))
}

fn numerical_rank(m: &DMatrix<Complex64>, rank_tol: f64) -> usize {
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Jordan block sizes at `lambda` from the ranks of `(A - lambda I)^k`.
/// `None` when the rank sequence is inconsistent with algebraic multiplicity `mult`.
fn jordan_blocks(a: &DMatrix<Complex64>, lambda: Complex64, mult: usize, rank_tol: f64) -> Option<Vec<usize>> {
    let n = a.nrows();
    let b = a - DMatrix::<Complex64>::identity(n, n) * lambda;
    let target = n - mult;
    let mut ranks = vec![n];
    let mut p = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..mult {
        p = &p * &b;
        let r = numerical_rank(&p, rank_tol);
        if r < target {
            return None;
        }
        ranks.push(r);
        if r == target {
            break;
        }
    }
    if *ranks.last()? != target {
        return None;
    }
    // at_least[k-1] = number of blocks of size >= k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0].checked_sub(w[1])).collect::<Option<_>>()?;
    let mut blocks = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let next = at_least.get(k).copied().unwrap_or(0);
        let exact = at_least[k - 1].checked_sub(next)?;
        blocks.extend(std::iter::repeat_n(k, exact));
    }
    (blocks.iter().sum::<usize>() == mult).then_some(blocks)
}

/// Full spectral analysis: exact polynomials, certified eigenvalues, Jordan profile and `s`.
pub fn spectral_data(a: &IntMatrix, opts: &SpectralOptions) -> Result<SpectralData> {
    let n = a.dim();
    let cp = char_poly(a);
    let (mp, exact) = if n <= MAX_EXACT_MIN_POLY_DIM { (minimal_polynomial(a), true) } else { (cp.clone(), false) };
    let chi_parts = squarefree_decomposition(&QPoly::from_ints(&cp));
    let mu_parts = squarefree_decomposition(&QPoly::from_ints(&mp));
    let ac = to_complex(a);

    let mut eigenvalues = Vec::with_capacity(n);
    for (q, mult) in &chi_parts {
        for (r, max_block) in &mu_parts {
            let common = q.gcd(r);
            if common.is_constant() {
                continue;
            }
            for (z, residual) in squarefree_roots(&common.primitive_part(), opts.root_tol)? {
                let blocks = jordan_blocks(&ac, z, *mult, opts.rank_tol)
                    .filter(|b| !exact || b.first() == Some(max_block))
                    .ok_or(Error::JordanMismatch { re: z.re, im: z.im })?;
                eigenvalues.push(Eigenvalue { value: z, modulus: z.norm(), multiplicity: *mult, residual, jordan_blocks: blocks });
            }
        }
    }
    eigenvalues.sort_by(|x, y| {
        y.modulus
            .total_cmp(&x.modulus)
            .then(y.value.re.total_cmp(&x.value.re))
            .then(y.value.im.total_cmp(&x.value.im))
    });

    let rho = eigenvalues.first().map_or(0.0, |e| e.modulus);
    let (s, top_class_size) = if rho == 0.0 {
        (None, eigenvalues.len())
    } else {
        let (s, size) = top_class(&eigenvalues, rho, opts.cluster_tol)?;
        (Some(s), size)
    };
    Ok(SpectralData { dim: n, char_poly: cp, min_poly: mp, min_poly_exact: exact, eigenvalues, rho, s, top_class_size })
}

/// `(s, class size)` for the eigenvalues with modulus within `cluster_tol * rho` of `rho`.
/// Moduli in the band `(1, 10] * cluster_tol * rho` below `rho` make the class ambiguous.
fn top_class(eigs: &[Eigenvalue], rho: f64, cluster_tol: f64) -> Result<(usize, usize)> {
    let inner = cluster_tol * rho;
    let mut s = 0;
    let mut size = 0;
    let mut innermost = rho;
    for e in eigs {
        let gap = rho - e.modulus;
        if gap <= inner {
            s = s.max(e.jordan_blocks[0] - 1);
            size += 1;
            innermost = innermost.min(e.modulus);
        } else if gap <= 10.0 * inner {
            return Err(Error::DegenerateSpectrum { inner: innermost, outer: e.modulus });
        }
    }
    Ok((s, size))
}

/// `s(A)`: one less than the largest Jordan block among top-modulus eigenvalues.
pub fn poly_growth_rate(a: &IntMatrix, opts: &SpectralOptions) -> Result<usize> {
    let data = spectral_data(a, opts)?;
    data.s.ok_or_else(|| Error::PreconditionViolated("spectral radius is zero".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootTransfer {
    pub holds: bool,
    /// `|mu(M)| / sum |c_k| |M|^k`.
    pub residual: f64,
    /// The characteristic polynomial stood in for the minimal polynomial.
    pub used_char_poly: bool,
    #[serde(with = "crate::serde_util::bigint_strings")]
    pub polynomial: Vec<BigInt>,
}

/// Whether the minimal polynomial of `a` annihilates `m`, so that every eigenvalue
/// of `m` is an eigenvalue of `a`.
pub fn min_poly_root_transfer(a: &IntMatrix, m: &Mat2, tol: f64) -> RootTransfer {
    let used_char_poly = a.dim() > MAX_EXACT_MIN_POLY_DIM;
    let poly = if used_char_poly { char_poly(a) } else { minimal_polynomial(a) };
    let c = f64_coeffs(&poly);
    let mut acc = Mat2::IDENTITY.scale(*c.last().unwrap());
    let norm = m.norm();
    let mut scale = c.last().unwrap().abs();
    for &ck in c.iter().rev().skip(1) {
        acc = acc * *m;
        acc.0[0][0] += ck;
        acc.0[1][1] += ck;
        scale = scale * norm + ck.abs();
    }
    let residual = if scale > 0.0 { acc.norm() / scale } else { 0.0 };
    RootTransfer { holds: residual <= tol, residual, used_char_poly, polynomial: poly }
}

/// Exact integer evaluation `p(A)`; used by tests to confirm annihilation.
pub fn eval_poly_at(a: &IntMatrix, p: &[BigInt]) -> IntMatrix {
    let n = a.dim();
    let mut acc = IntMatrix::zeros(n);
    for c in p.iter().rev() {
        acc = acc.mul(a).expect("same dimension").add_scalar(c);
    }
    acc
}

pub fn is_zero_matrix(a: &IntMatrix) -> bool {
    a.entries().iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn char_poly_small_cases() {
        assert_eq!(char_poly(&IntMatrix::identity(2)), ints(&[1, -2, 1]));
        assert_eq!(char_poly(&IntMatrix::from_rows(&[[2, 1], [1, 1]])), ints(&[1, -3, 1]));
        assert_eq!(char_poly(&IntMatrix::from_rows(&[[1, 3], [0, 1]])), ints(&[1, -2, 1]));
    }

    #[test]
    fn minimal_polynomial_detects_jordan_blocks() {
        assert_eq!(minimal_polynomial(&IntMatrix::identity(3)), ints(&[-1, 1]));
        assert_eq!(minimal_polynomial(&IntMatrix::from_rows(&[[1, 3], [0, 1]])), ints(&[1, -2, 1]));
        let a = IntMatrix::from_rows(&[[2, 1, 0], [0, 2, 0], [0, 0, 2]]);
        assert_eq!(minimal_polynomial(&a), ints(&[4, -4, 1]));
        assert!(is_zero_matrix(&eval_poly_at(&a, &minimal_polynomial(&a))));
    }

    #[test]
    fn spectral_radius_examples() {
        let o = SpectralOptions::default();
        assert_eq!(spectral_radius(&IntMatrix::identity(3), o.root_tol).unwrap(), 1.0);
        assert!((spectral_radius(&IntMatrix::from_rows(&[[1, 7], [0, 1]]), o.root_tol).unwrap() - 1.0).abs() < 1e-15);
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius(&IntMatrix::from_rows(&[[2, 1], [1, 1]]), o.root_tol).unwrap() - phi2).abs() < 1e-13);
    }

    #[test]
    fn poly_growth_examples() {
        let o = SpectralOptions::default();
        assert_eq!(poly_growth_rate(&IntMatrix::identity(2), &o).unwrap(), 0);
        assert_eq!(poly_growth_rate(&IntMatrix::from_rows(&[[1, 3], [0, 1]]), &o).unwrap(), 1);
        assert_eq!(poly_growth_rate(&IntMatrix::from_rows(&[[2, 0], [0, 1]]), &o).unwrap(), 0);
        // Block of size 3 at modulus 1 hidden behind a larger simple eigenvalue: s = 0.
        let a = IntMatrix::from_rows(&[[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 2]]);
        assert_eq!(poly_growth_rate(&a, &o).unwrap(), 0);
        // -1 and 1 share the top modulus; the block at -1 wins.
        let b = IntMatrix::from_rows(&[[-1, 1, 0], [0, -1, 0], [0, 0, 1]]);
        assert_eq!(poly_growth_rate(&b, &o).unwrap(), 1);
    }

    #[test]
    fn jordan_profile_sums_to_dimension() {
        let a = IntMatrix::from_rows(&[[2, 1, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -1]]);
        let d = spectral_data(&a, &SpectralOptions::default()).unwrap();
        let total: usize = d.eigenvalues.iter().flat_map(|e| e.jordan_blocks.iter()).sum();
        assert_eq!(total, 4);
        assert_eq!(d.eigenvalues[0].jordan_blocks, vec![2, 1]);
        assert_eq!(d.s, Some(1));
    }

    #[test]
    fn nilpotent_has_no_s() {
        let d = spectral_data(&IntMatrix::from_rows(&[[0, 1], [0, 0]]), &SpectralOptions::default()).unwrap();
        assert_eq!(d.rho, 0.0);
        assert_eq!(d.s, None);
        assert_eq!(d.eigenvalues[0].jordan_blocks, vec![2]);
    }

    #[test]
    fn degenerate_cluster_is_reported() {
        // moduli 1000 and 999: relative gap 1e-3 sits in the ambiguous band at cluster_tol 2e-4
        let a = IntMatrix::from_rows(&[[1000, 0], [0, 999]]);
        let o = SpectralOptions { cluster_tol: 2e-4, ..Default::default() };
        assert!(matches!(spectral_data(&a, &o), Err(Error::DegenerateSpectrum { .. })));
        assert_eq!(spectral_data(&a, &SpectralOptions::default()).unwrap().s, Some(0));
    }

    #[test]
    fn root_transfer_examples() {
        let tol = 1e-9;
        assert!(min_poly_root_transfer(&IntMatrix::identity(2), &Mat2::IDENTITY, tol).holds);
        let u = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        assert!(min_poly_root_transfer(&u, &Mat2::new(1.0, 1.0, 0.0, 1.0), tol).holds);
        let d = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        let r = min_poly_root_transfer(&d, &Mat2::rotation(std::f64::consts::FRAC_PI_2), tol);
        assert!(!r.holds && !r.used_char_poly);
    }

    #[test]
    fn spectral_data_serializes_coefficients_as_strings() {
        let d = spectral_data(&IntMatrix::from_rows(&[[2, 1], [1, 1]]), &SpectralOptions::default()).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["char_poly"], serde_json::json!(["1", "-3", "1"]));
        assert!(v["eigenvalues"][0]["value"]["re"].is_number());
    }
}
