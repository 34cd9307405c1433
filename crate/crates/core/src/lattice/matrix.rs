use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Square matrix with exact integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidData("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Convenience constructor; panics on a non-square input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::try_from_rows(rows).expect("square integer matrix")
    }

    pub fn try_from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut result = Self::identity(self.dim);
        for _ in 0..k {
            result = result.mul(self).expect("same dimension");
        }
        result
    }

    /// `self + c * I`.
    pub fn add_scalar(&self, c: &BigInt) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.entries[i * self.dim + i] += c;
        }
        m
    }

    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let n = a.dim + b.dim;
        let mut m = Self::zeros(n);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m.entries[i * n + j] = a.get(i, j).clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                m.entries[(a.dim + i) * n + a.dim + j] = b.get(i, j).clone();
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut a: Vec<Vec<BigInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<BigRational>> {
        self.rows().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
    }

    /// Exact inverse over Q; `None` if singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<BigRational>>> {
        rational_inverse(&self.to_rational_rows())
    }

    /// Inverse of a matrix with determinant +-1, which is again integral.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let inv = self
            .rational_inverse()
            .ok_or_else(|| Error::PreconditionViolated("matrix is singular".into()))?;
        let mut rows = Vec::with_capacity(self.dim);
        for r in inv {
            let mut row = Vec::with_capacity(self.dim);
            for x in r {
                if !x.is_integer() {
                    return Err(Error::PreconditionViolated("matrix is not unimodular".into()));
                }
                row.push(x.to_integer());
            }
            rows.push(row);
        }
        IntMatrix::new(rows)
    }

    /// `self * v` with overflow checking.
    pub fn apply_i64(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        self.rows()
            .map(|row| {
                let s: BigInt = row.iter().zip(v).map(|(a, &x)| a * x).sum();
                s.to_i64().ok_or(Error::LatticeOverflow)
            })
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

/// Gauss-Jordan inverse over Q.
pub fn rational_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let v = &f * &aug[col][c];
                    aug[r][c] -= v;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())).finish()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntEntry {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows()
            .map(|r| {
                r.iter()
                    .map(|x| match x.to_i64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<IntEntry>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        IntEntry::Signed(v) => Ok(BigInt::from(v)),
                        IntEntry::Unsigned(v) => Ok(BigInt::from(v)),
                        IntEntry::Text(t) => t.trim().parse::<BigInt>().map_err(D::Error::custom),
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntMatrix::new(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        assert_eq!(IntMatrix::from_rows(&[[2, 1], [1, 1]]).det(), BigInt::from(1));
        assert_eq!(IntMatrix::from_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]).det(), BigInt::from(-2));
        assert_eq!(IntMatrix::from_rows(&[[1, 2], [2, 4]]).det(), BigInt::zero());
    }

    #[test]
    fn unimodular_inverse_is_integral() {
        let p = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let inv = p.unimodular_inverse().unwrap();
        assert_eq!(inv, IntMatrix::from_rows(&[[1, -1], [-1, 2]]));
        assert!(IntMatrix::from_rows(&[[2, 0], [0, 1]]).unimodular_inverse().is_err());
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let m: IntMatrix = serde_json::from_str(r#"[[1, "123456789012345678901234567890"], [0, -2]]"#).unwrap();
        assert_eq!(m.get(0, 1).to_string(), "123456789012345678901234567890");
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, r#"[[1,"123456789012345678901234567890"],[0,-2]]"#);
        assert!(serde_json::from_str::<IntMatrix>("[[1,2],[3]]").is_err());
    }

    #[test]
    fn checked_application() {
        let p = IntMatrix::from_rows(&[[1, 0], [3, 1]]);
        assert_eq!(p.apply_i64(&[1, 0]).unwrap(), vec![1, 3]);
        assert_eq!(p.apply_i64(&[i64::MAX, 1]), Err(Error::LatticeOverflow));
        assert!(matches!(p.apply_i64(&[1]), Err(Error::DimensionMismatch { .. })));
    }
}
