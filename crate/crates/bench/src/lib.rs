//! Fixed inputs shared by the benchmarks.

use catdyn::scenarios::{curve_triple, lattice_triple};
use catdyn::{CompatibleTriple, IntMatrix};

/// Upper-triangular with ones on the diagonal: one Jordan block of size `n` at 1.
pub fn jordan_block(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(j == i || j == i + 1)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

/// Companion matrix of `x^n - x - 1`, irreducible with a single real root above 1.
pub fn companion(n: usize) -> IntMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row[i - 1] = 1;
    }
    rows[0][n - 1] = 1;
    rows[1][n - 1] = 1;
    IntMatrix::from_rows(&rows)
}

pub fn hyperbolic_triple() -> CompatibleTriple {
    lattice_triple([[2, 1], [1, 1]], 1e-9).expect("golden triple")
}

pub fn unipotent_triple() -> CompatibleTriple {
    curve_triple(3, 0, 1e-9).expect("curve triple")
}
