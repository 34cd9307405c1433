//! Exact and numerical linear algebra over the lattice.

mod estimate;
mod matrix;
mod poly;
mod spectral;

pub use estimate::{growth_rate_estimate, log_norm_powers, GrowthEstimate, TAIL_RATIO};
pub use matrix::{rational_inverse, IntMatrix};
pub use poly::{relative_residual, squarefree_decomposition, squarefree_roots, QPoly};
pub use spectral::{
    char_poly, eval_poly_at, is_zero_matrix, min_poly_root_transfer, minimal_polynomial, poly_growth_rate, spectral_data,
    spectral_radius, Eigenvalue, RootTransfer, SpectralData, SpectralOptions, MAX_EXACT_MIN_POLY_DIM,
};
