use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root finder failed to certify residual {residual:.3e} (tolerance {tol:.3e})")]
    RootFindingDiverged { residual: f64, tol: f64 },

    /// The top-modulus class is not separated from the rest of the spectrum.
    #[error("eigenvalue moduli {inner:.12} and {outer:.12} are too close to decide the top-modulus class")]
    DegenerateSpectrum { inner: f64, outer: f64 },

    #[error("numerical Jordan profile disagrees with the minimal polynomial at eigenvalue {re}+{im}i")]
    JordanMismatch { re: f64, im: f64 },

    #[error("f0 = {f0} is not congruent mod 2 to the argument of M e1 ({expected}), off by {offset:.3e}")]
    InvalidLift { f0: f64, expected: f64, offset: f64 },

    #[error("matrix determinant {0} is not positive")]
    NonPositiveDeterminant(f64),

    #[error("matrix is numerically singular (condition number {0:.3e})")]
    SingularMatrix(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("triple is not verified as compatible")]
    UnverifiedTriple,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("charge set does not span R^2")]
    NonSpanningSet,

    #[error("Euler pairing is singular over Q")]
    SingularPairing,

    #[error("Euler pairing is not antisymmetric, so it is not an odd Calabi-Yau pairing")]
    NotOddCY,

    #[error("Hom table has no nonzero entries")]
    EmptyTable,

    #[error("eigenvalue {0} cannot be realized by an integral lattice action")]
    NonIntegralAction(f64),

    #[error("lattice vector overflowed 64-bit integers")]
    LatticeOverflow,

    #[error("invalid data: {0}")]
    InvalidData(String),
}
