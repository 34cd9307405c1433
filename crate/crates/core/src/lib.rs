pub mod cover;
pub mod error;
pub mod fit;
pub mod growth;
pub mod lattice;
pub mod mat2;
pub mod metric;
pub mod scenarios;
pub mod serde_util;
pub mod stability;
pub mod volume;

pub use error::{Error, Result};
pub use lattice::{IntMatrix, SpectralData, SpectralOptions};
pub use mat2::Mat2;
pub use cover::CoverElem;
pub use growth::{GrowthReport, HomTable, InequalityReport, LinearityReport, SuiteConfig};
pub use metric::{NormMode, TranslationLength};
pub use scenarios::{ScenarioConfig, ScenarioReport};
pub use stability::{
    AutoequivalenceData, CentralCharge, CompatibleTriple, HNObject, SemistableDatum, StabilityData, TripleSpec,
    VerificationReport,
};
pub use volume::EulerPairing;
