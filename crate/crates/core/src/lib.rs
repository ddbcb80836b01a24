//! Schema engine for a universal asset taxonomy.
//!
//! The built-in taxonomy is a morphological box of 14 attributes covering
//! traditional, digital and DLT-based assets. On top of it this crate
//! validates and lints classifications, encodes them as fixed-width compact
//! codes, diffs and scores them, maps them onto prior classification
//! frameworks, renders the box and stores classified assets on disk.

pub mod analysis;
pub mod classification;
pub mod codec;
pub mod lint;
pub mod registry;
pub mod render;
pub mod taxonomy;

pub use analysis::{
    coverage_counts, diff, framework_coverage, similarity, CoverageMatrix, DiffReport, SimilarityBasis,
    SimilarityScore,
};
pub use classification::{
    paper_fixture, paper_fixtures, validate_classification, AssetClassification, Selection, ValidationMode,
    ValidationReport,
};
pub use codec::{
    decode, encode, parse_classification, serialize_classification, serialize_taxonomy, CompactCode,
};
pub use lint::{lint, LintFinding, Linter};
pub use registry::{AssetId, Query, RegistryError, RegistryStore};
pub use render::{render, RenderFormat, RenderSpec};
pub use taxonomy::{builtin_taxonomy, parse_taxonomy, validate_taxonomy, Taxonomy};
