//! Embedding watermarking toolkit.
//!
//! Provider-side trigger selection and watermark injection (single or
//! multiple target directions), the clustering/selection/elimination removal
//! attack, and statistical copyright verification, together with a seeded
//! synthetic world to run them end to end.

pub mod corpus;
pub mod cse;
pub mod error;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod scenario;
pub mod simkit;
pub mod store;
pub mod triggers;
pub mod verify;
pub mod watermark;

pub use corpus::{Corpus, Document};
pub use cse::{
    AttackConfig, AttackOutcome, ClusterAlgo, Clustering, EliminationBasis, ReconstructionResult,
    SuspicionReport,
};
pub use error::{Error, ErrorCategory, Result};
pub use linalg::{Matrix, OrthonormalBasis};
pub use scenario::{ScenarioConfig, ScenarioOutcome};
pub use simkit::SimConfig;
pub use store::EmbeddingStore;
pub use triggers::{TriggerPartition, WeightVector};
pub use verify::{SuspectEmbedder, Thresholds, VerificationReport, VerifyConfig};
pub use watermark::WatermarkKey;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
