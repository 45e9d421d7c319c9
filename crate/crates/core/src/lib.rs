//! Basketball performance indices built on Min-Max rescaling.
//!
//! The crate computes the classic Performance Index Rating (PIR) of per-game
//! season lines together with three rescaled variants: the PIR itself mapped
//! to `[0, 1]`, a weighted sum of individually rescaled box-score variables,
//! and a self-weighted PIR where each variable is multiplied by its own
//! rescaled value. Reference bounds come either from one player's career
//! (individual scope) or from every player in the dataset (joint scope), with
//! optional exclusion of anomalous seasons.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod index;
pub mod ingest;
pub mod outliers;
pub mod svg;

pub use error::{Error, Result};
pub use index::{
    compute_pir, compute_pir_pond, compute_pir_rees, mean_point_weight, minmax_rescale,
    rescale_index, BoundKey, Bounds, DegeneratePolicy, IndexKind, IndexResult, Phase, RecordKey,
    RescaleContext, Scope, ScopeKind, StatLine, Target, Variable, WeightProfile,
};
pub use outliers::{apply_policy, detect_iqr, OutlierMode, OutlierPolicy, Partition};
