//! Support vector classification: kernels, an SMO dual solver, and the
//! one-against-one multiclass ensemble used to classify Gabor-Radon
//! features.

mod grid;
mod kernel;
mod multiclass;
mod smo;

pub use grid::{grid_search, stratified_folds, GridPoint, GridResult, GridSpec};
pub use kernel::{kernel_eval, KernelKind, KernelSpec};
pub use multiclass::{
    accuracy, accuracy_of, pair_count, predict, train_multiclass, train_multiclass_with,
    FeatureScaling, MulticlassModel, Prediction,
};
pub use smo::{
    decision_value, train_binary, train_binary_detailed, BinaryModel, DualSolution, SmoParams,
    SV_EPS,
};
