//! Model evaluation: metrics, cross-validation, grid search, backward
//! feature selection, repeated-run stability and Welch's t-test.

mod cv;
mod metrics;
mod runs;
mod sbs;
mod stats;

pub use cv::{cross_val_score, expand_grid, grid_search, Grid, GridCell, GridSearchResult, DEFAULT_FOLDS};
pub use metrics::{accuracy, compute_metrics, Metrics};
pub use runs::{repeated_runs, RunRecord, RunsOutcome, RunsProtocol, SplitSeeding};
pub use sbs::{sequential_backward_selection, SbsResult, SbsStep};
pub use stats::{
    ln_gamma, regularized_incomplete_beta, student_t_sf, welch_t_from_samples, welch_t_from_summary, RunStats,
    TTestResult,
};
