//! Estimating the leading order from a regularized fit: the ratio and
//! logarithmic estimators, quasi-optimality selection over `(λ, t̂)`, and the
//! end-to-end pipeline.

mod estimators;
mod pipeline;
mod selection;

pub use estimators::{log_estimate, ratio_estimate};
pub use pipeline::{
    run_pipeline, sweep, DiagnosticRow, Diagnostics, EstimateReport, LogSelection, PipelineOptions, RegGrids,
    SelectedEstimate,
};
pub use selection::{quasi_opt_select, select, EstimateTable, Selection, ThatCriterion};
