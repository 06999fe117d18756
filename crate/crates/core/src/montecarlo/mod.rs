//! Monte Carlo experiment harness and goodness-of-fit diagnostics.

mod ecdf;
mod experiment;
mod gumbel_bound;
mod ks;
mod output;

pub use ecdf::Ecdf;
pub use experiment::{
    gumbel_rank_cdf, reference_draws, resolve_workers, run_experiment, sample_schedule_entry, target_for,
    ExperimentConfig, ExperimentResult, ExperimentRow, MRule, OutputPaths, Target, BATCH_SIZE, THREADS_ENV,
};
pub use gumbel_bound::gumbel_switch_error_bound;
pub use ks::{kolmogorov_survival, ks_one_sample, ks_two_sample, KsKind, KsResult};
pub use output::{render_svg, write_outputs, write_samples_csv, write_summary_csv, SAMPLES_HEADER, SUMMARY_HEADER};
