//! Scoring resolution strategies.

mod experiment;
mod metrics;
mod report;

pub use experiment::{
    run_experiment, CaseRecord, EvaluationConfig, MetricReport, MetricRow, StrategyOutcome, DEFAULT_MAX_GROUPS,
};
pub use metrics::{adopted_items, average_satisfaction, harmonic, satisfaction_gain, Adopted, HarmonicScore, SatisfactionScore};
pub use report::{write_plot_data, write_report_csv, write_report_json};
