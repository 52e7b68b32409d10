//! End-to-end verification runs: configuration, parameter selection from
//! the admissible ranges, membership classification, and the staged
//! driver that produces a machine- and human-readable report.

pub mod classify;
pub mod config;
pub mod params;
pub mod report;
pub mod run;

pub use classify::{
    classify_a, classify_u, savare_compare, w1_table, MembershipCase, ShiftComparison, SpaceKind,
    W1Row,
};
pub use config::{ExperimentConfig, Mode, Tolerances};
pub use params::{select_params_l, select_params_main, MainTheoremConfig};
pub use report::{CheckItem, ExperimentReport, SweepOutcome};
pub use run::run_experiment;
