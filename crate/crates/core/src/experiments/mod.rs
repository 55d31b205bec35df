//! Config-driven experiments that regenerate the sensing study's datasets.

pub mod check;
pub mod config;
pub mod runners;
pub mod table;

pub use config::{ExperimentConfig, ExperimentKind};
pub use runners::run;
pub use table::{write_tables, Cell, ResultTable};
