//! Command-line driver for the spectral solver: configuration, execution of
//! each mode and table output.

// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Mode, PlotStyle, RunConfig};
pub use error::{CliError, CliResult};
pub use run::{emit_plot_data, run, RunReport};
