//! Command-line driver for convergence studies of the immersed interface
//! solver in `ifem-core`, and the CSV/markdown tables it writes.

pub mod config;
pub mod error;
pub mod table;

pub use config::{Args, OutputFormat};
pub use error::CliError;
pub use table::{emit_table, parse_csv, CsvRow};
