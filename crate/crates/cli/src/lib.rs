//! Command-line front end for `cavity_qfi`: figure presets, trajectory
//! export as CSV, JSON and SVG, and the oracle validation suite.

pub mod error;
pub mod output;
pub mod scenario;
pub mod table;
pub mod validate;

pub use error::{error_line, CliError};
pub use output::{render_svg, run_scenario, to_csv, to_json};
pub use scenario::{Family, Format, Scenario, PRESETS};
pub use table::{compute_table, Row, COLUMNS};
pub use validate::{run_validation, Check, Level, Mutation, Report};
