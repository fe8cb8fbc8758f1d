//! Table reproduction, CSV curve emission, configuration and the
//! self-verification suite behind the command-line tool.

pub mod config;
pub mod csv;
pub mod curve;
pub mod tables;
pub mod verify;

pub use config::RunConfig;
pub use curve::{
    curve_table, emit_curve, emit_q_grid, q_grid_table, CurveKind, CurveSpec, CurveTable,
    QGridSpec, StateChoice,
};
pub use tables::{
    rmse_table, rmse_table_with, write_rows, GridMode, RangeChoice, RmseRow, Table, TableOptions,
};
pub use verify::{
    check_names, verify_selected, verify_suite, CheckResult, VerifyLevel, VerifyReport,
};
