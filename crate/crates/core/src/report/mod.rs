//! Reference tables, regression verification, and table/curve emission.

pub mod emit;
pub mod reference;
pub mod verify;

pub use emit::{emit_curve, parse_report_csv, recheck, report_csv, CurveFormat, CurveKind, CurvePoint};
pub use verify::{verify, Check, CheckKind, RunReport, Suite, KNOWN_DEVIATIONS};
