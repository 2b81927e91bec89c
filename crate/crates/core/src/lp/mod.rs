//! Metric relaxation LPs and their certified solution.

pub mod certified;
pub mod dump;
pub mod model;
pub mod simplex;

pub use certified::{solve_certified, solve_certified_with, SolveOptions, LpSolution, LpStatus, CERT_TOL};
pub use model::{build_lp, build_lp_with_presets, MetricLpModel, PointLabel, Row, RowKind, Var};

use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::PolygonGeometry;

pub fn config_lp_value(c: &Configuration, g: &PolygonGeometry, w: f64, presets: bool) -> Result<f64> {
    let sol = solve_certified(&build_lp_with_presets(c, g, w, presets)?);
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        s => Err(EvacError::NumericFailure(format!("{c}: status {s:?}"))),
    }
}
