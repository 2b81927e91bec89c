//! Feasible trajectories and their worst-case costs.

pub mod catalog;
pub mod export;
pub mod newton;
pub mod optimize;
pub mod plan;
pub mod trajectory;

pub use catalog::{catalog, catalog_plan};
pub use optimize::local_minimax_optimize;
pub use plan::{solve_plan, Anchor, PointExpr, QueenPlan, Residual, Scalar};
pub use trajectory::{evaluate_trajectory, CostBreakdown, Trajectory};

use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::PolygonGeometry;
use crate::report::reference::argmin_row;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UbMethod {
    Catalog,
    Optimize,
}

/// Configurations used at w > 0 for the 11- and 12-gon.
pub fn weighted_configuration(n: usize) -> Option<Configuration> {
    let (rho, s): (&[usize], &[usize]) = match n {
        11 => (&[1, 2, 3, 11, 10, 4, 9, 5, 8, 6, 7], &[1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1]),
        12 => (&[1, 2, 12, 3, 11, 4, 10, 5, 9, 6, 8, 7], &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]),
        _ => return None,
    };
    Configuration::new(n, 1, rho.to_vec(), s.to_vec()).ok()
}

/// The configuration the optimizer runs on for (n, k, w).
///
/// w = 0 uses the published minimizing configuration. At w > 0 the 11- and 12-gon use their
/// fixed configurations and other n fall back to the w = 0 minimizer.
pub fn known_configuration(n: usize, k: usize, w: f64) -> Result<Configuration> {
    if w > 0.0 {
        if k != 1 {
            return Err(EvacError::UnsupportedWeightedK(k));
        }
        if let Some(c) = weighted_configuration(n) {
            return Ok(c);
        }
    }
    let row = argmin_row(n, k).ok_or(EvacError::NoKnownConfiguration { n, k, w })?;
    Configuration::new(n, k, row.rho.to_vec(), row.s.to_vec())
}

/// Upper bound for (n, k, w) with the trajectory achieving it.
pub fn ub_for(n: usize, k: usize, w: f64, method: UbMethod) -> Result<(f64, Trajectory)> {
    let g = PolygonGeometry::new(n)?;
    match method {
        UbMethod::Catalog => {
            if w != 0.0 {
                return Err(EvacError::InvalidInput("catalog plans are for w = 0 only".into()));
            }
            let plan = catalog_plan(n, k).ok_or(EvacError::NoKnownConfiguration { n, k, w })?;
            let (_, tr) = solve_plan(&plan, &g)?;
            let cost = evaluate_trajectory(&tr, &g, 0.0)?;
            Ok((cost.worst_case, tr))
        }
        UbMethod::Optimize => {
            let c = known_configuration(n, k, w)?;
            let tr = local_minimax_optimize(&c, &g, w, None, optimize::DEFAULT_BUDGET)?;
            let cost = evaluate_trajectory(&tr, &g, w)?;
            Ok((cost.worst_case, tr))
        }
    }
}
