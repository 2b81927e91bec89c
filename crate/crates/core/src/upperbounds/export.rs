//! Trajectory files: a stage table and one polyline per agent.

use std::fmt::Write as _;

use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::Point2;

use super::trajectory::Trajectory;

/// `stage,t,x0,y0,x1,y1,...` with one row per stage 0..=n, full round-trip precision.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("stage,t");
    for a in 0..tr.positions.len() {
        write!(out, ",x{a},y{a}").unwrap();
    }
    out.push('\n');
    for j in 0..tr.times.len() {
        write!(out, "{j},{:?}", tr.times[j]).unwrap();
        for path in &tr.positions {
            write!(out, ",{:?},{:?}", path[j].x, path[j].y).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads a table written by [`trajectory_csv`] back for the given configuration.
pub fn parse_trajectory_csv(text: &str, config: &Configuration) -> Result<Trajectory> {
    let bad = |m: String| EvacError::InvalidInput(format!("trajectory csv: {m}"));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let cols = header.split(',').count();
    let agents = config.k + 1;
    if cols != 2 + 2 * agents {
        return Err(bad(format!("{cols} columns, expected {} for k={}", 2 + 2 * agents, config.k)));
    }
    let mut times = Vec::new();
    let mut positions = vec![Vec::new(); agents];
    for (row, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("row {row}: {e}")))?;
        if vals.len() != cols || vals[0] as usize != row {
            return Err(bad(format!("row {row} is malformed")));
        }
        times.push(vals[1]);
        for (a, path) in positions.iter_mut().enumerate() {
            path.push(Point2::new(vals[2 + 2 * a], vals[3 + 2 * a]));
        }
    }
    if times.len() != config.n + 1 {
        return Err(bad(format!("{} rows, expected {}", times.len(), config.n + 1)));
    }
    Ok(Trajectory { config: config.clone(), times, positions })
}

/// `agent,wkt` with one `LINESTRING` per agent through its stage positions.
pub fn trajectory_polylines(tr: &Trajectory) -> String {
    let mut out = String::from("agent,wkt\n");
    for (a, path) in tr.positions.iter().enumerate() {
        let pts: Vec<String> = path.iter().map(|p| format!("{:?} {:?}", p.x, p.y)).collect();
        writeln!(out, "{a},\"LINESTRING ({})\"", pts.join(", ")).unwrap();
    }
    out
}
