//! Plain-text LP dump (CPLEX LP layout) for cross-checking with external solvers.

use std::fmt::Write;

use super::model::{MetricLpModel, PointLabel, Var};

fn point_name(m: &MetricLpModel, p: usize) -> (usize, usize) {
    match m.points[p] {
        PointLabel::Origin => (0, 0),
        PointLabel::Agent { agent, stage } => (agent, stage),
    }
}

pub fn var_name(m: &MetricLpModel, v: Var) -> String {
    match v {
        Var::T(j) => format!("t{j}"),
        Var::Y => "y".to_string(),
        Var::D(a, b) => {
            let (pa, pb) = (point_name(m, a), point_name(m, b));
            let (lo, hi) = if pa <= pb { (pa, pb) } else { (pb, pa) };
            format!("d_{}_{}_{}_{}", lo.0, lo.1, hi.0, hi.1)
        }
    }
}

fn term(out: &mut String, first: bool, c: f64, name: &str) {
    let sign = if c < 0.0 { "-" } else if first { "" } else { "+" };
    let a = c.abs();
    if a == 1.0 {
        let _ = write!(out, " {sign} {name}");
    } else {
        let _ = write!(out, " {sign} {a:?} {name}");
    }
}

/// Renders the whole model; one constraint per line.
pub fn to_lp_text(m: &MetricLpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}  w={}", m.config, m.w);
    let _ = writeln!(out, "Minimize");
    let _ = writeln!(out, " obj: y");
    let _ = writeln!(out, "Subject To");
    for (i, row) in m.rows().enumerate() {
        let mut line = format!(" r{i}:");
        for (t, &(v, c)) in row.coefs.iter().enumerate() {
            term(&mut line, t == 0, c, &var_name(m, v));
        }
        let _ = writeln!(out, "{line} >= {:?}", row.rhs);
    }
    for (i, (v, val)) in m.pins().into_iter().enumerate() {
        let _ = writeln!(out, " p{i}: {} = {val:?}", var_name(m, v));
    }
    let _ = writeln!(out, "Bounds");
    for j in 0..=m.n() {
        let _ = writeln!(out, " t{j} free");
    }
    let _ = writeln!(out, " y free");
    let _ = writeln!(out, "End");
    out
}
