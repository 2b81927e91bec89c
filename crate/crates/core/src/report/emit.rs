//! File renderings: verification tables and w-sweep curves.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{EvacError, Result};
use crate::reductions::DiskBound;
use crate::search::BoundRecord;

use super::verify::{Check, CheckKind, RunReport, Suite};

const TABLE_HEADER: &str = "kind,n,k,computed,reference,tol,pass,source,note";

/// Commas and quotes are dropped from free-text fields so the CSV stays unquoted.
fn clean(s: &str) -> String {
    s.replace([',', '"', '\n'], " ")
}

/// One row per check, floats in round-trip form. The first line names the suite.
pub fn report_csv(r: &RunReport) -> String {
    let suite = match r.suite {
        Suite::Fast => "fast",
        Suite::Full => "full",
    };
    let mut out = format!("# suite={suite} wall_seconds={:?} skipped={}\n{TABLE_HEADER}\n", r.wall_seconds, r.skipped.join(";"));
    for c in &r.checks {
        let computed = c.computed.map_or(String::new(), |v| format!("{v:?}"));
        writeln!(
            out,
            "{},{},{},{computed},{:?},{:?},{},{},{}",
            c.kind.as_str(),
            c.n,
            c.k,
            c.reference,
            c.tol,
            c.pass,
            clean(&c.source),
            clean(&c.note)
        )
        .unwrap();
    }
    out
}

/// Reads a table written by [`report_csv`]. Pass flags are taken from the file; use
/// [`recheck`] to recompute them.
pub fn parse_report_csv(text: &str) -> Result<RunReport> {
    let bad = |m: String| EvacError::InvalidInput(format!("report table: {m}"));
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| bad("empty".into()))?;
    let meta = first.strip_prefix("# ").ok_or_else(|| bad("missing suite line".into()))?;
    let mut suite = None;
    let mut wall_seconds = 0.0;
    let mut skipped = Vec::new();
    for kv in meta.split_whitespace() {
        match kv.split_once('=') {
            Some(("suite", v)) => suite = Some(v.parse::<Suite>().map_err(bad)?),
            Some(("wall_seconds", v)) => wall_seconds = v.parse().map_err(|e| bad(format!("{e}")))?,
            Some(("skipped", v)) => skipped = v.split(';').filter(|x| !x.is_empty()).map(String::from).collect(),
            _ => return Err(bad(format!("unexpected '{kv}'"))),
        }
    }
    if lines.next() != Some(TABLE_HEADER) {
        return Err(bad("bad header".into()));
    }
    let mut checks = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(bad(format!("row {i} has {} fields", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("row {i}: {e}")));
        let int = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("row {i}: {e}")));
        checks.push(Check {
            kind: CheckKind::parse(f[0]).ok_or_else(|| bad(format!("row {i}: kind '{}'", f[0])))?,
            n: int(f[1])?,
            k: int(f[2])?,
            computed: if f[3].is_empty() { None } else { Some(num(f[3])?) },
            reference: num(f[4])?,
            tol: num(f[5])?,
            pass: f[6].parse().map_err(|e| bad(format!("row {i}: {e}")))?,
            source: f[7].to_string(),
            note: f[8].to_string(),
        });
    }
    Ok(RunReport { suite: suite.ok_or_else(|| bad("no suite".into()))?, checks, skipped, wall_seconds })
}

/// Recomputes every pass flag from the stored values and tolerances.
pub fn recheck(r: &RunReport) -> RunReport {
    let mut out = r.clone();
    for c in &mut out.checks {
        c.pass = c.recompute_pass();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Lower,
    Upper,
    Disk,
}

impl CurveKind {
    fn as_str(self) -> &'static str {
        match self {
            CurveKind::Lower => "lower",
            CurveKind::Upper => "upper",
            CurveKind::Disk => "disk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub w: f64,
    pub value: f64,
    pub kind: CurveKind,
    pub n: usize,
}

impl From<&BoundRecord> for CurvePoint {
    fn from(r: &BoundRecord) -> Self {
        CurvePoint { w: r.w, value: r.lower_value, kind: CurveKind::Lower, n: r.n }
    }
}

impl From<&DiskBound> for CurvePoint {
    fn from(b: &DiskBound) -> Self {
        CurvePoint { w: b.w, value: b.disk_lower, kind: CurveKind::Disk, n: b.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

impl CurveFormat {
    /// From a file extension; anything other than `.json` is CSV.
    pub fn for_path(path: &Path) -> CurveFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => CurveFormat::Json,
            _ => CurveFormat::Csv,
        }
    }
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("w,value,kind,n\n");
    for p in points {
        writeln!(out, "{:?},{:?},{},{}", p.w, p.value, p.kind.as_str(), p.n).unwrap();
    }
    out
}

pub fn curve_json(points: &[CurvePoint]) -> String {
    serde_json::to_string_pretty(points).expect("curve serializes")
}

pub fn parse_curve_csv(text: &str) -> Result<Vec<CurvePoint>> {
    let bad = |m: String| EvacError::InvalidInput(format!("curve csv: {m}"));
    let mut lines = text.lines();
    if lines.next() != Some("w,value,kind,n") {
        return Err(bad("bad header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 4 {
                return Err(bad(format!("'{l}'")));
            }
            let kind = match f[2] {
                "lower" => CurveKind::Lower,
                "upper" => CurveKind::Upper,
                "disk" => CurveKind::Disk,
                other => return Err(bad(format!("kind '{other}'"))),
            };
            Ok(CurvePoint {
                w: f[0].parse().map_err(|e| bad(format!("{e}")))?,
                value: f[1].parse().map_err(|e| bad(format!("{e}")))?,
                kind,
                n: f[3].parse().map_err(|e| bad(format!("{e}")))?,
            })
        })
        .collect()
}

/// Writes a curve file in the given format.
pub fn emit_curve(points: &[CurvePoint], format: CurveFormat, path: &Path) -> Result<()> {
    if points.is_empty() {
        return Err(EvacError::InvalidInput("no curve points".into()));
    }
    let text = match format {
        CurveFormat::Csv => curve_csv(points),
        CurveFormat::Json => curve_json(points),
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_table_round_trips() {
        let mut a = Check::new(CheckKind::Lp, 5, 1, Some(2.7144122731725724), 2.7144122731725724, 1e-8);
        a.source = "k=1, n=5 \"row\"".into();
        let b = Check::new(CheckKind::Upper, 4, 2, None, 1.7071, 1e-4);
        let r = RunReport { suite: Suite::Full, checks: vec![a, b], skipped: vec!["disk/10/3".into()], wall_seconds: 1.25 };
        let back = parse_report_csv(&report_csv(&r)).unwrap();
        assert_eq!(back.checks.len(), 2);
        assert_eq!(back.checks[0].computed, r.checks[0].computed);
        assert_eq!(back.checks[1].computed, None);
        assert_eq!(recheck(&back).checks.iter().map(|c| c.pass).collect::<Vec<_>>(), vec![true, false]);
        assert_eq!(back.suite, Suite::Full);
        assert_eq!(back.skipped, r.skipped);
    }

    #[test]
    fn curve_round_trips() {
        let pts = vec![
            CurvePoint { w: 0.1, value: 2.9, kind: CurveKind::Lower, n: 7 },
            CurvePoint { w: 0.1, value: 1.0 / 3.0, kind: CurveKind::Disk, n: 7 },
        ];
        assert_eq!(parse_curve_csv(&curve_csv(&pts)).unwrap(), pts);
        let j: Vec<CurvePoint> = serde_json::from_str(&curve_json(&pts)).unwrap();
        assert_eq!(j, pts);
    }

    #[test]
    fn empty_curve_is_rejected() {
        assert!(emit_curve(&[], CurveFormat::Csv, Path::new("/nonexistent/x.csv")).is_err());
    }
}
