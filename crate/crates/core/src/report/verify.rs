//! Regression checks of computed bounds against the embedded reference values.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::configspace::{Configuration, FilterOptions};
use crate::geometry::make_polygon;
use crate::lp::config_lp_value;
use crate::reductions::{best_disk_bound, disk_lower_bound};
use crate::search::{default_threads, min_over_configs, BoundRecord};
use crate::upperbounds::{catalog, evaluate_trajectory, solve_plan};

use super::reference::{summary, ArgminRow, ARGMIN_ROWS, BEST_DISK, DISK_TABLE};

/// Tolerance for LP rows printed with 15 digits.
pub const LP_TOL: f64 = 1e-8;
/// Tolerance for values printed with 5 digits.
pub const TABLE_TOL: f64 = 1e-4;

/// Checks expected to fail, with the reason. They are still reported as failures.
pub const KNOWN_DEVIATIONS: &[(&str, &str)] = &[(
    "lp/6/1",
    "the listed value is 2.6e-8 below 2+sqrt(3)/2, which the LP attains exactly",
)];

/// Enumerations run by the full suite.
pub const FULL_ENUMERATIONS: &[(usize, usize)] = &[
    (3, 1), (4, 1), (5, 1), (6, 1), (7, 1),
    (3, 2), (4, 2), (5, 2), (6, 2),
    (3, 3), (4, 3), (5, 3),
    (3, 4), (4, 4), (5, 4), (6, 4),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fast,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            _ => Err(format!("unknown suite '{s}' (fast|full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Lp,
    Upper,
    Disk,
    BestDisk,
    Enumeration,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Lp => "lp",
            CheckKind::Upper => "upper",
            CheckKind::Disk => "disk",
            CheckKind::BestDisk => "bestdisk",
            CheckKind::Enumeration => "enumeration",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        [CheckKind::Lp, CheckKind::Upper, CheckKind::Disk, CheckKind::BestDisk, CheckKind::Enumeration]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub kind: CheckKind,
    pub n: usize,
    pub k: usize,
    /// `None` if the computation itself failed.
    pub computed: Option<f64>,
    pub reference: f64,
    pub tol: f64,
    pub pass: bool,
    pub source: String,
    pub note: String,
}

impl Check {
    pub fn new(kind: CheckKind, n: usize, k: usize, computed: Option<f64>, reference: f64, tol: f64) -> Check {
        let mut c = Check { kind, n, k, computed, reference, tol, pass: false, source: String::new(), note: String::new() };
        c.pass = c.recompute_pass();
        c
    }

    pub fn id(&self) -> String {
        format!("{}/{}/{}", self.kind.as_str(), self.n, self.k)
    }

    pub fn delta(&self) -> Option<f64> {
        self.computed.map(|c| c - self.reference)
    }

    pub fn recompute_pass(&self) -> bool {
        self.delta().map_or(false, |d| d.abs() <= self.tol)
    }

    pub fn known_deviation(&self) -> Option<&'static str> {
        let id = self.id();
        KNOWN_DEVIATIONS.iter().find(|(k, _)| *k == id).map(|(_, why)| *why)
    }

    fn with(mut self, source: &str, note: impl Into<String>) -> Check {
        self.source = source.to_string();
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Reference entries that could not be checked, as check ids.
    #[serde(default)]
    pub skipped: Vec<String>,
    pub wall_seconds: f64,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Failures not listed in [`KNOWN_DEVIATIONS`].
    pub fn unexpected_failures(&self) -> impl Iterator<Item = &Check> {
        self.failures().filter(|c| c.known_deviation().is_none())
    }

    pub fn ok(&self) -> bool {
        self.unexpected_failures().next().is_none()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match (c.pass, c.known_deviation()) {
                (true, _) => "PASS",
                (false, Some(_)) => "KNOWN",
                (false, None) => "FAIL",
            };
            let computed = c.computed.map_or("error".to_string(), |v| format!("{v:.10}"));
            let delta = c.delta().map_or(String::new(), |d| format!(" delta={d:+.2e}"));
            out.push_str(&format!(
                "{status:5} {:<18} computed={computed} reference={:.10}{delta} tol={:.0e}",
                c.id(),
                c.reference,
                c.tol
            ));
            if let Some(why) = c.known_deviation() {
                out.push_str(&format!(" ({why})"));
            } else if !c.note.is_empty() {
                out.push_str(&format!(" ({})", c.note));
            }
            out.push('\n');
        }
        for id in &self.skipped {
            out.push_str(&format!("SKIP  {id:<18} no polygon value to recompute from\n"));
        }
        let failed = self.failures().count();
        let known = failed - self.unexpected_failures().count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed ({} known deviations), {:.1}s\n",
            self.checks.len(),
            self.checks.len() - failed,
            failed,
            known,
            self.wall_seconds
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn row_config(r: &ArgminRow) -> crate::error::Result<Configuration> {
    Configuration::new(r.n, r.k, r.rho.to_vec(), r.s.to_vec())
}

/// Solves the LP of every listed minimizing configuration.
pub fn lp_row_checks(rows: &[ArgminRow]) -> Vec<Check> {
    rows.iter()
        .map(|r| {
            let value = row_config(r).and_then(|c| {
                let g = make_polygon(r.n)?;
                config_lp_value(&c, &g, 0.0, false)
            });
            let note = value.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
            Check::new(CheckKind::Lp, r.n, r.k, value.ok(), r.value, LP_TOL).with(r.source, note)
        })
        .collect()
}

/// Solves every catalog plan and compares with the summary table's upper bound.
pub fn upper_checks() -> Vec<Check> {
    catalog()
        .into_iter()
        .map(|plan| {
            let (reference, source) = match summary(plan.n, plan.k).and_then(|s| s.upper.map(|u| (u, s.source))) {
                Some((u, src)) => (u, src),
                None => (plan.expected, plan.source),
            };
            let value = make_polygon(plan.n)
                .and_then(|g| solve_plan(&plan, &g).and_then(|(_, tr)| evaluate_trajectory(&tr, &g, 0.0)));
            let note = value.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
            Check::new(CheckKind::Upper, plan.n, plan.k, value.ok().map(|c| c.worst_case), reference, TABLE_TOL)
                .with(source, note)
        })
        .collect()
}

/// Disk bounds recomputed from LP values, plus the best bound per k.
///
/// `lp` maps (n, k) to the polygon value; entries without one are skipped and noted.
pub fn disk_checks(lp: &dyn Fn(usize, usize) -> Option<f64>) -> (Vec<Check>, Vec<(usize, usize)>) {
    let mut checks = Vec::new();
    let mut missing = Vec::new();
    for e in DISK_TABLE {
        let Some(reference) = e.value else { continue };
        match lp(e.n, e.k) {
            Some(v) => {
                let d = disk_lower_bound(e.n, e.k, v.max(1.0)).map(|b| b.disk_lower);
                let note = d.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
                checks.push(
                    Check::new(CheckKind::Disk, e.n, e.k, d.ok(), reference, TABLE_TOL).with("disk table", note),
                );
            }
            None => missing.push((e.n, e.k)),
        }
    }
    for &(k, n_best, reference) in BEST_DISK {
        let records: Vec<BoundRecord> = DISK_TABLE
            .iter()
            .filter(|e| e.k == k)
            .filter_map(|e| lp(e.n, e.k).map(|v| synthetic_record(e.n, k, v)))
            .collect();
        let best = best_disk_bound(&records, k);
        let (value, note) = match &best {
            Ok(b) if b.n == n_best => (Some(b.disk_lower), format!("attained at n={}", b.n)),
            Ok(b) => (Some(b.disk_lower), format!("attained at n={}, expected n={n_best}", b.n)),
            Err(e) => (None, e.to_string()),
        };
        let mut c = Check::new(CheckKind::BestDisk, n_best, k, value, reference, TABLE_TOL).with("best disk bound", note);
        c.pass = c.pass && best.map_or(false, |b| b.n == n_best);
        checks.push(c);
    }
    (checks, missing)
}

fn synthetic_record(n: usize, k: usize, value: f64) -> BoundRecord {
    let c = argmin_config(n, k);
    BoundRecord {
        n,
        k,
        w: 0.0,
        lower_value: value.max(1.0),
        raw_min: value,
        argmin_config: c,
        solved_count: 1,
        pruned_count: 0,
        wall_time: std::time::Duration::ZERO,
    }
}

fn argmin_config(n: usize, k: usize) -> Configuration {
    ARGMIN_ROWS
        .iter()
        .find(|r| r.n == n && r.k == k)
        .and_then(|r| row_config(r).ok())
        .unwrap_or_else(|| Configuration::new(n, k, (1..=n).collect(), vec![0; n]).expect("queen-only configuration"))
}

/// Full enumerations compared with the summary table's lower bounds.
pub fn enumeration_checks(cases: &[(usize, usize)], threads: usize) -> Vec<Check> {
    cases
        .iter()
        .filter_map(|&(n, k)| {
            let s = summary(n, k)?;
            let reference = s.lower?;
            let rec = min_over_configs(n, k, 0.0, FilterOptions::all(), threads, None);
            let (value, note) = match &rec {
                Ok(r) => (Some(r.lower_value), format!("raw min {:.10}, {} LPs solved", r.raw_min, r.solved_count)),
                Err(e) => (None, e.to_string()),
            };
            Some(Check::new(CheckKind::Enumeration, n, k, value, reference, TABLE_TOL).with(s.source, note))
        })
        .collect()
}

/// Runs a verification suite. Failures are reported in the result, never returned as errors.
pub fn verify(suite: Suite) -> RunReport {
    let start = Instant::now();
    let mut checks = lp_row_checks(ARGMIN_ROWS);
    let lp_values: Vec<(usize, usize, Option<f64>)> = checks.iter().map(|c| (c.n, c.k, c.computed)).collect();
    let lookup = |n: usize, k: usize| lp_values.iter().find(|e| e.0 == n && e.1 == k).and_then(|e| e.2);
    checks.extend(upper_checks());
    let (disk, missing) = disk_checks(&lookup);
    checks.extend(disk);
    let skipped = missing.iter().map(|(n, k)| format!("disk/{n}/{k}")).collect();
    if suite == Suite::Full {
        checks.extend(enumeration_checks(FULL_ENUMERATIONS, default_threads()));
    }
    RunReport { suite, checks, skipped, wall_seconds: start.elapsed().as_secs_f64() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_reference_fails() {
        let mut rows = ARGMIN_ROWS[..3].to_vec();
        let good = lp_row_checks(&rows);
        assert!(good.iter().all(|c| c.pass));
        rows[1].value += 1e-6;
        let bad = lp_row_checks(&rows);
        assert!(!bad[1].pass && bad[0].pass && bad[2].pass);
    }

    #[test]
    fn known_deviation_is_not_unexpected() {
        let c = Check::new(CheckKind::Lp, 6, 1, Some(2.0 + 3f64.sqrt() / 2.0), 2.8660253779249727, LP_TOL);
        assert!(!c.pass);
        assert!(c.known_deviation().is_some());
        let r = RunReport { suite: Suite::Fast, checks: vec![c], skipped: vec![], wall_seconds: 0.0 };
        assert!(r.ok());
        assert!(r.to_text().starts_with("KNOWN"));
    }

    #[test]
    fn failed_computation_never_passes() {
        let c = Check::new(CheckKind::Upper, 5, 1, None, 1.0, 1.0);
        assert!(!c.pass);
        assert!(c.delta().is_none());
    }
}
