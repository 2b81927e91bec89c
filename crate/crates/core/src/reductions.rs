//! Disk lower bounds from polygon lower bounds.
//!
//! An algorithm for the disk can be turned into one for the inscribed n-gon that is faster
//! by at most the time to reach the circle plus the arc between neighbouring vertices shared
//! among the searchers, so a polygon lower bound lifts to the disk.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{EvacError, Result};
use crate::search::BoundRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskFormula {
    /// Queen and k Servants: `1 + 2π/((k+1)n) + polygon_lower`.
    Priority,
    /// Two agents with weight w: `1 + π/n + polygon_lower`.
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskBound {
    pub n: usize,
    pub k: usize,
    pub w: f64,
    pub polygon_lower: f64,
    pub disk_lower: f64,
    pub formula: DiskFormula,
}

pub fn disk_lower_bound(n: usize, k: usize, polygon_lower: f64) -> Result<DiskBound> {
    if n < 3 {
        return Err(EvacError::InvalidPolygon(n));
    }
    if k < 1 {
        return Err(EvacError::InvalidInput("k must be at least 1".into()));
    }
    if !(polygon_lower >= 1.0) {
        return Err(EvacError::InvalidInput(format!(
            "polygon lower bound {polygon_lower} is below 1; pass the clamped value"
        )));
    }
    Ok(DiskBound {
        n,
        k,
        w: 0.0,
        polygon_lower,
        disk_lower: 1.0 + 2.0 * PI / ((k + 1) as f64 * n as f64) + polygon_lower,
        formula: DiskFormula::Priority,
    })
}

pub fn wdisk_lower_bound(n: usize, w: f64, wobj: f64) -> Result<DiskBound> {
    if n < 3 {
        return Err(EvacError::InvalidPolygon(n));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(EvacError::InvalidWeight(w));
    }
    Ok(DiskBound {
        n,
        k: 1,
        w,
        polygon_lower: wobj,
        disk_lower: 1.0 + PI / n as f64 + wobj,
        formula: DiskFormula::Weighted,
    })
}

/// The strongest priority disk bound over a set of polygon results for one k.
pub fn best_disk_bound(records: &[BoundRecord], k: usize) -> Result<DiskBound> {
    if records.is_empty() {
        return Err(EvacError::InvalidInput("no records".into()));
    }
    if let Some(r) = records.iter().find(|r| r.k != k) {
        return Err(EvacError::InvalidInput(format!("record for k={} in a k={k} list", r.k)));
    }
    let mut best: Option<DiskBound> = None;
    for r in records {
        let b = disk_lower_bound(r.n, k, r.lower_value)?;
        if best.map_or(true, |x| b.disk_lower > x.disk_lower) {
            best = Some(b);
        }
    }
    Ok(best.expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_examples() {
        assert!((disk_lower_bound(6, 1, 2.86602).unwrap().disk_lower - 4.38962).abs() < 1e-5);
        assert!((disk_lower_bound(12, 1, 3.38486).unwrap().disk_lower - 4.64666).abs() < 1e-5);
        assert!((disk_lower_bound(11, 2, 2.4629185509).unwrap().disk_lower - 3.65332).abs() < 1e-5);
        assert!((wdisk_lower_bound(7, 0.0, 2.95125).unwrap().disk_lower - 4.40005).abs() < 1e-5);
        assert!((wdisk_lower_bound(12, 0.0, 3.38486).unwrap().disk_lower - 4.64666).abs() < 1e-5);
        let x = 0.123;
        assert_eq!(wdisk_lower_bound(3, 1.0, x).unwrap().disk_lower, 1.0 + PI / 3.0 + x);
    }

    #[test]
    fn priority_and_weighted_agree_at_k1() {
        for n in 3..=13 {
            let a = disk_lower_bound(n, 1, 2.5).unwrap().disk_lower;
            let b = wdisk_lower_bound(n, 0.0, 2.5).unwrap().disk_lower;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn input_checks() {
        assert!(disk_lower_bound(5, 4, 0.95).is_err());
        assert!(disk_lower_bound(2, 1, 1.5).is_err());
        assert!(wdisk_lower_bound(5, 1.5, 2.0).is_err());
        assert!(best_disk_bound(&[], 1).is_err());
    }

    #[test]
    fn monotone_in_inputs() {
        let a = disk_lower_bound(8, 2, 2.0).unwrap().disk_lower;
        assert!(disk_lower_bound(8, 2, 2.1).unwrap().disk_lower > a);
        assert!(disk_lower_bound(9, 2, 2.0).unwrap().disk_lower < a);
    }
}
