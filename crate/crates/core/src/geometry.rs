//! Regular n-gon inscribed in the unit circle.
//!
//! Vertex `i` (1-based) sits at angle `2iπ/n`, so vertex `n` is `(1, 0)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{EvacError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// `(1 - l) * self + l * other`.
    pub fn lerp(self, other: Point2, l: f64) -> Point2 {
        Point2::new(self.x + l * (other.x - self.x), self.y + l * (other.y - self.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

pub fn distance(a: Point2, b: Point2) -> f64 {
    (a - b).norm()
}

#[derive(Debug, Clone)]
pub struct PolygonGeometry {
    n: usize,
    vertices: Vec<Point2>,
    edge_length: f64,
    chord: Vec<f64>,
}

pub fn make_polygon(n: usize) -> Result<PolygonGeometry> {
    PolygonGeometry::new(n)
}

impl PolygonGeometry {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(EvacError::InvalidPolygon(n));
        }
        let vertices = (1..=n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                Point2::new(a.cos(), a.sin())
            })
            .collect();
        // Chords come from the gap only, so chord[i][j] == chord[j][i] bit for bit.
        let by_gap: Vec<f64> = (0..n)
            .map(|m| if m == 0 { 0.0 } else { 2.0 * (PI * m as f64 / n as f64).sin() })
            .collect();
        let mut chord = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                chord[i * n + j] = by_gap[i.abs_diff(j) % n];
            }
        }
        Ok(PolygonGeometry { n, vertices, edge_length: by_gap[1], chord })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_length(&self) -> f64 {
        self.edge_length
    }

    /// Vertex `i`, 1-based. Panics on an out-of-range index.
    pub fn vertex(&self, i: usize) -> Point2 {
        assert!(i >= 1 && i <= self.n, "vertex index {i} out of range 1..={}", self.n);
        self.vertices[i - 1]
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn chord_distance(&self, i: usize, j: usize) -> Result<f64> {
        for idx in [i, j] {
            if idx < 1 || idx > self.n {
                return Err(EvacError::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        Ok(self.chord(i, j))
    }

    /// Unchecked chord lookup, 1-based.
    #[inline]
    pub fn chord(&self, i: usize, j: usize) -> f64 {
        self.chord[(i - 1) * self.n + (j - 1)]
    }
}

pub fn chord_distance(g: &PolygonGeometry, i: usize, j: usize) -> Result<f64> {
    g.chord_distance(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_vertices() {
        let g = make_polygon(4).unwrap();
        assert!(distance(g.vertex(1), Point2::new(0.0, 1.0)) < 1e-15);
        assert!(distance(g.vertex(4), Point2::new(1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn hexagon_edge_is_one() {
        assert!((make_polygon(6).unwrap().edge_length() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(make_polygon(2), Err(EvacError::InvalidPolygon(2))));
    }

    #[test]
    fn chord_examples() {
        let g4 = make_polygon(4).unwrap();
        assert!((g4.chord_distance(1, 3).unwrap() - 2.0).abs() < 1e-15);
        let g6 = make_polygon(6).unwrap();
        assert!((g6.chord_distance(2, 3).unwrap() - 1.0).abs() < 1e-15);
        let g5 = make_polygon(5).unwrap();
        assert!((g5.chord_distance(1, 3).unwrap() - 1.9021130326).abs() < 1e-10);
        assert!(g5.chord_distance(0, 3).is_err());
        assert!(g5.chord_distance(1, 6).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point2::ORIGIN, Point2::new(1.0, 0.0)), 1.0);
        assert_eq!(distance(Point2::ORIGIN, Point2::ORIGIN), 0.0);
    }
}
