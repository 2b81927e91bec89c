//! The metric relaxation `LP^n_k(s, ρ)` and its weighted variant.

use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::PolygonGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointLabel {
    Origin,
    /// Agent `agent` at 1-based stage `stage`.
    Agent { agent: usize, stage: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T(usize),
    Y,
    /// Distance between two points, by point index, smaller first.
    D(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Speed { agent: usize, stage: usize },
    Objective { stage: usize },
    NonNegative,
    Triangle { a: usize, b: usize, via: usize },
}

/// `coefs · x >= rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub kind: RowKind,
    pub coefs: Vec<(Var, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct MetricLpModel {
    pub config: Configuration,
    pub geometry: PolygonGeometry,
    pub w: f64,
    pub points: Vec<PointLabel>,
    /// pinned[t] for t in 0..=n: `Some(value)` if t_j is fixed.
    pub time_pins: Vec<Option<f64>>,
}

pub fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    b * (b - 1) / 2 + a
}

impl MetricLpModel {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_dist_vars(&self) -> usize {
        let m = self.num_points();
        m * (m - 1) / 2
    }

    pub fn num_triangle_rows(&self) -> usize {
        let m = self.num_points();
        if m < 3 {
            0
        } else {
            m * (m - 1) * (m - 2) / 2
        }
    }

    /// Index of point `(agent, stage)`; stage 0 is the shared origin.
    pub fn point(&self, agent: usize, stage: usize) -> usize {
        if stage == 0 {
            0
        } else {
            1 + agent * self.n() + (stage - 1)
        }
    }

    /// The point hitting vertex `rho_j` at stage `j`.
    pub fn assigned_point(&self, stage: usize) -> usize {
        self.point(self.config.agent_at(stage), stage)
    }

    /// Pinned distance between two points, if any.
    pub fn pinned_distance(&self, a: usize, b: usize) -> Option<f64> {
        if a == b {
            return Some(0.0);
        }
        let vertex = |p: usize| match self.points[p] {
            PointLabel::Agent { agent, stage } if self.config.agent_at(stage) == agent => {
                Some(self.config.vertex_at(stage))
            }
            _ => None,
        };
        match (self.points[a], self.points[b]) {
            (PointLabel::Origin, _) => vertex(b).map(|_| 1.0),
            (_, PointLabel::Origin) => vertex(a).map(|_| 1.0),
            _ => match (vertex(a), vertex(b)) {
                (Some(u), Some(v)) => Some(self.geometry.chord(u, v)),
                _ => None,
            },
        }
    }

    pub fn speed_rows(&self) -> impl Iterator<Item = Row> + '_ {
        let n = self.n();
        (0..=self.k()).flat_map(move |i| {
            (0..n).map(move |j| {
                let a = self.point(i, j);
                let b = self.point(i, j + 1);
                Row {
                    kind: RowKind::Speed { agent: i, stage: j },
                    coefs: vec![(Var::T(j + 1), 1.0), (Var::T(j), -1.0), (dvar(a, b), -1.0)],
                    rhs: 0.0,
                }
            })
        })
    }

    pub fn objective_rows(&self) -> impl Iterator<Item = Row> + '_ {
        let w = self.w;
        (1..=self.n()).map(move |j| {
            let target = self.assigned_point(j);
            let mut coefs = vec![(Var::Y, 1.0), (Var::T(j), -1.0)];
            let q = self.point(0, j);
            if q != target {
                coefs.push((dvar(q, target), -1.0 / (1.0 + w)));
            }
            if w > 0.0 {
                let sv = self.point(1, j);
                if sv != target {
                    coefs.push((dvar(sv, target), -w / (1.0 + w)));
                }
            }
            Row { kind: RowKind::Objective { stage: j }, coefs, rhs: 0.0 }
        })
    }

    pub fn nonnegativity_rows(&self) -> impl Iterator<Item = Row> + '_ {
        let m = self.num_points();
        (1..m).flat_map(move |b| {
            (0..b).map(move |a| Row { kind: RowKind::NonNegative, coefs: vec![(Var::D(a, b), 1.0)], rhs: 0.0 })
        })
    }

    /// `d(a,via) + d(via,b) - d(a,b) >= 0` for every unordered `{a,b}` and `via`.
    pub fn triangle_rows(&self) -> impl Iterator<Item = Row> + '_ {
        let m = self.num_points();
        (1..m).flat_map(move |b| {
            (0..b).flat_map(move |a| {
                (0..m).filter(move |&c| c != a && c != b).map(move |c| Row {
                    kind: RowKind::Triangle { a, b, via: c },
                    coefs: vec![(dvar(a, c), 1.0), (dvar(c, b), 1.0), (Var::D(a, b), -1.0)],
                    rhs: 0.0,
                })
            })
        })
    }

    pub fn rows(&self) -> impl Iterator<Item = Row> + '_ {
        self.speed_rows()
            .chain(self.objective_rows())
            .chain(self.nonnegativity_rows())
            .chain(self.triangle_rows())
    }

    /// Equality pins `(var, value)` for times and distances.
    pub fn pins(&self) -> Vec<(Var, f64)> {
        let mut out: Vec<(Var, f64)> = self
            .time_pins
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.map(|v| (Var::T(j), v)))
            .collect();
        let m = self.num_points();
        for b in 1..m {
            for a in 0..b {
                if let Some(v) = self.pinned_distance(a, b) {
                    out.push((Var::D(a, b), v));
                }
            }
        }
        out
    }
}

impl MetricLpModel {
    /// Largest violation of any row or pin by the given assignment.
    ///
    /// Equivalent to evaluating [`MetricLpModel::rows`] and [`MetricLpModel::pins`]
    /// one by one, without materializing the triangle rows.
    pub fn max_violation(&self, times: &[f64], y: f64, dist: &[Vec<f64>]) -> f64 {
        let m = self.num_points();
        let n = self.n();
        let mut viol: f64 = 0.0;
        for (j, pin) in self.time_pins.iter().enumerate() {
            if let Some(v) = pin {
                viol = viol.max((times[j] - v).abs());
            }
        }
        for i in 0..=self.k() {
            for j in 0..n {
                let d = dist[self.point(i, j)][self.point(i, j + 1)];
                viol = viol.max(d - (times[j + 1] - times[j]));
            }
        }
        for row in self.objective_rows() {
            let act: f64 = row
                .coefs
                .iter()
                .map(|&(v, c)| {
                    c * match v {
                        Var::T(j) => times[j],
                        Var::Y => y,
                        Var::D(a, b) => dist[a][b],
                    }
                })
                .sum();
            viol = viol.max(row.rhs - act);
        }
        for a in 0..m {
            for b in 0..m {
                viol = viol.max((dist[a][b] - dist[b][a]).abs());
                if a < b {
                    viol = viol.max(-dist[a][b]);
                    if let Some(v) = self.pinned_distance(a, b) {
                        viol = viol.max((dist[a][b] - v).abs());
                    }
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let dab = dist[a][b];
                for c in 0..m {
                    if c != a && c != b {
                        viol = viol.max(dab - dist[a][c] - dist[c][b]);
                    }
                }
            }
        }
        viol
    }
}

pub fn dvar(a: usize, b: usize) -> Var {
    if a < b {
        Var::D(a, b)
    } else {
        Var::D(b, a)
    }
}

/// Length of the leading run of stages whose agents are pairwise distinct.
pub fn distinct_prefix(c: &Configuration) -> usize {
    let mut seen = vec![false; c.k + 1];
    for (j, &a) in c.s.iter().enumerate() {
        if seen[a] {
            return j;
        }
        seen[a] = true;
    }
    c.n
}

pub fn build_lp(c: &Configuration, g: &PolygonGeometry, w: f64) -> Result<MetricLpModel> {
    build_lp_with_presets(c, g, w, false)
}

pub fn build_lp_with_presets(
    c: &Configuration,
    g: &PolygonGeometry,
    w: f64,
    presets: bool,
) -> Result<MetricLpModel> {
    c.validate()?;
    if g.n() != c.n {
        return Err(EvacError::InvalidInput(format!("geometry n = {} but configuration n = {}", g.n(), c.n)));
    }
    if !(0.0..=1.0).contains(&w) || w.is_nan() {
        return Err(EvacError::InvalidWeight(w));
    }
    if w > 0.0 && c.k != 1 {
        return Err(EvacError::UnsupportedWeightedK(c.k));
    }
    let mut points = vec![PointLabel::Origin];
    for agent in 0..=c.k {
        for stage in 1..=c.n {
            points.push(PointLabel::Agent { agent, stage });
        }
    }
    let mut time_pins = vec![None; c.n + 1];
    time_pins[0] = Some(-1.0);
    time_pins[1] = Some(0.0);
    if presets {
        for pin in time_pins.iter_mut().skip(1).take(distinct_prefix(c)) {
            *pin = Some(0.0);
        }
    }
    Ok(MetricLpModel { config: c.clone(), geometry: g.clone(), w, points, time_pins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_polygon;

    #[test]
    fn counts() {
        let g = make_polygon(3).unwrap();
        let c = Configuration::new(3, 1, vec![1, 2, 3], vec![1, 0, 1]).unwrap();
        let m = build_lp(&c, &g, 0.0).unwrap();
        assert_eq!(m.num_points(), 7);
        assert_eq!(m.num_dist_vars(), 21);

        let g = make_polygon(5).unwrap();
        let c = Configuration::new(5, 2, vec![1, 2, 3, 5, 4], vec![1, 2, 0, 1, 2]).unwrap();
        let m = build_lp(&c, &g, 0.0).unwrap();
        assert_eq!(m.num_points(), 16);
        assert_eq!(m.num_dist_vars(), 120);
        assert_eq!(m.num_triangle_rows(), 1680);
        assert_eq!(m.triangle_rows().count(), 1680);
    }

    #[test]
    fn weighted_requires_one_servant() {
        let g = make_polygon(4).unwrap();
        let c = Configuration::new(4, 2, vec![1, 2, 3, 4], vec![1, 2, 0, 0]).unwrap();
        assert!(matches!(build_lp(&c, &g, 0.5), Err(EvacError::UnsupportedWeightedK(2))));
    }

    #[test]
    fn pins_match_geometry() {
        let g = make_polygon(6).unwrap();
        let c = Configuration::new(6, 1, vec![1, 2, 6, 3, 5, 4], vec![1, 0, 1, 0, 1, 0]).unwrap();
        let m = build_lp(&c, &g, 0.0).unwrap();
        for j in 1..=6 {
            assert_eq!(m.pinned_distance(0, m.assigned_point(j)), Some(1.0));
            for l in 1..=6 {
                let expect = g.chord(c.vertex_at(j), c.vertex_at(l));
                assert_eq!(m.pinned_distance(m.assigned_point(j), m.assigned_point(l)), Some(expect));
            }
        }
        assert_eq!(m.pinned_distance(m.point(0, 1), m.point(1, 2)), None);
    }
}
