use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::{distance, Point2, PolygonGeometry};

use super::newton::{solve_box, NewtonOptions};
use super::trajectory::{advance, evaluate_trajectory, finish, servant_ready, stage_costs, Trajectory};

/// A convex-combination weight: a solver parameter or a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Param(usize),
    Const(f64),
}

impl Scalar {
    fn value(self, params: &[f64]) -> f64 {
        match self {
            Scalar::Param(i) => params[i],
            Scalar::Const(v) => v,
        }
    }
}

/// A point named by a plan.
#[derive(Debug, Clone, PartialEq)]
pub enum PointExpr {
    Origin,
    Vertex(usize),
    Fixed(f64, f64),
    /// The Queen's position at a (1-based) stage; must refer to an earlier stage inside anchors.
    Queen(usize),
    /// `(1 - l)·a + l·b`.
    Lerp(Box<PointExpr>, Box<PointExpr>, Scalar),
    /// Two parameters mapped from [0,1]² onto the square [−1,1]².
    Free(usize, usize),
    Shift(Box<PointExpr>, f64, f64),
    /// The point at distance `d` from `from` along the segment toward `to`.
    Toward(Box<PointExpr>, Box<PointExpr>, f64),
}

impl PointExpr {
    pub fn lerp(a: PointExpr, b: PointExpr, l: Scalar) -> PointExpr {
        PointExpr::Lerp(Box::new(a), Box::new(b), l)
    }

    pub fn toward(a: PointExpr, b: PointExpr, d: f64) -> PointExpr {
        PointExpr::Toward(Box::new(a), Box::new(b), d)
    }

    pub fn shift(a: PointExpr, dx: f64, dy: f64) -> PointExpr {
        PointExpr::Shift(Box::new(a), dx, dy)
    }

    fn eval(&self, g: &PolygonGeometry, params: &[f64], queen: &[Point2]) -> Point2 {
        match self {
            PointExpr::Origin => Point2::ORIGIN,
            PointExpr::Vertex(i) => g.vertex(*i),
            PointExpr::Fixed(x, y) => Point2::new(*x, *y),
            PointExpr::Queen(j) => queen[*j],
            PointExpr::Lerp(a, b, l) => a.eval(g, params, queen).lerp(b.eval(g, params, queen), l.value(params)),
            PointExpr::Free(u, v) => Point2::new(2.0 * params[*u] - 1.0, 2.0 * params[*v] - 1.0),
            PointExpr::Shift(a, dx, dy) => a.eval(g, params, queen) + Point2::new(*dx, *dy),
            PointExpr::Toward(a, b, d) => {
                let p = a.eval(g, params, queen);
                let q = b.eval(g, params, queen);
                let len = distance(p, q);
                if len == 0.0 {
                    p
                } else {
                    p.lerp(q, d / len)
                }
            }
        }
    }

    fn params(&self, out: &mut Vec<usize>) {
        match self {
            PointExpr::Lerp(a, b, l) => {
                a.params(out);
                b.params(out);
                if let Scalar::Param(i) = l {
                    out.push(*i);
                }
            }
            PointExpr::Free(u, v) => out.extend([*u, *v]),
            PointExpr::Shift(a, ..) => a.params(out),
            PointExpr::Toward(a, b, _) => {
                a.params(out);
                b.params(out);
            }
            _ => {}
        }
    }

    fn max_queen_ref(&self) -> Option<usize> {
        match self {
            PointExpr::Queen(j) => Some(*j),
            PointExpr::Lerp(a, b, _) | PointExpr::Toward(a, b, _) => a.max_queen_ref().max(b.max_queen_ref()),
            PointExpr::Shift(a, ..) => a.max_queen_ref(),
            _ => None,
        }
    }
}

/// Where the Queen stands at a stage time.
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor {
    /// Stage assigned to the Queen: she is on the vertex.
    Visit,
    At(PointExpr),
    /// Same position as at the previous stage.
    Hold,
    /// Full speed toward a point for whatever time the schedule leaves, stopping on arrival.
    Advance(PointExpr),
}

/// One scalar equation of a plan's residual system.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    /// Evacuation costs at two stages agree.
    EqualCost(usize, usize),
    /// The Queen's path from stage a to stage b has the given length.
    TightTravel(usize, usize, f64),
    /// `Σ c·‖P − Q‖ = rhs`.
    DistanceSum { terms: Vec<(f64, PointExpr, PointExpr)>, rhs: f64 },
    Pin(usize, f64),
}

/// A parameterized Queen path for one configuration.
#[derive(Debug, Clone)]
pub struct QueenPlan {
    pub n: usize,
    pub k: usize,
    pub config: Configuration,
    /// One anchor per stage, `anchors[j - 1]` for stage j.
    pub anchors: Vec<Anchor>,
    /// Newton starting point, one entry per parameter.
    pub guess: Vec<f64>,
    pub residuals: Vec<Residual>,
    /// Stages j after which the Queen has slack on the segment to stage j + 1.
    pub waits: Vec<usize>,
    /// Stages at which the worst case is attained.
    pub worst: Vec<usize>,
    /// Published worst-case cost.
    pub expected: f64,
    /// Published decimals for solved parameters.
    pub expected_params: Vec<(usize, f64)>,
    /// Published decimals for Queen positions, `(stage, x, y)`.
    pub expected_points: Vec<(usize, f64, f64)>,
    pub source: &'static str,
}

impl QueenPlan {
    pub fn num_params(&self) -> usize {
        self.guess.len()
    }

    /// Structural checks: shapes, parameter usage, square residual system.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EvacError::InvalidInput(format!("plan ({},{}): {m}", self.n, self.k)));
        self.config.validate()?;
        if self.config.n != self.n || self.config.k != self.k {
            return bad("configuration does not match the plan id".into());
        }
        if self.anchors.len() != self.n {
            return bad(format!("{} anchors for {} stages", self.anchors.len(), self.n));
        }
        if self.residuals.len() != self.num_params() {
            return bad(format!("{} residuals for {} parameters", self.residuals.len(), self.num_params()));
        }
        for (idx, a) in self.anchors.iter().enumerate() {
            let j = idx + 1;
            let queen_stage = self.config.agent_at(j) == 0;
            if queen_stage != matches!(a, Anchor::Visit) {
                return bad(format!("stage {j}: Visit anchors must match the Queen's stages"));
            }
            if let Anchor::At(p) | Anchor::Advance(p) = a {
                if p.max_queen_ref().is_some_and(|r| r >= j) {
                    return bad(format!("stage {j} refers to a Queen position not yet known"));
                }
            }
        }
        let mut used = Vec::new();
        for a in &self.anchors {
            if let Anchor::At(p) | Anchor::Advance(p) = a {
                p.params(&mut used);
            }
        }
        for r in &self.residuals {
            match r {
                Residual::DistanceSum { terms, .. } => {
                    for (_, p, q) in terms {
                        p.params(&mut used);
                        q.params(&mut used);
                    }
                }
                Residual::Pin(i, _) => used.push(*i),
                _ => {}
            }
        }
        if let Some(&i) = used.iter().find(|&&i| i >= self.num_params()) {
            return bad(format!("parameter {i} is not declared"));
        }
        if let Some(i) = (0..self.num_params()).find(|i| !used.contains(i)) {
            return bad(format!("parameter {i} is never used"));
        }
        for r in &self.residuals {
            let stage_ok = |s: usize| (1..=self.n).contains(&s);
            let ok = match r {
                Residual::EqualCost(a, b) => stage_ok(*a) && stage_ok(*b),
                Residual::TightTravel(a, b, _) => stage_ok(*a) && stage_ok(*b) && a < b,
                _ => true,
            };
            if !ok {
                return bad(format!("residual {r:?} names a stage outside 1..={}", self.n));
            }
        }
        Ok(())
    }

    /// Builds the trajectory for the given parameters; times are the earliest the
    /// Servants and the Queen's anchors allow.
    pub fn instantiate(&self, g: &PolygonGeometry, params: &[f64]) -> Trajectory {
        let c = &self.config;
        let n = c.n;
        let mut times = vec![0.0; n + 1];
        times[0] = -1.0;
        let mut queen = vec![Point2::ORIGIN; n + 1];
        for j in 1..=n {
            let prev = queen[j - 1];
            let target = match &self.anchors[j - 1] {
                Anchor::Visit => Some(g.vertex(c.vertex_at(j))),
                Anchor::At(p) => Some(p.eval(g, params, &queen)),
                Anchor::Hold => Some(prev),
                Anchor::Advance(_) => None,
            };
            if j > 1 {
                let mut t = servant_ready(c, g, &times, j);
                if let Some(p) = target {
                    t = t.max(times[j - 1] + distance(p, prev));
                }
                times[j] = t;
            }
            queen[j] = match (&self.anchors[j - 1], target) {
                (Anchor::Advance(p), _) => advance(prev, p.eval(g, params, &queen), times[j] - times[j - 1]),
                (_, Some(p)) => p,
                (_, None) => unreachable!(),
            };
        }
        finish(c, g, times, queen)
    }

    /// Residual vector at `params`.
    pub fn residuals_at(&self, g: &PolygonGeometry, params: &[f64]) -> Vec<f64> {
        let tr = self.instantiate(g, params);
        let cost = stage_costs(&tr, g, 0.0);
        let queen = &tr.positions[0];
        self.residuals
            .iter()
            .map(|r| match r {
                Residual::EqualCost(a, b) => cost.per_stage[a - 1] - cost.per_stage[b - 1],
                Residual::TightTravel(a, b, budget) => {
                    let path: f64 = (a + 1..=*b).map(|j| distance(queen[j], queen[j - 1])).sum();
                    path - budget
                }
                Residual::DistanceSum { terms, rhs } => {
                    let s: f64 = terms
                        .iter()
                        .map(|(c, p, q)| c * distance(p.eval(g, params, queen), q.eval(g, params, queen)))
                        .sum();
                    s - rhs
                }
                Residual::Pin(i, v) => params[*i] - v,
            })
            .collect()
    }
}

/// Solves a plan's residual system and returns the parameters with the verified trajectory.
pub fn solve_plan(plan: &QueenPlan, g: &PolygonGeometry) -> Result<(Vec<f64>, Trajectory)> {
    solve_plan_with(plan, g, &NewtonOptions::default())
}

pub fn solve_plan_with(plan: &QueenPlan, g: &PolygonGeometry, opts: &NewtonOptions) -> Result<(Vec<f64>, Trajectory)> {
    plan.validate()?;
    if g.n() != plan.n {
        return Err(EvacError::InvalidInput(format!("geometry n={} for plan n={}", g.n(), plan.n)));
    }
    let f = |p: &[f64]| Ok(plan.residuals_at(g, p));
    let params = solve_box(f, &plan.guess, opts)?;
    let tr = plan.instantiate(g, &params);
    evaluate_trajectory(&tr, g, 0.0)?;
    Ok((params, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_polygon;

    fn toy() -> QueenPlan {
        // n=4, k=1: the Queen's third-stage point is free, fixed by two equations
        QueenPlan {
            n: 4,
            k: 1,
            config: "n=4 k=1 rho=1,2,4,3 s=1,0,1,0".parse().unwrap(),
            anchors: vec![
                Anchor::At(PointExpr::Vertex(2)),
                Anchor::Visit,
                Anchor::At(PointExpr::Free(0, 1)),
                Anchor::Visit,
            ],
            guess: vec![0.4, 0.4],
            residuals: vec![Residual::EqualCost(3, 4), Residual::TightTravel(2, 3, 2f64.sqrt())],
            waits: vec![],
            worst: vec![3, 4],
            expected: -1.0 + 2f64.sqrt() + 3f64.sqrt(),
            expected_params: vec![],
            expected_points: vec![],
            source: "test",
        }
    }

    #[test]
    fn toy_plan_solves() {
        let g = make_polygon(4).unwrap();
        let (p, tr) = solve_plan(&toy(), &g).unwrap();
        assert!(toy().residuals_at(&g, &p).iter().all(|r| r.abs() <= 1e-10));
        let cost = evaluate_trajectory(&tr, &g, 0.0).unwrap();
        assert!((cost.worst_case - toy().expected).abs() < 1e-9, "{}", cost.worst_case);
    }

    #[test]
    fn validation_catches_shape_errors() {
        let mut p = toy();
        p.residuals.pop();
        assert!(p.validate().is_err());
        let mut p = toy();
        p.anchors[1] = Anchor::Hold;
        assert!(p.validate().is_err());
        let mut p = toy();
        p.anchors[2] = Anchor::At(PointExpr::Queen(3));
        assert!(p.validate().is_err());
        let mut p = toy();
        p.anchors[2] = Anchor::At(PointExpr::Free(0, 0));
        assert!(p.validate().is_err());
    }

    #[test]
    fn advance_stops_at_target() {
        let g = make_polygon(4).unwrap();
        let mut p = toy();
        p.anchors[2] = Anchor::Advance(PointExpr::Vertex(3));
        p.guess.clear();
        p.residuals.clear();
        let tr = p.instantiate(&g, &[]);
        // S1 needs sqrt(2) to reach V4; the Queen covers sqrt(2) of the edge V2 to V3
        assert!((tr.queen(3) - g.vertex(3)).norm() < 1e-12);
        evaluate_trajectory(&tr, &g, 0.0).unwrap();
    }
}
