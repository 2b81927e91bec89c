use crate::configspace::Configuration;
use crate::error::{EvacError, Result};
use crate::geometry::{distance, Point2, PolygonGeometry};

/// Tolerance for the assignment and unit-speed checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Positions of every agent at every stage time, stage 0 being time −1 at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: Configuration,
    /// `times[j]` for j in 0..=n; `times[0] = -1`, `times[1] = 0`.
    pub times: Vec<f64>,
    /// `positions[agent][stage]`, agent 0 is the Queen.
    pub positions: Vec<Vec<Point2>>,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn queen(&self, stage: usize) -> Point2 {
        self.positions[0][stage]
    }

    /// Slack in the Queen's speed constraint on the segment from `stage` to `stage + 1`.
    pub fn queen_slack(&self, stage: usize) -> f64 {
        self.times[stage + 1] - self.times[stage] - distance(self.queen(stage + 1), self.queen(stage))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    /// `per_stage[j - 1]` is the evacuation cost when the exit is the vertex visited at stage j.
    pub per_stage: Vec<f64>,
    pub worst_case: f64,
    /// 1-based stages whose cost is within 1e-9 of the worst case.
    pub argmax: Vec<usize>,
}

/// Checks the trajectory invariants, returning the first offending stage.
pub fn check_feasibility(tr: &Trajectory, g: &PolygonGeometry) -> Result<()> {
    let c = &tr.config;
    let n = c.n;
    if g.n() != n {
        return Err(EvacError::InvalidInput(format!("geometry has n={} but trajectory has n={n}", g.n())));
    }
    if tr.times.len() != n + 1 || tr.positions.len() != c.k + 1 {
        return Err(EvacError::InvalidInput("trajectory arrays have the wrong shape".into()));
    }
    let bad = |stage: usize, reason: String| EvacError::InfeasibleTrajectory { stage, reason };
    if (tr.times[0] + 1.0).abs() > FEASIBILITY_TOL || tr.times[1].abs() > FEASIBILITY_TOL {
        return Err(bad(1, format!("t0={} t1={} (expected -1 and 0)", tr.times[0], tr.times[1])));
    }
    for (agent, path) in tr.positions.iter().enumerate() {
        if path.len() != n + 1 {
            return Err(EvacError::InvalidInput(format!("agent {agent} has {} positions", path.len())));
        }
    }
    for j in 1..=n {
        let v = g.vertex(c.vertex_at(j));
        let p = tr.positions[c.agent_at(j)][j];
        if distance(p, v) > FEASIBILITY_TOL {
            return Err(bad(j, format!("agent {} is not at V{}", c.agent_at(j), c.vertex_at(j))));
        }
    }
    for (agent, path) in tr.positions.iter().enumerate() {
        if path[0].norm() > FEASIBILITY_TOL {
            return Err(bad(0, format!("agent {agent} does not start at the origin")));
        }
        for j in 1..=n {
            if !path[j].is_finite() || !tr.times[j].is_finite() {
                return Err(bad(j, format!("agent {agent} has a non-finite position or time")));
            }
            let step = distance(path[j], path[j - 1]);
            let dt = tr.times[j] - tr.times[j - 1];
            if step > dt + FEASIBILITY_TOL {
                return Err(bad(j, format!("agent {agent} moves {step:.12} in time {dt:.12}")));
            }
        }
    }
    Ok(())
}

/// Per-stage evacuation costs of a feasible trajectory.
///
/// At `w > 0` (one Servant) the cost is the weighted average of both agents' arrival times.
pub fn evaluate_trajectory(tr: &Trajectory, g: &PolygonGeometry, w: f64) -> Result<CostBreakdown> {
    if !(w.is_finite() && w >= 0.0) {
        return Err(EvacError::InvalidWeight(w));
    }
    if w > 0.0 && tr.k() != 1 {
        return Err(EvacError::UnsupportedWeightedK(tr.k()));
    }
    check_feasibility(tr, g)?;
    Ok(stage_costs(tr, g, w))
}

/// Costs without the feasibility check; used inside solvers on trajectories built feasible.
pub(crate) fn stage_costs(tr: &Trajectory, g: &PolygonGeometry, w: f64) -> CostBreakdown {
    let c = &tr.config;
    let per_stage: Vec<f64> = (1..=c.n)
        .map(|j| {
            let v = g.vertex(c.vertex_at(j));
            let q = distance(tr.positions[0][j], v);
            if w > 0.0 {
                let s = distance(tr.positions[1][j], v);
                tr.times[j] + (q + w * s) / (1.0 + w)
            } else {
                tr.times[j] + q
            }
        })
        .collect();
    let worst_case = per_stage.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax = per_stage
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= worst_case - 1e-9)
        .map(|(j, _)| j + 1)
        .collect();
    CostBreakdown { per_stage, worst_case, argmax }
}

/// Earliest time stage `j` can happen given the Servant schedule: the Servant assigned to
/// stage j needs the chord from its previous assignment. Queen stages impose nothing here.
pub(crate) fn servant_ready(c: &Configuration, g: &PolygonGeometry, times: &[f64], j: usize) -> f64 {
    let mut t = times[j - 1];
    let agent = c.agent_at(j);
    if agent > 0 {
        if let Some(p) = (1..j).rev().find(|&p| c.agent_at(p) == agent) {
            t = t.max(times[p] + g.chord(c.vertex_at(p), c.vertex_at(j)));
        }
    }
    t
}

/// Servant positions under the default schedule: wait at the first assigned vertex, travel
/// straight at full speed between assignments, hold after the last. Idle Servants stay home.
pub(crate) fn servant_path(c: &Configuration, g: &PolygonGeometry, times: &[f64], agent: usize) -> Vec<Point2> {
    let stages: Vec<usize> = c.stages_of(agent).collect();
    let mut path = vec![Point2::ORIGIN; c.n + 1];
    let Some(&first) = stages.first() else {
        return path;
    };
    let first_v = g.vertex(c.vertex_at(first));
    for j in 1..=c.n {
        let prev = stages.iter().rev().find(|&&p| p <= j);
        let next = stages.iter().find(|&&q| q > j);
        path[j] = match (prev, next) {
            (None, _) => first_v,
            (Some(&p), None) => g.vertex(c.vertex_at(p)),
            (Some(&p), Some(&q)) => {
                let a = g.vertex(c.vertex_at(p));
                let b = g.vertex(c.vertex_at(q));
                let len = distance(a, b);
                let gone = (times[j] - times[p]).clamp(0.0, len);
                if len > 0.0 {
                    a.lerp(b, gone / len)
                } else {
                    a
                }
            }
        };
    }
    path
}

/// Moves from `from` toward `to` by at most `budget`.
pub(crate) fn advance(from: Point2, to: Point2, budget: f64) -> Point2 {
    let d = distance(from, to);
    if d <= budget.max(0.0) || d == 0.0 {
        to
    } else {
        from.lerp(to, budget.max(0.0) / d)
    }
}

/// Builds the trajectory for a Queen path given as one optional point per stage (`None` at
/// Queen stages, where she stands on her vertex). Times are the earliest the schedule allows.
pub fn trajectory_from_queen_points(
    c: &Configuration,
    g: &PolygonGeometry,
    queen: &[Option<Point2>],
) -> Trajectory {
    let n = c.n;
    let mut times = vec![0.0; n + 1];
    times[0] = -1.0;
    let mut qpos = vec![Point2::ORIGIN; n + 1];
    for j in 1..=n {
        let target = match queen[j - 1] {
            Some(p) if c.agent_at(j) != 0 => p,
            _ => g.vertex(c.vertex_at(j)),
        };
        let target = if j == 1 { clamp_unit(target) } else { target };
        if j > 1 {
            let ready = servant_ready(c, g, &times, j);
            times[j] = ready.max(times[j - 1] + distance(target, qpos[j - 1]));
        }
        qpos[j] = target;
    }
    finish(c, g, times, qpos)
}

fn clamp_unit(p: Point2) -> Point2 {
    let r = p.norm();
    if r > 1.0 {
        p * (1.0 / r)
    } else {
        p
    }
}

pub(crate) fn finish(c: &Configuration, g: &PolygonGeometry, times: Vec<f64>, qpos: Vec<Point2>) -> Trajectory {
    let mut positions = Vec::with_capacity(c.k + 1);
    positions.push(qpos);
    for agent in 1..=c.k {
        positions.push(servant_path(c, g, &times, agent));
    }
    Trajectory { config: c.clone(), times, positions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_polygon;

    fn cfg(text: &str) -> Configuration {
        text.parse().unwrap()
    }

    #[test]
    fn queen_alone_triangle_costs_sum_of_edges() {
        let g = make_polygon(3).unwrap();
        let c = cfg("n=3 k=1 rho=1,2,3 s=0,0,0");
        let tr = trajectory_from_queen_points(&c, &g, &[None, None, None]);
        let cost = evaluate_trajectory(&tr, &g, 0.0).unwrap();
        let e = g.edge_length();
        assert!((cost.worst_case - 2.0 * e).abs() < 1e-12);
        assert_eq!(cost.argmax, vec![3]);
        // the Servant never moves
        assert!(tr.positions[1].iter().all(|p| p.norm() == 0.0));
    }

    #[test]
    fn speed_violation_is_reported_with_stage() {
        let g = make_polygon(4).unwrap();
        let c = cfg("n=4 k=1 rho=1,2,4,3 s=1,0,1,0");
        let mut tr = trajectory_from_queen_points(&c, &g, &[Some(g.vertex(2)), None, Some(Point2::ORIGIN), None]);
        assert!(evaluate_trajectory(&tr, &g, 0.0).is_ok());
        tr.times[3] -= 0.5;
        match evaluate_trajectory(&tr, &g, 0.0) {
            Err(EvacError::InfeasibleTrajectory { stage, .. }) => assert_eq!(stage, 3),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn assignment_violation_is_reported() {
        let g = make_polygon(3).unwrap();
        let c = cfg("n=3 k=1 rho=1,2,3 s=1,0,0");
        let mut tr = trajectory_from_queen_points(&c, &g, &[Some(g.vertex(2)), None, None]);
        tr.positions[1][1] = Point2::new(0.5, 0.0);
        assert!(matches!(evaluate_trajectory(&tr, &g, 0.0), Err(EvacError::InfeasibleTrajectory { stage: 1, .. })));
    }

    #[test]
    fn weighted_cost_averages_arrivals() {
        let g = make_polygon(3).unwrap();
        let c = cfg("n=3 k=1 rho=1,2,3 s=1,0,0");
        let tr = trajectory_from_queen_points(&c, &g, &[Some(g.vertex(2)), None, None]);
        let w0 = evaluate_trajectory(&tr, &g, 0.0).unwrap();
        let w1 = evaluate_trajectory(&tr, &g, 1.0).unwrap();
        // stage 1: Queen sqrt(3) away, Servant on the exit
        assert!((w1.per_stage[0] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((w0.per_stage[0] - 3f64.sqrt()).abs() < 1e-12);
        assert!(evaluate_trajectory(&tr, &g, -0.1).is_err());
    }

    #[test]
    fn servant_moves_at_full_speed_between_assignments() {
        let g = make_polygon(6).unwrap();
        let c = cfg("n=6 k=1 rho=1,2,4,3,5,6 s=1,0,0,0,0,1");
        let tr = trajectory_from_queen_points(&c, &g, &[Some(g.vertex(2)), None, None, None, None, None]);
        check_feasibility(&tr, &g).unwrap();
        let s = &tr.positions[1];
        let mid = distance(s[3], g.vertex(1));
        assert!((mid - tr.times[3].min(g.chord(1, 6))).abs() < 1e-12);
    }
}
