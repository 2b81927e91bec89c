use evac_core::configspace::Configuration;
use evac_core::geometry::make_polygon;
use evac_core::lp::config_lp_value;
use evac_core::upperbounds::export::{parse_trajectory_csv, trajectory_csv, trajectory_polylines};
use evac_core::upperbounds::optimize::DEFAULT_BUDGET;
use evac_core::upperbounds::*;
use evac_core::EvacError;

fn cost(tr: &Trajectory, w: f64) -> f64 {
    let g = make_polygon(tr.n()).unwrap();
    evaluate_trajectory(tr, &g, w).unwrap().worst_case
}

#[test]
fn optimizer_reaches_published_12gon_bound() {
    let c = known_configuration(12, 1, 0.0).unwrap();
    let g = make_polygon(12).unwrap();
    let tr = local_minimax_optimize(&c, &g, 0.0, None, DEFAULT_BUDGET).unwrap();
    let v = cost(&tr, 0.0);
    assert!(v <= 3.38511 + 1e-3, "{v}");
    assert!(config_lp_value(&c, &g, 0.0, false).unwrap() <= v + 1e-9);
}

#[test]
fn optimizer_never_worsens_its_seed() {
    let g = make_polygon(12).unwrap();
    let (_, seed) = solve_plan(&catalog_plan(12, 1).unwrap(), &g).unwrap();
    let before = cost(&seed, 0.0);
    let tr = local_minimax_optimize(&seed.config, &g, 0.0, Some(&seed), 50).unwrap();
    assert!(cost(&tr, 0.0) <= before);

    // a deliberately poor seed: the Queen waits at the origin whenever she is free
    let c = seed.config.clone();
    let pts: Vec<_> = (1..=12).map(|j| (c.agent_at(j) != 0).then_some(evac_core::geometry::Point2::ORIGIN)).collect();
    let poor = trajectory::trajectory_from_queen_points(&c, &g, &pts);
    let tr = local_minimax_optimize(&c, &g, 0.0, Some(&poor), 50).unwrap();
    assert!(cost(&tr, 0.0) <= cost(&poor, 0.0));
}

#[test]
fn upper_bounds_dominate_lp_values() {
    for (n, k) in [(4, 1), (7, 1), (10, 1), (5, 2), (8, 2), (6, 3), (7, 4)] {
        let g = make_polygon(n).unwrap();
        let c = known_configuration(n, k, 0.0).unwrap();
        let lp = config_lp_value(&c, &g, 0.0, false).unwrap();
        let (ub, _) = ub_for(n, k, 0.0, UbMethod::Optimize).unwrap();
        assert!(lp <= ub + 1e-9, "({n},{k}) lp {lp} ub {ub}");
    }
}

#[test]
fn weighted_12gon_is_feasible_and_above_its_lp() {
    let (ub, tr) = ub_for(12, 1, 0.02, UbMethod::Optimize).unwrap();
    let g = make_polygon(12).unwrap();
    // the minimum over configurations is at most this configuration's LP value
    let lp = config_lp_value(&tr.config, &g, 0.02, false).unwrap();
    assert!(lp <= ub + 1e-9, "lp {lp} ub {ub}");
    assert!((cost(&tr, 0.02) - ub).abs() < 1e-12);
}

#[test]
fn ub_for_errors() {
    assert!(matches!(ub_for(12, 2, 0.5, UbMethod::Optimize), Err(EvacError::UnsupportedWeightedK(2))));
    assert!(matches!(ub_for(20, 1, 0.0, UbMethod::Catalog), Err(EvacError::NoKnownConfiguration { .. })));
    assert!(matches!(ub_for(2, 1, 0.0, UbMethod::Catalog), Err(EvacError::InvalidPolygon(2))));
    assert!(ub_for(6, 1, 0.3, UbMethod::Catalog).is_err());
}

#[test]
fn catalog_method_matches_plan() {
    let (v, tr) = ub_for(6, 1, 0.0, UbMethod::Catalog).unwrap();
    assert!((v - (2.0 + 3f64.sqrt() / 2.0)).abs() < 1e-10);
    assert_eq!(tr.config, catalog_plan(6, 1).unwrap().config);
}

#[test]
fn trajectory_csv_round_trips() {
    let (_, tr) = ub_for(9, 2, 0.0, UbMethod::Catalog).unwrap();
    let text = trajectory_csv(&tr);
    let back = parse_trajectory_csv(&text, &tr.config).unwrap();
    assert_eq!(back, tr);
    assert!(text.starts_with("stage,t,x0,y0,x1,y1,x2,y2\n"));
    let other: Configuration = "n=9 k=1 rho=1,2,3,4,5,6,7,8,9 s=0,1,0,1,0,1,0,1,0".parse().unwrap();
    assert!(parse_trajectory_csv(&text, &other).is_err());
    let wkt = trajectory_polylines(&tr);
    assert_eq!(wkt.lines().count(), 4);
    assert!(wkt.lines().nth(1).unwrap().starts_with("0,\"LINESTRING (0.0 0.0, "));
}

#[test]
fn weighted_configurations_are_fixed_for_11_and_12() {
    let c11 = known_configuration(11, 1, 0.4).unwrap();
    assert_eq!(c11.s, vec![1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1]);
    let c12 = known_configuration(12, 1, 0.4).unwrap();
    assert_eq!(c12.rho, vec![1, 2, 12, 3, 11, 4, 10, 5, 9, 6, 8, 7]);
    // other n fall back to the unweighted minimizer
    assert_eq!(known_configuration(7, 1, 0.4).unwrap(), known_configuration(7, 1, 0.0).unwrap());
}
