use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evac_core::configspace::{canonicalize_servants, mirror, traversal_lower_bound, ConfigSpace, Configuration, FilterOptions};
use evac_core::geometry::make_polygon;
use evac_core::lp::dump::to_lp_text;
use evac_core::lp::{build_lp, config_lp_value, solve_certified, RowKind};
use evac_core::report::reference::ARGMIN_ROWS;
use evac_core::upperbounds::{catalog, evaluate_trajectory, solve_plan};

fn random_config(rng: &mut ChaCha8Rng, ns: std::ops::RangeInclusive<usize>, ks: std::ops::RangeInclusive<usize>) -> Configuration {
    let n = rng.gen_range(ns);
    let k = rng.gen_range(ks);
    let space = ConfigSpace::new(n, k, FilterOptions::none());
    space.get(rng.gen_range(0..space.len()))
}

fn lp(c: &Configuration) -> f64 {
    config_lp_value(c, &make_polygon(c.n).unwrap(), 0.0, false).unwrap()
}

/// Rotation by r positions and an arbitrary permutation of the Servant labels.
fn relabel(c: &Configuration, r: usize, perm: &[usize]) -> Configuration {
    let rho = c.rho.iter().map(|&v| (v - 1 + r) % c.n + 1).collect();
    let s = c.s.iter().map(|&a| if a == 0 { 0 } else { perm[a - 1] }).collect();
    Configuration::new(c.n, c.k, rho, s).unwrap()
}

#[test]
fn lp_solutions_are_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut configs: Vec<Configuration> = ARGMIN_ROWS
        .iter()
        .filter(|r| r.n <= 9)
        .map(|r| Configuration::new(r.n, r.k, r.rho.to_vec(), r.s.to_vec()).unwrap())
        .collect();
    configs.extend((0..20).map(|_| random_config(&mut rng, 3..=7, 1..=3)));
    for c in configs {
        let g = make_polygon(c.n).unwrap();
        let model = build_lp(&c, &g, 0.0).unwrap();
        let sol = solve_certified(&model);
        assert!(sol.is_optimal(), "{c}");
        let d = &sol.distances;
        let m = d.len();
        for a in 0..m {
            assert_eq!(d[a][a], 0.0);
            for b in 0..m {
                assert!(d[a][b] >= -1e-9, "{c}: negative distance");
                assert!((d[a][b] - d[b][a]).abs() <= 1e-9);
                for v in 0..m {
                    assert!(d[a][b] <= d[a][v] + d[v][b] + 1e-9, "{c}: triangle {a} {v} {b}");
                }
            }
        }
        assert!(sol.max_violation <= 1e-9);
    }
}

#[test]
fn lp_value_is_invariant_under_mirror_and_relabel() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let c = random_config(&mut rng, 3..=7, 1..=3);
        let v = lp(&c);
        assert!((lp(&mirror(&c)) - v).abs() <= 1e-9, "mirror {c}");
        assert!((lp(&canonicalize_servants(&c)) - v).abs() <= 1e-9, "canonical {c}");
        let mut perm: Vec<usize> = (1..=c.k).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let r = rng.gen_range(0..c.n);
        assert!((lp(&relabel(&c, r, &perm)) - v).abs() <= 1e-9, "relabel {c}");
    }
}

#[test]
fn traversal_bound_never_exceeds_lp() {
    for (n, k) in [(3, 1), (4, 1), (3, 2)] {
        for c in ConfigSpace::new(n, k, FilterOptions::none()).iter() {
            let g = make_polygon(n).unwrap();
            assert!(traversal_lower_bound(&c, &g) <= lp(&c) + 1e-9, "{c}");
        }
    }
}

#[test]
fn lp_is_below_every_catalog_trajectory() {
    for plan in catalog() {
        let g = make_polygon(plan.n).unwrap();
        let (_, tr) = solve_plan(&plan, &g).unwrap();
        let cost = evaluate_trajectory(&tr, &g, 0.0).unwrap().worst_case;
        assert!(lp(&plan.config) <= cost + 1e-7, "({},{})", plan.n, plan.k);
    }
}

#[test]
fn weighted_model_at_zero_is_the_unweighted_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = make_polygon(6).unwrap();
    for _ in 0..20 {
        let c = random_config(&mut rng, 6..=6, 1..=1);
        let model = build_lp(&c, &g, 0.0).unwrap();
        for row in model.objective_rows() {
            assert!(matches!(row.kind, RowKind::Objective { .. }));
            // y, t_j and at most the Queen's distance, all with unit weight
            assert!(row.coefs.len() <= 3 && row.coefs.iter().all(|&(_, a)| a.abs() == 1.0));
        }
        let v0 = lp(&c);
        let tiny = config_lp_value(&c, &g, 1e-300, false).unwrap();
        assert!((v0 - tiny).abs() <= 1e-12, "{c}: {v0} vs {tiny}");
    }
}

#[test]
fn lp_dump_has_one_line_per_row() {
    let c: Configuration = "n=4 k=1 rho=1,2,4,3 s=1,0,1,0".parse().unwrap();
    let model = build_lp(&c, &make_polygon(4).unwrap(), 0.0).unwrap();
    let text = to_lp_text(&model);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("\\ n=4 k=1"));
    assert_eq!(lines[1], "Minimize");
    assert_eq!(lines[3], "Subject To");
    assert_eq!(lines.iter().filter(|l| l.starts_with(" r")).count(), model.rows().count());
    assert_eq!(lines.iter().filter(|l| l.starts_with(" p")).count(), model.pins().len());
    assert_eq!(*lines.last().unwrap(), "End");
}

#[test]
fn k4_pentagon_raw_value_is_below_one() {
    let c: Configuration = "n=5 k=4 rho=1,2,5,4,3 s=1,2,3,4,0".parse().unwrap();
    assert!((lp(&c) - 0.9510565162951532).abs() < 1e-9);
}
