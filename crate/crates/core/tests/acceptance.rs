//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero only on
//! failures that are not listed as known deviations.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evac_core::configspace::{mirror, traversal_lower_bound, ConfigSpace, Configuration, FilterOptions};
use evac_core::geometry::make_polygon;
use evac_core::lp::{build_lp, config_lp_value, solve_certified};
use evac_core::reductions::{disk_lower_bound, wdisk_lower_bound};
use evac_core::report::reference::ARGMIN_ROWS;
use evac_core::report::verify::{disk_checks, enumeration_checks, lp_row_checks, upper_checks, FULL_ENUMERATIONS};
use evac_core::report::Check;
use evac_core::search::{search, w_grid, SearchOptions};
use evac_core::upperbounds::{catalog, catalog_plan, evaluate_trajectory, solve_plan, ub_for, UbMethod};

struct Outcome {
    pass: bool,
    /// Failed, but every failure is a listed known deviation.
    known: bool,
    detail: String,
}

fn from_checks(checks: &[Check], extra: &[String]) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let unexpected = failed.iter().filter(|c| c.known_deviation().is_none()).count();
    let mut detail = if checks.is_empty() && extra.is_empty() {
        String::from("all properties hold")
    } else if checks.is_empty() {
        String::new()
    } else {
        format!("{}/{} checks pass", checks.len() - failed.len(), checks.len())
    };
    for c in &failed {
        let why = c.known_deviation().unwrap_or("unexpected");
        detail.push_str(&format!("; {} off by {:.3e} ({why})", c.id(), c.delta().unwrap_or(f64::NAN)));
    }
    for e in extra {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(e);
    }
    Outcome { pass: failed.is_empty() && extra.is_empty(), known: unexpected == 0 && extra.is_empty(), detail }
}

fn lp(c: &Configuration) -> f64 {
    config_lp_value(c, &make_polygon(c.n).unwrap(), 0.0, false).unwrap()
}

fn criterion_1() -> Outcome {
    from_checks(&lp_row_checks(ARGMIN_ROWS), &[])
}

fn criterion_2() -> Outcome {
    let checks = enumeration_checks(FULL_ENUMERATIONS, evac_core::search::default_threads());
    let mut extra = Vec::new();
    match search(5, 4, 0.0, &SearchOptions::default()) {
        Ok(Some(r)) if (r.raw_min - 0.95106).abs() <= 1e-4 && r.lower_value == 1.0 => {}
        other => extra.push(format!("(5,4) raw/clamp wrong: {other:?}")),
    }
    from_checks(&checks, &extra)
}

fn criterion_3() -> Outcome {
    let checks = upper_checks();
    let mut extra = Vec::new();
    let exact = [
        (6, 1, 2.0 + 3f64.sqrt() / 2.0),
        (4, 1, -1.0 + 2f64.sqrt() + 3f64.sqrt()),
        (8, 4, 1.0 + (2.0 - 2f64.sqrt()).sqrt()),
    ];
    for (n, k, v) in exact {
        let plan = catalog_plan(n, k).unwrap();
        let g = make_polygon(n).unwrap();
        let (_, tr) = solve_plan(&plan, &g).unwrap();
        let cost = evaluate_trajectory(&tr, &g, 0.0).unwrap().worst_case;
        if (cost - v).abs() > 1e-10 {
            extra.push(format!("({n},{k}) closed form off by {:.3e}", cost - v));
        }
    }
    let plan = catalog_plan(9, 1).unwrap();
    let (params, _) = solve_plan(&plan, &make_polygon(9).unwrap()).unwrap();
    for &(i, v) in &plan.expected_params {
        if (params[i] - v).abs() > 1e-4 {
            extra.push(format!("(9,1) parameter {i} = {} vs {v}", params[i]));
        }
    }
    if plan.expected_params.is_empty() {
        extra.push("(9,1) has no tabulated parameters".into());
    }
    from_checks(&checks, &extra)
}

fn criterion_4() -> Outcome {
    let values: Vec<(usize, usize, f64)> = ARGMIN_ROWS
        .iter()
        .filter_map(|r| Configuration::new(r.n, r.k, r.rho.to_vec(), r.s.to_vec()).ok().map(|c| (r.n, r.k, lp(&c))))
        .collect();
    let lookup = |n: usize, k: usize| values.iter().find(|e| e.0 == n && e.1 == k).map(|e| e.2);
    let (checks, missing) = disk_checks(&lookup);
    let mut o = from_checks(&checks, &[]);
    for (n, k) in missing {
        o.detail.push_str(&format!("; ({n},{k}) has no polygon value to lift"));
    }
    o
}

fn criterion_5() -> Outcome {
    let mut extra = Vec::new();
    let mut notes = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let space = ConfigSpace::new(6, 1, FilterOptions::none());
    let g6 = make_polygon(6).unwrap();
    for _ in 0..20 {
        let c = space.get(rng.gen_range(0..space.len()));
        let plain = solve_certified(&build_lp(&c, &g6, 0.0).unwrap()).value;
        let weighted = config_lp_value(&c, &g6, 0.0, false).unwrap();
        let tiny = config_lp_value(&c, &g6, 1e-300, false).unwrap();
        if plain.to_bits() != weighted.to_bits() || (tiny - plain).abs() > 1e-12 {
            extra.push(format!("w=0 identity fails at {c}"));
        }
    }

    for n in 3..=13 {
        let a = disk_lower_bound(n, 1, 2.0).unwrap().disk_lower;
        let b = wdisk_lower_bound(n, 0.0, 2.0).unwrap().disk_lower;
        if (a - b).abs() > 1e-15 {
            extra.push(format!("disk formulas differ at n={n}"));
        }
    }

    let mut crossing = None;
    for w in w_grid(0.0, 1.0, 0.125).unwrap() {
        let lower = match search(7, 1, w, &SearchOptions::default()) {
            Ok(Some(r)) => r.lower_value,
            other => {
                extra.push(format!("n=7 w={w} search failed: {other:?}"));
                continue;
            }
        };
        match ub_for(7, 1, w, UbMethod::Optimize) {
            Ok((upper, _)) if lower <= upper + 1e-7 => {}
            Ok((upper, _)) => extra.push(format!("n=7 w={w}: lower {lower:.6} > upper {upper:.6}")),
            Err(e) => extra.push(format!("n=7 w={w}: {e}")),
        }
        let disk = wdisk_lower_bound(7, w, lower).unwrap().disk_lower;
        if crossing.is_none() && disk < 1.0 + PI {
            crossing = Some(w);
        }
    }
    // informational: where the n=7 disk bound drops below the 1+pi line
    notes.push(match crossing {
        Some(w) => format!("n=7 disk bound below 1+pi from w={w}"),
        None => "n=7 disk bound above 1+pi on the whole grid".into(),
    });

    let pass = extra.is_empty();
    extra.extend(notes);
    Outcome { pass, known: pass, detail: extra.join("; ") }
}

fn criterion_6() -> Outcome {
    let mut extra = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    let mut random = Vec::new();
    for _ in 0..50 {
        let n = rng.gen_range(3..=7);
        let k = rng.gen_range(1..=3);
        let space = ConfigSpace::new(n, k, FilterOptions::none());
        random.push(space.get(rng.gen_range(0..space.len())));
    }
    for c in &random {
        let g = make_polygon(c.n).unwrap();
        let sol = solve_certified(&build_lp(c, &g, 0.0).unwrap());
        let d = &sol.distances;
        let m = d.len();
        let metric = (0..m).all(|a| {
            (0..m).all(|b| {
                d[a][b] >= -1e-9
                    && (d[a][b] - d[b][a]).abs() <= 1e-9
                    && (0..m).all(|v| d[a][b] <= d[a][v] + d[v][b] + 1e-9)
            })
        });
        if !metric {
            extra.push(format!("metric axioms fail at {c}"));
        }
        if (lp(&mirror(c)) - sol.value).abs() > 1e-9 {
            extra.push(format!("mirror changes the value at {c}"));
        }
    }

    for plan in catalog() {
        let g = make_polygon(plan.n).unwrap();
        let (_, tr) = solve_plan(&plan, &g).unwrap();
        let cost = evaluate_trajectory(&tr, &g, 0.0).unwrap().worst_case;
        if lp(&plan.config) > cost + 1e-7 {
            extra.push(format!("LP above trajectory at ({},{})", plan.n, plan.k));
        }
    }

    for (n, k) in [(4, 1), (5, 1), (3, 2), (4, 2)] {
        let fast = search(n, k, 0.0, &SearchOptions { threads: 1, ..SearchOptions::default() });
        let plain = SearchOptions { threads: 1, filters: FilterOptions::none(), prune: false, ..SearchOptions::default() };
        match (fast, search(n, k, 0.0, &plain)) {
            (Ok(Some(a)), Ok(Some(b))) if (a.raw_min - b.raw_min).abs() <= 1e-9 => {}
            _ => extra.push(format!("filters change the minimum at ({n},{k})")),
        }
    }

    let runs: Vec<_> = [1, 2, 8]
        .iter()
        .map(|&t| search(5, 1, 0.0, &SearchOptions { threads: t, ..SearchOptions::default() }).unwrap().unwrap())
        .collect();
    if runs.iter().any(|r| r.raw_min.to_bits() != runs[0].raw_min.to_bits() || r.argmin_config != runs[0].argmin_config) {
        extra.push("thread count changes the result at (5,1)".into());
    }

    for (n, k) in [(3, 1), (4, 1), (3, 2)] {
        let g = make_polygon(n).unwrap();
        for c in ConfigSpace::new(n, k, FilterOptions::none()).iter() {
            if traversal_lower_bound(&c, &g) > lp(&c) + 1e-9 {
                extra.push(format!("traversal bound above LP at {c}"));
            }
        }
    }
    from_checks(&[], &extra)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1 single-configuration LP rows", criterion_1),
        ("2 full-enumeration lower bounds", criterion_2),
        ("3 catalog upper bounds", criterion_3),
        ("4 disk reductions", criterion_4),
        ("5 weighted consistency", criterion_5),
        ("6 property suites", criterion_6),
    ];
    let mut unexpected = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else if o.known { "FAIL (known)" } else { "FAIL" };
        if !o.known {
            unexpected += 1;
        }
        println!("{tag} criterion {name} [{:.1}s]: {}", start.elapsed().as_secs_f64(), o.detail);
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
