use evac_core::configspace::FilterOptions;
use evac_core::search::{resume, resume_expecting, search, w_grid, w_sweep, SearchOptions};
use evac_core::EvacError;

fn opts(threads: usize) -> SearchOptions {
    SearchOptions { threads, ..SearchOptions::default() }
}

#[test]
fn filters_and_pruning_do_not_change_the_minimum() {
    for (n, k) in [(4, 1), (5, 1), (3, 2), (4, 2)] {
        let fast = search(n, k, 0.0, &opts(1)).unwrap().unwrap();
        let plain = SearchOptions { filters: FilterOptions::none(), prune: false, ..opts(1) };
        let slow = search(n, k, 0.0, &plain).unwrap().unwrap();
        assert!((fast.raw_min - slow.raw_min).abs() <= 1e-9, "({n},{k})");
        assert!(slow.solved_count > fast.solved_count);
    }
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let base = search(5, 1, 0.0, &opts(1)).unwrap().unwrap();
    for t in [2, 8] {
        let r = search(5, 1, 0.0, &opts(t)).unwrap().unwrap();
        assert_eq!(r.raw_min.to_bits(), base.raw_min.to_bits());
        assert_eq!(r.argmin_config, base.argmin_config);
    }
}

#[test]
fn clamped_value_reports_raw_minimum() {
    let r = search(5, 4, 0.0, &opts(1)).unwrap().unwrap();
    assert!((r.raw_min - 0.9510565162951532).abs() < 1e-9);
    assert_eq!(r.lower_value, 1.0);
}

#[test]
fn interrupted_run_resumes_to_the_same_answer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.jsonl");
    let fresh = search(5, 1, 0.0, &opts(1)).unwrap().unwrap();
    let partial = SearchOptions { checkpoint: Some(path.clone()), chunk_size: 16, chunk_limit: Some(2), ..opts(1) };
    assert!(search(5, 1, 0.0, &partial).unwrap().is_none());
    let resumed = resume(&path, 2).unwrap();
    assert_eq!(resumed.raw_min.to_bits(), fresh.raw_min.to_bits());
    assert_eq!(resumed.argmin_config, fresh.argmin_config);
    // a completed checkpoint returns its result again
    let again = resume(&path, 1).unwrap();
    assert_eq!(again.raw_min.to_bits(), fresh.raw_min.to_bits());
    assert!(matches!(resume_expecting(&path, 5, 2, 0.0, 1), Err(EvacError::CheckpointMismatch(_))));
}

#[test]
fn budget_guard_refuses_large_runs() {
    let small = SearchOptions { budget: 10, ..opts(1) };
    assert!(matches!(search(5, 1, 0.0, &small), Err(EvacError::BudgetExceeded { .. })));
}

#[test]
fn weighted_sweep_has_one_record_per_grid_point() {
    assert_eq!(w_grid(0.0, 1.0, 0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    assert!(w_grid(0.5, 0.2, 0.1).is_err());
    let recs = w_sweep(4, 0.0, 1.0, 0.5, &opts(1)).unwrap();
    assert_eq!(recs.len(), 3);
    // more weight on the Servant's arrival can only help
    assert!(recs.windows(2).all(|p| p[1].raw_min <= p[0].raw_min + 1e-9));
    assert!(matches!(search(4, 2, 0.5, &opts(1)), Err(EvacError::UnsupportedWeightedK(2))));
}
