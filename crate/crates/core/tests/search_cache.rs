use std::fs;

use urd_core::error::SearchError;
use urd_core::par::Exec;
use urd_core::search::cache::Cache;
use urd_core::search::{catalog, solve, Budget, ClassScope, Shape, Solution};
use urd_core::spectrum::Profile;

#[test]
fn shipped_cache_holds_every_catalog_design() {
    let cache = Cache::open(Cache::default_dir());
    for spec in catalog::all() {
        let entry = cache
            .get(&spec)
            .unwrap_or_else(|e| panic!("{}: {e}", spec.name));
        assert!(entry.is_some(), "{} is missing from the cache", spec.name);
    }
}

#[test]
fn key_ignores_seed_and_budget_only() {
    let spec = catalog::urd12(Profile::new(2, 0, 6));
    let mut other = spec.clone();
    other.seed ^= 1;
    other.budget = Budget {
        restarts: 1,
        steps: 1,
    };
    assert_eq!(spec.key(), other.key());
    other.classes[0].shape = Shape::P3;
    assert_ne!(spec.key(), other.key());
}

#[test]
fn corrupt_entries_are_evicted() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path());
    let spec = catalog::urd6_130();
    let solution = solve(&spec, Exec::Sequential).unwrap();
    let path = cache.put(&spec, &solution).unwrap();
    assert!(cache.get_solution(&spec).unwrap().is_some());

    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("[0,", "[1,", 1);
    assert_ne!(text, tampered);
    fs::write(&path, tampered).unwrap();
    assert!(matches!(cache.get(&spec), Err(SearchError::Corrupt { .. })));
    assert!(!path.exists());
    assert!(cache.get(&spec).unwrap().is_none());
}

#[test]
fn both_execution_modes_agree() {
    let spec = catalog::urd12(Profile::new(0, 6, 2));
    let a = solve(&spec, Exec::Sequential).unwrap();
    let b = solve(&spec, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    let exact = catalog::rgdd3_3x5();
    assert_eq!(
        solve(&exact, Exec::Sequential).unwrap(),
        solve(&exact, Exec::Parallel).unwrap()
    );
}

#[test]
fn exhausted_and_inconsistent_specs() {
    let mut spec = catalog::urd12(Profile::new(2, 0, 6));
    spec.budget = Budget {
        restarts: 1,
        steps: 1,
    };
    assert!(matches!(
        solve(&spec, Exec::Sequential),
        Err(SearchError::Exhausted { .. })
    ));

    let mut short = catalog::urd12(Profile::new(2, 0, 6));
    short.classes.pop();
    assert!(matches!(
        solve(&short, Exec::Sequential),
        Err(SearchError::Inconsistent { .. })
    ));

    let mut bad_scope = catalog::frame_2(4);
    bad_scope.classes[0].scope = ClassScope::MissingGroup(9);
    assert!(solve(&bad_scope, Exec::Sequential).is_err());
}

#[test]
fn frames_from_search_have_the_right_shape() {
    let Solution::Design(frame) = solve(&catalog::frame_2(4), Exec::Sequential).unwrap() else {
        panic!("frame search returned an RGDD");
    };
    assert_eq!(frame.classes.len(), 8);
    assert!(urd_core::verify::verify_design(&frame).is_valid());
}
