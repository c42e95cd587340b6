//! Solver behavior on the fixtures and on random games.

mod common;

use num_traits::{One, Zero};
use sgpareto::game::{GameDocument, StateActionPair, StateId};
use sgpareto::geometry::{convex_union, evaluate, is_subset, Direction, DwcSet};
use sgpareto::oracle::{diagnostic_delta, fixtures, random_game, solve_single_dim_exact};
use sgpareto::rational::{ratio, Q};
use sgpareto::report::FrontierReport;
use sgpareto::solver::{
    bellman, bellman_sa, bellman_state, best_exit, deflatable_mecs, deflate_secs, mo_bvi, single_dim_solve,
    BoundPair, IterationStats, Solver, SolverConfig, SolverError,
};

fn epsilon() -> Q {
    ratio(1, 1000)
}

fn id(fixture: &fixtures::Fixture, name: &str) -> StateId {
    fixture.game.lookup(name).expect("fixture state")
}

fn scalar(value: Q) -> DwcSet {
    DwcSet::point(&[value])
}

fn same(lhs: &DwcSet, rhs: &DwcSet) -> bool {
    is_subset(lhs, rhs).unwrap() && is_subset(rhs, lhs).unwrap()
}

fn alpha() -> DwcSet {
    DwcSet::point(&[ratio(1, 2), ratio(9, 10)])
}

fn beta() -> DwcSet {
    DwcSet::point(&[ratio(9, 10), ratio(1, 2)])
}

fn gamma() -> DwcSet {
    DwcSet::from_piece(convex_union(&[&alpha(), &beta()]).unwrap())
}

fn converged(fixture: &fixtures::Fixture) -> BoundPair {
    let outcome = mo_bvi(&fixture.game, &fixture.objective, SolverConfig::new(epsilon()), &mut |_| {}).unwrap();
    assert!(outcome.converged(), "{} did not converge", fixture.name);
    outcome.bounds
}

#[test]
fn running_example_brackets_its_value() {
    let fixture = fixtures::running_example();
    let bounds = converged(&fixture);
    let p = id(&fixture, "p").0;
    let value = fixtures::running_example_value().value;
    assert!(is_subset(&value, &bounds.upper[p]).unwrap());
    assert!(is_subset(&bounds.lower[p], &value).unwrap());
}

#[test]
fn all_max_example_brackets_its_value() {
    let fixture = fixtures::all_max_example();
    let bounds = converged(&fixture);
    let p = id(&fixture, "p").0;
    let value = fixtures::all_max_value().value;
    assert!(is_subset(&value, &bounds.upper[p]).unwrap());
    assert!(is_subset(&bounds.lower[p], &value).unwrap());
}

#[test]
fn all_max_upper_bounds_drop_to_the_best_exit() {
    let fixture = fixtures::all_max_example();
    let mut solver = Solver::new(&fixture.game, &fixture.objective, SolverConfig::new(epsilon())).unwrap();
    solver.step().unwrap();
    for name in ["p", "q", "r"] {
        assert!(same(&solver.bounds().upper[id(&fixture, name).0], &gamma()), "state {name}");
    }
}

#[test]
fn three_targets_converges() {
    let fixture = fixtures::three_targets();
    let bounds = converged(&fixture);
    let s = id(&fixture, "s").0;
    assert!(is_subset(&bounds.lower[s], &bounds.upper[s]).unwrap());
}

#[test]
fn single_dim_cases_match_enumeration() {
    for (fixture, expected) in [fixtures::single_dim_case_one(), fixtures::single_dim_case_two()] {
        let bounds = converged(&fixture);
        let target = &fixture.objective.targets()[0];
        let scalar_run = single_dim_solve(&fixture.game, target, &ratio(1, 1_000_000), 10_000).unwrap();
        assert!(scalar_run.converged);
        for (name, value) in ["p", "q", "r"].iter().zip(&expected.value) {
            let s = id(&fixture, name).0;
            assert!(is_subset(&bounds.lower[s], &scalar(value.clone())).unwrap(), "{name}");
            assert!(is_subset(&scalar(value.clone()), &bounds.upper[s]).unwrap(), "{name}");
            let (lo, hi) = &scalar_run.intervals[s];
            assert!(lo <= value && value <= hi, "{name}");
        }
    }
}

#[test]
fn single_dim_case_one_needs_no_deflation() {
    let (fixture, expected) = fixtures::single_dim_case_one();
    let config = SolverConfig {
        deflate: false,
        ..SolverConfig::new(epsilon())
    };
    let outcome = mo_bvi(&fixture.game, &fixture.objective, config, &mut |_| {}).unwrap();
    assert!(outcome.converged());
    let p = id(&fixture, "p").0;
    assert!(is_subset(&scalar(expected.value[0].clone()), &outcome.bounds.upper[p]).unwrap());
}

#[test]
fn single_dim_case_two_plain_iteration_stays_at_the_direct_exit() {
    let (fixture, _) = fixtures::single_dim_case_two();
    let config = SolverConfig {
        deflate: false,
        max_iterations: Some(200),
        ..SolverConfig::new(epsilon())
    };
    let outcome = mo_bvi(&fixture.game, &fixture.objective, config, &mut |_| {}).unwrap();
    assert!(!outcome.converged());
    for name in ["p", "r"] {
        assert!(same(&outcome.bounds.upper[id(&fixture, name).0], &scalar(ratio(9, 10))), "{name}");
    }
}

#[test]
fn tie_stall_example_stalls() {
    let fixture = fixtures::tie_stall_example();
    let config = SolverConfig::new(epsilon());
    match mo_bvi(&fixture.game, &fixture.objective, config, &mut |_| {}) {
        Err(SolverError::Stalled { gap, .. }) => assert_eq!(gap, "3/2"),
        other => panic!("expected a stall, got {:?}", other.map(|o| o.iterations())),
    }
}

#[test]
fn target_initial_state_is_one_after_one_sweep() {
    let text = r#"{
        "states": [{"id": "s", "owner": "max"}, {"id": "t", "owner": "min"}],
        "initial": "s",
        "actions": [
            {"state": "s", "action": "go", "dist": [{"to": "t", "p": "1"}]},
            {"state": "t", "action": "stay", "dist": [{"to": "t", "p": "1"}]}
        ],
        "targets": [["s"]]
    }"#;
    let doc: GameDocument = serde_json::from_str(text).unwrap();
    let (game, objective) = doc.into_game().unwrap();
    let start = BoundPair::initial(&game, &objective);
    let lower = bellman(&objective, &game, &start.lower);
    assert_eq!(lower[0], scalar(Q::one()));
    let target = &objective.targets()[0];
    let outcome = single_dim_solve(&game, target, &epsilon(), 10).unwrap();
    assert_eq!(outcome.intervals[0], (Q::one(), Q::one()));
}

#[test]
fn bellman_spot_values() {
    let fixture = fixtures::running_example();
    let values = fixture_values(&fixture);
    // An absorbing target state keeps its indicator even when its own value is lowered.
    let t1 = id(&fixture, "t1");
    let mut lowered = values.clone();
    lowered[t1.0] = DwcSet::zero(2);
    let stay = StateActionPair { state: t1, action: 0 };
    assert!(is_subset(
        &DwcSet::point(&[Q::one(), Q::zero()]),
        &bellman_sa(&fixture.objective, &fixture.game, &lowered, stay)
    )
    .unwrap());
    // The Maximizer at gamma mixes both gadgets.
    let at_gamma = bellman_state(&fixture.objective, &fixture.game, &values, id(&fixture, "gamma"));
    assert!(same(&at_gamma, &gamma()));
}

/// Sinks at their indicators, every other state at zero.
fn fixture_values(fixture: &fixtures::Fixture) -> Vec<DwcSet> {
    let mut values: Vec<DwcSet> = fixture
        .game
        .state_ids()
        .map(|s| DwcSet::point(&fixture.objective.indicator(s)))
        .collect();
    for name in ["p", "q", "r", "gamma"] {
        values[id(fixture, name).0] = DwcSet::zero(2);
    }
    values
}

#[test]
fn best_exits_of_the_running_example() {
    let fixture = fixtures::running_example();
    let bounds = converged(&fixture);
    let value = |pair| bellman_sa(&fixture.objective, &fixture.game, &bounds.lower, pair);
    let set = |names: &[&str]| names.iter().map(|n| id(&fixture, n)).collect();
    assert!(same(&best_exit(&fixture.game, &fixture.objective, &value, &set(&["p", "q"])), &alpha()));
    assert!(same(&best_exit(&fixture.game, &fixture.objective, &value, &set(&["p", "r"])), &beta()));
    let all = best_exit(&fixture.game, &fixture.objective, &value, &set(&["p", "q", "r"]));
    assert!(same(&all, &gamma()));
    let diagonal = Direction::from_ints(&[1, 1]).unwrap();
    assert_eq!(evaluate(&all, &diagonal).lambda, ratio(7, 5));
}

#[test]
fn deflating_a_bloated_upper_bound() {
    let fixture = fixtures::running_example();
    let lower = converged(&fixture).lower;
    let mut upper: Vec<DwcSet> = fixture
        .game
        .state_ids()
        .map(|s| DwcSet::point(&fixture.objective.indicator(s)))
        .collect();
    for name in ["p", "q", "r", "gamma"] {
        upper[id(&fixture, name).0] = gamma();
    }
    let mecs = deflatable_mecs(&fixture.game);
    let (deflated, _) = deflate_secs(&fixture.game, &fixture.objective, &mecs, &lower, &upper).unwrap();
    let p = id(&fixture, "p").0;
    // The diagonal is a face between the two gadget regions; their closed pieces
    // meet there at the value itself, below the exit of the full component.
    let value = fixtures::running_example_value().value;
    for (raw, expected) in [([3, 1], alpha()), ([1, 3], beta()), ([1, 1], value.clone())] {
        let d = Direction::from_ints(&raw).unwrap();
        assert_eq!(evaluate(&deflated[p], &d).lambda, evaluate(&expected, &d).lambda, "{raw:?}");
    }
    assert!(same(&deflated[p], &value));
    let swept = bellman(&fixture.objective, &fixture.game, &deflated);
    assert!(is_subset(&value, &swept[p]).unwrap() && is_subset(&swept[p], &gamma()).unwrap());
}

#[test]
fn deflation_only_shrinks_upper_bounds() {
    for seed in 0..12 {
        let (game, objective) = random_game(&common::monotonicity_params(seed));
        let mecs = deflatable_mecs(&game);
        let mut bounds = BoundPair::initial(&game, &objective);
        for _ in 0..6 {
            let lower = bellman(&objective, &game, &bounds.lower);
            let upper = bellman(&objective, &game, &bounds.upper);
            let (deflated, _) = deflate_secs(&game, &objective, &mecs, &lower, &upper).unwrap();
            for (after, before) in deflated.iter().zip(&upper) {
                assert!(is_subset(after, before).unwrap(), "seed {seed}");
            }
            bounds = BoundPair { lower, upper: deflated };
        }
    }
}

#[test]
fn deflated_bounds_keep_the_exact_value() {
    for seed in 0..20 {
        let (game, objective) = random_game(&common::single_dim_params(seed));
        let exact = solve_single_dim_exact(&game, &objective.targets()[0]).unwrap();
        let mut solver = Solver::new(&game, &objective, SolverConfig::new(ratio(1, 1_000_000))).unwrap();
        for _ in 0..30 {
            let stats = solver.step().unwrap();
            for (upper, value) in solver.bounds().upper.iter().zip(&exact) {
                assert!(is_subset(&scalar(value.clone()), upper).unwrap(), "seed {seed}");
            }
            if stats.gap.is_zero() {
                break;
            }
        }
    }
}

#[test]
fn small_monotonicity_suite() {
    let mut log = common::PartitionLog::default();
    let report = common::monotonicity_suite(0..12, 8, &mut log);
    assert!(report.passed(), "{:?}", report.violations);
}

#[test]
fn small_stopping_suite() {
    let mut log = common::PartitionLog::default();
    let report = common::stopping_suite(0..6, 100, &mut log);
    assert!(report.passed(), "{:?}", report.violations);
}

fn delayed_exit_bounds(fixture: &fixtures::Fixture) -> (Vec<DwcSet>, Vec<DwcSet>) {
    let rows = fixtures::delayed_exit_values().value;
    let mut values = vec![DwcSet::zero(1); fixture.game.num_states()];
    let mut bloated = values.clone();
    for (name, value, upper) in rows {
        values[id(fixture, name).0] = scalar(value);
        bloated[id(fixture, name).0] = scalar(upper);
    }
    (values, bloated)
}

#[test]
fn delayed_exit_bloated_bound_is_a_plain_fixpoint() {
    let fixture = fixtures::delayed_exit_example();
    let (values, bloated) = delayed_exit_bounds(&fixture);
    assert_eq!(bellman(&fixture.objective, &fixture.game, &bloated), bloated);
    let d = Direction::from_ints(&[1]).unwrap();
    let delta = diagnostic_delta(&bloated, &values, &d);
    let expect = |name: &str, value: Q| assert_eq!(delta[id(&fixture, name).0], value, "{name}");
    expect("n0", ratio(3, 10));
    for name in ["n1", "n2", "n3", "n4", "n5", "n6", "n7u", "n8u", "n7d"] {
        expect(name, ratio(3, 5));
    }
}

#[test]
fn delayed_exit_error_drains_along_the_chain() {
    let fixture = fixtures::delayed_exit_example();
    let (values, bloated) = delayed_exit_bounds(&fixture);
    let bounds = BoundPair {
        lower: values.clone(),
        upper: bloated,
    };
    let d = Direction::from_ints(&[1]).unwrap();
    let deltas = |upper: &[DwcSet]| diagnostic_delta(upper, &values, &d);
    let total = |delta: &[Q]| delta.iter().fold(Q::zero(), |acc, v| acc + v);
    let mut solver = Solver::with_bounds(&fixture.game, &fixture.objective, SolverConfig::new(epsilon()), bounds).unwrap();
    let mut previous = total(&deltas(&solver.bounds().upper));
    let mut largest = Vec::new();
    for _ in 0..4 {
        solver.step().unwrap();
        let delta = deltas(&solver.bounds().upper);
        let sum = total(&delta);
        assert!(sum < previous, "total error {sum} did not drop");
        previous = sum;
        largest.push(delta.into_iter().max().unwrap());
    }
    // Deflation fixes the end components first; the chain leading into them
    // catches up one sweep per link, so the largest error lags behind.
    assert_eq!(largest, vec![ratio(3, 5), ratio(3, 5), ratio(3, 10), Q::zero()]);
}

#[test]
fn gap_column_never_increases() {
    let mut games: Vec<(String, _, _)> = fixtures::all()
        .into_iter()
        .filter(|f| f.name != "tie_stall_example")
        .map(|f| (f.name.to_string(), f.game, f.objective))
        .collect();
    for seed in [16, 44, 96] {
        let (game, objective) = random_game(&common::monotonicity_params(seed));
        games.push((format!("seed {seed}"), game, objective));
    }
    for (name, game, objective) in &games {
        let config = SolverConfig {
            max_iterations: Some(25),
            ..SolverConfig::new(epsilon())
        };
        let mut rows: Vec<IterationStats> = Vec::new();
        let _ = mo_bvi(game, objective, config, &mut |s| rows.push(s.clone()));
        for pair in rows.windows(2) {
            assert!(pair[1].gap <= pair[0].gap, "{name}: {} after {}", pair[1].gap, pair[0].gap);
        }
    }
}

#[test]
fn initial_gap_is_the_dimension() {
    let fixture = fixtures::three_targets();
    let solver = Solver::new(&fixture.game, &fixture.objective, SolverConfig::new(epsilon())).unwrap();
    assert_eq!(solver.gap().unwrap().value, ratio(3, 1));
}

#[test]
fn reports_are_deterministic() {
    let fixture = fixtures::running_example();
    let render = || {
        let outcome = mo_bvi(&fixture.game, &fixture.objective, SolverConfig::new(epsilon()), &mut |_| {}).unwrap();
        serde_json::to_string_pretty(&FrontierReport::new(&fixture.game, &fixture.objective, &outcome)).unwrap()
    };
    assert_eq!(render(), render());
}
