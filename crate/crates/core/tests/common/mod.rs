//! Suites shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgpareto::game::{Objective, StochasticGame};
use sgpareto::geometry::{canonicalize, is_subset, Direction, DwcSet};
use sgpareto::oracle::{random_game, solve_single_dim_exact, GameParams};
use sgpareto::rational::{format_rational, ratio, Q};
use sgpareto::regions::{consistency_check, RegionPartition};
use sgpareto::solver::{minimizer_scope, single_dim_solve, BoundPair, Solver, SolverConfig, SolverError};

/// Game parameters for the monotonicity suite: up to 8 states, 3 actions and 3 targets.
pub fn monotonicity_params(seed: u64) -> GameParams {
    GameParams {
        n_states: 2 + (seed % 7) as usize,
        n_actions: 1 + (seed % 3) as usize,
        n_targets: 1 + ((seed / 3) % 3) as usize,
        stopping: false,
        branching: 3,
        seed,
    }
}

/// Up to 6 states, 2 actions, one target.
pub fn single_dim_params(seed: u64) -> GameParams {
    GameParams {
        n_states: 2 + (seed % 5) as usize,
        n_actions: 2,
        n_targets: 1,
        stopping: false,
        branching: 2,
        seed,
    }
}

/// Stopping games with two or three targets.
pub fn stopping_params(seed: u64) -> GameParams {
    GameParams {
        n_states: 3 + (seed % 4) as usize,
        n_actions: 2,
        n_targets: 2 + (seed % 2) as usize,
        stopping: true,
        branching: 2,
        seed,
    }
}

/// A partition with the Minimizer scope it was computed for.
pub struct Recorded {
    pub partition: RegionPartition,
    pub scope: sgpareto::regions::ActionValues,
}

/// Collects partitions, skipping ones already seen with the same hyperplanes and scope.
#[derive(Default)]
pub struct PartitionLog {
    pub entries: Vec<Recorded>,
    seen: BTreeSet<String>,
}

impl PartitionLog {
    pub fn record(&mut self, game: &StochasticGame, objective: &Objective, solver: &Solver<'_>) {
        for mec in solver.partitions() {
            let scope = minimizer_scope(game, objective, &solver.bounds().lower, &mec.states);
            let key = format!("{:?}|{:?}", mec.partition.hyperplanes(), scope_key(&scope));
            if self.seen.insert(key) {
                self.entries.push(Recorded {
                    partition: mec.partition.clone(),
                    scope,
                });
            }
        }
    }
}

fn scope_key(scope: &sgpareto::regions::ActionValues) -> Vec<(usize, Vec<sgpareto::geometry::DwcSetRepr>)> {
    scope
        .iter()
        .map(|(s, values)| (s.0, values.iter().map(DwcSet::to_repr).collect()))
        .collect()
}

/// Outcome of one suite over many games.
#[derive(Debug, Default)]
pub struct SuiteReport {
    pub games: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn nested(prev: &BoundPair, next: &BoundPair) -> Result<Option<usize>, SolverError> {
    for s in 0..next.lower.len() {
        let ok = is_subset(&prev.lower[s], &next.lower[s])?
            && is_subset(&next.lower[s], &next.upper[s])?
            && is_subset(&next.upper[s], &prev.upper[s])?;
        if !ok {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Runs the deflating solver and checks `L_i ⊆ L_{i+1} ⊆ U_{i+1} ⊆ U_i` at every state and iteration.
pub fn monotonicity_suite(seeds: std::ops::Range<u64>, max_iterations: usize, log: &mut PartitionLog) -> SuiteReport {
    let mut report = SuiteReport::default();
    let epsilon = ratio(1, 1000);
    for seed in seeds {
        let (game, objective) = random_game(&monotonicity_params(seed));
        report.games += 1;
        let mut solver = Solver::new(&game, &objective, SolverConfig::new(epsilon.clone())).expect("valid config");
        let mut previous = solver.bounds().clone();
        for _ in 0..max_iterations {
            let stats = match solver.step() {
                Ok(stats) => stats,
                Err(err) => {
                    report.violations.push(format!("seed {seed}: {err}"));
                    break;
                }
            };
            log.record(&game, &objective, &solver);
            report.checks += game.num_states();
            match nested(&previous, solver.bounds()) {
                Ok(None) => {}
                Ok(Some(s)) => report
                    .violations
                    .push(format!("seed {seed}, iteration {}: state {}", stats.iteration, game.name(sgpareto::game::StateId(s)))),
                Err(err) => report.violations.push(format!("seed {seed}: {err}")),
            }
            previous = solver.bounds().clone();
            if stats.gap < epsilon {
                break;
            }
        }
    }
    report
}

/// Solver intervals at `epsilon` against strategy enumeration, for both solvers.
pub fn single_dim_suite(seeds: std::ops::Range<u64>, epsilon: &Q, log: &mut PartitionLog) -> SuiteReport {
    let mut report = SuiteReport::default();
    for seed in seeds {
        let (game, objective) = random_game(&single_dim_params(seed));
        report.games += 1;
        let target = &objective.targets()[0];
        let exact = match solve_single_dim_exact(&game, target) {
            Ok(v) => v,
            Err(err) => {
                report.violations.push(format!("seed {seed}: {err}"));
                continue;
            }
        };
        match single_dim_solve(&game, target, epsilon, 1_000_000) {
            Ok(outcome) if outcome.converged => {
                for (s, ((lo, hi), value)) in outcome.intervals.iter().zip(&exact).enumerate() {
                    report.checks += 1;
                    if lo > value || value > hi {
                        report.violations.push(format!(
                            "seed {seed}, state {s}: {} outside [{}, {}]",
                            format_rational(value),
                            format_rational(lo),
                            format_rational(hi)
                        ));
                    }
                }
            }
            Ok(_) => report.violations.push(format!("seed {seed}: scalar solver hit the iteration cap")),
            Err(err) => report.violations.push(format!("seed {seed}: {err}")),
        }
        let mut solver = Solver::new(&game, &objective, SolverConfig::new(epsilon.clone())).expect("valid config");
        let outcome = loop {
            match solver.step() {
                Ok(stats) => {
                    log.record(&game, &objective, &solver);
                    if stats.gap < *epsilon {
                        break Ok(solver.bounds().clone());
                    }
                    if stats.iteration >= 1_000_000 {
                        break Err("iteration cap".to_string());
                    }
                }
                Err(err) => break Err(err.to_string()),
            }
        };
        match outcome {
            Ok(bounds) => {
                let s0 = game.initial().0;
                let point = DwcSet::point(&[exact[s0].clone()]);
                report.checks += 1;
                let inside = is_subset(&bounds.lower[s0], &point).unwrap_or(false)
                    && is_subset(&point, &bounds.upper[s0]).unwrap_or(false);
                if !inside {
                    report.violations.push(format!("seed {seed}: multi-dimensional bounds miss the exact value"));
                }
            }
            Err(err) => report.violations.push(format!("seed {seed}: {err}")),
        }
    }
    report
}

fn canonical_equal(lhs: &BoundPair, rhs: &BoundPair) -> bool {
    let same = |x: &[DwcSet], y: &[DwcSet]| x.iter().zip(y).all(|(a, b)| canonicalize(a) == canonicalize(b));
    same(&lhs.lower, &rhs.lower) && same(&lhs.upper, &rhs.upper)
}

/// Deflating and plain runs on stopping games must agree at every iteration.
pub fn stopping_suite(seeds: std::ops::Range<u64>, max_iterations: usize, log: &mut PartitionLog) -> SuiteReport {
    let mut report = SuiteReport::default();
    let epsilon = ratio(1, 1000);
    for seed in seeds {
        let (game, objective) = random_game(&stopping_params(seed));
        report.games += 1;
        let mut with = Solver::new(&game, &objective, SolverConfig::new(epsilon.clone())).expect("valid config");
        let plain = SolverConfig {
            deflate: false,
            ..SolverConfig::new(epsilon.clone())
        };
        let mut without = Solver::new(&game, &objective, plain).expect("valid config");
        for _ in 0..max_iterations {
            let (a, b) = match (with.step(), without.step()) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(err), _) | (_, Err(err)) => {
                    report.violations.push(format!("seed {seed}: {err}"));
                    break;
                }
            };
            log.record(&game, &objective, &with);
            report.checks += 1;
            if !canonical_equal(with.bounds(), without.bounds()) || a.gap != b.gap {
                report.violations.push(format!("seed {seed}, iteration {}: bounds differ", a.iteration));
                break;
            }
            if a.gap < epsilon {
                break;
            }
        }
    }
    report
}

/// Sign vector of an integer direction: coordinate signs, then one sign per hyperplane.
///
/// Computed here with integer dot products rather than through the partition's own locator.
fn integer_signs(normals: &[Vec<BigInt>], raw: &[i64]) -> Vec<i8> {
    let sign = |v: &BigInt| match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    };
    raw.iter()
        .map(|v| sign(&BigInt::from(*v)))
        .chain(normals.iter().map(|n| {
            let dot: BigInt = n.iter().zip(raw).map(|(a, d)| a * d).sum();
            sign(&dot)
        }))
        .collect()
}

/// Point location over `samples` random directions plus the consistency check, per partition.
pub fn partition_suite(log: &PartitionLog, samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (k, entry) in log.entries.iter().enumerate() {
        report.games += 1;
        let partition = &entry.partition;
        let dim = partition.dim();
        let normals: Vec<Vec<BigInt>> = partition
            .hyperplanes()
            .iter()
            .map(|h| h.normal().iter().map(|v| v.to_integer()).collect())
            .collect();
        let mut counts: HashMap<Vec<i8>, usize> = HashMap::new();
        for region in partition.regions() {
            *counts.entry(region.signs).or_default() += 1;
        }
        for _ in 0..samples {
            let raw: Vec<i64> = loop {
                let raw: Vec<i64> = (0..dim)
                    .map(|_| if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=10_000) })
                    .collect();
                if raw.iter().any(|&v| v > 0) {
                    break raw;
                }
            };
            // Signs do not depend on scaling, so the raw vector stands in for its direction.
            let hits = counts.get(&integer_signs(&normals, &raw)).copied().unwrap_or(0);
            report.checks += 1;
            if hits != 1 {
                let d = Direction::from_ints(&raw).expect("nonzero nonnegative");
                report.violations.push(format!("partition {k}: direction {d} lies in {hits} regions"));
                break;
            }
        }
        report.checks += 1;
        if !consistency_check(partition, &entry.scope, 10, &mut rng) {
            report.violations.push(format!("partition {k}: inconsistent argmin"));
        }
    }
    report
}
