//! Reference solvers and instance generators used to check the solver.
//!
//! Nothing in here shares code with the solver's geometry: the stopping-game
//! oracle runs on the brute-force kernel in [`brute`].

pub mod brute;
pub mod fixtures;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{Action, Objective, Owner, State, StateActionPair, StateId, StochasticGame};
use crate::geometry::{evaluate, linalg, Direction, DwcSet, Point};
use crate::graph::mec_decomposition;
use crate::rational::{ratio, Q};
use brute::BrutePiece;

/// Largest number of strategy pairs the n=1 oracle will enumerate.
pub const PAIR_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} strategy pairs exceed the enumeration cap")]
    CapExceeded(u64),
    #[error("the game has a non-absorbing end component")]
    NotStopping,
    #[error("residual mass did not drop below the threshold within {0} steps")]
    ResidualTooLarge(usize),
}

/// One action index per state; unused entries for the other player.
type Strategy = Vec<usize>;

fn strategies(game: &StochasticGame, owner: Owner) -> Vec<Strategy> {
    let mut all: Vec<Strategy> = vec![vec![0; game.num_states()]];
    for state in game.state_ids().filter(|&s| game.owner(s) == owner) {
        all = all
            .into_iter()
            .flat_map(|partial| {
                (0..game.actions(state).len()).map(move |a| {
                    let mut next = partial.clone();
                    next[state.0] = a;
                    next
                })
            })
            .collect();
    }
    all
}

/// Reachability probabilities of `target` in the chain fixed by `choice`.
fn chain_values(game: &StochasticGame, target: &BTreeSet<StateId>, choice: &[usize]) -> Vec<Q> {
    let n = game.num_states();
    let successors = |s: usize| -> &[(StateId, Q)] {
        &game.actions(StateId(s))[choice[s]].dist
    };
    // Backward search from the target finds the states with positive value.
    let mut reaches = vec![false; n];
    for t in target {
        reaches[t.0] = true;
    }
    let mut grew = true;
    while grew {
        grew = false;
        for s in 0..n {
            if !reaches[s] && successors(s).iter().any(|(t, _)| reaches[t.0]) {
                reaches[s] = true;
                grew = true;
            }
        }
    }
    let unknown: Vec<usize> = (0..n).filter(|&s| reaches[s] && !target.contains(&StateId(s))).collect();
    let column: BTreeMap<usize, usize> = unknown.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut values = vec![Q::zero(); n];
    for t in target {
        values[t.0] = Q::one();
    }
    if unknown.is_empty() {
        return values;
    }
    let mut matrix = vec![vec![Q::zero(); unknown.len()]; unknown.len()];
    let mut rhs = vec![Q::zero(); unknown.len()];
    for (row, &s) in unknown.iter().enumerate() {
        matrix[row][row] = Q::one();
        for (t, p) in successors(s) {
            if target.contains(t) {
                rhs[row] += p;
            } else if let Some(&col) = column.get(&t.0) {
                matrix[row][col] -= p;
            }
        }
    }
    let solution = linalg::solve(&matrix, &rhs).expect("every unknown state reaches the target, so the system is regular");
    for (&s, v) in unknown.iter().zip(solution) {
        values[s] = v;
    }
    values
}

/// Exact values of reaching `target` by enumerating memoryless deterministic strategies.
pub fn solve_single_dim_exact(game: &StochasticGame, target: &BTreeSet<StateId>) -> Result<Vec<Q>, OracleError> {
    let count = |owner: Owner| -> u64 {
        game.state_ids()
            .filter(|&s| game.owner(s) == owner)
            .map(|s| game.actions(s).len() as u64)
            .try_fold(1u64, |acc, k| acc.checked_mul(k))
            .unwrap_or(u64::MAX)
    };
    let pairs = count(Owner::Max).saturating_mul(count(Owner::Min));
    if pairs > PAIR_CAP {
        return Err(OracleError::CapExceeded(pairs));
    }
    let maximizer = strategies(game, Owner::Max);
    let minimizer = strategies(game, Owner::Min);
    let per_max: Vec<Vec<Q>> = maximizer
        .par_iter()
        .map(|sigma| {
            let mut worst: Option<Vec<Q>> = None;
            for tau in &minimizer {
                let choice: Vec<usize> = game
                    .state_ids()
                    .map(|s| match game.owner(s) {
                        Owner::Max => sigma[s.0],
                        Owner::Min => tau[s.0],
                    })
                    .collect();
                let values = chain_values(game, target, &choice);
                worst = Some(match worst {
                    None => values,
                    Some(w) => w.into_iter().zip(values).map(|(a, b)| a.min(b)).collect(),
                });
            }
            worst.expect("every state has an action")
        })
        .collect();
    Ok((0..game.num_states())
        .map(|s| per_max.iter().map(|v| v[s].clone()).max().expect("nonempty"))
        .collect())
}

/// Whether every end component is a single absorbing state.
pub fn is_stopping(game: &StochasticGame) -> bool {
    mec_decomposition(game, &game.full_structure())
        .mecs
        .iter()
        .all(|m| m.is_trivial(game))
}

/// Worst-case probability of still being outside the absorbing states after `k` steps,
/// for the smallest `k` where it drops below `threshold`.
pub fn residual_steps(game: &StochasticGame, threshold: &Q, max_steps: usize) -> Result<(usize, Q), OracleError> {
    let mut mass: Vec<Q> = game
        .state_ids()
        .map(|s| if game.is_absorbing(s) { Q::zero() } else { Q::one() })
        .collect();
    for k in 0..=max_steps {
        let worst = mass.iter().max().cloned().unwrap_or_else(Q::zero);
        if worst < *threshold {
            return Ok((k, worst));
        }
        mass = game
            .state_ids()
            .map(|s| {
                if game.is_absorbing(s) {
                    return Q::zero();
                }
                game.actions(s)
                    .iter()
                    .map(|a| a.dist.iter().fold(Q::zero(), |acc, (t, p)| acc + p * &mass[t.0]))
                    .max()
                    .expect("states have actions")
            })
            .collect();
    }
    Err(OracleError::ResidualTooLarge(max_steps))
}

fn brute_action(objective: &Objective, game: &StochasticGame, values: &[BrutePiece], pair: StateActionPair) -> BrutePiece {
    let dim = objective.dim();
    let mut acc = BrutePiece::zero(dim);
    for (to, p) in &game.action(pair).dist {
        acc = acc.minkowski(&values[to.0].scale(p));
    }
    let indicator = objective.indicator(pair.state);
    let shifted: Vec<Point> = acc
        .generators()
        .iter()
        .map(|g| g.iter().zip(&indicator).map(|(a, b)| a + b).collect())
        .collect();
    BrutePiece::hull(dim, &shifted)
}

fn brute_sweep(objective: &Objective, game: &StochasticGame, values: &[BrutePiece]) -> Vec<BrutePiece> {
    game.state_ids()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|state| {
            let per_action: Vec<BrutePiece> = (0..game.actions(state).len())
                .map(|action| brute_action(objective, game, values, StateActionPair { state, action }))
                .collect();
            match game.owner(state) {
                Owner::Max => BrutePiece::union_hull(&per_action),
                Owner::Min => {
                    let mut iter = per_action.into_iter();
                    let first = iter.next().expect("states have actions");
                    iter.fold(first, |acc, x| acc.intersect(&x))
                }
            }
        })
        .collect()
}

/// `k` plain Bellman sweeps from `{0}` on a stopping game, on the brute-force kernel.
pub fn achievable_oracle_stopping(
    game: &StochasticGame,
    objective: &Objective,
    iterations: usize,
) -> Result<Vec<DwcSet>, OracleError> {
    if !is_stopping(game) {
        return Err(OracleError::NotStopping);
    }
    let dim = objective.dim();
    let mut values: Vec<BrutePiece> = vec![BrutePiece::zero(dim); game.num_states()];
    for _ in 0..iterations {
        values = brute_sweep(objective, game, &values);
    }
    Ok(values
        .iter()
        .map(|p| DwcSet::from_generators(dim, &[p.generators().to_vec()]).expect("oracle points lie in the unit box"))
        .collect())
}

/// `λ_U(s)(d) - λ_A(s)(d)` per state.
pub fn diagnostic_delta(upper: &[DwcSet], oracle_values: &[DwcSet], direction: &Direction) -> Vec<Q> {
    upper
        .iter()
        .zip(oracle_values)
        .map(|(u, a)| evaluate(u, direction).lambda - evaluate(a, direction).lambda)
        .collect()
}

/// Maximal end components by enumerating every state set and every action set
/// staying inside it, with reachability by transitive closure.
pub fn brute_mecs(game: &StochasticGame) -> Vec<(BTreeSet<StateId>, BTreeSet<StateActionPair>)> {
    let n = game.num_states();
    assert!(n <= 12, "state subsets are enumerated exhaustively");
    let mut ecs: Vec<(BTreeSet<StateId>, BTreeSet<StateActionPair>)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let states: BTreeSet<StateId> = (0..n).filter(|i| mask & (1 << i) != 0).map(StateId).collect();
        let staying: Vec<StateActionPair> = states
            .iter()
            .flat_map(|&state| (0..game.actions(state).len()).map(move |action| StateActionPair { state, action }))
            .filter(|&pair| game.action(pair).dist.iter().all(|(t, _)| states.contains(t)))
            .collect();
        for choice in 1u64..(1 << staying.len()) {
            let actions: BTreeSet<StateActionPair> = staying
                .iter()
                .enumerate()
                .filter(|(k, _)| choice & (1 << k) != 0)
                .map(|(_, &p)| p)
                .collect();
            if states.iter().all(|s| actions.iter().any(|p| p.state == *s)) && strongly_connected(game, &states, &actions) {
                ecs.push((states.clone(), actions));
            }
        }
    }
    let maximal: Vec<(BTreeSet<StateId>, BTreeSet<StateActionPair>)> = ecs
        .iter()
        .filter(|(t, b)| {
            !ecs.iter()
                .any(|(t2, b2)| (t2, b2) != (t, b) && t.is_subset(t2) && b.is_subset(b2))
        })
        .cloned()
        .collect();
    let mut out = maximal;
    out.sort();
    out
}

fn strongly_connected(game: &StochasticGame, states: &BTreeSet<StateId>, actions: &BTreeSet<StateActionPair>) -> bool {
    let list: Vec<StateId> = states.iter().copied().collect();
    let k = list.len();
    let index = |s: StateId| list.iter().position(|&x| x == s).expect("member");
    let mut reach = vec![vec![false; k]; k];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for pair in actions {
        for (t, _) in &game.action(*pair).dist {
            reach[index(pair.state)][index(*t)] = true;
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if reach[i][m] && reach[m][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameParams {
    pub n_states: usize,
    /// Upper bound on actions per state.
    pub n_actions: usize,
    pub n_targets: usize,
    pub stopping: bool,
    /// Upper bound on successors per action.
    pub branching: usize,
    pub seed: u64,
}

fn random_dist<R: Rng>(rng: &mut R, n_states: usize, branching: usize) -> Vec<(StateId, Q)> {
    let width = rng.gen_range(1..=branching.min(n_states));
    let picked = sample(rng, n_states, width);
    let weights: Vec<i64> = (0..width).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    picked
        .into_iter()
        .zip(weights)
        .map(|(s, w)| (StateId(s), ratio(w, total)))
        .collect()
}

fn sink(name: String) -> State {
    State {
        actions: vec![Action {
            name: "stay".into(),
            dist: Vec::new(),
        }],
        name,
        owner: Owner::Max,
    }
}

fn build(mut states: Vec<State>, targets: Vec<BTreeSet<StateId>>) -> (StochasticGame, Objective) {
    // Sinks are created with an empty distribution and closed here, once ids are final.
    for (i, s) in states.iter_mut().enumerate() {
        for a in &mut s.actions {
            if a.dist.is_empty() {
                a.dist = vec![(StateId(i), Q::one())];
            }
        }
    }
    let game = StochasticGame::new(states, StateId(0)).expect("generated games are well formed");
    let objective = Objective::new(targets).expect("at least one target");
    (game, objective)
}

/// Reproducible random game. With `stopping`, every nontrivial end component is
/// broken by sending a quarter of each internal action's mass to a fresh sink.
pub fn random_game(params: &GameParams) -> (StochasticGame, Objective) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_states.max(1);
    let mut states: Vec<State> = (0..n)
        .map(|i| {
            let owner = if rng.gen_bool(0.5) { Owner::Max } else { Owner::Min };
            let count = rng.gen_range(1..=params.n_actions.max(1));
            let actions = (0..count)
                .map(|a| Action {
                    name: format!("a{a}"),
                    dist: random_dist(&mut rng, n, params.branching.max(1)),
                })
                .collect();
            State {
                name: format!("s{i}"),
                owner,
                actions,
            }
        })
        .collect();
    let mut targets: Vec<BTreeSet<StateId>> = (0..params.n_targets.max(1))
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.25)).map(StateId).collect())
        .collect();
    if !params.stopping {
        return build(states, targets);
    }
    loop {
        let (game, objective) = build(states.clone(), targets.clone());
        let mecs: Vec<_> = mec_decomposition(&game, &game.full_structure())
            .mecs
            .into_iter()
            .filter(|m| !m.is_trivial(&game))
            .collect();
        if mecs.is_empty() {
            return (game, objective);
        }
        states = game.states().to_vec();
        for mec in mecs {
            let fresh = StateId(states.len());
            for target in targets.iter_mut() {
                if rng.gen_bool(0.5) {
                    target.insert(fresh);
                }
            }
            states.push(sink(format!("z{}", fresh.0)));
            for pair in &mec.actions {
                let dist = &mut states[pair.state.0].actions[pair.action].dist;
                for (_, p) in dist.iter_mut() {
                    *p *= ratio(3, 4);
                }
                dist.push((fresh, ratio(1, 4)));
            }
        }
        let _ = objective;
    }
}
