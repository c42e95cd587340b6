//! Scalar bounded value iteration for a single target set.
//!
//! With one objective every direction is the same, so regions collapse to a
//! single one and deflation becomes the classic best-exit rule for SECs.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{deflatable_mecs, SolverError, STALL_LIMIT};
use crate::game::{Owner, StateActionPair, StateId, StochasticGame};
use crate::graph::mec_decomposition;
use crate::rational::{format_rational, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleDimOutcome {
    /// `(lower, upper)` per state.
    pub intervals: Vec<(Q, Q)>,
    pub iterations: usize,
    pub converged: bool,
}

fn action_value(game: &StochasticGame, target: &BTreeSet<StateId>, values: &[Q], pair: StateActionPair) -> Q {
    if target.contains(&pair.state) {
        return Q::one();
    }
    game.action(pair)
        .dist
        .iter()
        .fold(Q::zero(), |acc, (to, p)| acc + p * &values[to.0])
}

fn sweep(game: &StochasticGame, target: &BTreeSet<StateId>, values: &[Q]) -> Vec<Q> {
    game.state_ids()
        .map(|state| {
            let per_action = (0..game.actions(state).len())
                .map(|action| action_value(game, target, values, StateActionPair { state, action }));
            match game.owner(state) {
                Owner::Max => per_action.max(),
                Owner::Min => per_action.min(),
            }
            .expect("states have actions")
        })
        .collect()
}

fn deflate(
    game: &StochasticGame,
    target: &BTreeSet<StateId>,
    mecs: &[BTreeSet<StateId>],
    lower: &[Q],
    upper: &mut [Q],
) {
    for mec in mecs {
        let available: BTreeMap<StateId, Vec<usize>> = mec
            .iter()
            .filter(|&&s| game.owner(s) == Owner::Min)
            .map(|&state| {
                let values: Vec<Q> = (0..game.actions(state).len())
                    .map(|action| action_value(game, target, lower, StateActionPair { state, action }))
                    .collect();
                let best = values.iter().min().cloned().expect("states have actions");
                (state, (0..values.len()).filter(|&a| values[a] == best).collect())
            })
            .collect();
        let structure = game
            .restrict(mec, &available)
            .expect("argmin sets are nonempty subsets of the available actions");
        for sec in mec_decomposition(game, &structure).mecs {
            let exit = if sec.states.iter().any(|s| target.contains(s)) {
                Q::one()
            } else {
                game.exits_max(&sec.states)
                    .into_iter()
                    .map(|pair| action_value(game, target, upper, pair))
                    .max()
                    .unwrap_or_else(Q::zero)
            };
            for s in &sec.states {
                if upper[s.0] > exit {
                    upper[s.0] = exit.clone();
                }
            }
        }
    }
}

/// Intervals `[L(s), U(s)]` with `U(s) - L(s) < epsilon` at every state, or the
/// bounds reached when `max_iterations` runs out.
pub fn single_dim_solve(
    game: &StochasticGame,
    target: &BTreeSet<StateId>,
    epsilon: &Q,
    max_iterations: usize,
) -> Result<SingleDimOutcome, SolverError> {
    if *epsilon <= Q::zero() {
        return Err(SolverError::NonPositiveEpsilon);
    }
    let mecs = deflatable_mecs(game);
    let mut lower: Vec<Q> = vec![Q::zero(); game.num_states()];
    let mut upper: Vec<Q> = game
        .state_ids()
        .map(|s| {
            if game.is_absorbing(s) && !target.contains(&s) {
                Q::zero()
            } else {
                Q::one()
            }
        })
        .collect();
    let width = |lower: &[Q], upper: &[Q]| {
        lower
            .iter()
            .zip(upper)
            .map(|(l, u)| u - l)
            .max()
            .unwrap_or_else(Q::zero)
    };
    let mut best = width(&lower, &upper);
    let mut best_at = 0;
    for iteration in 1..=max_iterations {
        let next_lower = sweep(game, target, &lower);
        let mut next_upper = sweep(game, target, &upper);
        deflate(game, target, &mecs, &next_lower, &mut next_upper);
        let changed = next_lower != lower || next_upper != upper;
        lower = next_lower;
        upper = next_upper;
        let gap = width(&lower, &upper);
        if gap < *epsilon {
            return Ok(SingleDimOutcome {
                intervals: lower.into_iter().zip(upper).collect(),
                iterations: iteration,
                converged: true,
            });
        }
        if gap < best || changed {
            best = best.min(gap);
            best_at = iteration;
        } else if iteration - best_at >= STALL_LIMIT {
            return Err(SolverError::Stalled {
                iteration,
                gap: format_rational(&best),
                bounds: None,
            });
        }
    }
    Ok(SingleDimOutcome {
        intervals: lower.into_iter().zip(upper).collect(),
        iterations: max_iterations,
        converged: false,
    })
}
