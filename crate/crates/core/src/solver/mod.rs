//! Bounded value iteration with deflation of regional simple end components.
//!
//! Lower bounds start at `{0}` and upper bounds at the unit box; both are pushed
//! through the multi-dimensional Bellman operator each sweep. Upper bounds of
//! end components can get stuck above the true values, so after every sweep the
//! upper bound of every state in a candidate SEC is cut down to the SEC's best
//! exit, separately on each region of directions.

pub mod single_dim;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{Objective, Owner, StateActionPair, StateId, StochasticGame};
use crate::geometry::{
    check_dim, convex_union, gap_bound, intersect, is_subset, minkowski, scale, Direction, DwcSet, GapBound,
    GeometryError,
};
use crate::graph::mec_decomposition;
use crate::regions::{argmin_map, get_regions, ActionValues, Region, RegionPartition};
use crate::rational::Q;

pub use single_dim::{single_dim_solve, SingleDimOutcome};

/// Iterations with neither a strictly better gap nor any change of the bounds
/// before the deflating solver gives up.
pub const STALL_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("region {region} has different argmin sets at two interior samples")]
    InconsistentPartition { region: usize },
    #[error("bounds and gap unchanged for {STALL_LIMIT} iterations at gap {gap} (iteration {iteration})")]
    Stalled {
        iteration: usize,
        gap: String,
        bounds: Option<Box<BoundPair>>,
    },
}

/// Lower and upper bounds per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundPair {
    pub lower: Vec<DwcSet>,
    pub upper: Vec<DwcSet>,
}

impl BoundPair {
    /// `L(s) = {0}` everywhere; `U(s)` is the unit box, except that absorbing
    /// states are pinned to the closure of their indicator vector.
    pub fn initial(game: &StochasticGame, objective: &Objective) -> Self {
        let dim = objective.dim();
        let upper = game
            .state_ids()
            .map(|s| {
                if game.is_absorbing(s) {
                    DwcSet::point(&objective.indicator(s))
                } else {
                    DwcSet::unit_box(dim)
                }
            })
            .collect();
        BoundPair {
            lower: vec![DwcSet::zero(dim); game.num_states()],
            upper,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub epsilon: Q,
    pub max_iterations: Option<usize>,
    pub deflate: bool,
}

impl SolverConfig {
    pub fn new(epsilon: Q) -> Self {
        SolverConfig {
            epsilon,
            max_iterations: None,
            deflate: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationStats {
    pub iteration: usize,
    pub gap: Q,
    pub witness: Option<Direction>,
    pub lower_pieces: Vec<usize>,
    pub upper_pieces: Vec<usize>,
    /// Number of cells per analyzed MEC.
    pub region_counts: Vec<usize>,
    /// Not part of any report, so that reports stay deterministic.
    pub elapsed_ms: u128,
}

impl IterationStats {
    pub fn total_pieces(&self) -> usize {
        self.lower_pieces.iter().sum::<usize>() + self.upper_pieces.iter().sum::<usize>()
    }
}

/// A MEC together with the partition used for it in the latest deflation.
#[derive(Clone, Debug)]
pub struct MecPartition {
    pub states: BTreeSet<StateId>,
    pub partition: RegionPartition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    IterationCap,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub bounds: BoundPair,
    pub stats: Vec<IterationStats>,
    pub partitions: Vec<MecPartition>,
    pub gap: GapBound,
    pub status: Status,
}

impl SolveOutcome {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn iterations(&self) -> usize {
        self.stats.last().map_or(0, |s| s.iteration)
    }
}

/// `(dwc{1_T(s)} + Σ δ(s,a,s')·X(s')) ∩ [0,1]^n`.
pub fn bellman_sa(objective: &Objective, game: &StochasticGame, values: &[DwcSet], pair: StateActionPair) -> DwcSet {
    let dim = objective.dim();
    let mut acc: Option<DwcSet> = None;
    for (to, p) in &game.action(pair).dist {
        let term = scale(p, &values[to.0]).expect("probabilities lie in [0,1]");
        acc = Some(match acc {
            None => term,
            Some(sum) => minkowski(&sum, &term).expect("dimensions agree"),
        });
    }
    let sum = acc.unwrap_or_else(|| DwcSet::zero(dim));
    let indicator = objective.indicator(pair.state);
    if indicator.iter().all(Zero::is_zero) {
        sum
    } else {
        sum.shift(&indicator)
    }
}

/// Maximizer: convex hull of the action values; Minimizer: their intersection.
pub fn bellman_state(objective: &Objective, game: &StochasticGame, values: &[DwcSet], state: StateId) -> DwcSet {
    let per_action: Vec<DwcSet> = (0..game.actions(state).len())
        .map(|action| bellman_sa(objective, game, values, StateActionPair { state, action }))
        .collect();
    match game.owner(state) {
        Owner::Max => {
            let refs: Vec<&DwcSet> = per_action.iter().collect();
            DwcSet::from_piece(convex_union(&refs).expect("states have actions"))
        }
        Owner::Min => {
            let mut iter = per_action.into_iter();
            let first = iter.next().expect("states have actions");
            iter.fold(first, |acc, x| intersect(&acc, &x).expect("dimensions agree"))
        }
    }
}

/// One synchronous sweep.
pub fn bellman(objective: &Objective, game: &StochasticGame, values: &[DwcSet]) -> Vec<DwcSet> {
    (0..game.num_states())
        .into_par_iter()
        .map(|i| bellman_state(objective, game, values, StateId(i)))
        .collect()
}

/// `(dwc{Σ_{s∈C} 1_T(s)} + conv(⋃ f(s,a) over Maximizer exits of C)) ∩ [0,1]^n`.
pub fn best_exit(
    game: &StochasticGame,
    objective: &Objective,
    action_value: &dyn Fn(StateActionPair) -> DwcSet,
    set: &BTreeSet<StateId>,
) -> DwcSet {
    let dim = objective.dim();
    let mut indicator = vec![Q::zero(); dim];
    for &s in set {
        for (acc, v) in indicator.iter_mut().zip(objective.indicator(s)) {
            *acc += v;
        }
    }
    let exits: Vec<DwcSet> = game.exits_max(set).into_iter().map(action_value).collect();
    let mixed = if exits.is_empty() {
        DwcSet::zero(dim)
    } else {
        let refs: Vec<&DwcSet> = exits.iter().collect();
        DwcSet::from_piece(convex_union(&refs).expect("dimensions agree"))
    };
    mixed.shift(&indicator)
}

/// Lower-bound action values of the Minimizer states of a MEC.
pub fn minimizer_scope(
    game: &StochasticGame,
    objective: &Objective,
    lower: &[DwcSet],
    mec: &BTreeSet<StateId>,
) -> ActionValues {
    mec.iter()
        .filter(|&&s| game.owner(s) == Owner::Min)
        .map(|&s| {
            let values = (0..game.actions(s).len())
                .map(|action| bellman_sa(objective, game, lower, StateActionPair { state: s, action }))
                .collect();
            (s, values)
        })
        .collect()
}

/// A candidate SEC for one region, with the Minimizer actions it was found under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionalSec {
    pub states: BTreeSet<StateId>,
    pub region: usize,
    pub restriction: BTreeMap<StateId, BTreeSet<usize>>,
}

/// Interior point of a cell other than its barycenter: one vertex gets double weight.
fn second_sample(region: &Region) -> Option<Direction> {
    if region.vertices.len() < 2 {
        return None;
    }
    let dim = region.sample.dim();
    let mut point = vec![Q::zero(); dim];
    for (k, v) in region.vertices.iter().enumerate() {
        let weight = Q::from_integer(if k == 0 { 2 } else { 1 }.into());
        for (acc, x) in point.iter_mut().zip(v) {
            *acc += &weight * x;
        }
    }
    Direction::new(&point).ok()
}

/// MECs of the MEC restricted to the Minimizer actions optimal on the region.
pub fn find_secs(
    game: &StochasticGame,
    mec: &BTreeSet<StateId>,
    partition: &RegionPartition,
    region: usize,
    scope: &ActionValues,
) -> Result<Vec<RegionalSec>, SolverError> {
    let cell = partition.region(region);
    let argmin = argmin_map(scope, &cell.sample);
    if let Some(other) = second_sample(&cell) {
        if partition.locate(&other) == Some(region) && argmin_map(scope, &other) != argmin {
            return Err(SolverError::InconsistentPartition { region });
        }
    }
    let available: BTreeMap<StateId, Vec<usize>> = argmin
        .iter()
        .map(|(&s, acts)| (s, acts.iter().copied().collect()))
        .collect();
    let structure = game
        .restrict(mec, &available)
        .expect("argmin sets are nonempty subsets of the available actions");
    Ok(mec_decomposition(game, &structure)
        .mecs
        .into_iter()
        .map(|m| RegionalSec {
            states: m.states,
            region,
            restriction: argmin.clone(),
        })
        .collect())
}

/// Homogeneous constraints `h . x >= 0` describing the closed cone over a cell.
fn cone_constraints(partition: &RegionPartition, region: &Region) -> Vec<Vec<Q>> {
    let dim = partition.dim();
    let mut constraints = Vec::new();
    for i in 0..dim {
        if region.signs[i] == 0 {
            let mut c = vec![Q::zero(); dim];
            c[i] = Q::from_integer((-1).into());
            constraints.push(c);
        }
    }
    for (k, h) in partition.hyperplanes().iter().enumerate() {
        let touches = region.vertices.iter().any(|v| h.side(v) == 0);
        if !touches {
            continue;
        }
        let s = region.signs[dim + k];
        let positive: Vec<Q> = h.normal().to_vec();
        let negative: Vec<Q> = h.normal().iter().map(|v| -v).collect();
        match s {
            1 => constraints.push(positive),
            -1 => constraints.push(negative),
            _ => {
                constraints.push(positive);
                constraints.push(negative);
            }
        }
    }
    constraints
}

/// Nontrivial MECs of the whole game: all except single absorbing states.
pub fn deflatable_mecs(game: &StochasticGame) -> Vec<BTreeSet<StateId>> {
    mec_decomposition(game, &game.full_structure())
        .mecs
        .into_iter()
        .filter(|m| !m.is_trivial(game))
        .map(|m| m.states)
        .collect()
}

/// Regional deflation of the upper bounds of every MEC.
///
/// Only regions that are open in their face of the direction simplex contribute:
/// their closed cones cover every direction, and the bounds are closed sets.
pub fn deflate_secs(
    game: &StochasticGame,
    objective: &Objective,
    mecs: &[BTreeSet<StateId>],
    lower: &[DwcSet],
    upper: &[DwcSet],
) -> Result<(Vec<DwcSet>, Vec<MecPartition>), SolverError> {
    let dim = objective.dim();
    let results: Vec<Result<(Vec<(StateId, DwcSet)>, MecPartition), SolverError>> = mecs
        .par_iter()
        .map(|mec| {
            let scope = minimizer_scope(game, objective, lower, mec);
            let partition = get_regions(dim, &scope)?;
            let regions: Vec<Region> = partition.regions().into_iter().filter(Region::is_full).collect();
            let mut exit_cache: BTreeMap<BTreeSet<StateId>, DwcSet> = BTreeMap::new();
            let action_value = |pair: StateActionPair| bellman_sa(objective, game, upper, pair);
            // Per state, the exit applying on each full region (None outside every SEC).
            let mut per_state: BTreeMap<StateId, Vec<Option<DwcSet>>> =
                mec.iter().map(|&s| (s, Vec::with_capacity(regions.len()))).collect();
            for region in &regions {
                let secs = find_secs(game, mec, &partition, region.index, &scope)?;
                let mut assigned: BTreeMap<StateId, DwcSet> = BTreeMap::new();
                for sec in secs {
                    let exit = exit_cache
                        .entry(sec.states.clone())
                        .or_insert_with(|| best_exit(game, objective, &action_value, &sec.states))
                        .clone();
                    for s in sec.states {
                        assigned.insert(s, exit.clone());
                    }
                }
                for (s, list) in per_state.iter_mut() {
                    list.push(assigned.remove(s));
                }
            }
            let mut updated = Vec::new();
            for (s, exits) in per_state {
                let current = &upper[s.0];
                let binding: Vec<bool> = exits
                    .iter()
                    .map(|e| match e {
                        Some(exit) => !is_subset(current, exit).expect("dimensions agree"),
                        None => false,
                    })
                    .collect();
                if !binding.iter().any(|&b| b) {
                    continue;
                }
                let first = exits[0].clone();
                let uniform = exits.iter().all(|e| *e == first);
                let next = if uniform {
                    intersect(current, first.as_ref().expect("binding exits exist"))?
                } else {
                    let mut pieces = Vec::new();
                    for ((region, exit), bind) in regions.iter().zip(&exits).zip(&binding) {
                        let cone = cone_constraints(&partition, region);
                        let part = if *bind {
                            intersect(current, exit.as_ref().expect("binding exits exist"))?
                        } else {
                            current.clone()
                        };
                        pieces.extend(part.restrict_to_cone(&cone).pieces().iter().cloned());
                    }
                    DwcSet::from_pieces(dim, pieces)
                };
                updated.push((s, next));
            }
            Ok((
                updated,
                MecPartition {
                    states: mec.clone(),
                    partition,
                },
            ))
        })
        .collect();
    let mut next = upper.to_vec();
    let mut partitions = Vec::with_capacity(mecs.len());
    for result in results {
        let (updates, partition) = result?;
        for (s, set) in updates {
            next[s.0] = set;
        }
        partitions.push(partition);
    }
    Ok((next, partitions))
}

/// Gap between the bounds at one state, with a witness direction.
pub fn stopping_gap(lower: &DwcSet, upper: &DwcSet) -> Result<GapBound, SolverError> {
    Ok(gap_bound(upper, lower)?)
}

/// Stateful solver; each [`Solver::step`] runs one iteration of the main loop.
pub struct Solver<'a> {
    game: &'a StochasticGame,
    objective: &'a Objective,
    config: SolverConfig,
    mecs: Vec<BTreeSet<StateId>>,
    bounds: BoundPair,
    partitions: Vec<MecPartition>,
    iteration: usize,
    changed: bool,
    /// Smallest gap bound seen so far; still sound because the bounds only tighten.
    best_gap: Option<GapBound>,
    started: Instant,
}

impl<'a> Solver<'a> {
    pub fn new(game: &'a StochasticGame, objective: &'a Objective, config: SolverConfig) -> Result<Self, SolverError> {
        check_dim(objective.dim())?;
        if config.epsilon <= Q::zero() {
            return Err(SolverError::NonPositiveEpsilon);
        }
        let mecs = if config.deflate {
            deflatable_mecs(game)
        } else {
            Vec::new()
        };
        Ok(Solver {
            game,
            objective,
            bounds: BoundPair::initial(game, objective),
            config,
            mecs,
            partitions: Vec::new(),
            iteration: 0,
            changed: true,
            best_gap: None,
            started: Instant::now(),
        })
    }

    /// Starts from given bounds instead of the initial pair.
    pub fn with_bounds(
        game: &'a StochasticGame,
        objective: &'a Objective,
        config: SolverConfig,
        bounds: BoundPair,
    ) -> Result<Self, SolverError> {
        let mut solver = Self::new(game, objective, config)?;
        solver.bounds = bounds;
        Ok(solver)
    }

    pub fn bounds(&self) -> &BoundPair {
        &self.bounds
    }

    pub fn partitions(&self) -> &[MecPartition] {
        &self.partitions
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Gap bound at the initial state, never larger than an earlier one.
    pub fn gap(&self) -> Result<GapBound, SolverError> {
        match &self.best_gap {
            Some(best) => Ok(best.clone()),
            None => {
                let s0 = self.game.initial().0;
                stopping_gap(&self.bounds.lower[s0], &self.bounds.upper[s0])
            }
        }
    }

    /// Lower update, upper update, then deflation.
    pub fn step(&mut self) -> Result<IterationStats, SolverError> {
        let lower = bellman(self.objective, self.game, &self.bounds.lower);
        let mut upper = bellman(self.objective, self.game, &self.bounds.upper);
        if self.config.deflate && !self.mecs.is_empty() {
            let (deflated, partitions) = deflate_secs(self.game, self.objective, &self.mecs, &lower, &upper)?;
            upper = deflated;
            self.partitions = partitions;
        }
        let next = BoundPair { lower, upper };
        self.changed = next != self.bounds;
        self.bounds = next;
        self.iteration += 1;
        let s0 = self.game.initial().0;
        let current = stopping_gap(&self.bounds.lower[s0], &self.bounds.upper[s0])?;
        if self.best_gap.as_ref().map_or(true, |best| current.value < best.value) {
            self.best_gap = Some(current);
        }
        let gap = self.gap()?;
        Ok(IterationStats {
            iteration: self.iteration,
            gap: gap.value,
            witness: gap.witness,
            lower_pieces: self.bounds.lower.iter().map(DwcSet::piece_count).collect(),
            upper_pieces: self.bounds.upper.iter().map(DwcSet::piece_count).collect(),
            region_counts: self.partitions.iter().map(|p| p.partition.len()).collect(),
            elapsed_ms: self.started.elapsed().as_millis(),
        })
    }

    /// Runs until the gap at the initial state drops below epsilon or the cap is hit.
    pub fn run(mut self, progress: &mut dyn FnMut(&IterationStats)) -> Result<SolveOutcome, SolverError> {
        let mut stats = Vec::new();
        let mut best: Option<(Q, usize)> = None;
        loop {
            if let Some(cap) = self.config.max_iterations {
                if self.iteration >= cap {
                    let gap = self.gap()?;
                    return Ok(self.finish(stats, gap, Status::IterationCap));
                }
            }
            let step = self.step()?;
            progress(&step);
            let gap = step.gap.clone();
            stats.push(step);
            if gap < self.config.epsilon {
                let gap = self.gap()?;
                return Ok(self.finish(stats, gap, Status::Converged));
            }
            if self.config.deflate {
                let improved = best.as_ref().map_or(true, |(value, _)| gap < *value);
                if improved {
                    best = Some((gap, self.iteration));
                } else if self.changed {
                    if let Some((_, at)) = best.as_mut() {
                        *at = self.iteration;
                    }
                }
                let (value, at) = best.clone().expect("set above");
                if self.iteration - at >= STALL_LIMIT {
                    return Err(SolverError::Stalled {
                        iteration: self.iteration,
                        gap: crate::rational::format_rational(&value),
                        bounds: Some(Box::new(self.bounds)),
                    });
                }
            }
        }
    }

    fn finish(self, stats: Vec<IterationStats>, gap: GapBound, status: Status) -> SolveOutcome {
        SolveOutcome {
            bounds: self.bounds,
            stats,
            partitions: self.partitions,
            gap,
            status,
        }
    }
}

/// Runs the solver to completion.
pub fn mo_bvi(
    game: &StochasticGame,
    objective: &Objective,
    config: SolverConfig,
    progress: &mut dyn FnMut(&IterationStats),
) -> Result<SolveOutcome, SolverError> {
    Solver::new(game, objective, config)?.run(progress)
}
