//! Machine-readable solver output.
//!
//! Wall-clock times are left out so that identical runs give identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::game::{game_hash, Objective, StochasticGame};
use crate::geometry::{DwcSet, DwcSetRepr, GeometryError};
use crate::rational::format_rational;
use crate::regions::{Argmin, RegionPartition};
use crate::solver::{BoundPair, MecPartition, SolveOutcome};

fn point_repr(point: &[crate::rational::Q]) -> Vec<String> {
    point.iter().map(format_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateBounds {
    pub state: String,
    pub lower: DwcSetRepr,
    pub upper: DwcSetRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionReport {
    pub index: usize,
    /// Dimension of the region as a set of directions.
    pub dim: usize,
    /// Regions with equal argmin that touch share a class.
    pub class: usize,
    pub vertices: Vec<Vec<String>>,
    /// Per Minimizer state, the optimal action names.
    pub argmin: BTreeMap<String, Vec<String>>,
    /// Open simplices covering the region.
    pub simplices: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionReport {
    pub states: Vec<String>,
    pub regions: Vec<RegionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRow {
    pub iteration: usize,
    pub gap: String,
    pub lower_pieces: usize,
    pub upper_pieces: usize,
    pub regions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierReport {
    pub game_hash: String,
    pub dim: usize,
    pub states: Vec<StateBounds>,
    pub regions: Vec<PartitionReport>,
    pub gap: String,
    /// Direction attaining the gap, if any.
    pub witness: Option<Vec<String>>,
    pub iterations: usize,
    pub converged: bool,
    pub stats: Vec<StatsRow>,
}

fn argmin_names(game: &StochasticGame, argmin: &Argmin) -> BTreeMap<String, Vec<String>> {
    argmin
        .iter()
        .map(|(&state, actions)| {
            let names = actions
                .iter()
                .map(|&action| game.action_name(crate::game::StateActionPair { state, action }).to_string())
                .collect();
            (game.name(state).to_string(), names)
        })
        .collect()
}

/// Regions of one partition with names resolved against the game.
pub fn partition_report(game: &StochasticGame, mec: &MecPartition) -> PartitionReport {
    PartitionReport {
        states: mec.states.iter().map(|&s| game.name(s).to_string()).collect(),
        regions: regions_report(game, &mec.partition),
    }
}

pub fn regions_report(game: &StochasticGame, partition: &RegionPartition) -> Vec<RegionReport> {
    let classes = partition.classes();
    let mut simplices: Vec<Vec<Vec<Vec<String>>>> = vec![Vec::new(); partition.len()];
    for s in partition.simplices() {
        simplices[s.cell].push(s.simplex.vertices().iter().map(|v| point_repr(v)).collect());
    }
    partition
        .regions()
        .into_iter()
        .zip(simplices)
        .map(|(region, simplices)| RegionReport {
            index: region.index,
            dim: region.dim,
            class: classes[region.index],
            vertices: region.vertices.iter().map(|v| point_repr(v)).collect(),
            argmin: argmin_names(game, &region.argmin),
            simplices,
        })
        .collect()
}

impl FrontierReport {
    pub fn new(game: &StochasticGame, objective: &Objective, outcome: &SolveOutcome) -> Self {
        FrontierReport {
            game_hash: game_hash(game, objective),
            dim: objective.dim(),
            states: game
                .state_ids()
                .map(|s| StateBounds {
                    state: game.name(s).to_string(),
                    lower: outcome.bounds.lower[s.0].to_repr(),
                    upper: outcome.bounds.upper[s.0].to_repr(),
                })
                .collect(),
            regions: outcome.partitions.iter().map(|p| partition_report(game, p)).collect(),
            gap: format_rational(&outcome.gap.value),
            witness: outcome.gap.witness.as_ref().map(|d| point_repr(d.components())),
            iterations: outcome.iterations(),
            converged: outcome.converged(),
            stats: outcome
                .stats
                .iter()
                .map(|s| StatsRow {
                    iteration: s.iteration,
                    gap: format_rational(&s.gap),
                    lower_pieces: s.lower_pieces.iter().sum(),
                    upper_pieces: s.upper_pieces.iter().sum(),
                    regions: s.region_counts.iter().sum(),
                })
                .collect(),
        }
    }

    /// Bounds in state order, checked against the game.
    pub fn bounds(&self, game: &StochasticGame) -> Result<BoundPair, ReportError> {
        if self.states.len() != game.num_states() {
            return Err(ReportError::StateCount {
                expected: game.num_states(),
                found: self.states.len(),
            });
        }
        let mut lower = Vec::with_capacity(self.states.len());
        let mut upper = Vec::with_capacity(self.states.len());
        for (entry, id) in self.states.iter().zip(game.state_ids()) {
            if entry.state != game.name(id) {
                return Err(ReportError::StateName(entry.state.clone()));
            }
            lower.push(DwcSet::from_repr(&entry.lower)?);
            upper.push(DwcSet::from_repr(&entry.upper)?);
        }
        Ok(BoundPair { lower, upper })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("report lists {found} states, game has {expected}")]
    StateCount { expected: usize, found: usize },
    #[error("report state `{0}` does not match the game")]
    StateName(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures;
    use crate::rational::ratio;
    use crate::solver::{mo_bvi, SolverConfig};

    #[test]
    fn report_round_trips() {
        let fixture = fixtures::running_example();
        let outcome = mo_bvi(&fixture.game, &fixture.objective, SolverConfig::new(ratio(1, 1000)), &mut |_| {}).unwrap();
        let report = FrontierReport::new(&fixture.game, &fixture.objective, &outcome);
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: FrontierReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.bounds(&fixture.game).unwrap(), outcome.bounds);
        let classes: std::collections::BTreeSet<usize> = report.regions[0].regions.iter().map(|r| r.class).collect();
        assert_eq!(classes.len(), 3);
    }
}
