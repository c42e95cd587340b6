//! Turn-based stochastic games with multi-target reachability objectives.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An action, identified by its state and its position in that state's action list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateActionPair {
    pub state: StateId,
    pub action: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Max,
    Min,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid game document: {0}")]
    Syntax(String),
    #[error("game has no states")]
    NoStates,
    #[error("duplicate state id `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate action `{action}` at state `{state}`")]
    DuplicateAction { state: String, action: String },
    #[error("unknown action `{action}` at state `{state}`")]
    UnknownAction { state: String, action: String },
    #[error("probability `{value}` of action `{action}` at `{state}` is not a rational in [0,1]")]
    BadProbability {
        state: String,
        action: String,
        value: String,
    },
    #[error("distribution sum != 1 for action `{action}` at `{state}` (sum {sum})")]
    DistributionSum {
        state: String,
        action: String,
        sum: String,
    },
    #[error("state `{0}` has no available actions")]
    EmptyAvailable(String),
    #[error("objective needs at least one target set")]
    NoTargets,
    #[error("state `{0}` is outside the restricted set")]
    OutsideRestriction(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    /// Successors with positive probability, sorted by state.
    pub dist: Vec<(StateId, Q)>,
}

impl Action {
    pub fn successors(&self) -> impl Iterator<Item = StateId> + '_ {
        self.dist.iter().map(|(s, _)| *s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub owner: Owner,
    pub actions: Vec<Action>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticGame {
    states: Vec<State>,
    initial: StateId,
    index: HashMap<String, StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    targets: Vec<BTreeSet<StateId>>,
}

impl Objective {
    pub fn new(targets: Vec<BTreeSet<StateId>>) -> Result<Self, GameError> {
        if targets.is_empty() {
            return Err(GameError::NoTargets);
        }
        Ok(Objective { targets })
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[BTreeSet<StateId>] {
        &self.targets
    }

    /// Component `i` is 1 when `state` belongs to target `i`.
    pub fn indicator(&self, state: StateId) -> Vec<Q> {
        self.targets
            .iter()
            .map(|t| if t.contains(&state) { Q::one() } else { Q::zero() })
            .collect()
    }
}

/// The actions kept per state for graph analysis on a subset of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubStructure {
    pub states: BTreeSet<StateId>,
    pub actions: BTreeMap<StateId, Vec<usize>>,
}

impl SubStructure {
    pub fn pairs(&self) -> impl Iterator<Item = StateActionPair> + '_ {
        self.actions.iter().flat_map(|(&state, acts)| {
            acts.iter().map(move |&action| StateActionPair { state, action })
        })
    }
}

impl StochasticGame {
    pub fn new(states: Vec<State>, initial: StateId) -> Result<Self, GameError> {
        if states.is_empty() {
            return Err(GameError::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.name.clone(), StateId(i)).is_some() {
                return Err(GameError::DuplicateState(s.name.clone()));
            }
        }
        if initial.0 >= states.len() {
            return Err(GameError::UnknownState(initial.to_string()));
        }
        for s in &states {
            if s.actions.is_empty() {
                return Err(GameError::EmptyAvailable(s.name.clone()));
            }
            let mut names = BTreeSet::new();
            for a in &s.actions {
                if !names.insert(a.name.as_str()) {
                    return Err(GameError::DuplicateAction {
                        state: s.name.clone(),
                        action: a.name.clone(),
                    });
                }
                let mut sum = Q::zero();
                for (to, p) in &a.dist {
                    if to.0 >= states.len() {
                        return Err(GameError::UnknownState(to.to_string()));
                    }
                    if p.is_negative() || p > &Q::one() {
                        return Err(GameError::BadProbability {
                            state: s.name.clone(),
                            action: a.name.clone(),
                            value: format_rational(p),
                        });
                    }
                    sum += p;
                }
                if !sum.is_one() {
                    return Err(GameError::DistributionSum {
                        state: s.name.clone(),
                        action: a.name.clone(),
                        sum: format_rational(&sum),
                    });
                }
            }
        }
        let states = states
            .into_iter()
            .map(|mut s| {
                for a in &mut s.actions {
                    a.dist = normalize_dist(std::mem::take(&mut a.dist));
                }
                s
            })
            .collect();
        Ok(StochasticGame {
            states,
            initial,
            index,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &State {
        &self.states[id.0]
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn owner(&self, id: StateId) -> Owner {
        self.states[id.0].owner
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.states[id.0].name
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn actions(&self, id: StateId) -> &[Action] {
        &self.states[id.0].actions
    }

    pub fn action(&self, pair: StateActionPair) -> &Action {
        &self.states[pair.state.0].actions[pair.action]
    }

    pub fn action_name(&self, pair: StateActionPair) -> &str {
        &self.action(pair).name
    }

    pub fn lookup_action(&self, state: StateId, name: &str) -> Option<StateActionPair> {
        self.actions(state)
            .iter()
            .position(|a| a.name == name)
            .map(|action| StateActionPair { state, action })
    }

    /// True when every action of the state is a self-loop.
    pub fn is_absorbing(&self, id: StateId) -> bool {
        self.actions(id)
            .iter()
            .all(|a| a.dist.len() == 1 && a.dist[0].0 == id)
    }

    /// Whether the action has a successor outside `set`.
    pub fn leaves(&self, pair: StateActionPair, set: &BTreeSet<StateId>) -> bool {
        self.action(pair).successors().any(|t| !set.contains(&t))
    }

    /// All pairs `(s, a)` with `s` in `set` and some successor outside it.
    pub fn exits(&self, set: &BTreeSet<StateId>) -> Vec<StateActionPair> {
        set.iter()
            .flat_map(|&state| {
                (0..self.actions(state).len()).map(move |action| StateActionPair { state, action })
            })
            .filter(|&pair| self.leaves(pair, set))
            .collect()
    }

    /// The exits owned by the Maximizer.
    pub fn exits_max(&self, set: &BTreeSet<StateId>) -> Vec<StateActionPair> {
        self.exits(set)
            .into_iter()
            .filter(|p| self.owner(p.state) == Owner::Max)
            .collect()
    }

    pub fn full_structure(&self) -> SubStructure {
        SubStructure {
            states: self.state_ids().collect(),
            actions: self
                .state_ids()
                .map(|s| (s, (0..self.actions(s).len()).collect()))
                .collect(),
        }
    }

    /// Sub-structure over `set`; states absent from `available` keep all their actions.
    pub fn restrict(
        &self,
        set: &BTreeSet<StateId>,
        available: &BTreeMap<StateId, Vec<usize>>,
    ) -> Result<SubStructure, GameError> {
        for (&state, acts) in available {
            if !set.contains(&state) {
                return Err(GameError::OutsideRestriction(self.name(state).to_string()));
            }
            if acts.is_empty() {
                return Err(GameError::EmptyAvailable(self.name(state).to_string()));
            }
            if let Some(&bad) = acts.iter().find(|&&a| a >= self.actions(state).len()) {
                return Err(GameError::UnknownAction {
                    state: self.name(state).to_string(),
                    action: bad.to_string(),
                });
            }
        }
        let actions = set
            .iter()
            .map(|&s| {
                let acts = available
                    .get(&s)
                    .cloned()
                    .unwrap_or_else(|| (0..self.actions(s).len()).collect());
                (s, acts)
            })
            .collect();
        Ok(SubStructure {
            states: set.clone(),
            actions,
        })
    }
}

fn normalize_dist(dist: Vec<(StateId, Q)>) -> Vec<(StateId, Q)> {
    let mut merged: BTreeMap<StateId, Q> = BTreeMap::new();
    for (to, p) in dist {
        *merged.entry(to).or_insert_with(Q::zero) += p;
    }
    merged.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// JSON document for a game and its objective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub states: Vec<StateEntry>,
    pub initial: String,
    pub actions: Vec<ActionEntry>,
    pub targets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub id: String,
    pub owner: Owner,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub state: String,
    pub action: String,
    pub dist: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub to: String,
    pub p: String,
}

impl GameDocument {
    pub fn into_game(self) -> Result<(StochasticGame, Objective), GameError> {
        let mut index: HashMap<&str, StateId> = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.id.as_str(), StateId(i)).is_some() {
                return Err(GameError::DuplicateState(s.id.clone()));
            }
        }
        let resolve = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GameError::UnknownState(name.to_string()))
        };
        let mut states: Vec<State> = self
            .states
            .iter()
            .map(|s| State {
                name: s.id.clone(),
                owner: s.owner,
                actions: Vec::new(),
            })
            .collect();
        for entry in &self.actions {
            let from = resolve(&entry.state)?;
            let mut dist = Vec::with_capacity(entry.dist.len());
            for edge in &entry.dist {
                let to = resolve(&edge.to)?;
                let p = parse_rational(&edge.p).map_err(|_| GameError::BadProbability {
                    state: entry.state.clone(),
                    action: entry.action.clone(),
                    value: edge.p.clone(),
                })?;
                dist.push((to, p));
            }
            states[from.0].actions.push(Action {
                name: entry.action.clone(),
                dist,
            });
        }
        let initial = resolve(&self.initial)?;
        let targets = self
            .targets
            .iter()
            .map(|t| t.iter().map(|name| resolve(name)).collect::<Result<BTreeSet<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let game = StochasticGame::new(states, initial)?;
        let objective = Objective::new(targets)?;
        Ok((game, objective))
    }

    /// Canonical document: states and actions in internal order, successors sorted.
    pub fn from_game(game: &StochasticGame, objective: &Objective) -> Self {
        GameDocument {
            states: game
                .states
                .iter()
                .map(|s| StateEntry {
                    id: s.name.clone(),
                    owner: s.owner,
                })
                .collect(),
            initial: game.name(game.initial).to_string(),
            actions: game
                .states
                .iter()
                .flat_map(|s| {
                    s.actions.iter().map(move |a| ActionEntry {
                        state: s.name.clone(),
                        action: a.name.clone(),
                        dist: a
                            .dist
                            .iter()
                            .map(|(to, p)| Edge {
                                to: game.name(*to).to_string(),
                                p: format_rational(p),
                            })
                            .collect(),
                    })
                })
                .collect(),
            targets: objective
                .targets
                .iter()
                .map(|t| t.iter().map(|s| game.name(*s).to_string()).collect())
                .collect(),
        }
    }
}

pub fn parse_game(text: &str) -> Result<(StochasticGame, Objective), GameError> {
    let doc: GameDocument =
        serde_json::from_str(text).map_err(|e| GameError::Syntax(e.to_string()))?;
    doc.into_game()
}

pub fn serialize_game(game: &StochasticGame, objective: &Objective) -> String {
    let doc = GameDocument::from_game(game, objective);
    serde_json::to_string_pretty(&doc).expect("game documents always serialize")
}

/// SHA-256 of the canonical compact JSON form, as lowercase hex.
pub fn game_hash(game: &StochasticGame, objective: &Objective) -> String {
    let doc = GameDocument::from_game(game, objective);
    let bytes = serde_json::to_vec(&doc).expect("game documents always serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const LOOP: &str = r#"{
        "states": [{"id": "s", "owner": "max"}],
        "initial": "s",
        "actions": [{"state": "s", "action": "stay", "dist": [{"to": "s", "p": "1"}]}],
        "targets": [["s"]]
    }"#;

    #[test]
    fn minimal_game_parses() {
        let (game, objective) = parse_game(LOOP).unwrap();
        assert_eq!(game.num_states(), 1);
        assert_eq!(objective.dim(), 1);
        assert!(game.is_absorbing(StateId(0)));
        assert!(game.exits(&[StateId(0)].into_iter().collect()).is_empty());
    }

    #[test]
    fn bad_sum_is_rejected() {
        let text = LOOP.replace(r#"[{"to": "s", "p": "1"}]"#, r#"[{"to": "s", "p": "1/2"}, {"to": "s", "p": "1/3"}]"#);
        assert!(matches!(parse_game(&text), Err(GameError::DistributionSum { .. })));
    }

    #[test]
    fn unknown_successor_is_rejected() {
        let text = LOOP.replace(r#""to": "s""#, r#""to": "nowhere""#);
        assert_eq!(parse_game(&text), Err(GameError::UnknownState("nowhere".into())));
    }

    #[test]
    fn empty_available_set_is_rejected() {
        let text = r#"{"states": [{"id": "s", "owner": "min"}], "initial": "s", "actions": [], "targets": [[]]}"#;
        assert_eq!(parse_game(text), Err(GameError::EmptyAvailable("s".into())));
    }

    #[test]
    fn scientific_probability_is_rejected() {
        let text = LOOP.replace(r#""p": "1""#, r#""p": "1e0""#);
        assert!(matches!(parse_game(&text), Err(GameError::BadProbability { .. })));
    }

    #[test]
    fn decimal_probabilities_are_exact() {
        let text = LOOP.replace(
            r#"[{"to": "s", "p": "1"}]"#,
            r#"[{"to": "s", "p": "0.3"}, {"to": "s", "p": "0.7"}]"#,
        );
        let (game, _) = parse_game(&text).unwrap();
        assert_eq!(game.actions(StateId(0))[0].dist, vec![(StateId(0), ratio(1, 1))]);
    }

    #[test]
    fn indicator_vectors() {
        let objective = Objective::new(vec![
            [StateId(0), StateId(2)].into_iter().collect(),
            [StateId(2)].into_iter().collect(),
        ])
        .unwrap();
        assert_eq!(objective.indicator(StateId(0)), vec![ratio(1, 1), ratio(0, 1)]);
        assert_eq!(objective.indicator(StateId(1)), vec![ratio(0, 1), ratio(0, 1)]);
        assert_eq!(objective.indicator(StateId(2)), vec![ratio(1, 1), ratio(1, 1)]);
    }

    #[test]
    fn round_trip_is_identity_on_canonical_form() {
        let (game, objective) = parse_game(LOOP).unwrap();
        let text = serialize_game(&game, &objective);
        let (again, objective_again) = parse_game(&text).unwrap();
        assert_eq!(again, game);
        assert_eq!(objective_again, objective);
        assert_eq!(serialize_game(&again, &objective_again), text);
    }

    #[test]
    fn restriction_rejects_foreign_and_empty_sets() {
        let (game, _) = parse_game(LOOP).unwrap();
        let set: BTreeSet<StateId> = [StateId(0)].into_iter().collect();
        let empty: BTreeMap<StateId, Vec<usize>> = [(StateId(0), vec![])].into_iter().collect();
        assert!(game.restrict(&set, &empty).is_err());
        let identity = game.restrict(&set, &BTreeMap::new()).unwrap();
        assert_eq!(identity, game.full_structure());
    }
}
