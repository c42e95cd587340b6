//! Strongly connected components and maximal end components.
//!
//! Owners play no role here: both players' actions are treated alike.

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{StateActionPair, StateId, StochasticGame, SubStructure};

/// SCCs of a graph on `0..adjacency.len()`, sinks first (reverse topological order).
pub fn scc(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // Explicit call stack of (node, next edge position).
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (node, ref mut edge)) = frames.last_mut() {
            if *edge < adjacency[node].len() {
                let next = adjacency[node][*edge];
                *edge += 1;
                if index[next] == usize::MAX {
                    index[next] = counter;
                    low[next] = counter;
                    counter += 1;
                    stack.push(next);
                    on_stack[next] = true;
                    frames.push((next, 0));
                } else if on_stack[next] {
                    low[node] = low[node].min(index[next]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[node]);
            }
            if low[node] == index[node] {
                let mut component = Vec::new();
                loop {
                    let top = stack.pop().expect("component root is on the stack");
                    on_stack[top] = false;
                    component.push(top);
                    if top == node {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// Adjacency of a sub-structure, restricted to its own states.
fn local_graph(
    game: &StochasticGame,
    states: &[StateId],
    actions: &BTreeMap<StateId, Vec<usize>>,
) -> Vec<Vec<usize>> {
    let position: BTreeMap<StateId, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    states
        .iter()
        .map(|s| {
            let mut succ: Vec<usize> = actions
                .get(s)
                .into_iter()
                .flatten()
                .flat_map(|&a| game.actions(*s)[a].successors())
                .filter_map(|t| position.get(&t).copied())
                .collect();
            succ.sort_unstable();
            succ.dedup();
            succ
        })
        .collect()
}

/// SCCs of the sub-structure's state graph, as state sets in reverse topological order.
pub fn structure_scc(game: &StochasticGame, structure: &SubStructure) -> Vec<Vec<StateId>> {
    let states: Vec<StateId> = structure.states.iter().copied().collect();
    let graph = local_graph(game, &states, &structure.actions);
    scc(&graph)
        .into_iter()
        .map(|c| c.into_iter().map(|i| states[i]).collect())
        .collect()
}

/// Whether `(states, actions)` is an end component: no action leaves and the graph is strongly connected.
pub fn is_ec(game: &StochasticGame, states: &BTreeSet<StateId>, actions: &[StateActionPair]) -> bool {
    if states.is_empty() {
        return false;
    }
    let mut per_state: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
    for pair in actions {
        if !states.contains(&pair.state) || pair.action >= game.actions(pair.state).len() {
            return false;
        }
        if game.leaves(*pair, states) {
            return false;
        }
        per_state.entry(pair.state).or_default().push(pair.action);
    }
    if per_state.len() != states.len() {
        return false;
    }
    let list: Vec<StateId> = states.iter().copied().collect();
    scc(&local_graph(game, &list, &per_state)).len() == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mec {
    pub states: BTreeSet<StateId>,
    pub actions: Vec<StateActionPair>,
}

impl Mec {
    /// A single absorbing state.
    pub fn is_trivial(&self, game: &StochasticGame) -> bool {
        self.states.len() == 1 && self.states.iter().all(|&s| game.is_absorbing(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MecDecomposition {
    /// Sorted by smallest state.
    pub mecs: Vec<Mec>,
    /// Indices into `mecs`, sources first.
    pub topological_order: Vec<usize>,
    /// `reaches[i]` lists the other MECs reachable from MEC `i` within the analyzed structure.
    pub reaches: Vec<BTreeSet<usize>>,
}

impl MecDecomposition {
    /// MECs that cannot reach any other MEC, smallest state id first.
    pub fn bottom(&self) -> Vec<usize> {
        (0..self.mecs.len()).filter(|&i| self.reaches[i].is_empty()).collect()
    }
}

pub fn mec_decomposition(game: &StochasticGame, structure: &SubStructure) -> MecDecomposition {
    let mut actions: BTreeMap<StateId, Vec<usize>> = structure.actions.clone();
    actions.retain(|s, acts| structure.states.contains(s) && !acts.is_empty());
    let mut states: Vec<StateId> = actions.keys().copied().collect();
    loop {
        let graph = local_graph(game, &states, &actions);
        let components = scc(&graph);
        let mut component_of: BTreeMap<StateId, usize> = BTreeMap::new();
        for (c, members) in components.iter().enumerate() {
            for &i in members {
                component_of.insert(states[i], c);
            }
        }
        let mut changed = false;
        for (s, acts) in actions.iter_mut() {
            let home = component_of[s];
            let before = acts.len();
            acts.retain(|&a| {
                game.actions(*s)[a]
                    .successors()
                    .all(|t| component_of.get(&t) == Some(&home))
            });
            changed |= acts.len() != before;
        }
        let before = actions.len();
        actions.retain(|_, acts| !acts.is_empty());
        changed |= actions.len() != before;
        states = actions.keys().copied().collect();
        if !changed {
            let mut mecs: Vec<Mec> = components
                .iter()
                .map(|members| {
                    let set: BTreeSet<StateId> = members.iter().map(|&i| states[i]).collect();
                    let pairs = set
                        .iter()
                        .flat_map(|&state| {
                            actions[&state]
                                .iter()
                                .map(move |&action| StateActionPair { state, action })
                        })
                        .collect();
                    Mec {
                        states: set,
                        actions: pairs,
                    }
                })
                .collect();
            mecs.sort_by_key(|m| *m.states.iter().next().expect("MECs are nonempty"));
            let reaches = mec_reachability(game, structure, &mecs);
            let topological_order = topological(&reaches);
            return MecDecomposition {
                mecs,
                topological_order,
                reaches,
            };
        }
    }
}

fn mec_reachability(game: &StochasticGame, structure: &SubStructure, mecs: &[Mec]) -> Vec<BTreeSet<usize>> {
    let states: Vec<StateId> = structure.states.iter().copied().collect();
    let position: BTreeMap<StateId, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let graph = local_graph(game, &states, &structure.actions);
    let owner: BTreeMap<usize, usize> = mecs
        .iter()
        .enumerate()
        .flat_map(|(m, mec)| mec.states.iter().map(|s| (position[s], m)).collect::<Vec<_>>())
        .collect();
    mecs.iter()
        .enumerate()
        .map(|(m, mec)| {
            let mut seen = vec![false; states.len()];
            let mut frontier: Vec<usize> = mec.states.iter().map(|s| position[s]).collect();
            for &i in &frontier {
                seen[i] = true;
            }
            let mut reached = BTreeSet::new();
            while let Some(i) = frontier.pop() {
                for &j in &graph[i] {
                    if !seen[j] {
                        seen[j] = true;
                        frontier.push(j);
                    }
                    if let Some(&other) = owner.get(&j) {
                        if other != m {
                            reached.insert(other);
                        }
                    }
                }
            }
            reached
        })
        .collect()
}

/// Kahn's algorithm, smallest index first among ready MECs.
fn topological(reaches: &[BTreeSet<usize>]) -> Vec<usize> {
    let n = reaches.len();
    let mut indegree = vec![0usize; n];
    for targets in reaches {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&next) = ready.iter().next() {
        ready.remove(&next);
        order.push(next);
        for &t in &reaches[next] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.insert(t);
            }
        }
    }
    order
}
