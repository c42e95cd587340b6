//! Hand-built games with known answers.
//!
//! Every fixture goes through [`GameDocument::into_game`], so it passes the same
//! validation as a game read from disk. Expected values carry a note saying how
//! they were obtained.

use std::collections::BTreeMap;

use crate::game::{ActionEntry, Edge, GameDocument, Objective, Owner, StateEntry, StochasticGame};
use crate::geometry::DwcSet;
use crate::rational::{format_rational, ratio, Q};
use crate::regions::ActionValues;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub game: StochasticGame,
    pub objective: Objective,
    pub note: &'static str,
}

/// An expected value and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected<T> {
    pub value: T,
    pub note: &'static str,
}

/// Small builder over the document format.
struct Draft {
    doc: GameDocument,
}

impl Draft {
    fn new(initial: &str) -> Self {
        Draft {
            doc: GameDocument {
                states: Vec::new(),
                initial: initial.into(),
                actions: Vec::new(),
                targets: Vec::new(),
            },
        }
    }

    fn state(mut self, id: &str, owner: Owner) -> Self {
        self.doc.states.push(StateEntry { id: id.into(), owner });
        self
    }

    fn action(mut self, state: &str, action: &str, dist: &[(&str, Q)]) -> Self {
        self.doc.actions.push(ActionEntry {
            state: state.into(),
            action: action.into(),
            dist: dist
                .iter()
                .map(|(to, p)| Edge {
                    to: (*to).into(),
                    p: format_rational(p),
                })
                .collect(),
        });
        self
    }

    fn sink(self, id: &str) -> Self {
        self.state(id, Owner::Max).action(id, "stay", &[(id, ratio(1, 1))])
    }

    fn targets(mut self, sets: &[&[&str]]) -> Self {
        self.doc.targets = sets
            .iter()
            .map(|t| t.iter().map(|s| (*s).to_string()).collect())
            .collect();
        self
    }

    fn finish(self, name: &'static str, note: &'static str) -> Fixture {
        let (game, objective) = self.doc.into_game().expect("fixtures are well formed");
        Fixture {
            name,
            game,
            objective,
            note,
        }
    }
}

fn two_target_sinks(draft: Draft) -> Draft {
    draft.sink("t12").sink("t1").sink("t2").sink("t0")
}

fn alpha_dist() -> Vec<(&'static str, Q)> {
    vec![("t12", ratio(1, 2)), ("t2", ratio(2, 5)), ("t0", ratio(1, 10))]
}

fn beta_dist() -> Vec<(&'static str, Q)> {
    vec![("t12", ratio(1, 2)), ("t1", ratio(2, 5)), ("t0", ratio(1, 10))]
}

fn running_draft(p_owner: Owner) -> Draft {
    let draft = Draft::new("p")
        .state("p", p_owner)
        .state("q", Owner::Max)
        .state("r", Owner::Max)
        .state("gamma", Owner::Max)
        .action("p", "a", &[("q", ratio(1, 1))])
        .action("p", "c", &[("r", ratio(1, 1))])
        .action("p", "e", &[("gamma", ratio(1, 1))])
        .action("q", "b", &[("p", ratio(1, 1))])
        .action("q", "f", &alpha_dist())
        .action("r", "d", &[("p", ratio(1, 1))])
        .action("r", "g", &beta_dist())
        .action("gamma", "f", &alpha_dist())
        .action("gamma", "g", &beta_dist());
    two_target_sinks(draft).targets(&[&["t12", "t1"], &["t12", "t2"]])
}

/// Minimizer `p` can move to `q` or `r`, which may return to `p` or leave
/// through the gadgets with values `(1/2, 9/10)` and `(9/10, 1/2)`; action `e`
/// leads to a Maximizer state choosing between both gadgets.
pub fn running_example() -> Fixture {
    running_draft(Owner::Min).finish(
        "running_example",
        "gadget values follow from the sink probabilities by hand",
    )
}

/// The running example with `p` owned by the Maximizer: every cycle is good for the Maximizer.
pub fn all_max_example() -> Fixture {
    running_draft(Owner::Max).finish("all_max_example", "same gadgets as the running example")
}

/// Value of `p` in the running example: `dwc{(1/2, 1/2)}`.
pub fn running_example_value() -> Expected<DwcSet> {
    Expected {
        value: DwcSet::point(&[ratio(1, 2), ratio(1, 2)]),
        note: "intersection of the two gadget boxes; cross-checked by the stopping-game oracle on the gadgets",
    }
}

/// Value of `p` when the Maximizer owns it: `conv` of both gadget boxes.
pub fn all_max_value() -> Expected<DwcSet> {
    Expected {
        value: DwcSet::from_generators(2, &[vec![vec![ratio(1, 2), ratio(9, 10)], vec![ratio(9, 10), ratio(1, 2)]]])
            .expect("valid points"),
        note: "the Maximizer reaches either gadget and may randomize",
    }
}

/// The three exit values used by the three-target fixtures.
pub fn three_target_points() -> [Vec<Q>; 3] {
    [
        vec![ratio(1, 1), ratio(0, 1), ratio(1, 2)],
        vec![ratio(1, 2), ratio(0, 1), ratio(1, 1)],
        vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)],
    ]
}

/// One Minimizer state comparing the three exit values, as a region scope.
pub fn three_target_scope() -> ActionValues {
    let values = three_target_points().iter().map(|p| DwcSet::point(p)).collect();
    let mut scope = BTreeMap::new();
    scope.insert(crate::game::StateId(0), values);
    scope
}

/// Minimizer `s` picks one of three gadgets, or a loop through a Maximizer state
/// that can come back or take the third gadget's value.
pub fn three_targets() -> Fixture {
    let half = ratio(1, 2);
    Draft::new("s")
        .state("s", Owner::Min)
        .state("m", Owner::Max)
        .action("s", "x1", &[("u13", half.clone()), ("u1", half.clone())])
        .action("s", "x2", &[("u13", half.clone()), ("u3", half)])
        .action("s", "x3", &[("u2", ratio(1, 1))])
        .action("s", "loop", &[("m", ratio(1, 1))])
        .action("m", "back", &[("s", ratio(1, 1))])
        .action("m", "out", &[("u2", ratio(1, 1))])
        .sink("u13")
        .sink("u1")
        .sink("u3")
        .sink("u2")
        .targets(&[&["u13", "u1"], &["u2"], &["u13", "u3"]])
        .finish("three_targets", "gadget values read off the sink probabilities")
}

/// Minimizer `s` sends play to one of three Maximizer states, each of which can
/// return to `s` or leave with one of the three-target values. All actions tie
/// at value zero on every interior direction, yet each single exit is strictly
/// better for the Maximizer than their intersection.
pub fn tie_stall_example() -> Fixture {
    let half = ratio(1, 2);
    Draft::new("s")
        .state("s", Owner::Min)
        .state("m1", Owner::Max)
        .state("m2", Owner::Max)
        .state("m3", Owner::Max)
        .action("s", "x1", &[("m1", ratio(1, 1))])
        .action("s", "x2", &[("m2", ratio(1, 1))])
        .action("s", "x3", &[("m3", ratio(1, 1))])
        .action("m1", "back", &[("s", ratio(1, 1))])
        .action("m1", "out", &[("u13", half.clone()), ("u1", half.clone())])
        .action("m2", "back", &[("s", ratio(1, 1))])
        .action("m2", "out", &[("u13", half.clone()), ("u3", half)])
        .action("m3", "back", &[("s", ratio(1, 1))])
        .action("m3", "out", &[("u2", ratio(1, 1))])
        .sink("u13")
        .sink("u1")
        .sink("u3")
        .sink("u2")
        .targets(&[&["u13", "u1"], &["u2"], &["u13", "u3"]])
        .finish("tie_stall_example", "true value of s is {0}: the Minimizer picks the gadget per direction")
}

/// Exit to the target with probability `value`.
fn exit(value: Q) -> Vec<(&'static str, Q)> {
    let rest = ratio(1, 1) - &value;
    vec![("win", value), ("lose", rest)]
}

/// Single-target game whose upper bound has a bloated fixpoint of the plain
/// operator spread over a chain of end components.
pub fn delayed_exit_example() -> Fixture {
    let draft = Draft::new("n0")
        .state("n0", Owner::Min)
        .state("n1", Owner::Min)
        .state("n2", Owner::Max)
        .state("n3", Owner::Max)
        .state("n4", Owner::Max)
        .state("n5", Owner::Min)
        .state("n6", Owner::Min)
        .state("n7u", Owner::Min)
        .state("n8u", Owner::Max)
        .state("n7d", Owner::Max)
        .action("n0", "go", &[("lose", ratio(1, 2)), ("n1", ratio(1, 2))])
        .action("n1", "go", &[("n2", ratio(1, 1))])
        .action("n2", "go", &[("n3", ratio(1, 1))])
        .action("n3", "back", &[("n2", ratio(1, 1))])
        .action("n3", "on", &[("n4", ratio(1, 1))])
        .action("n4", "exit", &exit(ratio(1, 5)))
        .action("n4", "on", &[("n5", ratio(1, 1))])
        .action("n5", "exit", &exit(ratio(4, 5)))
        .action("n5", "back", &[("n4", ratio(1, 1))])
        .action("n5", "on", &[("n6", ratio(1, 1))])
        .action("n6", "up", &[("n8u", ratio(1, 1))])
        .action("n6", "down", &[("n7d", ratio(1, 1))])
        .action("n7u", "on", &[("n8u", ratio(1, 1))])
        .action("n7u", "exit", &exit(ratio(1, 1)))
        .action("n8u", "back", &[("n7u", ratio(1, 1))])
        .action("n8u", "exit", &exit(ratio(2, 5)))
        .action("n8u", "return", &[("n5", ratio(1, 1))])
        .action("n7d", "return", &[("n5", ratio(1, 1))])
        .action("n7d", "stay", &[("n7d", ratio(1, 1))])
        .action("n7d", "exit", &exit(ratio(2, 5)))
        .sink("win")
        .sink("lose")
        .targets(&[&["win"]]);
    draft.finish(
        "delayed_exit_example",
        "topology reconstructed from annotated values; values certified by strategy enumeration",
    )
}

/// State name, true value and the bloated upper bound that the plain operator keeps fixed.
pub fn delayed_exit_values() -> Expected<Vec<(&'static str, Q, Q)>> {
    let rows = [
        ("n0", (1, 10), (2, 5)),
        ("n1", (1, 5), (4, 5)),
        ("n2", (1, 5), (4, 5)),
        ("n3", (1, 5), (4, 5)),
        ("n4", (1, 5), (4, 5)),
        ("n5", (1, 5), (4, 5)),
        ("n6", (2, 5), (1, 1)),
        ("n7u", (2, 5), (1, 1)),
        ("n8u", (2, 5), (1, 1)),
        ("n7d", (2, 5), (1, 1)),
        ("win", (1, 1), (1, 1)),
        ("lose", (0, 1), (0, 1)),
    ];
    Expected {
        value: rows
            .iter()
            .map(|&(name, (vn, vd), (un, ud))| (name, ratio(vn, vd), ratio(un, ud)))
            .collect(),
        note: "values by strategy enumeration; upper bound checked to be a fixpoint of the plain operator",
    }
}

/// Single-target version of the running example with exit values `gamma`, `alpha`, `beta`.
pub fn single_dim_case(name: &'static str, gamma: Q, alpha: Q, beta: Q) -> Fixture {
    Draft::new("p")
        .state("p", Owner::Min)
        .state("q", Owner::Max)
        .state("r", Owner::Max)
        .action("p", "a", &[("q", ratio(1, 1))])
        .action("p", "c", &[("r", ratio(1, 1))])
        .action("p", "e", &exit(gamma))
        .action("q", "b", &[("p", ratio(1, 1))])
        .action("q", "f", &exit(alpha))
        .action("r", "d", &[("p", ratio(1, 1))])
        .action("r", "g", &exit(beta))
        .sink("win")
        .sink("lose")
        .targets(&[&["win"]])
        .finish(name, "exit values chosen per case")
}

/// `gamma` below both gadget values: the direct exit is optimal and no deflation is needed.
pub fn single_dim_case_one() -> (Fixture, Expected<[Q; 3]>) {
    (
        single_dim_case("single_dim_case_one", ratio(1, 10), ratio(1, 2), ratio(9, 10)),
        Expected {
            value: [ratio(1, 10), ratio(1, 2), ratio(9, 10)],
            note: "by strategy enumeration",
        },
    )
}

/// `gamma` above both: the Minimizer cycles towards the weaker gadget.
pub fn single_dim_case_two() -> (Fixture, Expected<[Q; 3]>) {
    (
        single_dim_case("single_dim_case_two", ratio(9, 10), ratio(4, 5), ratio(1, 2)),
        Expected {
            value: [ratio(1, 2), ratio(4, 5), ratio(1, 2)],
            note: "by strategy enumeration",
        },
    )
}

/// Every fixture with a game.
pub fn all() -> Vec<Fixture> {
    vec![
        running_example(),
        all_max_example(),
        three_targets(),
        tie_stall_example(),
        delayed_exit_example(),
        single_dim_case_one().0,
        single_dim_case_two().0,
    ]
}
