use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::cfa::{Item, Slot};
use crate::syntax::{canonicalize, BraneAction, CanonicalProcess, CanonicalSystem, SystemTerm};

use super::mi::{MembraneCapExceeded, MiRegistry};
use super::step::{absorb, step, Redex};

pub const DEFAULT_STATE_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    pub depth: usize,
    pub unfold_budget: usize,
    pub state_cap: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            depth: 4,
            unfold_budget: 2,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("exploration exceeded the state cap of {cap}")]
    StateCap { cap: usize },
    #[error(transparent)]
    MembraneCap(#[from] MembraneCapExceeded),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub src: usize,
    pub redex: Redex,
    pub dst: usize,
}

/// A bounded reachable-state graph. States are indexed in discovery order;
/// state 0 is the initial one.
#[derive(Clone, Debug)]
pub struct TransitionSystem {
    pub states: Vec<CanonicalSystem>,
    pub edges: Vec<Edge>,
    /// BFS distance of each state from the initial one.
    pub distance: Vec<usize>,
    /// Set when the depth bound or the unfolding budget cut a branch.
    pub truncated: bool,
    pub registry: MiRegistry,
}

impl TransitionSystem {
    pub fn initial(&self) -> &CanonicalSystem {
        &self.states[0]
    }

    pub fn index_of(&self, state: &CanonicalSystem) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    pub fn successors(&self, src: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.src == src)
    }
}

pub fn explore(term: &SystemTerm, depth: usize, unfold_budget: usize) -> Result<TransitionSystem, ExploreError> {
    let cfg = ExploreConfig {
        depth,
        unfold_budget,
        ..ExploreConfig::default()
    };
    explore_with(term, &cfg, MiRegistry::new())
}

/// Breadth-first exploration from `canonicalize(term)`, sharing `registry`
/// across all branches.
pub fn explore_with(
    term: &SystemTerm,
    cfg: &ExploreConfig,
    mut registry: MiRegistry,
) -> Result<TransitionSystem, ExploreError> {
    let initial = absorb(&canonicalize(term));
    let mut index: BTreeMap<CanonicalSystem, usize> = BTreeMap::new();
    let mut states = vec![initial.clone()];
    let mut distance = vec![0];
    index.insert(initial, 0);
    let mut edges = BTreeSet::new();
    let mut truncated = false;
    let mut queue = VecDeque::from([0usize]);

    while let Some(src) = queue.pop_front() {
        let succ = step(&states[src], &mut registry, cfg.unfold_budget)?;
        truncated |= succ.budget_hit;
        if distance[src] >= cfg.depth {
            truncated |= !succ.moves.is_empty();
            continue;
        }
        for (redex, next) in succ.moves {
            let dst = match index.get(&next) {
                Some(&i) => i,
                None => {
                    if states.len() >= cfg.state_cap {
                        return Err(ExploreError::StateCap { cap: cfg.state_cap });
                    }
                    let i = states.len();
                    index.insert(next.clone(), i);
                    states.push(next);
                    distance.push(distance[src] + 1);
                    queue.push_back(i);
                    i
                }
            };
            edges.insert(Edge { src, redex, dst });
        }
    }

    Ok(TransitionSystem {
        states,
        edges: edges.into_iter().collect(),
        distance,
        truncated,
        registry,
    })
}

pub(crate) fn process_actions(p: &CanonicalProcess, out: &mut BTreeSet<BraneAction>) {
    for prefix in p.parts() {
        out.insert(prefix.action.clone());
        process_actions(&prefix.cont, out);
    }
}

/// The concrete facts of one state: which membranes sit in which slot and
/// which actions their processes hold. Replicated membranes count as present.
pub fn state_containments(state: &CanonicalSystem) -> BTreeSet<(Slot, Item)> {
    fn walk(sys: &CanonicalSystem, ctx: &Slot, out: &mut BTreeSet<(Slot, Item)>) {
        for c in sys.parts() {
            let m = c.membrane();
            out.insert((ctx.clone(), Item::Membrane(m.label.clone())));
            let inner = ctx.child(&m.label);
            let mut acts = BTreeSet::new();
            process_actions(&m.process, &mut acts);
            out.extend(acts.into_iter().map(|a| (inner.clone(), Item::Action(a))));
            walk(&m.content, &inner, out);
        }
    }
    let mut out = BTreeSet::new();
    walk(state, &Slot::top(), &mut out);
    out
}

pub fn dynamic_containments(ts: &TransitionSystem) -> BTreeSet<(Slot, Item)> {
    ts.states.iter().flat_map(state_containments).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Rule;
    use crate::syntax::{parse, MembraneId};

    #[test]
    fn depth_zero_is_a_single_state() {
        let t = parse("mate(n)<>@a || comate(n)<>@b").unwrap();
        let ts = explore(&t, 0, 2).unwrap();
        assert_eq!(ts.states.len(), 1);
        assert!(ts.edges.is_empty());
        assert!(ts.truncated);
        let quiet = explore(&parse("mate(n)<>@a").unwrap(), 0, 2).unwrap();
        assert!(!quiet.truncated);
    }

    #[test]
    fn single_empty_membrane_containment() {
        let ts = explore(&parse("<>").unwrap(), 2, 2).unwrap();
        // `0<>` is congruent to nothing, so no containment survives.
        assert!(dynamic_containments(&ts).is_empty());
        let ts = explore(&parse("mate(n)<>").unwrap(), 2, 2).unwrap();
        let facts = dynamic_containments(&ts);
        assert!(facts.contains(&(Slot::top(), Item::Membrane(MembraneId::new("m1")))));
    }

    #[test]
    fn state_cap_is_a_distinct_error() {
        let t = parse("(!drip(0) | !pino(mate(x)))<>@a").unwrap();
        let cfg = ExploreConfig {
            depth: 10,
            unfold_budget: 2,
            state_cap: 3,
        };
        let err = explore_with(&t, &cfg, MiRegistry::new()).unwrap_err();
        assert_eq!(err, ExploreError::StateCap { cap: 3 });
    }

    #[test]
    fn exploration_is_deterministic() {
        let t =
            parse("(mate(n) | cobud(m, 0))<bud(m)<>@P0 || bud(o)<>@P1>@P || (comate(n) | cobud(o, 0))<>@Q").unwrap();
        let a = explore(&t, 4, 2).unwrap();
        let b = explore(&t, 4, 2).unwrap();
        assert_eq!(a.states, b.states);
        assert_eq!(a.edges, b.edges);
        assert!(a.edges.iter().any(|e| e.redex.rule == Rule::Bud));
    }
}
