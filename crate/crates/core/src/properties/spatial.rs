use std::collections::BTreeSet;

use crate::cfa::{Estimate, Item, Slot};
use crate::semantics::{process_actions, TransitionSystem};
use crate::syntax::{CanonicalMembrane, CanonicalSystem, MembraneId};

use super::PropertyQuery;

/// How far "inside" reaches: direct children only, or any descendant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Depth {
    #[default]
    Direct,
    Transitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StaticVerdict {
    pub holds: bool,
    /// Some label of the query never occurs in the estimate.
    pub vacuous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynamicVerdict {
    pub holds: bool,
    /// The exploration was cut short, so `holds` covers only what was seen.
    pub inconclusive: bool,
}

fn labels(q: &PropertyQuery) -> Vec<&MembraneId> {
    match q {
        PropertyQuery::NeverOn { membrane, .. } => vec![membrane],
        PropertyQuery::NeverInside { inner, outer } => vec![inner, outer],
        PropertyQuery::NeverTogether { first, second, within } => vec![first, second, within],
    }
}

/// Membranes found below `slot`, following `I` through the child slots.
fn descendants(est: &Estimate, slot: &Slot) -> BTreeSet<MembraneId> {
    let mut seen_slots = BTreeSet::new();
    let mut found = BTreeSet::new();
    let mut work = vec![slot.clone()];
    while let Some(s) = work.pop() {
        if !seen_slots.insert(s.clone()) {
            continue;
        }
        for child in est.membranes_in(&s) {
            found.insert(child.clone());
            work.push(s.child(child));
        }
    }
    found
}

fn below(est: &Estimate, slot: &Slot, depth: Depth) -> BTreeSet<MembraneId> {
    match depth {
        Depth::Direct => est.membranes_in(slot).cloned().collect(),
        Depth::Transitive => descendants(est, slot),
    }
}

pub fn check_static(est: &Estimate, q: &PropertyQuery, depth: Depth) -> StaticVerdict {
    let vacuous = labels(q).into_iter().any(|id| !est.occurs(id));
    let subject = q.subject();
    let holds = est.i.keys().filter(|s| &s.m == subject).all(|slot| match q {
        PropertyQuery::NeverOn { action, .. } => !est.contains(slot, &Item::Action(action.clone())),
        PropertyQuery::NeverInside { inner, .. } => !below(est, slot, depth).contains(inner),
        PropertyQuery::NeverTogether { first, second, .. } => {
            let b = below(est, slot, depth);
            !(b.contains(first) && b.contains(second))
        }
    });
    StaticVerdict { holds, vacuous }
}

fn tree_labels(sys: &CanonicalSystem, depth: Depth, out: &mut BTreeSet<MembraneId>) {
    for c in sys.parts() {
        let m = c.membrane();
        out.insert(m.label.clone());
        if depth == Depth::Transitive {
            tree_labels(&m.content, depth, out);
        }
    }
}

fn violates(m: &CanonicalMembrane, q: &PropertyQuery, depth: Depth) -> bool {
    if &m.label != q.subject() {
        return false;
    }
    match q {
        PropertyQuery::NeverOn { action, .. } => {
            let mut acts = BTreeSet::new();
            process_actions(&m.process, &mut acts);
            acts.contains(action)
        }
        PropertyQuery::NeverInside { inner, .. } => {
            let mut b = BTreeSet::new();
            tree_labels(&m.content, depth, &mut b);
            b.contains(inner)
        }
        PropertyQuery::NeverTogether { first, second, .. } => {
            let mut b = BTreeSet::new();
            tree_labels(&m.content, depth, &mut b);
            b.contains(first) && b.contains(second)
        }
    }
}

fn state_violates(sys: &CanonicalSystem, q: &PropertyQuery, depth: Depth) -> bool {
    sys.parts().iter().any(|c| {
        let m = c.membrane();
        violates(m, q, depth) || state_violates(&m.content, q, depth)
    })
}

/// Evaluates the query on every explored state.
pub fn check_dynamic(ts: &TransitionSystem, q: &PropertyQuery, depth: Depth) -> DynamicVerdict {
    DynamicVerdict {
        holds: !ts.states.iter().any(|s| state_violates(s, q, depth)),
        inconclusive: ts.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfa::solve;
    use crate::properties::parse_queries;
    use crate::semantics::explore;
    use crate::syntax::parse;

    fn q(text: &str) -> PropertyQuery {
        parse_queries(text).unwrap().remove(0)
    }

    #[test]
    fn single_membrane_carries_its_action() {
        let t = parse("mate(n)<>@m1").unwrap();
        let ts = explore(&t, 2, 2).unwrap();
        let d = check_dynamic(&ts, &q("never-on mate(n) m1"), Depth::Direct);
        assert!(!d.holds);
        assert!(!d.inconclusive);
        assert!(!check_static(&solve(&t).unwrap(), &q("never-on mate(n) m1"), Depth::Direct).holds);
    }

    #[test]
    fn vacuous_when_label_unknown() {
        let est = solve(&parse("mate(n)<>@m1").unwrap()).unwrap();
        let v = check_static(&est, &q("never-inside m1 nowhere"), Depth::Direct);
        assert!(v.holds && v.vacuous);
        assert!(!check_static(&est, &q("never-on comate(n) m1"), Depth::Direct).vacuous);
    }

    #[test]
    fn transitive_reaches_grandchildren() {
        let t = parse("mate(x)<mate(x)<mate(x)<>@C>@B>@A").unwrap();
        let est = solve(&t).unwrap();
        let ts = explore(&t, 1, 1).unwrap();
        let query = q("never-inside C A");
        assert!(check_static(&est, &query, Depth::Direct).holds);
        assert!(!check_static(&est, &query, Depth::Transitive).holds);
        assert!(check_dynamic(&ts, &query, Depth::Direct).holds);
        assert!(!check_dynamic(&ts, &query, Depth::Transitive).holds);
    }

    #[test]
    fn together_needs_both() {
        let t = parse("mate(x)<mate(x)<>@X || mate(x)<>@Y>@A || mate(x)<mate(x)<>@X2>@B").unwrap();
        let est = solve(&t).unwrap();
        assert!(!check_static(&est, &q("never-together X Y A"), Depth::Direct).holds);
        assert!(check_static(&est, &q("never-together X2 Y B"), Depth::Direct).holds);
    }
}
