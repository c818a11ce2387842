//! How many instances of a membrane can exist, and which membranes can never
//! coexist because they consumed the same single membrane.
//!
//! A membrane is *single* when at most one instance of it can ever exist.
//! Source membranes are single unless some enclosing system is replicated.
//! A mate result is single when either participant is, since each firing
//! consumes one instance of both. A bud or phago result is single when the
//! moved membrane is. Drip and pino results are never single.
//!
//! Each mate consumes its participants, so the single membranes a membrane
//! was fused from form a lineage: two membranes whose lineages share a single
//! membrane lie on one chain of fusions and never coexist.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{BraneAction, MembraneId, SystemTerm};

use super::{CausalRecord, Estimate};

#[derive(Clone, Debug, Default)]
pub struct Lineage {
    /// Source labels, mapped to whether they sit under a replicated system.
    sources: BTreeMap<MembraneId, bool>,
    single: BTreeMap<MembraneId, bool>,
    ancestors: BTreeMap<MembraneId, BTreeSet<MembraneId>>,
}

impl Lineage {
    pub fn new(term: &SystemTerm) -> Self {
        let mut sources = BTreeMap::new();
        term.visit_membranes(&mut |_, label, replicated| {
            sources.insert(label.clone(), replicated);
        });
        Lineage {
            sources,
            ..Lineage::default()
        }
    }

    pub fn is_source(&self, id: &MembraneId) -> bool {
        self.sources.contains_key(id)
    }

    pub fn is_single(&mut self, id: &MembraneId, est: &Estimate) -> bool {
        self.single_guarded(id, est, &mut BTreeSet::new())
    }

    fn single_guarded(&mut self, id: &MembraneId, est: &Estimate, busy: &mut BTreeSet<MembraneId>) -> bool {
        if let Some(&replicated) = self.sources.get(id) {
            return !replicated;
        }
        if let Some(&s) = self.single.get(id) {
            return s;
        }
        if !busy.insert(id.clone()) {
            return false;
        }
        let records: Vec<CausalRecord> = est.records(id).cloned().collect();
        let s = !records.is_empty()
            && records.iter().all(|r| match r {
                CausalRecord::Binary { action, p, q, .. } => match action {
                    BraneAction::Mate(_) => self.single_guarded(p, est, busy) || self.single_guarded(q, est, busy),
                    _ => self.single_guarded(p, est, busy),
                },
                CausalRecord::Unary { .. } => false,
            });
        busy.remove(id);
        self.single.insert(id.clone(), s);
        s
    }

    /// Membranes consumed by fusion on every way of deriving `id`.
    pub fn ancestors(&mut self, id: &MembraneId, est: &Estimate) -> BTreeSet<MembraneId> {
        self.ancestors_guarded(id, est, &mut BTreeSet::new())
    }

    fn ancestors_guarded(
        &mut self,
        id: &MembraneId,
        est: &Estimate,
        busy: &mut BTreeSet<MembraneId>,
    ) -> BTreeSet<MembraneId> {
        if self.sources.contains_key(id) {
            return BTreeSet::new();
        }
        if let Some(a) = self.ancestors.get(id) {
            return a.clone();
        }
        if !busy.insert(id.clone()) {
            return BTreeSet::new();
        }
        let records: Vec<CausalRecord> = est.records(id).cloned().collect();
        let mut acc: Option<BTreeSet<MembraneId>> = None;
        for r in &records {
            let mine = match r {
                CausalRecord::Binary {
                    action: BraneAction::Mate(_),
                    p,
                    q,
                    ..
                } => {
                    let mut s = BTreeSet::from([p.clone(), q.clone()]);
                    s.extend(self.ancestors_guarded(p, est, busy));
                    s.extend(self.ancestors_guarded(q, est, busy));
                    s
                }
                _ => BTreeSet::new(),
            };
            acc = Some(match acc {
                None => mine,
                Some(prev) => prev.intersection(&mine).cloned().collect(),
            });
        }
        busy.remove(id);
        let out = acc.unwrap_or_default();
        self.ancestors.insert(id.clone(), out.clone());
        out
    }

    /// `a` and `b` (distinct) descend from a common single membrane by fusion,
    /// or one was fused into the other.
    pub fn exclusive(&mut self, a: &MembraneId, b: &MembraneId, est: &Estimate) -> bool {
        if a == b {
            return false;
        }
        let mut la = self.ancestors(a, est);
        la.insert(a.clone());
        let mut lb = self.ancestors(b, est);
        lb.insert(b.clone());
        let shared: Vec<MembraneId> = la.intersection(&lb).cloned().collect();
        shared.iter().any(|x| self.is_single(x, est))
    }

    /// Whether two sibling membranes labelled `a` and `b` may synchronise.
    /// Two instances of one label exist only if it is not single.
    pub fn may_meet(&mut self, a: &MembraneId, b: &MembraneId, est: &Estimate) -> bool {
        if a == b {
            !self.is_single(a, est)
        } else {
            !self.exclusive(a, b, est)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfa::Slot;
    use crate::syntax::{parse, ChannelName};

    fn id(s: &str) -> MembraneId {
        MembraneId::new(s)
    }

    fn mate(est: &mut Estimate, p: &str, q: &str, out: &str) {
        let n = ChannelName::new("n");
        est.insert_record(
            id(out),
            CausalRecord::Binary {
                action: BraneAction::Mate(n.clone()),
                p: id(p),
                coaction: BraneAction::CoMate(n),
                q: id(q),
                ctx: Slot::top(),
            },
        );
    }

    #[test]
    fn replicated_sources_are_not_single() {
        let t = parse("mate(n)<>@a || !(comate(n)<>@b)").unwrap();
        let mut l = Lineage::new(&t);
        let est = Estimate::new();
        assert!(l.is_single(&id("a"), &est));
        assert!(!l.is_single(&id("b"), &est));
        assert!(l.may_meet(&id("b"), &id("b"), &est));
        assert!(!l.may_meet(&id("a"), &id("a"), &est));
    }

    #[test]
    fn siblings_of_one_fusion_are_exclusive() {
        let t = parse("mate(n)<>@a || comate(n)<>@b || comate(n)<>@c").unwrap();
        let mut est = Estimate::new();
        mate(&mut est, "a", "b", "ab");
        mate(&mut est, "a", "c", "ac");
        mate(&mut est, "b", "c", "bc");
        let mut l = Lineage::new(&t);
        assert!(l.exclusive(&id("ab"), &id("ac"), &est));
        assert!(l.exclusive(&id("ab"), &id("a"), &est));
        assert!(!l.exclusive(&id("ab"), &id("c"), &est));
        assert!(l.is_single(&id("ab"), &est));
    }

    #[test]
    fn replicated_ancestry_does_not_exclude() {
        let t = parse("!(mate(n)<>@a) || !(comate(n)<>@b)").unwrap();
        let mut est = Estimate::new();
        mate(&mut est, "a", "b", "ab");
        mate(&mut est, "b", "a", "ba");
        let mut l = Lineage::new(&t);
        assert!(!l.exclusive(&id("ab"), &id("ba"), &est));
        assert!(!l.is_single(&id("ab"), &est));
    }
}
