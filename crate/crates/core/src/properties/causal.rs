use std::collections::BTreeSet;

use crate::cfa::{CausalRecord, Estimate};
use crate::syntax::MembraneId;

/// Upper bound on the chains enumerated for one target.
const CHAIN_LIMIT: usize = 1024;

/// `C(id)`; empty for membranes that are never derived.
pub fn causes_of(est: &Estimate, id: &MembraneId) -> BTreeSet<CausalRecord> {
    est.records(id).cloned().collect()
}

/// A derivation of `target`, earliest record first. Every derived membrane a
/// record mentions is produced by an earlier link.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CausalChain {
    pub target: MembraneId,
    pub links: Vec<CausalRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub chains: BTreeSet<CausalChain>,
    /// Dependency loops that were cut, each as the ids on the loop.
    pub cycles: BTreeSet<Vec<MembraneId>>,
    /// More than the enumeration limit of chains existed.
    pub truncated: bool,
}

struct Walker<'a> {
    est: &'a Estimate,
    stack: Vec<MembraneId>,
    cycles: BTreeSet<Vec<MembraneId>>,
    truncated: bool,
}

impl Walker<'_> {
    /// Link sequences deriving `id`.
    fn chains(&mut self, id: &MembraneId) -> Vec<Vec<CausalRecord>> {
        let records: Vec<CausalRecord> = self.est.records(id).cloned().collect();
        if records.is_empty() {
            return vec![Vec::new()];
        }
        if let Some(pos) = self.stack.iter().position(|x| x == id) {
            self.cycles.insert(self.stack[pos..].to_vec());
            return Vec::new();
        }
        self.stack.push(id.clone());
        let mut out = Vec::new();
        for rec in records {
            let deps: BTreeSet<&MembraneId> = rec
                .mentioned()
                .into_iter()
                .filter(|d| *d != id && self.est.records(d).next().is_some())
                .collect();
            let mut partial: Vec<Vec<CausalRecord>> = vec![Vec::new()];
            for d in deps {
                let sub = self.chains(d);
                let mut next = Vec::new();
                for p in &partial {
                    for s in &sub {
                        if next.len() >= CHAIN_LIMIT {
                            self.truncated = true;
                            break;
                        }
                        let mut joined = p.clone();
                        for link in s {
                            if !joined.contains(link) {
                                joined.push(link.clone());
                            }
                        }
                        next.push(joined);
                    }
                }
                partial = next;
            }
            for mut p in partial {
                if out.len() >= CHAIN_LIMIT {
                    self.truncated = true;
                    break;
                }
                p.push(rec.clone());
                out.push(p);
            }
        }
        self.stack.pop();
        out
    }
}

/// Every way `target` can be causally derived, unwinding `C` through the
/// derived membranes each record mentions. A source membrane has only the
/// empty chain.
pub fn causal_chain(est: &Estimate, target: &MembraneId) -> ChainReport {
    let mut w = Walker {
        est,
        stack: Vec::new(),
        cycles: BTreeSet::new(),
        truncated: false,
    };
    let chains = w
        .chains(target)
        .into_iter()
        .map(|links| CausalChain {
            target: target.clone(),
            links,
        })
        .collect();
    ChainReport {
        chains,
        cycles: w.cycles,
        truncated: w.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfa::{solve, Slot};
    use crate::syntax::{parse, parse_action};

    #[test]
    fn source_has_the_empty_chain() {
        let est = solve(&parse("mate(n)<>@P || comate(n)<>@Q").unwrap()).unwrap();
        let r = causal_chain(&est, &MembraneId::new("P"));
        assert_eq!(r.chains.len(), 1);
        assert!(r.chains.iter().next().unwrap().links.is_empty());
        assert!(causes_of(&est, &MembraneId::new("P")).is_empty());
    }

    #[test]
    fn drip_after_mate_chains_through_the_fusion() {
        let est = solve(&parse("(mate(n) | drip(0))<>@P || comate(n)<>@Q").unwrap()).unwrap();
        let pq = MembraneId::new("mate:n(P,Q)@(*,*,*)");
        let r = MembraneId::new("drip(mate:n(P,Q)@(*,*,*))@(*,*,*)");
        let report = causal_chain(&est, &r);
        assert!(report.cycles.is_empty());
        let chain = report.chains.iter().next().unwrap();
        assert_eq!(chain.links.len(), 2);
        assert_eq!(
            chain.links[0],
            CausalRecord::Binary {
                action: parse_action("mate(n)").unwrap(),
                p: MembraneId::new("P"),
                coaction: parse_action("comate(n)").unwrap(),
                q: MembraneId::new("Q"),
                ctx: Slot::top(),
            }
        );
        assert_eq!(causes_of(&est, &pq).len(), 1);
    }

    #[test]
    fn cycles_are_cut() {
        let mut est = Estimate::new();
        let a = MembraneId::new("a");
        let b = MembraneId::new("b");
        let drip = parse_action("drip(0)").unwrap();
        est.insert_record(
            a.clone(),
            CausalRecord::Unary {
                action: drip.clone(),
                p: b.clone(),
                ctx: Slot::top(),
            },
        );
        est.insert_record(
            b.clone(),
            CausalRecord::Unary {
                action: drip,
                p: a.clone(),
                ctx: Slot::top(),
            },
        );
        let r = causal_chain(&est, &a);
        assert!(r.chains.is_empty());
        assert_eq!(r.cycles.len(), 1);
    }
}
