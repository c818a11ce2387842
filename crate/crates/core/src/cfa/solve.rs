use std::collections::BTreeSet;

use crate::semantics::{MembraneCapExceeded, MiRegistry, DEFAULT_MEMBRANE_CAP};
use crate::syntax::{normalized_actions_of, SystemTerm};

use super::lineage::Lineage;
use super::rules::{conclude, enabled, ChildRelocation, Inclusion, Instance, Mode, Relocation};
use super::{Estimate, Item, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub mode: Mode,
    pub membrane_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Sound,
            membrane_cap: DEFAULT_MEMBRANE_CAP,
        }
    }
}

/// The least fixpoint reached by saturating the closure rules from the
/// syntax-driven entries, in sound mode with the default cap.
pub fn solve(term: &SystemTerm) -> Result<Estimate, MembraneCapExceeded> {
    let cfg = SolverConfig::default();
    solve_with(term, &cfg, &mut MiRegistry::with_cap(cfg.membrane_cap))
}

pub fn solve_with(
    term: &SystemTerm,
    cfg: &SolverConfig,
    registry: &mut MiRegistry,
) -> Result<Estimate, MembraneCapExceeded> {
    let mut s = Solver {
        est: Estimate::new(),
        lineage: Lineage::new(term),
        fired: BTreeSet::new(),
        inclusions: BTreeSet::new(),
        relocations: BTreeSet::new(),
        child_relocations: BTreeSet::new(),
    };
    seed(&mut s.est, term, &Slot::top());
    loop {
        let mut changed = false;
        for inst in enabled(&s.est, &mut s.lineage) {
            if s.fired.contains(&inst) {
                continue;
            }
            let created = match inst.key() {
                Some(key) => Some(registry.fresh(key)?),
                None => None,
            };
            let c = conclude(&inst, created, cfg.mode, &mut s.lineage, &s.est);
            if let Some((id, rec)) = c.created {
                s.est.insert_record(id, rec);
            }
            for (slot, item) in c.items {
                s.est.insert(slot, item);
            }
            s.inclusions.extend(c.inclusions);
            s.relocations.extend(c.relocations);
            s.child_relocations.extend(c.child_relocations);
            s.fired.insert(inst);
            changed = true;
        }
        changed |= s.propagate();
        if !changed {
            return Ok(s.est);
        }
    }
}

/// The syntax-driven entries: each membrane in its slot, its actions in the
/// slot below.
fn seed(est: &mut Estimate, term: &SystemTerm, ctx: &Slot) {
    match term {
        SystemTerm::Diamond => {}
        SystemTerm::Compose(a, b) => {
            seed(est, a, ctx);
            seed(est, b, ctx);
        }
        SystemTerm::Bang(a) => seed(est, a, ctx),
        SystemTerm::Membrane {
            process,
            content,
            label,
        } => {
            est.insert(ctx.clone(), Item::Membrane(label.clone()));
            let inner = ctx.child(label);
            for a in normalized_actions_of(process) {
                est.insert(inner.clone(), Item::Action(a));
            }
            seed(est, content, &inner);
        }
    }
}

struct Solver {
    est: Estimate,
    lineage: Lineage,
    fired: BTreeSet<Instance>,
    inclusions: BTreeSet<Inclusion>,
    relocations: BTreeSet<Relocation>,
    child_relocations: BTreeSet<ChildRelocation>,
}

impl Solver {
    /// Applies the persistent constraints until nothing changes.
    fn propagate(&mut self) -> bool {
        let mut any = false;
        loop {
            let mut changed = false;
            let derived: Vec<Relocation> = self
                .child_relocations
                .iter()
                .flat_map(|c| c.expand(&self.est))
                .collect();
            for r in derived {
                changed |= self.relocations.insert(r);
            }
            let mut incs = Vec::new();
            let mut pairs = Vec::new();
            for r in &self.relocations {
                let (i, p) = r.expand(&self.est);
                incs.extend(i);
                pairs.extend(p);
            }
            for (l, r) in pairs {
                changed |= self.est.insert_incompatible(l, r);
            }
            for inc in incs {
                self.inclusions.insert(inc);
            }
            for inc in &self.inclusions {
                for item in inc.missing(&self.est) {
                    changed |= self.est.insert(inc.to.clone(), item);
                }
            }
            if !changed {
                return any;
            }
            any = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, MembraneId};

    #[test]
    fn diamond_gives_empty_estimate() {
        let est = solve(&SystemTerm::Diamond).unwrap();
        assert!(est.is_empty());
    }

    #[test]
    fn simple_mate() {
        let est = solve(&parse("mate(n)<>@P || comate(n)<>@Q").unwrap()).unwrap();
        let pq = MembraneId::new("mate:n(P,Q)@(*,*,*)");
        assert!(est.has_membrane(&Slot::top(), &pq));
        let pq_slot = Slot::top().child(&pq);
        assert!(est.r_blocks(&Slot::top().child(&MembraneId::new("P")), &pq_slot));
        // Inherited actions cannot fire again.
        assert_eq!(est.c.len(), 1);
    }

    #[test]
    fn cap_is_reported() {
        let t = parse("!((mate(n) | comate(n))<>@A)").unwrap();
        let cfg = SolverConfig {
            mode: Mode::Sound,
            membrane_cap: 5,
        };
        let err = solve_with(&t, &cfg, &mut MiRegistry::with_cap(5)).unwrap_err();
        assert_eq!(err.cap, 5);
    }
}
