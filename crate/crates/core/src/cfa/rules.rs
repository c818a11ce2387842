//! Closure rules: which rule instances an estimate enables, and what each
//! instance demands of the estimate. Shared by the solver and the validator.

use std::collections::BTreeSet;

use crate::semantics::{MiKey, Rule};
use crate::syntax::{normalized_actions_of, BraneAction, MembraneId};

use super::lineage::Lineage;
use super::{CausalRecord, Estimate, Item, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Also relocate the contents of engulfed and exocytosed membranes, which
    /// subject reduction needs.
    #[default]
    Sound,
    /// The PEP closure rules alone, without relocating contents.
    StrictPaper,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sound => "sound",
            Mode::StrictPaper => "strict-paper",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sound" => Ok(Mode::Sound),
            "strict-paper" => Ok(Mode::StrictPaper),
            other => Err(format!("unknown mode `{other}` (expected sound or strict-paper)")),
        }
    }
}

/// An enabled rule. `p` carries `action`, `q` carries `coaction`; `ctx` is the
/// slot of the membrane surrounding the redex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Instance {
    pub rule: Rule,
    pub action: BraneAction,
    pub p: MembraneId,
    pub coaction: Option<BraneAction>,
    pub q: Option<MembraneId>,
    pub ctx: Slot,
}

impl Instance {
    /// The key naming the membrane this instance creates, if any.
    pub fn key(&self) -> Option<MiKey> {
        match (self.rule, &self.coaction, &self.q) {
            (Rule::Exo, ..) => None,
            (Rule::Drip | Rule::Pino, ..) => Some(MiKey::unary(self.action.clone(), self.p.clone(), self.ctx.clone())),
            (_, Some(co), Some(q)) => Some(MiKey::binary(
                self.action.clone(),
                self.p.clone(),
                co.clone(),
                q.clone(),
                self.ctx.clone(),
            )),
            _ => None,
        }
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) {} on {}", self.rule, self.action, self.p)?;
        if let (Some(co), Some(q)) = (&self.coaction, &self.q) {
            write!(f, " with {co} on {q}")?;
        }
        write!(f, " in {}", self.ctx)
    }
}

/// Moving the membrane at `old` to `new`: its own slot, its children's
/// slots and (when the membrane itself changes name) its grandchildren's.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relocation {
    pub old: Slot,
    pub new: Slot,
    /// Copy contents along (otherwise only incompatibility is recorded).
    pub include: bool,
    /// Record the old and new positions as incompatible.
    pub incompatible: bool,
}

/// Each child `s` of the membrane at `parent` moves from
/// `(parent.p, parent.m, s)` to `(gp, p, s)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChildRelocation {
    pub parent: Slot,
    pub gp: MembraneId,
    pub p: MembraneId,
}

impl ChildRelocation {
    pub fn expand(&self, est: &Estimate) -> Vec<Relocation> {
        est.membranes_in(&self.parent)
            .map(|s| Relocation {
                old: self.parent.child(s),
                new: Slot::new(self.gp.clone(), self.p.clone(), s.clone()),
                include: true,
                incompatible: false,
            })
            .collect()
    }
}

/// A persistent inclusion `I(from) ⊆ I(to)`, optionally restricted to actions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inclusion {
    pub from: Slot,
    pub to: Slot,
    pub actions_only: bool,
}

impl Inclusion {
    pub fn new(from: Slot, to: Slot) -> Self {
        Inclusion {
            from,
            to,
            actions_only: false,
        }
    }

    /// Items of `from` that `to` lacks.
    pub fn missing(&self, est: &Estimate) -> Vec<Item> {
        if self.from == self.to {
            return Vec::new();
        }
        let to = est.items(&self.to);
        est.items(&self.from)
            .iter()
            .filter(|i| !(self.actions_only && matches!(i, Item::Membrane(_))))
            .filter(|i| !to.contains(i))
            .cloned()
            .collect()
    }
}

impl Relocation {
    /// The inclusions and incompatible pairs this relocation stands for,
    /// given the children currently known.
    pub fn expand(&self, est: &Estimate) -> (Vec<Inclusion>, Vec<(Slot, Slot)>) {
        let mut inc = Vec::new();
        let mut pairs = Vec::new();
        let mut add = |from: Slot, to: Slot, pair: bool| {
            if from == to {
                return;
            }
            if pair && self.incompatible {
                pairs.push((from.clone(), to.clone()));
            }
            if self.include {
                inc.push(Inclusion::new(from, to));
            }
        };
        add(self.old.clone(), self.new.clone(), true);
        for s in est.membranes_in(&self.old) {
            let (old2, new2) = (self.old.child(s), self.new.child(s));
            if self.old.m != self.new.m {
                for gs in est.membranes_in(&old2) {
                    add(old2.child(gs), new2.child(gs), false);
                }
            }
            add(old2, new2, true);
        }
        (inc, pairs)
    }
}

/// Everything an instance requires of a closed estimate.
#[derive(Clone, Debug, Default)]
pub struct Conclusions {
    pub created: Option<(MembraneId, CausalRecord)>,
    pub items: Vec<(Slot, Item)>,
    pub inclusions: Vec<Inclusion>,
    pub relocations: Vec<Relocation>,
    pub child_relocations: Vec<ChildRelocation>,
}

fn created_actions(a: &BraneAction) -> BTreeSet<BraneAction> {
    a.created_process().map(normalized_actions_of).unwrap_or_default()
}

/// The conclusions of `inst`, with `created` naming the new membrane.
pub fn conclude(
    inst: &Instance,
    created: Option<MembraneId>,
    mode: Mode,
    lineage: &mut Lineage,
    est: &Estimate,
) -> Conclusions {
    let ctx = &inst.ctx;
    let mut out = Conclusions::default();
    let record = inst.key().map(|k| k.0);
    if let (Some(id), Some(rec)) = (&created, record) {
        out.created = Some((id.clone(), rec));
    }
    match inst.rule {
        Rule::Mate => {
            let pq = created.expect("mate creates a membrane");
            let q = inst.q.as_ref().expect("mate has two participants");
            out.items.push((ctx.clone(), Item::Membrane(pq.clone())));
            for x in [&inst.p, q] {
                out.relocations.push(Relocation {
                    old: ctx.child(x),
                    new: ctx.child(&pq),
                    include: true,
                    incompatible: lineage.is_single(x, est),
                });
            }
        }
        Rule::Bud => {
            let r = created.expect("bud creates a membrane");
            let q = inst.q.as_ref().expect("bud has two participants");
            let co = inst.coaction.as_ref().expect("bud has a co-action");
            let r_slot = ctx.child(&r);
            out.items.push((ctx.clone(), Item::Membrane(r.clone())));
            out.items.push((r_slot.clone(), Item::Membrane(inst.p.clone())));
            for a in created_actions(co) {
                out.items.push((r_slot.clone(), Item::Action(a)));
            }
            out.relocations.push(Relocation {
                old: ctx.child(q).child(&inst.p),
                new: r_slot.child(&inst.p),
                include: true,
                incompatible: lineage.is_single(&inst.p, est),
            });
        }
        Rule::Drip => {
            let r = created.expect("drip creates a membrane");
            out.items.push((ctx.clone(), Item::Membrane(r.clone())));
            let r_slot = ctx.child(&r);
            for a in created_actions(&inst.action) {
                out.items.push((r_slot.clone(), Item::Action(a)));
            }
        }
        Rule::Phago => {
            let r = created.expect("phago creates a membrane");
            let q = inst.q.as_ref().expect("phago has two participants");
            let co = inst.coaction.as_ref().expect("phago has a co-action");
            let q_slot = ctx.child(q);
            let r_slot = q_slot.child(&r);
            out.items.push((q_slot.clone(), Item::Membrane(r.clone())));
            out.items.push((r_slot.clone(), Item::Membrane(inst.p.clone())));
            for a in created_actions(co) {
                out.items.push((r_slot.clone(), Item::Action(a)));
            }
            out.relocations.push(Relocation {
                old: ctx.child(&inst.p),
                new: r_slot.child(&inst.p),
                include: mode == Mode::Sound,
                incompatible: lineage.is_single(&inst.p, est),
            });
        }
        Rule::Exo => {
            let q = inst.q.as_ref().expect("exo has two participants");
            let q_slot = ctx.child(q);
            let p_slot = q_slot.child(&inst.p);
            out.inclusions.push(Inclusion::new(p_slot.clone(), ctx.clone()));
            out.inclusions.push(Inclusion {
                from: p_slot.clone(),
                to: q_slot,
                actions_only: true,
            });
            if mode == Mode::Sound {
                out.child_relocations.push(ChildRelocation {
                    parent: p_slot,
                    gp: ctx.p.clone(),
                    p: ctx.m.clone(),
                });
            }
        }
        Rule::Pino => {
            let r = created.expect("pino creates a membrane");
            let p_slot = ctx.child(&inst.p);
            out.items.push((p_slot.clone(), Item::Membrane(r.clone())));
            let r_slot = p_slot.child(&r);
            for a in created_actions(&inst.action) {
                out.items.push((r_slot.clone(), Item::Action(a)));
            }
        }
    }
    out
}

/// Every rule instance whose premises hold in `est`, in a fixed order.
pub fn enabled(est: &Estimate, lineage: &mut Lineage) -> Vec<Instance> {
    let mut out = Vec::new();
    for (level, items) in &est.i {
        let members: Vec<&MembraneId> = items.iter().filter_map(Item::as_membrane).collect();
        for &p in &members {
            let p_slot = level.child(p);
            for a in est.actions_in(&p_slot) {
                let inst = |rule, p: &MembraneId, co: Option<&BraneAction>, q: Option<&MembraneId>| Instance {
                    rule,
                    action: a.clone(),
                    p: p.clone(),
                    coaction: co.cloned(),
                    q: q.cloned(),
                    ctx: level.clone(),
                };
                match a {
                    BraneAction::Mate(n) | BraneAction::Phago(n) => {
                        let rule = if matches!(a, BraneAction::Mate(_)) {
                            Rule::Mate
                        } else {
                            Rule::Phago
                        };
                        for &q in &members {
                            let q_slot = level.child(q);
                            let partners: Vec<&BraneAction> = est
                                .actions_in(&q_slot)
                                .filter(|co| match (a, co) {
                                    (BraneAction::Mate(_), BraneAction::CoMate(k)) => k == n,
                                    (BraneAction::Phago(_), BraneAction::CoPhago(k, _)) => k == n,
                                    _ => false,
                                })
                                .collect();
                            if partners.is_empty() || est.r_blocks(&p_slot, &q_slot) || !lineage.may_meet(p, q, est) {
                                continue;
                            }
                            for co in partners {
                                out.push(inst(rule, p, Some(co), Some(q)));
                            }
                        }
                    }
                    BraneAction::Drip(_) => out.push(inst(Rule::Drip, p, None, None)),
                    BraneAction::Pino(_) => out.push(inst(Rule::Pino, p, None, None)),
                    BraneAction::CoBud(n, _) | BraneAction::CoExo(n) => {
                        // `p` is the co-side here; the actor is one of its children.
                        let (rule, wanted) = match a {
                            BraneAction::CoBud(..) => (Rule::Bud, BraneAction::Bud(n.clone())),
                            _ => (Rule::Exo, BraneAction::Exo(n.clone())),
                        };
                        for child in est.membranes_in(&p_slot) {
                            if est.has_action(&p_slot.child(child), &wanted) {
                                out.push(Instance {
                                    rule,
                                    action: wanted.clone(),
                                    p: child.clone(),
                                    coaction: Some(a.clone()),
                                    q: Some(p.clone()),
                                    ctx: level.clone(),
                                });
                            }
                        }
                    }
                    BraneAction::CoMate(_) | BraneAction::Bud(_) | BraneAction::CoPhago(..) | BraneAction::Exo(_) => {}
                }
            }
        }
    }
    out
}
