use std::collections::BTreeSet;
use std::fmt;

use crate::cfa::Slot;
use crate::syntax::{
    canonicalize_process, BraneAction, CanonicalComponent, CanonicalMembrane, CanonicalPrefix, CanonicalProcess,
    CanonicalSystem, ChannelName, MembraneId, MembraneProcess,
};

use super::mi::{MembraneCapExceeded, MiKey, MiRegistry};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rule {
    Mate,
    Bud,
    Drip,
    Phago,
    Exo,
    Pino,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Mate => "mate",
            Rule::Bud => "bud",
            Rule::Drip => "drip",
            Rule::Phago => "phago",
            Rule::Exo => "exo",
            Rule::Pino => "pino",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reduction: which rule fired, on which membranes, where.
///
/// `principal` carries the action (`mate`, `bud`, `drip`, `phago`, `exo`,
/// `pino`); `co_principal` carries the co-action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Redex {
    pub rule: Rule,
    pub principal: MembraneId,
    pub co_principal: Option<MembraneId>,
    pub channel: Option<ChannelName>,
    pub rho: Option<MembraneProcess>,
    /// Labels of the membranes enclosing the participants, innermost last.
    pub ctx: Slot,
    pub created: Option<MembraneId>,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule.as_str())?;
        if let Some(n) = &self.channel {
            write!(f, "@{n}")?;
        }
        write!(f, " {}", self.principal)?;
        if let Some(q) = &self.co_principal {
            write!(f, ",{q}")?;
        }
        write!(f, " in {}", self.ctx)
    }
}

/// The successors of one state.
#[derive(Clone, Debug, Default)]
pub struct Successors {
    pub moves: Vec<(Redex, CanonicalSystem)>,
    /// Some replicated membrane could not be unfolded as often as a single
    /// step might need, so successors may be missing.
    pub budget_hit: bool,
}

/// Every one-step reduct of `state`.
///
/// A replicated prefix `!(a.k)` fires without being consumed. A replicated
/// membrane `!M` is materialized into at most `unfold_budget` copies per
/// nesting chain; two copies are enough for any single top-level step.
pub fn step(
    state: &CanonicalSystem,
    reg: &mut MiRegistry,
    unfold_budget: usize,
) -> Result<Successors, MembraneCapExceeded> {
    let mut stepper = Stepper { reg, budget_hit: false };
    let mut raw = Vec::new();
    stepper.level(state, &Slot::top(), unfold_budget, &mut raw)?;
    let moves: BTreeSet<(Redex, CanonicalSystem)> = raw.into_iter().map(|(r, s)| (r, absorb(&s))).collect();
    Ok(Successors {
        moves: moves.into_iter().collect(),
        budget_hit: stepper.budget_hit,
    })
}

/// Folds `M ∘ !M` into `!M` and `a.k | !(a.k)` into `!(a.k)`, at every depth.
/// Both are instances of the unfolding law, so the result is congruent.
pub fn absorb(sys: &CanonicalSystem) -> CanonicalSystem {
    let parts: Vec<CanonicalComponent> = sys
        .parts()
        .iter()
        .map(|c| match c {
            CanonicalComponent::Membrane(m) => CanonicalComponent::Membrane(absorb_membrane(m)),
            CanonicalComponent::Replicated(m) => CanonicalComponent::Replicated(absorb_membrane(m)),
        })
        .collect();
    let replicated: BTreeSet<&CanonicalMembrane> = parts
        .iter()
        .filter(|c| c.is_replicated())
        .map(CanonicalComponent::membrane)
        .collect();
    let kept: Vec<CanonicalComponent> = parts
        .iter()
        .filter(|c| c.is_replicated() || !replicated.contains(c.membrane()))
        .cloned()
        .collect();
    CanonicalSystem::from_parts(kept)
}

fn absorb_membrane(m: &CanonicalMembrane) -> CanonicalMembrane {
    CanonicalMembrane {
        process: absorb_process(&m.process),
        content: absorb(&m.content),
        label: m.label.clone(),
    }
}

fn absorb_process(p: &CanonicalProcess) -> CanonicalProcess {
    let parts: Vec<CanonicalPrefix> = p
        .parts()
        .iter()
        .map(|x| CanonicalPrefix {
            replicated: x.replicated,
            action: x.action.clone(),
            cont: absorb_process(&x.cont),
        })
        .collect();
    let replicated: BTreeSet<(&BraneAction, &CanonicalProcess)> = parts
        .iter()
        .filter(|x| x.replicated)
        .map(|x| (&x.action, &x.cont))
        .collect();
    let kept = parts
        .iter()
        .filter(|x| x.replicated || !replicated.contains(&(&x.action, &x.cont)))
        .cloned()
        .collect();
    CanonicalProcess::from_parts(kept)
}

/// Each action ready to fire on `p`, with what remains of `p` afterwards.
fn ready(p: &CanonicalProcess) -> Vec<(&BraneAction, CanonicalProcess)> {
    let parts = p.parts();
    let mut out = Vec::new();
    for (j, prefix) in parts.iter().enumerate() {
        if j > 0 && parts[j - 1] == *prefix {
            continue;
        }
        let mut rest: Vec<CanonicalPrefix> = parts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j || prefix.replicated)
            .map(|(_, x)| x.clone())
            .collect();
        rest.extend(prefix.cont.parts().iter().cloned());
        out.push((&prefix.action, CanonicalProcess::from_parts(rest)));
    }
    out
}

fn par(a: &CanonicalProcess, b: &CanonicalProcess) -> CanonicalProcess {
    CanonicalProcess::from_parts(a.parts().iter().chain(b.parts()).cloned().collect())
}

fn fresh_membrane(rho: &MembraneProcess, content: CanonicalSystem, label: MembraneId) -> CanonicalMembrane {
    CanonicalMembrane {
        process: canonicalize_process(rho),
        content,
        label,
    }
}

/// `view` without the components at `drop`, plus `add`.
fn replace(view: &[CanonicalComponent], drop: &[usize], add: Vec<CanonicalComponent>) -> CanonicalSystem {
    let mut parts: Vec<CanonicalComponent> = view
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, c)| c.clone())
        .collect();
    parts.extend(add);
    CanonicalSystem::from_parts(parts)
}

fn single(m: CanonicalMembrane) -> CanonicalSystem {
    CanonicalSystem::from_parts(vec![CanonicalComponent::Membrane(m)])
}

struct Stepper<'r> {
    reg: &'r mut MiRegistry,
    budget_hit: bool,
}

struct View {
    parts: Vec<CanonicalComponent>,
    budget: usize,
}

impl View {
    fn active(&self) -> impl Iterator<Item = (usize, &CanonicalMembrane)> {
        self.parts.iter().enumerate().filter_map(|(i, c)| match c {
            CanonicalComponent::Membrane(m) => Some((i, m)),
            CanonicalComponent::Replicated(_) => None,
        })
    }
}

impl Stepper<'_> {
    /// The level itself, then the level with one or two replicated membranes
    /// unfolded, as far as the budget allows.
    fn views(&mut self, sys: &CanonicalSystem, budget: usize) -> Vec<View> {
        let base = sys.parts().to_vec();
        let mut out = vec![View {
            parts: base.clone(),
            budget,
        }];
        let mut reps: Vec<&CanonicalMembrane> = sys
            .parts()
            .iter()
            .filter(|c| c.is_replicated())
            .map(CanonicalComponent::membrane)
            .collect();
        reps.dedup();
        if reps.is_empty() {
            return out;
        }
        if budget < 2 {
            self.budget_hit = true;
        }
        let with = |copies: &[&CanonicalMembrane], used: usize| {
            let mut parts = base.clone();
            parts.extend(copies.iter().map(|m| CanonicalComponent::Membrane((*m).clone())));
            View {
                parts,
                budget: budget - used,
            }
        };
        if budget >= 1 {
            out.extend(reps.iter().map(|m| with(&[m], 1)));
        }
        if budget >= 2 {
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i..] {
                    out.push(with(&[a, b], 2));
                }
            }
        }
        out
    }

    fn level(
        &mut self,
        sys: &CanonicalSystem,
        ctx: &Slot,
        budget: usize,
        out: &mut Vec<(Redex, CanonicalSystem)>,
    ) -> Result<(), MembraneCapExceeded> {
        for view in self.views(sys, budget) {
            let active: Vec<(usize, &CanonicalMembrane)> = view.active().collect();
            for &(i, m) in &active {
                for (action, rest) in ready(&m.process) {
                    self.fire(&view, &active, i, m, action, rest, ctx, out)?;
                }
                let inner = ctx.child(&m.label);
                let mut sub = Vec::new();
                self.level(&m.content, &inner, view.budget, &mut sub)?;
                for (redex, content) in sub {
                    let moved = CanonicalMembrane { content, ..m.clone() };
                    out.push((
                        redex,
                        replace(&view.parts, &[i], vec![CanonicalComponent::Membrane(moved)]),
                    ));
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn fire(
        &mut self,
        view: &View,
        active: &[(usize, &CanonicalMembrane)],
        i: usize,
        m: &CanonicalMembrane,
        action: &BraneAction,
        rest: CanonicalProcess,
        ctx: &Slot,
        out: &mut Vec<(Redex, CanonicalSystem)>,
    ) -> Result<(), MembraneCapExceeded> {
        let redex =
            |rule, co: Option<&MembraneId>, rho: Option<&MembraneProcess>, created: Option<&MembraneId>| Redex {
                rule,
                principal: m.label.clone(),
                co_principal: co.cloned(),
                channel: action.channel().cloned(),
                rho: rho.cloned(),
                ctx: ctx.clone(),
                created: created.cloned(),
            };
        match action {
            BraneAction::Drip(rho) => {
                let r = self
                    .reg
                    .fresh(MiKey::unary(action.clone(), m.label.clone(), ctx.clone()))?;
                let stays = CanonicalMembrane {
                    process: rest,
                    ..m.clone()
                };
                let dripped = fresh_membrane(rho, CanonicalSystem::empty(), r.clone());
                let next = replace(
                    &view.parts,
                    &[i],
                    vec![
                        CanonicalComponent::Membrane(stays),
                        CanonicalComponent::Membrane(dripped),
                    ],
                );
                out.push((redex(Rule::Drip, None, Some(rho), Some(&r)), next));
            }
            BraneAction::Pino(rho) => {
                let r = self
                    .reg
                    .fresh(MiKey::unary(action.clone(), m.label.clone(), ctx.clone()))?;
                let mut content = m.content.parts().to_vec();
                content.push(CanonicalComponent::Membrane(fresh_membrane(
                    rho,
                    CanonicalSystem::empty(),
                    r.clone(),
                )));
                let grown = CanonicalMembrane {
                    process: rest,
                    content: CanonicalSystem::from_parts(content),
                    label: m.label.clone(),
                };
                let next = replace(&view.parts, &[i], vec![CanonicalComponent::Membrane(grown)]);
                out.push((redex(Rule::Pino, None, Some(rho), Some(&r)), next));
            }
            BraneAction::Mate(n) => {
                for &(j, q) in active {
                    if j == i {
                        continue;
                    }
                    for (co, q_rest) in ready(&q.process) {
                        if !matches!(co, BraneAction::CoMate(k) if k == n) {
                            continue;
                        }
                        let key = MiKey::binary(
                            action.clone(),
                            m.label.clone(),
                            co.clone(),
                            q.label.clone(),
                            ctx.clone(),
                        );
                        let pq = self.reg.fresh(key)?;
                        let content = m.content.parts().iter().chain(q.content.parts()).cloned().collect();
                        let merged = CanonicalMembrane {
                            process: par(&rest, &q_rest),
                            content: CanonicalSystem::from_parts(content),
                            label: pq.clone(),
                        };
                        let next = replace(&view.parts, &[i, j], vec![CanonicalComponent::Membrane(merged)]);
                        out.push((redex(Rule::Mate, Some(&q.label), None, Some(&pq)), next));
                    }
                }
            }
            BraneAction::Phago(n) => {
                for &(j, q) in active {
                    if j == i {
                        continue;
                    }
                    for (co, q_rest) in ready(&q.process) {
                        let BraneAction::CoPhago(k, rho) = co else { continue };
                        if k != n {
                            continue;
                        }
                        let key = MiKey::binary(
                            action.clone(),
                            m.label.clone(),
                            co.clone(),
                            q.label.clone(),
                            ctx.clone(),
                        );
                        let r = self.reg.fresh(key)?;
                        let engulfed = CanonicalMembrane {
                            process: rest.clone(),
                            ..m.clone()
                        };
                        let wrapper = fresh_membrane(rho, single(engulfed), r.clone());
                        let mut content = q.content.parts().to_vec();
                        content.push(CanonicalComponent::Membrane(wrapper));
                        let eater = CanonicalMembrane {
                            process: q_rest,
                            content: CanonicalSystem::from_parts(content),
                            label: q.label.clone(),
                        };
                        let next = replace(&view.parts, &[i, j], vec![CanonicalComponent::Membrane(eater)]);
                        out.push((redex(Rule::Phago, Some(&q.label), Some(rho), Some(&r)), next));
                    }
                }
            }
            BraneAction::CoBud(n, rho) => {
                // `m` is the co-side; the budding membrane sits in its content.
                for inner in self.views(&m.content, view.budget) {
                    for (k, p) in inner.active() {
                        for (b, p_rest) in ready(&p.process) {
                            if !matches!(b, BraneAction::Bud(x) if x == n) {
                                continue;
                            }
                            let key =
                                MiKey::binary(b.clone(), p.label.clone(), action.clone(), m.label.clone(), ctx.clone());
                            let r = self.reg.fresh(key)?;
                            let budded = CanonicalMembrane {
                                process: p_rest,
                                ..p.clone()
                            };
                            let wrapper = fresh_membrane(rho, single(budded), r.clone());
                            let parent = CanonicalMembrane {
                                process: rest.clone(),
                                content: replace(&inner.parts, &[k], Vec::new()),
                                label: m.label.clone(),
                            };
                            let next = replace(
                                &view.parts,
                                &[i],
                                vec![
                                    CanonicalComponent::Membrane(wrapper),
                                    CanonicalComponent::Membrane(parent),
                                ],
                            );
                            let rd = Redex {
                                rule: Rule::Bud,
                                principal: p.label.clone(),
                                co_principal: Some(m.label.clone()),
                                channel: Some(n.clone()),
                                rho: Some((**rho).clone()),
                                ctx: ctx.clone(),
                                created: Some(r),
                            };
                            out.push((rd, next));
                        }
                    }
                }
            }
            BraneAction::CoExo(n) => {
                for inner in self.views(&m.content, view.budget) {
                    for (k, p) in inner.active() {
                        for (b, p_rest) in ready(&p.process) {
                            if !matches!(b, BraneAction::Exo(x) if x == n) {
                                continue;
                            }
                            let parent = CanonicalMembrane {
                                process: par(&rest, &p_rest),
                                content: replace(&inner.parts, &[k], Vec::new()),
                                label: m.label.clone(),
                            };
                            let mut add = vec![CanonicalComponent::Membrane(parent)];
                            add.extend(p.content.parts().iter().cloned());
                            let next = replace(&view.parts, &[i], add);
                            let rd = Redex {
                                rule: Rule::Exo,
                                principal: p.label.clone(),
                                co_principal: Some(m.label.clone()),
                                channel: Some(n.clone()),
                                rho: None,
                                ctx: ctx.clone(),
                                created: None,
                            };
                            out.push((rd, next));
                        }
                    }
                }
            }
            BraneAction::CoMate(_) | BraneAction::Bud(_) | BraneAction::CoPhago(..) | BraneAction::Exo(_) => {}
        }
        Ok(())
    }
}
