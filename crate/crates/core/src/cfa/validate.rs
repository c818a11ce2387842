use std::fmt;

use crate::syntax::{normalized_actions_of, SystemTerm};

use super::lineage::Lineage;
use super::rules::{conclude, enabled, Mode};
use super::{Estimate, Item, Slot};

/// One unmet obligation: the clause that demands it and the missing entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub clause: String,
    pub missing: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: missing {}", self.clause, self.missing)
    }
}

fn missing_item(slot: &Slot, item: &Item) -> String {
    format!("{item} ∈ I{slot}")
}

/// Checks the syntax-driven clauses for `term` placed at `ctx`.
pub fn judge(est: &Estimate, term: &SystemTerm, ctx: &Slot) -> Vec<Violation> {
    let mut out = Vec::new();
    judge_into(est, term, ctx, &mut out);
    out
}

fn judge_into(est: &Estimate, term: &SystemTerm, ctx: &Slot, out: &mut Vec<Violation>) {
    match term {
        SystemTerm::Diamond => {}
        SystemTerm::Compose(a, b) => {
            judge_into(est, a, ctx, out);
            judge_into(est, b, ctx, out);
        }
        SystemTerm::Bang(a) => judge_into(est, a, ctx, out),
        SystemTerm::Membrane {
            process,
            content,
            label,
        } => {
            let clause = || format!("membrane {label} at {ctx}");
            let me = Item::Membrane(label.clone());
            if !est.contains(ctx, &me) {
                out.push(Violation {
                    clause: clause(),
                    missing: missing_item(ctx, &me),
                });
            }
            let inner = ctx.child(label);
            for a in normalized_actions_of(process) {
                let item = Item::Action(a);
                if !est.contains(&inner, &item) {
                    out.push(Violation {
                        clause: clause(),
                        missing: missing_item(&inner, &item),
                    });
                }
            }
            judge_into(est, content, &inner, out);
        }
    }
}

/// Checks every closure obligation enabled in `est`. `term` supplies the
/// source labels and whether they are replicated.
pub fn check_closure(est: &Estimate, term: &SystemTerm, mode: Mode) -> Vec<Violation> {
    let mut lineage = Lineage::new(term);
    let mut out = Vec::new();
    for inst in enabled(est, &mut lineage) {
        let created = inst.key().map(|k| k.name());
        let c = conclude(&inst, created, mode, &mut lineage, est);
        let clause = inst.to_string();
        let mut miss = |missing: String| {
            out.push(Violation {
                clause: clause.clone(),
                missing,
            })
        };
        if let Some((id, rec)) = &c.created {
            if !est.records(id).any(|r| r == rec) {
                miss(format!("{rec} ∈ C({id})"));
            }
        }
        for (slot, item) in &c.items {
            if !est.contains(slot, item) {
                miss(missing_item(slot, item));
            }
        }
        let mut relocations = c.relocations.clone();
        for cr in &c.child_relocations {
            relocations.extend(cr.expand(est));
        }
        let mut inclusions = c.inclusions.clone();
        for r in &relocations {
            let (incs, pairs) = r.expand(est);
            inclusions.extend(incs);
            for (l, r) in pairs {
                if !est.r.contains(&(l.clone(), r.clone())) {
                    miss(format!("({l},{r}) ∈ R"));
                }
            }
        }
        for inc in &inclusions {
            for item in inc.missing(est) {
                miss(format!("{} (from I{})", missing_item(&inc.to, &item), inc.from));
            }
        }
    }
    out
}

/// The full check: `term` is acceptable at the top level and `est` is closed.
pub fn validate(est: &Estimate, term: &SystemTerm, mode: Mode) -> Vec<Violation> {
    let mut v = judge(est, term, &Slot::top());
    v.extend(check_closure(est, term, mode));
    v.extend(r_shape(est));
    v
}

fn r_shape(est: &Estimate) -> Vec<Violation> {
    est.r
        .iter()
        .filter(|(l, r)| l == r)
        .map(|(l, _)| Violation {
            clause: "R is irreflexive".into(),
            missing: format!("({l},{l}) ∉ R"),
        })
        .collect()
}
