//! Abstract syntax of Brane systems, membrane processes and actions.
//!
//! A term has three levels: systems (`zero`, `P || Q`, `!P`, `σ<P>@μ`),
//! membrane processes (`0`, `σ | τ`, `!σ`, `a.σ`) and actions drawn from
//! the MBD (mate/bud/drip) and PEP (phago/exo/pino) families.

mod canonical;
mod parser;
mod pretty;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use canonical::{
    canonicalize, canonicalize_process, CanonicalComponent, CanonicalMembrane, CanonicalPrefix, CanonicalProcess,
    CanonicalSystem,
};
pub use parser::{parse, parse_action, parse_process, ParseError, ParseErrorKind};
pub use pretty::pretty;

/// Identity of a membrane. `*` is the ideal outermost membrane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MembraneId(Arc<str>);

pub const ROOT_NAME: &str = "*";

impl MembraneId {
    pub fn new(name: impl AsRef<str>) -> Self {
        MembraneId(Arc::from(name.as_ref()))
    }

    pub fn root() -> Self {
        MembraneId::new(ROOT_NAME)
    }

    pub fn is_root(&self) -> bool {
        &*self.0 == ROOT_NAME
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MembraneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for MembraneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "μ{}", self.0)
    }
}

/// A channel name `n`, pairing an action with its co-action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelName(Arc<str>);

impl ChannelName {
    /// Panics on an empty name; use the parser for untrusted input.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "channel names are nonempty");
        ChannelName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ChannelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ChannelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BraneAction {
    Mate(ChannelName),
    CoMate(ChannelName),
    Bud(ChannelName),
    CoBud(ChannelName, Box<MembraneProcess>),
    Drip(Box<MembraneProcess>),
    Phago(ChannelName),
    CoPhago(ChannelName, Box<MembraneProcess>),
    Exo(ChannelName),
    CoExo(ChannelName),
    Pino(Box<MembraneProcess>),
}

impl BraneAction {
    pub fn channel(&self) -> Option<&ChannelName> {
        use BraneAction::*;
        match self {
            Mate(n) | CoMate(n) | Bud(n) | CoBud(n, _) | Phago(n) | CoPhago(n, _) | Exo(n) | CoExo(n) => Some(n),
            Drip(_) | Pino(_) => None,
        }
    }

    /// The process given to the membrane this action creates, if any.
    pub fn created_process(&self) -> Option<&MembraneProcess> {
        use BraneAction::*;
        match self {
            CoBud(_, rho) | Drip(rho) | CoPhago(_, rho) | Pino(rho) => Some(rho),
            _ => None,
        }
    }

    /// Short rule keyword used in reports (`mate`, `bud`, ...).
    pub fn keyword(&self) -> &'static str {
        use BraneAction::*;
        match self {
            Mate(_) => "mate",
            CoMate(_) => "comate",
            Bud(_) => "bud",
            CoBud(..) => "cobud",
            Drip(_) => "drip",
            Phago(_) => "phago",
            CoPhago(..) => "cophago",
            Exo(_) => "exo",
            CoExo(_) => "coexo",
            Pino(_) => "pino",
        }
    }

    /// The same action with every carried process put into canonical shape,
    /// so that congruent `ρ` parameters compare equal.
    pub fn normalized(&self) -> BraneAction {
        use BraneAction::*;
        let norm = |rho: &MembraneProcess| Box::new(canonicalize_process(rho).to_term());
        match self {
            CoBud(n, rho) => CoBud(n.clone(), norm(rho)),
            Drip(rho) => Drip(norm(rho)),
            CoPhago(n, rho) => CoPhago(n.clone(), norm(rho)),
            Pino(rho) => Pino(norm(rho)),
            other => other.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MembraneProcess {
    Zero,
    Par(Box<MembraneProcess>, Box<MembraneProcess>),
    Bang(Box<MembraneProcess>),
    Seq(BraneAction, Box<MembraneProcess>),
}

impl MembraneProcess {
    pub fn par(a: MembraneProcess, b: MembraneProcess) -> Self {
        MembraneProcess::Par(Box::new(a), Box::new(b))
    }

    pub fn bang(a: MembraneProcess) -> Self {
        MembraneProcess::Bang(Box::new(a))
    }

    pub fn seq(a: BraneAction, k: MembraneProcess) -> Self {
        MembraneProcess::Seq(a, Box::new(k))
    }

    /// `a.0`
    pub fn prefix(a: BraneAction) -> Self {
        MembraneProcess::Seq(a, Box::new(MembraneProcess::Zero))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SystemTerm {
    Diamond,
    Compose(Box<SystemTerm>, Box<SystemTerm>),
    Bang(Box<SystemTerm>),
    Membrane {
        process: MembraneProcess,
        content: Box<SystemTerm>,
        label: MembraneId,
    },
}

impl SystemTerm {
    pub fn compose(a: SystemTerm, b: SystemTerm) -> Self {
        SystemTerm::Compose(Box::new(a), Box::new(b))
    }

    pub fn bang(a: SystemTerm) -> Self {
        SystemTerm::Bang(Box::new(a))
    }

    pub fn membrane(process: MembraneProcess, content: SystemTerm, label: MembraneId) -> Self {
        SystemTerm::Membrane {
            process,
            content: Box::new(content),
            label,
        }
    }

    /// Every membrane label occurring in the term, in source order.
    pub fn labels(&self) -> Vec<MembraneId> {
        let mut out = Vec::new();
        self.visit_membranes(&mut |_, label, _| out.push(label.clone()));
        out
    }

    /// Calls `f(process, label, under_bang)` for every membrane, outermost first.
    pub fn visit_membranes<'a>(&'a self, f: &mut impl FnMut(&'a MembraneProcess, &'a MembraneId, bool)) {
        fn go<'a>(t: &'a SystemTerm, banged: bool, f: &mut impl FnMut(&'a MembraneProcess, &'a MembraneId, bool)) {
            match t {
                SystemTerm::Diamond => {}
                SystemTerm::Compose(a, b) => {
                    go(a, banged, f);
                    go(b, banged, f);
                }
                SystemTerm::Bang(a) => go(a, true, f),
                SystemTerm::Membrane {
                    process,
                    content,
                    label,
                } => {
                    f(process, label, banged);
                    go(content, banged, f);
                }
            }
        }
        go(self, false, f)
    }
}

/// The action-collection function `A`: every action syntactically present in
/// `sigma`, with prefix order discarded.
pub fn actions_of(sigma: &MembraneProcess) -> BTreeSet<BraneAction> {
    let mut out = BTreeSet::new();
    collect_actions(sigma, &mut out);
    out
}

fn collect_actions(sigma: &MembraneProcess, out: &mut BTreeSet<BraneAction>) {
    match sigma {
        MembraneProcess::Zero => {}
        MembraneProcess::Seq(a, k) => {
            out.insert(a.clone());
            collect_actions(k, out);
        }
        MembraneProcess::Bang(s) => collect_actions(s, out),
        MembraneProcess::Par(a, b) => {
            collect_actions(a, out);
            collect_actions(b, out);
        }
    }
}

/// `A(σ)` with each action normalized; the form stored in estimates.
pub fn normalized_actions_of(sigma: &MembraneProcess) -> BTreeSet<BraneAction> {
    actions_of(sigma).iter().map(BraneAction::normalized).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(n: &str) -> ChannelName {
        ChannelName::new(n)
    }

    #[test]
    fn actions_of_zero_is_empty() {
        assert!(actions_of(&MembraneProcess::Zero).is_empty());
    }

    #[test]
    fn actions_of_sequence_collects_both_prefixes() {
        let rho = MembraneProcess::prefix(BraneAction::Mate(ch("x")));
        let sigma = MembraneProcess::seq(
            BraneAction::Mate(ch("n")),
            MembraneProcess::prefix(BraneAction::Drip(Box::new(rho.clone()))),
        );
        let expected: BTreeSet<_> = [BraneAction::Mate(ch("n")), BraneAction::Drip(Box::new(rho))]
            .into_iter()
            .collect();
        assert_eq!(actions_of(&sigma), expected);
    }

    #[test]
    fn actions_of_ignores_prefix_order() {
        let a = BraneAction::Mate(ch("n"));
        let b = BraneAction::Bud(ch("m"));
        let seq = MembraneProcess::seq(a.clone(), MembraneProcess::prefix(b.clone()));
        let par = MembraneProcess::par(MembraneProcess::prefix(a), MembraneProcess::prefix(b));
        assert_eq!(actions_of(&seq), actions_of(&par));
    }

    #[test]
    fn actions_of_looks_through_replication() {
        let a = BraneAction::Exo(ch("e"));
        let s = MembraneProcess::bang(MembraneProcess::bang(MembraneProcess::prefix(a.clone())));
        assert_eq!(actions_of(&s), [a].into_iter().collect());
    }

    #[test]
    fn root_is_distinguished() {
        assert!(MembraneId::root().is_root());
        assert!(!MembraneId::new("muP").is_root());
    }

    #[test]
    fn normalized_action_canonicalizes_rho() {
        let rho = MembraneProcess::par(
            MembraneProcess::Zero,
            MembraneProcess::prefix(BraneAction::Mate(ch("x"))),
        );
        let a = BraneAction::Drip(Box::new(rho));
        let b = BraneAction::Drip(Box::new(MembraneProcess::prefix(BraneAction::Mate(ch("x")))));
        assert_ne!(a, b);
        assert_eq!(a.normalized(), b.normalized());
    }
}
