//! Structural-congruence normal form.
//!
//! Composition and parallel are flattened into sorted multisets, units are
//! dropped, `0<zero>@μ` is erased, nested replication collapses and
//! replication distributes over composition. The unfolding law
//! `!P ≡ P ∘ !P` is not applied.

use std::fmt;

use super::{BraneAction, MembraneId, MembraneProcess, SystemTerm};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CanonicalProcess {
    parts: Vec<CanonicalPrefix>,
}

/// `a.k`, or `!(a.k)` when `replicated`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalPrefix {
    pub replicated: bool,
    pub action: BraneAction,
    pub cont: CanonicalProcess,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CanonicalSystem {
    parts: Vec<CanonicalComponent>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CanonicalComponent {
    Membrane(CanonicalMembrane),
    Replicated(CanonicalMembrane),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalMembrane {
    pub process: CanonicalProcess,
    pub content: CanonicalSystem,
    pub label: MembraneId,
}

impl CanonicalProcess {
    /// Builds a normal form from arbitrary parts; sorts them.
    pub fn from_parts(mut parts: Vec<CanonicalPrefix>) -> Self {
        parts.sort_by_cached_key(|p| p.to_string());
        CanonicalProcess { parts }
    }

    pub fn parts(&self) -> &[CanonicalPrefix] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn to_term(&self) -> MembraneProcess {
        let mut iter = self.parts.iter().map(CanonicalPrefix::to_term);
        match iter.next() {
            None => MembraneProcess::Zero,
            Some(first) => iter.fold(first, MembraneProcess::par),
        }
    }
}

impl CanonicalPrefix {
    pub fn to_term(&self) -> MembraneProcess {
        let seq = MembraneProcess::seq(self.action.clone(), self.cont.to_term());
        if self.replicated {
            MembraneProcess::bang(seq)
        } else {
            seq
        }
    }
}

impl CanonicalSystem {
    pub fn empty() -> Self {
        CanonicalSystem::default()
    }

    /// Builds a normal form from arbitrary parts: erases `0<zero>@μ` and sorts.
    pub fn from_parts(parts: Vec<CanonicalComponent>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().filter(|c| !c.membrane().is_inert()).collect();
        parts.sort_by_cached_key(|c| c.to_string());
        CanonicalSystem { parts }
    }

    pub fn parts(&self) -> &[CanonicalComponent] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn to_term(&self) -> SystemTerm {
        let mut iter = self.parts.iter().map(CanonicalComponent::to_term);
        match iter.next() {
            None => SystemTerm::Diamond,
            Some(first) => iter.fold(first, SystemTerm::compose),
        }
    }
}

impl CanonicalComponent {
    pub fn membrane(&self) -> &CanonicalMembrane {
        match self {
            CanonicalComponent::Membrane(m) | CanonicalComponent::Replicated(m) => m,
        }
    }

    pub fn is_replicated(&self) -> bool {
        matches!(self, CanonicalComponent::Replicated(_))
    }

    pub fn to_term(&self) -> SystemTerm {
        match self {
            CanonicalComponent::Membrane(m) => m.to_term(),
            CanonicalComponent::Replicated(m) => SystemTerm::bang(m.to_term()),
        }
    }
}

impl CanonicalMembrane {
    /// `0<zero>@μ`, congruent to the empty system.
    pub fn is_inert(&self) -> bool {
        self.process.is_zero() && self.content.is_empty()
    }

    pub fn to_term(&self) -> SystemTerm {
        SystemTerm::membrane(self.process.to_term(), self.content.to_term(), self.label.clone())
    }
}

macro_rules! display_via_term {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.to_term(), f)
            }
        }
    )*};
}

display_via_term!(
    CanonicalProcess,
    CanonicalPrefix,
    CanonicalSystem,
    CanonicalComponent,
    CanonicalMembrane
);

pub fn canonicalize_process(sigma: &MembraneProcess) -> CanonicalProcess {
    let mut parts = Vec::new();
    flatten_process(sigma, false, &mut parts);
    CanonicalProcess::from_parts(parts)
}

fn flatten_process(sigma: &MembraneProcess, banged: bool, out: &mut Vec<CanonicalPrefix>) {
    match sigma {
        MembraneProcess::Zero => {}
        MembraneProcess::Par(a, b) => {
            flatten_process(a, banged, out);
            flatten_process(b, banged, out);
        }
        MembraneProcess::Bang(a) => flatten_process(a, true, out),
        MembraneProcess::Seq(a, k) => out.push(CanonicalPrefix {
            replicated: banged,
            action: a.normalized(),
            cont: canonicalize_process(k),
        }),
    }
}

pub fn canonicalize(term: &SystemTerm) -> CanonicalSystem {
    let mut parts = Vec::new();
    flatten_system(term, false, &mut parts);
    CanonicalSystem::from_parts(parts)
}

fn flatten_system(term: &SystemTerm, banged: bool, out: &mut Vec<CanonicalComponent>) {
    match term {
        SystemTerm::Diamond => {}
        SystemTerm::Compose(a, b) => {
            flatten_system(a, banged, out);
            flatten_system(b, banged, out);
        }
        SystemTerm::Bang(a) => flatten_system(a, true, out),
        SystemTerm::Membrane {
            process,
            content,
            label,
        } => {
            let m = CanonicalMembrane {
                process: canonicalize_process(process),
                content: canonicalize(content),
                label: label.clone(),
            };
            out.push(if banged {
                CanonicalComponent::Replicated(m)
            } else {
                CanonicalComponent::Membrane(m)
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn canon(s: &str) -> CanonicalSystem {
        canonicalize(&parse(s).unwrap())
    }

    #[test]
    fn diamond_is_a_unit() {
        assert_eq!(canon("zero || mate(n)<>@a"), canon("mate(n)<>@a"));
    }

    #[test]
    fn empty_membrane_is_erased() {
        assert!(canon("0<>@m1").is_empty());
        assert!(canon("!(0<zero || zero>@m1)").is_empty());
    }

    #[test]
    fn replication_laws() {
        assert_eq!(canon("!!mate(n)<>@a"), canon("!mate(n)<>@a"));
        assert_eq!(
            canon("!(mate(n)<>@a || exo(e)<>@b)"),
            canon("!exo(e)<>@b || !mate(n)<>@a")
        );
        assert_eq!(
            canon("(!(mate(n) | !!exo(e)) | 0)<>@a"),
            canon("(!exo(e) | !mate(n))<>@a")
        );
        assert!(canon("!zero").is_empty());
        assert_eq!(canon("(!0 | mate(n))<>@a"), canon("mate(n)<>@a"));
    }

    #[test]
    fn unfolding_is_not_applied() {
        let one = parse("mate(n)<>@a").unwrap();
        let unfolded = SystemTerm::compose(one.clone(), SystemTerm::bang(one.clone()));
        assert_ne!(canonicalize(&SystemTerm::bang(one)), canonicalize(&unfolded));
    }

    #[test]
    fn idempotent_on_a_nested_term() {
        let c = canon("(mate(n) | cobud(m, 0|0))<bud(m)<>@P0 || bud(o)<>@P1>@P || (comate(n) | cobud(o, 0))<>@Q");
        assert_eq!(canonicalize(&c.to_term()), c);
    }
}
