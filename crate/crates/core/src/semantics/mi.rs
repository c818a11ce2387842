//! Fresh identities for membranes created by reductions.
//!
//! A generated id is a printed form of its key, e.g.
//! `mate:n(muP,muQ)@(*,*,*)` or `bud:m[drip(0)](P0,PQ)@(*,*,*)`. Source
//! labels are plain identifiers, so they can never clash with these.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::cfa::{CausalRecord, Slot};
use crate::syntax::{BraneAction, MembraneId, MembraneProcess};

pub const DEFAULT_MEMBRANE_CAP: usize = 4096;

/// Longest generated id accepted. Ids embed the ids they derive from, so
/// their length can double with every generation long before the count cap
/// is reached.
pub const MAX_NAME_LEN: usize = 1 << 16;

/// Longest key excerpt quoted in an error.
const EXCERPT_LEN: usize = 160;

/// What a fresh membrane id depends on: the firing action(s), the
/// participants and the context. This is exactly the causal record that the
/// analysis stores for the created membrane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MiKey(pub CausalRecord);

impl MiKey {
    pub fn binary(action: BraneAction, p: MembraneId, coaction: BraneAction, q: MembraneId, ctx: Slot) -> Self {
        MiKey(CausalRecord::Binary {
            action: action.normalized(),
            p,
            coaction: coaction.normalized(),
            q,
            ctx,
        })
    }

    pub fn unary(action: BraneAction, p: MembraneId, ctx: Slot) -> Self {
        MiKey(CausalRecord::Unary {
            action: action.normalized(),
            p,
            ctx,
        })
    }

    pub fn record(&self) -> &CausalRecord {
        &self.0
    }

    /// Total length of the ids the name embeds, a lower bound on its length.
    fn embedded_len(&self) -> usize {
        let ctx = self.0.ctx().ids().iter().map(|i| i.as_str().len()).sum::<usize>();
        let parts = self.0.participants().iter().map(|i| i.as_str().len()).sum::<usize>();
        ctx + parts
    }

    /// The deterministic id for this key.
    pub fn name(&self) -> MembraneId {
        MembraneId::new(self.to_string())
    }
}

fn compact(rho: &MembraneProcess) -> String {
    rho.to_string().chars().filter(|c| !c.is_whitespace()).collect()
}

impl std::fmt::Display for MiKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        let (action, rho_source, participants, ctx) = match &self.0 {
            CausalRecord::Binary {
                action,
                p,
                coaction,
                q,
                ctx,
            } => (action, coaction, format!("{p},{q}"), ctx),
            CausalRecord::Unary { action, p, ctx } => (action, action, p.to_string(), ctx),
        };
        out.push_str(action.keyword());
        if let Some(n) = action.channel() {
            write!(out, ":{n}")?;
        }
        if let Some(rho) = rho_source.created_process() {
            if *rho != MembraneProcess::Zero {
                write!(out, "[{}]", compact(rho))?;
            }
        }
        write!(out, "({participants})@{ctx}")?;
        f.write_str(&out)
    }
}

fn excerpt(key: &MiKey) -> String {
    if key.embedded_len() <= EXCERPT_LEN {
        return key.to_string();
    }
    let head = match &key.0 {
        CausalRecord::Binary { action, p, .. } | CausalRecord::Unary { action, p, .. } => {
            format!("{}({}", action.keyword(), p)
        }
    };
    let cut: String = head.chars().take(EXCERPT_LEN).collect();
    format!("{cut}...")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("membrane-id universe exceeded the cap of {cap} ids (or an id grew past {MAX_NAME_LEN} bytes) while creating `{key}`; the analysis may not terminate for this term")]
pub struct MembraneCapExceeded {
    pub cap: usize,
    pub key: String,
}

/// Memo table of the identities handed out so far, with a size cap.
#[derive(Clone, Debug)]
pub struct MiRegistry {
    by_key: BTreeMap<MiKey, MembraneId>,
    by_id: BTreeMap<MembraneId, MiKey>,
    cap: usize,
}

impl Default for MiRegistry {
    fn default() -> Self {
        MiRegistry::with_cap(DEFAULT_MEMBRANE_CAP)
    }
}

impl MiRegistry {
    pub fn new() -> Self {
        MiRegistry::default()
    }

    pub fn with_cap(cap: usize) -> Self {
        MiRegistry {
            by_key: BTreeMap::new(),
            by_id: BTreeMap::new(),
            cap,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn fresh(&mut self, key: MiKey) -> Result<MembraneId, MembraneCapExceeded> {
        if let Some(id) = self.by_key.get(&key) {
            return Ok(id.clone());
        }
        if self.by_key.len() >= self.cap || key.embedded_len() > MAX_NAME_LEN {
            return Err(MembraneCapExceeded {
                cap: self.cap,
                key: excerpt(&key),
            });
        }
        let id = key.name();
        let clash = self.by_id.insert(id.clone(), key.clone());
        debug_assert!(clash.is_none(), "generated names are injective");
        self.by_key.insert(key, id.clone());
        Ok(id)
    }

    pub fn get(&self, key: &MiKey) -> Option<&MembraneId> {
        self.by_key.get(key)
    }

    pub fn key_of(&self, id: &MembraneId) -> Option<&MiKey> {
        self.by_id.get(id)
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MiKey, &MembraneId)> {
        self.by_key.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &MembraneId> {
        self.by_id.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ChannelName;

    fn id(s: &str) -> MembraneId {
        MembraneId::new(s)
    }

    fn mate_key(p: &str, q: &str) -> MiKey {
        let n = ChannelName::new("n");
        MiKey::binary(
            BraneAction::Mate(n.clone()),
            id(p),
            BraneAction::CoMate(n),
            id(q),
            Slot::top(),
        )
    }

    #[test]
    fn names_are_readable() {
        assert_eq!(mate_key("muP", "muQ").name().as_str(), "mate:n(muP,muQ)@(*,*,*)");
        let rho = MembraneProcess::par(
            MembraneProcess::prefix(BraneAction::Mate(ChannelName::new("x"))),
            MembraneProcess::Zero,
        );
        let k = MiKey::unary(BraneAction::Drip(Box::new(rho)), id("P"), Slot::top());
        assert_eq!(k.name().as_str(), "drip[mate(x)](P)@(*,*,*)");
    }

    #[test]
    fn memoized_and_injective() {
        let mut reg = MiRegistry::new();
        let a = reg.fresh(mate_key("A", "B")).unwrap();
        let b = reg.fresh(mate_key("B", "A")).unwrap();
        assert_ne!(a, b);
        assert_eq!(reg.fresh(mate_key("A", "B")).unwrap(), a);
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.key_of(&b), Some(&mate_key("B", "A")));
    }

    #[test]
    fn cap_is_enforced() {
        let mut reg = MiRegistry::with_cap(1);
        reg.fresh(mate_key("A", "B")).unwrap();
        reg.fresh(mate_key("A", "B")).unwrap();
        let err = reg.fresh(mate_key("A", "C")).unwrap_err();
        assert_eq!(err.cap, 1);
    }
}
