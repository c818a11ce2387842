use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{BraneAction, MembraneId};

/// A context triple: membrane `m` inside `p` inside `gp`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Slot {
    pub gp: MembraneId,
    pub p: MembraneId,
    pub m: MembraneId,
}

impl Slot {
    pub fn new(gp: MembraneId, p: MembraneId, m: MembraneId) -> Self {
        Slot { gp, p, m }
    }

    /// `(*,*,*)`, where top-level membranes live.
    pub fn top() -> Self {
        Slot::new(MembraneId::root(), MembraneId::root(), MembraneId::root())
    }

    /// The slot of child `id` of the membrane addressed by `self`.
    pub fn child(&self, id: &MembraneId) -> Slot {
        Slot::new(self.p.clone(), self.m.clone(), id.clone())
    }

    pub fn ids(&self) -> [&MembraneId; 3] {
        [&self.gp, &self.p, &self.m]
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.gp, self.p, self.m)
    }
}

/// What an `I` slot may hold: a child membrane or a resident action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Item {
    Membrane(MembraneId),
    Action(BraneAction),
}

impl Item {
    pub fn as_membrane(&self) -> Option<&MembraneId> {
        match self {
            Item::Membrane(id) => Some(id),
            Item::Action(_) => None,
        }
    }

    pub fn as_action(&self) -> Option<&BraneAction> {
        match self {
            Item::Action(a) => Some(a),
            Item::Membrane(_) => None,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Membrane(id) => write!(f, "{id}"),
            Item::Action(a) => write!(f, "{a}"),
        }
    }
}

/// The circumstances in which a membrane can be derived.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CausalRecord {
    /// An action on `p` synchronising with its co-action on `q` inside `ctx`.
    Binary {
        action: BraneAction,
        p: MembraneId,
        coaction: BraneAction,
        q: MembraneId,
        ctx: Slot,
    },
    /// A drip or pino firing on `p` inside `ctx`.
    Unary {
        action: BraneAction,
        p: MembraneId,
        ctx: Slot,
    },
}

impl CausalRecord {
    pub fn action(&self) -> &BraneAction {
        match self {
            CausalRecord::Binary { action, .. } | CausalRecord::Unary { action, .. } => action,
        }
    }

    pub fn ctx(&self) -> &Slot {
        match self {
            CausalRecord::Binary { ctx, .. } | CausalRecord::Unary { ctx, .. } => ctx,
        }
    }

    pub fn participants(&self) -> Vec<&MembraneId> {
        match self {
            CausalRecord::Binary { p, q, .. } => vec![p, q],
            CausalRecord::Unary { p, .. } => vec![p],
        }
    }

    /// Participants followed by the non-root context membranes.
    pub fn mentioned(&self) -> Vec<&MembraneId> {
        let mut out = self.participants();
        out.extend(self.ctx().ids().into_iter().filter(|id| !id.is_root()));
        out
    }
}

impl fmt::Display for CausalRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CausalRecord::Binary {
                action,
                p,
                coaction,
                q,
                ctx,
            } => write!(f, "({action}, {p}, {coaction}, {q}, {}, {}, {})", ctx.gp, ctx.p, ctx.m),
            CausalRecord::Unary { action, p, ctx } => {
                write!(f, "({action}, {p}, {}, {}, {})", ctx.gp, ctx.p, ctx.m)
            }
        }
    }
}

/// The analysis result `(I, C, R)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Estimate {
    pub i: BTreeMap<Slot, BTreeSet<Item>>,
    pub c: BTreeMap<MembraneId, BTreeSet<CausalRecord>>,
    pub r: BTreeSet<(Slot, Slot)>,
}

static EMPTY_ITEMS: BTreeSet<Item> = BTreeSet::new();

impl Estimate {
    pub fn new() -> Self {
        Estimate::default()
    }

    pub fn is_empty(&self) -> bool {
        self.i.values().all(BTreeSet::is_empty) && self.c.values().all(BTreeSet::is_empty) && self.r.is_empty()
    }

    pub fn items(&self, slot: &Slot) -> &BTreeSet<Item> {
        self.i.get(slot).unwrap_or(&EMPTY_ITEMS)
    }

    pub fn contains(&self, slot: &Slot, item: &Item) -> bool {
        self.items(slot).contains(item)
    }

    pub fn has_membrane(&self, slot: &Slot, id: &MembraneId) -> bool {
        self.contains(slot, &Item::Membrane(id.clone()))
    }

    pub fn has_action(&self, slot: &Slot, a: &BraneAction) -> bool {
        self.contains(slot, &Item::Action(a.clone()))
    }

    pub fn membranes_in<'a>(&'a self, slot: &Slot) -> impl Iterator<Item = &'a MembraneId> + 'a {
        self.items(slot).iter().filter_map(Item::as_membrane)
    }

    pub fn actions_in<'a>(&'a self, slot: &Slot) -> impl Iterator<Item = &'a BraneAction> + 'a {
        self.items(slot).iter().filter_map(Item::as_action)
    }

    /// Returns true if the item was new.
    pub fn insert(&mut self, slot: Slot, item: Item) -> bool {
        self.i.entry(slot).or_default().insert(item)
    }

    pub fn insert_record(&mut self, id: MembraneId, record: CausalRecord) -> bool {
        self.c.entry(id).or_default().insert(record)
    }

    pub fn insert_incompatible(&mut self, left: Slot, right: Slot) -> bool {
        if left == right {
            return false;
        }
        self.r.insert((left, right))
    }

    pub fn records(&self, id: &MembraneId) -> impl Iterator<Item = &CausalRecord> {
        self.c.get(id).into_iter().flatten()
    }

    /// `from` reaches `to` through one or more `R` pairs.
    pub fn r_reaches(&self, from: &Slot, to: &Slot) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(s) = stack.pop() {
            if !seen.insert(s) {
                continue;
            }
            // `*` sorts before every identifier, so this starts at the first
            // pair whose left slot is `s`.
            let successors = self.r.range((s.clone(), Slot::top())..).take_while(|(l, _)| l == s);
            for (_, r) in successors {
                if r == to {
                    return true;
                }
                stack.push(r);
            }
        }
        false
    }

    /// The membrane at `a` and the membrane at `b` can never interact.
    pub fn r_blocks(&self, a: &Slot, b: &Slot) -> bool {
        a != b && (self.r_reaches(a, b) || self.r_reaches(b, a))
    }

    /// Every membrane id mentioned anywhere in the estimate, root excluded.
    pub fn universe(&self) -> BTreeSet<MembraneId> {
        let mut out = BTreeSet::new();
        let mut add = |id: &MembraneId| {
            if !id.is_root() {
                out.insert(id.clone());
            }
        };
        for (slot, items) in &self.i {
            slot.ids().into_iter().for_each(&mut add);
            items.iter().filter_map(Item::as_membrane).for_each(&mut add);
        }
        for (id, records) in &self.c {
            add(id);
            for r in records {
                r.mentioned().into_iter().for_each(&mut add);
            }
        }
        for (l, r) in &self.r {
            l.ids().into_iter().chain(r.ids()).for_each(&mut add);
        }
        out
    }

    /// Membranes for which some slot `(·,·,id)` exists or that occur as items.
    pub fn occurs(&self, id: &MembraneId) -> bool {
        self.i
            .iter()
            .any(|(slot, items)| &slot.m == id || items.contains(&Item::Membrane(id.clone())))
    }

    pub fn entry_count(&self) -> usize {
        self.i.values().map(BTreeSet::len).sum::<usize>()
            + self.c.values().map(BTreeSet::len).sum::<usize>()
            + self.r.len()
    }
}

impl Estimate {
    /// One line per entry, each prefixed by `prefix`.
    pub fn write_entries(&self, f: &mut impl fmt::Write, prefix: &str) -> fmt::Result {
        for (slot, items) in &self.i {
            for item in items {
                writeln!(f, "{prefix}I{slot} ∋ {item}")?;
            }
        }
        for (id, records) in &self.c {
            for r in records {
                writeln!(f, "{prefix}C({id}) ∋ {r}")?;
            }
        }
        for (l, r) in &self.r {
            writeln!(f, "{prefix}R ∋ ({l},{r})")?;
        }
        Ok(())
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_entries(f, "")
    }
}
