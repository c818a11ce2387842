use std::fmt;

use super::Estimate;

/// Entries of `a` missing from `b` and vice versa.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EstimateDiff {
    pub only_left: Estimate,
    pub only_right: Estimate,
}

impl EstimateDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

fn minus(a: &Estimate, b: &Estimate) -> Estimate {
    let mut out = Estimate::new();
    for (slot, items) in &a.i {
        for item in items {
            if !b.contains(slot, item) {
                out.insert(slot.clone(), item.clone());
            }
        }
    }
    for (id, records) in &a.c {
        for r in records {
            if !b.records(id).any(|x| x == r) {
                out.insert_record(id.clone(), r.clone());
            }
        }
    }
    out.r = a.r.difference(&b.r).cloned().collect();
    out
}

pub fn diff_estimates(a: &Estimate, b: &Estimate) -> EstimateDiff {
    EstimateDiff {
        only_left: minus(a, b),
        only_right: minus(b, a),
    }
}

impl fmt::Display for EstimateDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.only_left.write_entries(f, "- ")?;
        self.only_right.write_entries(f, "+ ")
    }
}
