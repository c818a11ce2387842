//! Estimate (de)serialization.
//!
//! ```text
//! { "I": [{"ctx": [gp,p,m], "item": {"kind":"membrane","id":..} | {"kind":"action","text":..}}],
//!   "C": [{"membrane": .., "record": {"arity":2,"a":..,"muP":..,"coa":..,"muQ":..,"ctx":[..]}
//!                                  | {"arity":1,"a":..,"muP":..,"ctx":[..]}}],
//!   "R": [{"left": [..], "right": [..]}] }
//! ```
//!
//! Hand-written files may add `"aliases": {"name": record, ...}` and then
//! write `$name` wherever a membrane id is expected; the alias stands for the
//! id generated for that record. Aliases may refer to other aliases.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::semantics::MiKey;
use crate::syntax::{parse_action, MembraneId};

use super::{CausalRecord, Estimate, Item, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimateFormatError {
    #[error("malformed estimate: {0}")]
    Shape(String),
    #[error("bad action `{text}`: {reason}")]
    Action { text: String, reason: String },
    #[error("alias `{0}`: unknown or cyclic")]
    Alias(String),
}

fn slot_json(s: &Slot) -> Value {
    json!([s.gp.as_str(), s.p.as_str(), s.m.as_str()])
}

fn item_json(i: &Item) -> Value {
    match i {
        Item::Membrane(id) => json!({"kind": "membrane", "id": id.as_str()}),
        Item::Action(a) => json!({"kind": "action", "text": a.to_string()}),
    }
}

fn record_json(r: &CausalRecord) -> Value {
    match r {
        CausalRecord::Binary {
            action,
            p,
            coaction,
            q,
            ctx,
        } => json!({
            "arity": 2,
            "a": action.to_string(),
            "muP": p.as_str(),
            "coa": coaction.to_string(),
            "muQ": q.as_str(),
            "ctx": slot_json(ctx),
        }),
        CausalRecord::Unary { action, p, ctx } => json!({
            "arity": 1,
            "a": action.to_string(),
            "muP": p.as_str(),
            "ctx": slot_json(ctx),
        }),
    }
}

fn item_sort_key(i: &Item) -> (u8, String) {
    match i {
        Item::Membrane(id) => (0, id.to_string()),
        Item::Action(a) => (1, a.to_string()),
    }
}

/// Canonical JSON: slots in lexicographic order, membranes before actions,
/// actions by printed form.
pub fn estimate_to_json(est: &Estimate) -> Value {
    let mut i_entries = Vec::new();
    for (slot, items) in &est.i {
        let mut sorted: Vec<&Item> = items.iter().collect();
        sorted.sort_by_cached_key(|i| item_sort_key(i));
        for item in sorted {
            i_entries.push(json!({"ctx": slot_json(slot), "item": item_json(item)}));
        }
    }
    let mut c_entries = Vec::new();
    for (id, records) in &est.c {
        let mut sorted: Vec<&CausalRecord> = records.iter().collect();
        sorted.sort_by_cached_key(|r| r.to_string());
        for r in sorted {
            c_entries.push(json!({"membrane": id.as_str(), "record": record_json(r)}));
        }
    }
    let r_entries: Vec<Value> = est
        .r
        .iter()
        .map(|(l, r)| json!({"left": slot_json(l), "right": slot_json(r)}))
        .collect();
    json!({"I": i_entries, "C": c_entries, "R": r_entries})
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn estimate_to_string(est: &Estimate) -> String {
    let mut s = serde_json::to_string_pretty(&estimate_to_json(est)).expect("JSON values serialize");
    s.push('\n');
    s
}

struct Reader<'a> {
    aliases: Option<&'a Map<String, Value>>,
    resolved: BTreeMap<String, MembraneId>,
    busy: BTreeSet<String>,
}

fn shape(msg: impl Into<String>) -> EstimateFormatError {
    EstimateFormatError::Shape(msg.into())
}

fn field<'v>(v: &'v Value, name: &str) -> Result<&'v Value, EstimateFormatError> {
    v.get(name)
        .ok_or_else(|| shape(format!("missing field `{name}` in {v}")))
}

fn string<'v>(v: &'v Value, name: &str) -> Result<&'v str, EstimateFormatError> {
    field(v, name)?
        .as_str()
        .ok_or_else(|| shape(format!("field `{name}` must be a string")))
}

fn action(text: &str) -> Result<crate::syntax::BraneAction, EstimateFormatError> {
    parse_action(text).map_err(|e| EstimateFormatError::Action {
        text: text.into(),
        reason: e.to_string(),
    })
}

impl Reader<'_> {
    fn id(&mut self, v: &Value) -> Result<MembraneId, EstimateFormatError> {
        let s = v
            .as_str()
            .ok_or_else(|| shape(format!("membrane id must be a string, got {v}")))?;
        match s.strip_prefix('$') {
            Some(alias) => self.alias(alias),
            None => Ok(MembraneId::new(s)),
        }
    }

    fn alias(&mut self, name: &str) -> Result<MembraneId, EstimateFormatError> {
        if let Some(id) = self.resolved.get(name) {
            return Ok(id.clone());
        }
        let def = self
            .aliases
            .and_then(|a| a.get(name))
            .ok_or_else(|| EstimateFormatError::Alias(name.into()))?;
        if !self.busy.insert(name.to_string()) {
            return Err(EstimateFormatError::Alias(name.into()));
        }
        let id = MiKey(self.record(def)?).name();
        self.busy.remove(name);
        self.resolved.insert(name.to_string(), id.clone());
        Ok(id)
    }

    fn slot(&mut self, v: &Value) -> Result<Slot, EstimateFormatError> {
        match v.as_array().map(Vec::as_slice) {
            Some([gp, p, m]) => Ok(Slot::new(self.id(gp)?, self.id(p)?, self.id(m)?)),
            _ => Err(shape(format!("a context is a triple of ids, got {v}"))),
        }
    }

    fn record(&mut self, v: &Value) -> Result<CausalRecord, EstimateFormatError> {
        let arity = field(v, "arity")?.as_u64();
        let a = action(string(v, "a")?)?;
        let p = self.id(field(v, "muP")?)?;
        let ctx = self.slot(field(v, "ctx")?)?;
        match arity {
            Some(1) => Ok(CausalRecord::Unary { action: a, p, ctx }),
            Some(2) => Ok(CausalRecord::Binary {
                action: a,
                p,
                coaction: action(string(v, "coa")?)?,
                q: self.id(field(v, "muQ")?)?,
                ctx,
            }),
            _ => Err(shape("record arity must be 1 or 2")),
        }
    }

    fn item(&mut self, v: &Value) -> Result<Item, EstimateFormatError> {
        match string(v, "kind")? {
            "membrane" => Ok(Item::Membrane(self.id(field(v, "id")?)?)),
            "action" => Ok(Item::Action(action(string(v, "text")?)?)),
            other => Err(shape(format!("unknown item kind `{other}`"))),
        }
    }
}

fn entries<'v>(v: &'v Value, name: &str) -> Result<&'v [Value], EstimateFormatError> {
    match v.get(name) {
        None => Ok(&[]),
        Some(x) => x
            .as_array()
            .map(Vec::as_slice)
            .ok_or_else(|| shape(format!("`{name}` must be an array"))),
    }
}

pub fn estimate_from_json(v: &Value) -> Result<Estimate, EstimateFormatError> {
    let mut rd = Reader {
        aliases: v.get("aliases").and_then(Value::as_object),
        resolved: BTreeMap::new(),
        busy: BTreeSet::new(),
    };
    let mut est = Estimate::new();
    for e in entries(v, "I")? {
        let slot = rd.slot(field(e, "ctx")?)?;
        let item = rd.item(field(e, "item")?)?;
        est.insert(slot, item);
    }
    for e in entries(v, "C")? {
        let id = rd.id(field(e, "membrane")?)?;
        let rec = rd.record(field(e, "record")?)?;
        est.insert_record(id, rec);
    }
    for e in entries(v, "R")? {
        let l = rd.slot(field(e, "left")?)?;
        let r = rd.slot(field(e, "right")?)?;
        est.r.insert((l, r));
    }
    Ok(est)
}

pub fn estimate_from_str(text: &str) -> Result<Estimate, EstimateFormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| shape(e.to_string()))?;
    estimate_from_json(&v)
}

/// Resolves `$alias` references against a file's alias table, e.g. to turn
/// query labels into generated ids.
pub fn resolve_alias(doc: &Value, name: &str) -> Result<MembraneId, EstimateFormatError> {
    let mut rd = Reader {
        aliases: doc.get("aliases").and_then(Value::as_object),
        resolved: BTreeMap::new(),
        busy: BTreeSet::new(),
    };
    rd.id(&Value::String(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfa::solve;
    use crate::syntax::parse;

    #[test]
    fn round_trip() {
        let t = parse("(mate(n) | cobud(m, drip(0)))<bud(m)<>@P0>@P || comate(n)<>@Q").unwrap();
        let est = solve(&t).unwrap();
        let text = estimate_to_string(&est);
        assert_eq!(estimate_from_str(&text).unwrap(), est);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn aliases_resolve_to_generated_names() {
        let doc = json!({
            "aliases": {
                "PQ": {"arity": 2, "a": "mate(n)", "muP": "P", "coa": "comate(n)", "muQ": "Q", "ctx": ["*","*","*"]},
                "R": {"arity": 1, "a": "drip(0)", "muP": "$PQ", "ctx": ["*","*","*"]}
            },
            "I": [{"ctx": ["*","*","*"], "item": {"kind": "membrane", "id": "$R"}}]
        });
        let est = estimate_from_json(&doc).unwrap();
        let id = MembraneId::new("drip(mate:n(P,Q)@(*,*,*))@(*,*,*)");
        assert!(est.has_membrane(&Slot::top(), &id));
        assert_eq!(resolve_alias(&doc, "$PQ").unwrap().as_str(), "mate:n(P,Q)@(*,*,*)");
        assert!(matches!(
            resolve_alias(&doc, "$nope"),
            Err(EstimateFormatError::Alias(_))
        ));
    }
}
