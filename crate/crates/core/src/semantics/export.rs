use std::fmt::Write;

use serde_json::{json, Value};

use super::explore::TransitionSystem;

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn edge_label(e: &super::explore::Edge) -> String {
    match &e.redex.channel {
        Some(n) => format!("{}@{n}", e.redex.rule),
        None => e.redex.rule.to_string(),
    }
}

pub fn to_dot(ts: &TransitionSystem) -> String {
    let mut out = String::from("digraph transitions {\n  node [shape=box];\n");
    for (i, s) in ts.states.iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label=\"{}\"];", dot_escape(&s.to_string()));
    }
    for e in &ts.edges {
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{}\"];",
            e.src,
            e.dst,
            dot_escape(&edge_label(e))
        );
    }
    out.push_str("}\n");
    out
}

pub fn to_json(ts: &TransitionSystem) -> Value {
    let states: Vec<String> = ts.states.iter().map(ToString::to_string).collect();
    let edges: Vec<Value> = ts
        .edges
        .iter()
        .map(|e| {
            json!({
                "src": e.src,
                "rule": e.redex.rule.as_str(),
                "channel": e.redex.channel.as_ref().map(|n| n.as_str()),
                "dst": e.dst,
            })
        })
        .collect();
    json!({
        "states": states,
        "edges": edges,
        "truncated": ts.truncated,
    })
}

pub fn to_text(ts: &TransitionSystem) -> String {
    let mut out = String::new();
    for (i, s) in ts.states.iter().enumerate() {
        let _ = writeln!(out, "s{i}: {s}");
    }
    for e in &ts.edges {
        let _ = writeln!(out, "s{} --{}--> s{}", e.src, e.redex, e.dst);
    }
    if ts.truncated {
        out.push_str("(truncated)\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::explore;
    use crate::syntax::parse;

    #[test]
    fn json_and_dot_shapes() {
        let ts = explore(&parse("mate(n)<>@a || comate(n)<>@b").unwrap(), 3, 2).unwrap();
        let v = to_json(&ts);
        assert_eq!(v["states"].as_array().unwrap().len(), 2);
        assert_eq!(v["edges"][0]["rule"], "mate");
        assert_eq!(v["edges"][0]["channel"], "n");
        assert_eq!(v["truncated"], false);
        let dot = to_dot(&ts);
        assert!(dot.contains("s0 -> s1 [label=\"mate@n\"]"));
    }
}
