use std::path::PathBuf;

use brane_cfa::cfa::{r_blocks, solve, solve_with, validate, CausalRecord, Mode, Slot, SolverConfig};
use brane_cfa::properties::{causal_chain, causes_of, check_dynamic, check_static, Depth, PropertyQuery};
use brane_cfa::semantics::{explore, step, MiRegistry, Rule};
use brane_cfa::syntax::{canonicalize, parse, parse_action, pretty, MembraneId, SystemTerm};

fn corpus(name: &str) -> SystemTerm {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn id(s: &str) -> MembraneId {
    MembraneId::new(s)
}

const PQ: &str = "mate:n(P,Q)@(*,*,*)";

#[test]
fn example1_fuse_and_bud_commute() {
    let ts = explore(&corpus("example1-live.brane"), 3, 2).unwrap();
    let first: Vec<Rule> = ts.successors(0).map(|e| e.redex.rule).collect();
    assert_eq!(first, vec![Rule::Mate, Rule::Bud]);
    // Both orders reach a state holding R1 next to the fused membrane, under
    // different bud-result names.
    let texts: Vec<String> = ts.states.iter().map(|s| pretty(&s.to_term())).collect();
    assert!(texts
        .iter()
        .any(|s| s.contains("@bud:m[drip(0)](P0,P)@(*,*,*)") && s.contains(&format!(">@{PQ}"))));
    assert!(texts
        .iter()
        .any(|s| s.contains(&format!("@bud:m[drip(0)](P0,{PQ})@(*,*,*)"))));
}

#[test]
fn example1_without_payloads_ends_in_zero() {
    let ts = explore(&corpus("example1.brane"), 4, 2).unwrap();
    assert!(!ts.truncated);
    assert!(ts.states.iter().any(|s| s.is_empty()));
}

#[test]
fn example2_fusions_nest() {
    let ts = explore(&corpus("example2.brane"), 3, 2).unwrap();
    let inner = format!("mate:m(P0,Q0)@(*,*,{PQ})");
    assert!(ts.states.iter().any(|s| pretty(&s.to_term()).contains(&inner)));
}

#[test]
fn drip_drip_has_one_successor() {
    let init = canonicalize(&corpus("drip-drip.brane"));
    let succ = step(&init, &mut MiRegistry::new(), 2).unwrap();
    assert_eq!(succ.moves.len(), 1);
    assert_eq!(succ.moves[0].0.rule, Rule::Drip);
}

#[test]
fn r_blocks_only_descendants_of_a_fusion() {
    let est = solve(&corpus("example1.brane")).unwrap();
    let top = Slot::top();
    let p = top.child(&id("P"));
    let q = top.child(&id("Q"));
    let pq = top.child(&id(PQ));
    assert!(r_blocks(&est, &q, &pq));
    assert!(!r_blocks(&est, &q, &p));
    assert!(!r_blocks(&est, &p, &p));
}

#[test]
fn causes_of_fused_membrane() {
    let est = solve(&corpus("example1.brane")).unwrap();
    let causes = causes_of(&est, &id(PQ));
    assert_eq!(causes.len(), 1);
    let rec = causes.iter().next().unwrap();
    assert!(matches!(rec, CausalRecord::Binary { p, q, .. } if p == &id("P") && q == &id("Q")));
    assert!(causes_of(&est, &id("P")).is_empty());
}

#[test]
fn second_bud_chains_back_to_fusion() {
    let est = solve(&corpus("example1.brane")).unwrap();
    let r2 = id(&format!("bud:o(P1,{PQ})@(*,*,*)"));
    let report = causal_chain(&est, &r2);
    assert!(!report.truncated);
    assert!(report.cycles.is_empty());
    let mate = parse_action("mate(n)").unwrap();
    for chain in &report.chains {
        assert_eq!(chain.links.first().unwrap().action(), &mate);
        assert_eq!(chain.links.len(), 2);
    }
    assert!(!report.chains.is_empty());
}

#[test]
fn static_checks_on_example1() {
    let est = solve(&corpus("example1.brane")).unwrap();
    let never_on = PropertyQuery::NeverOn {
        action: parse_action("cobud(o, 0)").unwrap(),
        membrane: id("P"),
    };
    assert!(check_static(&est, &never_on, Depth::Direct).holds);
    let on_p = PropertyQuery::NeverOn {
        action: parse_action("mate(n)").unwrap(),
        membrane: id("P"),
    };
    assert!(!check_static(&est, &on_p, Depth::Direct).holds);
}

#[test]
fn static_checks_on_example2() {
    let est = solve(&corpus("example2.brane")).unwrap();
    let pq0 = id(&format!("mate:m(P0,Q0)@(*,*,{PQ})"));
    let q = PropertyQuery::NeverInside {
        inner: pq0.clone(),
        outer: id("P"),
    };
    assert!(check_static(&est, &q, Depth::Direct).holds);
    let in_pq = PropertyQuery::NeverInside {
        inner: pq0,
        outer: id(PQ),
    };
    assert!(!check_static(&est, &in_pq, Depth::Direct).holds);
}

#[test]
fn transitive_reading_sees_grandchildren() {
    let est = solve(&corpus("viral.brane")).unwrap();
    let q = PropertyQuery::NeverInside {
        inner: id("muRNA"),
        outer: id("muVirus"),
    };
    assert!(check_static(&est, &q, Depth::Direct).holds);
    assert!(!check_static(&est, &q, Depth::Transitive).holds);
}

#[test]
fn dynamic_witness_on_fused_membrane() {
    let ts = explore(&corpus("example1.brane"), 4, 2).unwrap();
    let q = PropertyQuery::NeverOn {
        action: parse_action("mate(n)").unwrap(),
        membrane: id(PQ),
    };
    let d = check_dynamic(&ts, &q, Depth::Direct);
    assert!(d.holds && !d.inconclusive);
    let inside = PropertyQuery::NeverInside {
        inner: id("P0"),
        outer: id("P"),
    };
    assert!(!check_dynamic(&ts, &inside, Depth::Direct).holds);
}

#[test]
fn corpus_estimates_are_accepted() {
    for name in ["example1", "example1-live", "example2", "viral", "sync", "bud-drip"] {
        let t = corpus(&format!("{name}.brane"));
        let est = solve(&t).unwrap();
        assert!(validate(&est, &t, Mode::Sound).is_empty(), "{name}");
    }
}

#[test]
fn runaway_names_stop_at_the_cap() {
    // Every engulfing membrane can engulf again, and each generated name
    // embeds the previous one twice.
    let t =
        parse("phago(v)<>@L1 || coexo(x).phago(v)<exo(x).cophago(v, 0).comate(n)<cophago(v, 0).comate(k)<>@L2>@L3>@L4")
            .unwrap();
    let started = std::time::Instant::now();
    let err = solve_with(&t, &SolverConfig::default(), &mut MiRegistry::new()).unwrap_err();
    assert!(err.key.len() < 200, "{}", err.key);
    assert!(started.elapsed().as_secs() < 10);
}
