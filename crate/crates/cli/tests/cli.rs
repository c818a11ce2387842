use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn brane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brane-cfa"))
        .args(args)
        .env("BRANE_CFA_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_prints_labels() {
    let o = brane(&["parse", path(&corpus("viral.brane"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for label in ["@muVirus", "@muNucap", "@muMemb", "@muEndo"] {
        assert!(text.contains(label), "{text}");
    }
}

#[test]
fn parse_assigns_missing_labels() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.brane");
    std::fs::write(&f, "mate(n)<> || comate(n)<>").unwrap();
    let o = brane(&["parse", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "mate(n)<>@m1 || comate(n)<>@m2\n");
}

#[test]
fn syntax_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.brane");
    std::fs::write(&f, "mate(n)<>@P ||\n  comate(<>@Q").unwrap();
    let o = brane(&["parse", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn missing_input_is_an_io_error() {
    let o = brane(&["parse", "/nonexistent/x.brane"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_zero_has_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("z.brane");
    std::fs::write(&f, "zero").unwrap();
    let o = brane(&["run", "--format", "json", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 1);
    assert!(v["edges"].as_array().unwrap().is_empty());
    assert_eq!(v["truncated"], false);
}

#[test]
fn run_example1_interleavings() {
    let o = brane(&[
        "run",
        "--depth",
        "3",
        "--format",
        "dot",
        path(&corpus("example1.brane")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains(">@mate:n(P,Q)@(*,*,*)"));
    // Fusing first and budding first meet again once both buds are done;
    // the empty results are erased by the congruence.
    assert!(dot.contains("s0 -> s1 [label=\"mate@n\"]"));
    assert!(dot.contains("s0 -> s2 [label=\"bud@m\"]"));
    assert!(dot.contains("[label=\"zero\"]"));
    assert_eq!(dot.matches("label=\"bud@o\"").count(), 2);
}

#[test]
fn run_viral_releases_the_nucleocapsid() {
    let o = brane(&["run", "--depth", "3", "--format", "json", path(&corpus("viral.brane"))]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states: Vec<&str> = v["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    // The last state holds the capsid directly inside the cell membrane.
    assert!(
        states
            .iter()
            .any(|s| s.contains("<coexo(r)<>@muRNA>@muNucap") && !s.contains("@muVirus")),
        "{states:?}"
    );
}

#[test]
fn run_state_cap_exits_3() {
    let o = brane(&["run", "--state-cap", "2", path(&corpus("example1.brane"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn analyze_is_deterministic_and_complete() {
    let a = brane(&["analyze", path(&corpus("example1.brane"))]);
    let b = brane(&["analyze", path(&corpus("example1.brane"))]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["C"].as_array().unwrap().len(), 4);
    assert!(!stdout(&a).contains('\r'));
}

#[test]
fn analyze_membrane_cap_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("grow.brane");
    std::fs::write(&f, "!((mate(n) | comate(n))<>@A)").unwrap();
    let out = dir.path().join("est.json");
    let o = brane(&[
        "analyze",
        "--membrane-cap",
        "8",
        "-o",
        out.to_str().unwrap(),
        f.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("membrane cap"), "{}", stderr(&o));
    assert!(!out.exists(), "no partial output on failure");
}

#[test]
fn analyze_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("est.json");
    let o = brane(&["analyze", "-o", out.to_str().unwrap(), path(&corpus("example2.brane"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("mate:m(P0,Q0)@(*,*,mate:n(P,Q)@(*,*,*))"));
}

#[test]
fn check_example1_queries() {
    let o = brane(&[
        "check",
        "--queries",
        path(&corpus("example1.queries")),
        path(&corpus("example1.brane")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let find = |q: &str| v.as_array().unwrap().iter().find(|e| e["query"] == q).unwrap().clone();
    assert_eq!(find("never-on cobud(o, 0) P")["static"], true);
    assert_eq!(find("never-on mate(n) P")["static"], false);
    let witness = find("never-on mate(n) mate:n(P,Q)@(*,*,*)");
    assert_eq!(witness["static"], false);
    assert_eq!(witness["dynamic"], true);
    assert_eq!(witness["inconclusive"], false);
}

#[test]
fn check_viral_and_vacuous_labels() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.txt");
    std::fs::write(&q, "never-inside muVirus muEndo\nnever-inside muVirus nowhere\n").unwrap();
    let o = brane(&[
        "check",
        "--depth",
        "0",
        "--queries",
        q.to_str().unwrap(),
        path(&corpus("viral.brane")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["static"], true);
    assert!(v[0].get("dynamic").is_none());
    assert_eq!(v[1]["vacuous"], true);
    assert!(stderr(&o).contains("warning:"));
}

#[test]
fn verify_passes_on_examples() {
    for name in ["example1.brane", "example2.brane"] {
        let o = brane(&["verify", path(&corpus(name))]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert_eq!(stdout(&o).matches("pass ").count(), 5);
    }
}

#[test]
fn verify_rejects_a_corrupted_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let solved = brane(&["analyze", path(&corpus("example1.brane"))]);
    let mut v: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    let entries = v["I"].as_array_mut().unwrap();
    let at = entries
        .iter()
        .position(|e| e["item"]["id"] == "mate:n(P,Q)@(*,*,*)")
        .unwrap();
    entries.remove(at);
    let est = dir.path().join("broken.json");
    std::fs::write(&est, serde_json::to_string(&v).unwrap()).unwrap();
    let o = brane(&[
        "verify",
        "--estimate-file",
        est.to_str().unwrap(),
        path(&corpus("example1.brane")),
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("FAIL acceptability"));
    assert!(stderr(&o).contains("mate:n(P,Q)@(*,*,*) ∈ I(*,*,*)"), "{}", stderr(&o));
}

#[test]
fn strict_mode_is_accepted() {
    let o = brane(&["analyze", "--mode", "strict-paper", path(&corpus("viral.brane"))]);
    assert_eq!(o.status.code(), Some(0));
}
