"""Exercises the extension module on the bundled corpus."""

import json
from pathlib import Path

import brane_cfa

CORPUS = Path(__file__).resolve().parent.parent / "crates" / "core" / "corpus"
FUSED = "mate:n(P,Q)@(*,*,*)"


def main():
    term = brane_cfa.parse((CORPUS / "example1.brane").read_text())
    assert term.labels() == ["P", "P0", "P1", "Q"], term.labels()
    assert brane_cfa.parse(str(term)) == term

    est = brane_cfa.solve(term)
    assert FUSED in est.contents("*", "*", "*")
    assert len(est.causes(FUSED)) == 1
    assert json.loads(est.to_json())["C"]
    again = brane_cfa.Estimate.from_json(est.to_json())
    assert again == est and est.diff(again) == ""

    ts = brane_cfa.explore(term, depth=4)
    assert not ts.truncated
    assert ts.edges[0][0] == 0
    assert "zero" in ts.states
    assert ts.to_dot().startswith("digraph")

    results = brane_cfa.check(est, (CORPUS / "example1.queries").read_text(), ts)
    witness = next(r for r in results if r["query"] == f"never-on mate(n) {FUSED}")
    assert witness["static"] is False and witness["dynamic"] is True

    report = brane_cfa.verify(term)
    assert report["passed"], report

    try:
        brane_cfa.parse("mate(n)<>@P ||")
    except ValueError as e:
        assert "1:" in str(e)
    else:
        raise AssertionError("syntax error not raised")

    viral = brane_cfa.parse((CORPUS / "viral.brane").read_text())
    chains = brane_cfa.solve(viral).chains("mate:e(phago:v[mate(e)](muVirus,muMemb)@(*,*,*),muEndo)@(*,*,muMemb)")
    assert chains and all(c[0].startswith("(phago(v),") for c in chains), chains

    print("python smoke test passed")


if __name__ == "__main__":
    main()
