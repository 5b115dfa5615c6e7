import json

import pytest

from frontdoor.cli import main
from frontdoor.criteria import CriterionReport, Query, check_generalized_fdc
from frontdoor.distributions import read_model
from frontdoor.graph import read_graph


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_fixture_holds(capsys, fixture_path):
    code, out, _ = run(capsys, "check", "--criterion", "gfdc", fixture_path("fig_nonexample_a.graph"),
                       "--x", "X", "--y", "Y", "--z", "Z1,Z2")
    assert code == 0
    assert out.startswith("gfdc: holds")


def test_check_json_round_trip(capsys, fixture_path):
    path = fixture_path("violate2.graph")
    code, out, _ = run(capsys, "check", path, "--criterion", "fdc", "--x", "X1,X2", "--y", "Y", "--z", "Z",
                       "--format", "json")
    assert code == 0
    report = CriterionReport.from_dict(json.loads(out))
    from frontdoor.criteria import check_pearl_fdc
    assert report == check_pearl_fdc(read_graph(path), Query("X1,X2", "Y", "Z"))


def test_check_expect_mismatch_exits_one(capsys, fixture_path):
    code, _, _ = run(capsys, "check", fixture_path("identifiability_a.graph"), "--x", "X", "--y", "Y",
                     "--z", "Z", "--expect", "holds")
    assert code == 1


def test_evaluate_collider(capsys, fixture_path):
    code, out, _ = run(capsys, "evaluate", fixture_path("collider_k1.model"), "--x", "X", "--y", "Y",
                       "--z", "Z", "--xstar", "X=0", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert (d["functional"]["0"], d["oracle"]["0"], d["gap"]["0"]) == ("8/15", "1/2", "1/30")
    assert d["match"] is False
    code, _, _ = run(capsys, "evaluate", fixture_path("collider_k1.model"), "--x", "X", "--y", "Y",
                     "--z", "Z", "--xstar", "X=0", "--expect", "match")
    assert code == 1


def test_dsep_chain(capsys, fixture_path):
    code, out, _ = run(capsys, "dsep", fixture_path("chain.graph"), "--x", "X", "--y", "Y", "--z", "Z")
    assert code == 0 and out.strip() == "separated=true"
    code, out, _ = run(capsys, "dsep", fixture_path("chain.graph"), "--x", "X", "--y", "Y")
    assert "open path: X -> Z -> Y" in out


def test_project_reference_graph(capsys, fixture_path):
    code, out, _ = run(capsys, "project", fixture_path("latent_projection_a.graph"), "--format", "json")
    expected = read_graph(fixture_path("latent_projection_b.graph"))
    assert code == 0
    assert sorted(json.loads(out)["edges"]) == sorted(" ".join(e) for e in expected.edges())


def test_oracle(capsys, fixture_path):
    code, out, _ = run(capsys, "oracle", fixture_path("collider_k1.model"), "--y", "Y", "--do", "X=0",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["distribution"] == {"0": "1/2", "1": "1/2"}


def test_replay(capsys, fixture_path):
    code, out, _ = run(capsys, "replay", fixture_path("violate3.graph"), "--x", "X", "--y", "Y", "--z", "Z1,Z2")
    assert code == 0 and "derivation valid" in out


@pytest.mark.parametrize("pattern,lift", [("a", None), ("b", None), ("c", None), ("b", 50), ("c", 50)])
def test_counterexample_writes_a_loadable_model(capsys, tmp_path, pattern, lift):
    out_file = tmp_path / "m.model"
    argv = ["counterexample", "--pattern", pattern, "--k", "2", "--out", out_file, "--format", "json"]
    if lift:
        argv += ["--lift", lift]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    report = json.loads(out)["report"]
    assert report["gap"] != "0"
    assert report["positive"]
    read_model(out_file)


def test_usage_and_parse_errors(capsys, fixture_path, tmp_path):
    code, _, err = run(capsys, "check", fixture_path("chain.graph"), "--x", "X", "--y", "X")
    assert code == 2 and json.loads(err.splitlines()[-1])["error"] == "InvalidQuery"
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2
    code, _, _ = run(capsys, "counterexample", "--pattern", "a", "--lift", "3")
    assert code == 2
    bad = tmp_path / "bad.graph"
    bad.write_text("A -> B\nB ~> C\n")
    code, _, err = run(capsys, "dsep", bad, "--x", "A", "--y", "B")
    assert code == 3 and "line 2" in json.loads(err)["message"]
    code, _, _ = run(capsys, "dsep", tmp_path / "missing.graph", "--x", "A", "--y", "B")
    assert code == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "1,2,3,11", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["passed"] and len(d["results"]) == 4
