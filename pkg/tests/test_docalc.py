import pytest

from frontdoor.criteria import Query
from frontdoor.docalc import RuleQuery, replay_main_proof, rule_applicable, rule_graph
from frontdoor.errors import CriterionNotSatisfied, SetsNotDisjoint
from frontdoor.graph import parse_graph, read_graph

FRONT_DOOR = parse_graph("X -> Z\nZ -> Y\nX <-> Y\n")


def test_rule_two_front_door_steps():
    assert rule_applicable(FRONT_DOOR, RuleQuery(2, z={"X"}, y={"Z"}))
    assert not rule_applicable(FRONT_DOOR, RuleQuery(2, z={"X"}, y={"Y"}))
    assert rule_applicable(FRONT_DOOR, RuleQuery(2, z={"Z"}, y={"Y"}, w={"X"}))


def test_rule_one_and_three():
    g = parse_graph("Z -> X\nX -> Y\n")
    assert rule_applicable(g, RuleQuery(1, x={"X"}, y={"Y"}, z={"Z"}))
    assert not rule_applicable(g, RuleQuery(3, z={"Z"}, y={"Y"}))
    assert rule_applicable(g, RuleQuery(3, x={"X"}, z={"Z"}, y={"Y"}))


def test_rule_three_keeps_arrows_into_ancestors_of_w():
    g = parse_graph("V -> Z\nZ -> W\nW <-> Y\nV <-> Y\n")
    rq = RuleQuery(3, z={"Z"}, y={"Y"}, w={"W"})
    assert rule_graph(g, rq).has_edge(("V", "->", "Z"))
    assert not rule_applicable(g, rq)
    assert rule_applicable(g, RuleQuery(3, z={"Z"}, y={"Y"}))


def test_rule_query_sets_disjoint():
    with pytest.raises(SetsNotDisjoint):
        RuleQuery(2, x={"A"}, z={"A"})


def test_replay_on_classic_front_door():
    trace = replay_main_proof(FRONT_DOOR, Query("X", "Y", "Z"))
    assert trace.valid
    assert [s.label for s in trace.steps] == ["I", "II", "III", "IV", "V", "VI"]
    assert trace.z_ch == {"Z"} and not trace.z_nch


def test_replay_splits_children(fixture_path):
    g = read_graph(fixture_path("violate3.graph"))
    trace = replay_main_proof(g, Query("X", "Y", "Z1,Z2"))
    assert trace.valid
    assert trace.z_ch == {"Z1"} and trace.z_nch == {"Z2"}
    assert "derivation valid" in trace.to_text()


def test_replay_refuses_when_criterion_fails(fixture_path):
    g = read_graph(fixture_path("identifiability_a.graph"))
    with pytest.raises(CriterionNotSatisfied):
        replay_main_proof(g, Query("X", "Y", "Z"))
