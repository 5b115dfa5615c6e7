import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontdoor.corpus import random_admg, random_dag
from frontdoor.errors import CycleDetected, ParseError, SelfLoop, UnknownEdge, UnknownNode
from frontdoor.graph import Admg, parse_graph, parse_node_list, read_graph

from oracles import nx_ancestors

seeds = st.integers(0, 2**32 - 1)


def test_parse_declarations_and_edges():
    g = parse_graph("latent U  # hidden\nnode A\nU -> A\nU -> B\nA <-> B\nC <- B\n")
    assert g.nodes == ("A", "B", "C", "U")
    assert g.latent == {"U"}
    assert g.observed == ("A", "B", "C")
    assert g.has_edge(("B", "->", "C"))
    assert g.has_edge(("B", "<->", "A"))
    assert not g.is_dag


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_graph("A -> B\nA => C\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_graph("A -> B\nB -> C\nC -> A\n")


def test_cycle_reports_the_cycle():
    with pytest.raises(CycleDetected) as exc:
        Admg(["A", "B"], (), [("A", "B"), ("B", "A")])
    assert set(exc.value.cycle) == {"A", "B"}


def test_self_loops_rejected():
    with pytest.raises(CycleDetected):
        Admg(["A"], (), [("A", "A")])
    with pytest.raises(SelfLoop):
        Admg(["A"], (), (), [("A", "A")])


def test_relatives_are_reflexive_for_ancestors():
    g = parse_graph("A -> B\nB -> C\nD <-> C\n")
    assert g.ancestors({"C"}) == {"A", "B", "C"}
    assert g.descendants({"A"}) == {"A", "B", "C"}
    assert g.parents({"C"}) == {"B"}
    assert g.spouses_of("C") == ("D",)
    with pytest.raises(UnknownNode):
        g.ancestors({"Q"})


def test_mutilate_removes_bidirected_into_cut_nodes():
    g = parse_graph("X -> Z\nZ -> Y\nX <-> Y\nW -> X\n")
    cut = g.mutilate(cut_incoming={"X"})
    assert not cut.has_edge(("W", "->", "X"))
    assert not cut.has_edge(("X", "<->", "Y"))
    assert cut.has_edge(("X", "->", "Z"))
    out = g.mutilate(cut_outgoing={"X"})
    assert not out.has_edge(("X", "->", "Z"))
    assert out.has_edge(("X", "<->", "Y"))


def test_edge_subgraph_rejects_foreign_edges():
    g = parse_graph("A -> B\nB -> C\n")
    assert g.edge_subgraph([("B", "<-", "A")]).edges() == [("A", "->", "B")]
    with pytest.raises(UnknownEdge):
        g.edge_subgraph([("A", "->", "C")])


def test_text_round_trip(fixture_path):
    g = read_graph(fixture_path("latent_projection_a.graph"))
    assert parse_graph(g.to_text()) == g


def test_expand_bidirected_gives_a_dag():
    g = parse_graph("X -> Z\nZ -> Y\nX <-> Y\n")
    d = g.expand_bidirected()
    assert d.is_dag
    assert d.latent == {"L_X_Y"}
    assert set(d.children_of("L_X_Y")) == {"X", "Y"}


def test_parse_node_list():
    assert parse_node_list(" A, B ,C") == {"A", "B", "C"}
    assert parse_node_list("") == frozenset()
    with pytest.raises(ParseError):
        parse_node_list("A,A")


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_ancestors_match_networkx(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 7), rng.randint(0, 3))
    for v in g.nodes:
        assert g.ancestors({v}) == nx_ancestors(g, {v})


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_topological_order_respects_edges(seed):
    g = random_admg(random.Random(seed), 7)
    pos = {v: i for i, v in enumerate(g.topological_order())}
    assert all(pos[a] < pos[b] for a, b in g.directed_edges)
