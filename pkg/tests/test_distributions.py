import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontdoor.corpus import random_dag, random_query
from frontdoor.counterexamples import chain_model, chain_query
from frontdoor.criteria import Query, check_backdoor
from frontdoor.distributions import (
    Cpt,
    DiscreteModel,
    adjustment_functional,
    check_positivity,
    frontdoor_functional,
    intervene,
    interventional,
    model_to_text,
    observational_joint,
    parse_model,
    random_model,
    read_model,
)
from frontdoor.errors import (
    InvalidModel,
    NonPositiveDistribution,
    ParseError,
    StateSpaceTooLarge,
    ValueOutOfDomain,
    ZeroProbabilityEvent,
)
from frontdoor.graph import Admg, parse_graph, read_graph

from oracles import brute_conditional, brute_prob, frontdoor_by_definition

seeds = st.integers(0, 2**32 - 1)
HALF = (F(1, 2), F(1, 2))


def coin(name):
    return Cpt(name, (0, 1), (), {(): HALF})


def copy(name, parent, p):
    return Cpt(name, (0, 1), (parent,), {(0,): (p, 1 - p), (1,): (1 - p, p)})


@pytest.fixture
def collider():
    return chain_model(1, "b")


def test_fair_coin():
    m = DiscreteModel(Admg(["A"]), [coin("A")])
    j = observational_joint(m)
    assert j.weights == {(0,): F(1, 2), (1,): F(1, 2)}
    assert check_positivity(j)


def test_collider_joint_entry(collider):
    j = observational_joint(collider)
    assert j.prob({"X": 0, "Y": 0, "Z1": 0}) == F(3, 16)
    assert brute_prob(collider, {"X": 0, "Y": 0, "Z1": 0}) == F(3, 16)


def test_latent_fork_copy():
    g = Admg(["U", "X", "Y"], ["U"], [("U", "X"), ("U", "Y")])
    m = DiscreteModel(g, [coin("U"), copy("X", "U", F(1)), copy("Y", "U", F(1))])
    j = observational_joint(m)
    assert j.variables == ("X", "Y")
    assert j.prob({"X": 0, "Y": 0}) == F(1, 2)
    assert not check_positivity(j)


def test_conditional_table_arithmetic(collider):
    j = observational_joint(collider)
    c = j.conditional({"Y"}, {"Z1": 0, "X": 0})
    assert c.prob({"Y": 0}) == F(3, 5)
    assert j.conditional({"X", "Y"}) == j.marginal({"X", "Y"})
    assert j.marginal(j.variables) == j


def test_conditioning_on_impossible_event():
    g = Admg(["X", "Y"], (), [("X", "Y")])
    m = DiscreteModel(g, [coin("X"), copy("Y", "X", F(1))])
    with pytest.raises(ZeroProbabilityEvent):
        observational_joint(m).conditional({"Y"}, {"X": 0, "Y": 1})


def test_intervention_on_collider_parent(collider):
    t = intervene(collider, {"X": 0})
    assert t.prob({"Y": 0}) == F(1, 2)
    assert t.prob({"X": 1}) == 0
    with pytest.raises(ValueOutOfDomain):
        intervene(collider, {"X": 2})


def test_chain_intervention_equals_conditioning():
    g = parse_graph("X -> Z\nZ -> Y\n")
    m = random_model(g, random.Random(3))
    j = observational_joint(m)
    for z in (0, 1):
        assert interventional(m, {"Y"}, {"Z": z}) == j.conditional({"Y"}, {"Z": z})


def test_source_intervention_equals_conditioning():
    g = parse_graph("X -> Y\nY -> W\n")
    m = random_model(g, random.Random(4))
    j = observational_joint(m)
    assert interventional(m, {"Y", "W"}, {"X": 1}) == j.conditional({"Y", "W"}, {"X": 1})


def test_collider_front_door_value(collider):
    j = observational_joint(collider)
    f = frontdoor_functional(j, chain_query(1), {"X": 0})
    assert f.prob({"Y": 0}) == F(8, 15)
    assert frontdoor_by_definition(collider, ["X"], ["Y"], ["Z1"], {"X": 0}, {"Y": 0}) == F(8, 15)


def test_functional_collapses_when_y_is_isolated():
    g = parse_graph("X -> Z\nnode Y\n")
    m = random_model(g, random.Random(5))
    j = observational_joint(m)
    assert frontdoor_functional(j, Query("X", "Y", "Z"), {"X": 0}) == j.marginal({"Y"})


def test_violate_two_functional_is_p_y_given_x2(fixture_path):
    g = read_graph(fixture_path("violate2.graph"))
    q = Query("X1,X2", "Y", "Z")
    rng = random.Random(6)
    for _ in range(5):
        m = random_model(g, rng)
        j = observational_joint(m)
        for x1 in (0, 1):
            for x2 in (0, 1):
                f = frontdoor_functional(j, q, {"X1": x1, "X2": x2})
                assert f == j.conditional({"Y"}, {"X2": x2})
                assert f == interventional(m, {"Y"}, {"X1": x1, "X2": x2})


def test_adjustment_examples():
    fork = parse_graph("Z -> X\nZ -> Y\nX -> Y\n")
    m = random_model(fork, random.Random(8))
    j = observational_joint(m)
    assert adjustment_functional(j, Query("X", "Y", "Z"), {"X": 1}) == interventional(m, {"Y"}, {"X": 1})
    assert adjustment_functional(j, Query("X", "Y"), {"X": 1}) == j.conditional({"Y"}, {"X": 1})
    chain = parse_graph("X -> Z\nZ -> Y\n")
    mc = random_model(chain, random.Random(9))
    jc = observational_joint(mc)
    assert adjustment_functional(jc, Query("X", "Y", "Z"), {"X": 0}) != interventional(mc, {"Y"}, {"X": 0})


def test_functional_refuses_zero_conditioners():
    g = parse_graph("X -> Z\nZ -> Y\n")
    m = DiscreteModel(g, [coin("X"), copy("Z", "X", F(1)), copy("Y", "Z", F(3, 4))])
    j = observational_joint(m)
    with pytest.raises(NonPositiveDistribution):
        frontdoor_functional(j, Query("X", "Y", "Z"), {"X": 0})
    with pytest.raises(NonPositiveDistribution):
        adjustment_functional(j, Query("X", "Y", "Z"), {"X": 0})


def test_state_space_cap():
    g = Admg([f"V{i}" for i in range(6)])
    m = random_model(g, random.Random(0))
    with pytest.raises(StateSpaceTooLarge):
        observational_joint(m, cap=32)


def test_cpt_validation():
    with pytest.raises(InvalidModel):
        Cpt("A", (0, 1), (), {(): (F(1, 2), F(1, 3))})
    g = parse_graph("A -> B\n")
    with pytest.raises(InvalidModel):
        DiscreteModel(g, [coin("A"), coin("B")])


def test_model_file_round_trip(fixture_path):
    text = fixture_path("collider_k1.model").read_text()
    m = parse_model(text)
    assert parse_model(model_to_text(m)) == m
    assert model_to_text(parse_model(model_to_text(m))) == model_to_text(m)
    assert read_model(fixture_path("collider_k1.model")) == m


def test_model_parse_errors():
    with pytest.raises(ParseError):
        parse_model("A -> B\ncpt A\ndomain 0 1\n: 1/2 1/2\ncpt B | A\ndomain 0 1\n0 : 1 0\n")
    with pytest.raises(ParseError):
        parse_model("cpt A\n: 1/2 1/2\n")


def test_multivalued_domains_round_trip():
    g = parse_graph("A -> B\n")
    a = Cpt("A", (0, 1, 2), (), {(): (F(1, 3), F(1, 3), F(1, 3))})
    b = Cpt("B", (0, 1), ("A",), {(0,): (F(1), F(0)), (1,): HALF, (2,): (F(0), F(1))})
    m = DiscreteModel(g, [a, b])
    assert parse_model(model_to_text(m)) == m
    assert observational_joint(m).prob({"B": 0}) == F(1, 2)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_joint_and_intervention_match_brute_force(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 5), rng.randint(0, 2))
    m = random_model(g, rng)
    j = observational_joint(m)
    assert sum(j.weights.values()) == 1
    for key, w in j.weights.items():
        assert w == brute_prob(m, dict(zip(j.variables, key)))
    x = rng.choice(g.observed)
    t = intervene(m, {x: 1})
    for key, w in t.weights.items():
        assert w == brute_prob(m, dict(zip(t.variables, key)), do={x: 1})


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_functional_matches_definition(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(3, 5), rng.randint(0, 1))
    q = random_query(rng, g)
    m = random_model(g, rng)
    xs = {v: 0 for v in q.x}
    f = frontdoor_functional(observational_joint(m), q, xs)
    yv = {v: 0 for v in q.y}
    assert f.prob(yv) == frontdoor_by_definition(m, sorted(q.x), sorted(q.y), sorted(q.z), xs, yv)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_rule_two_consistency(seed):
    """Without latents and back-door paths, intervening equals conditioning."""
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 6), 0)
    q = random_query(rng, g)
    if not check_backdoor(g, Query(q.x, q.y)).holds:
        return
    m = random_model(g, rng)
    j = observational_joint(m)
    xs = {v: 1 for v in q.x}
    assert interventional(m, q.y, xs) == j.conditional(q.y, xs)
    assert brute_conditional(m, {v: 0 for v in q.y}, xs) == j.conditional(q.y, xs).prob({v: 0 for v in q.y})
