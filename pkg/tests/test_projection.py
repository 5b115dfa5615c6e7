import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontdoor.corpus import random_dag
from frontdoor.errors import EndpointNotKept, KeepContainsLatent, SegmentNotProjectable
from frontdoor.graph import parse_graph, read_graph
from frontdoor.paths import Path, d_separated, enumerate_paths
from frontdoor.projection import latent_project, project_path, projection_witness

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture
def reference_pair(fixture_path):
    return read_graph(fixture_path("latent_projection_a.graph")), read_graph(fixture_path("latent_projection_b.graph"))


def test_reference_projection_is_exact(reference_pair):
    g, expected = reference_pair
    assert latent_project(g, g.observed) == expected


def test_reference_witnesses(reference_pair):
    g, _ = reference_pair
    keep = g.observed
    assert str(projection_witness(g, keep, ("X", "<->", "Y"))) == "X <- U4 <- U5 -> Y"
    assert str(projection_witness(g, keep, ("Z2", "->", "Y"))) == "Z2 -> U1 -> Y"
    assert projection_witness(g, keep, ("X", "->", "Y")) is None


def test_reference_path_projection(reference_pair):
    g, _ = reference_pair
    pi = Path.parse("X <- U4 -> Z1 -> Z2 -> U1 -> Y")
    assert str(project_path(g, pi, g.observed)) == "X <-> Z1 -> Z2 -> Y"


def test_segment_with_collider_is_rejected():
    g = parse_graph("latent U\nA -> U\nB -> U\n")
    with pytest.raises(SegmentNotProjectable):
        project_path(g, Path.parse("A -> U <- B"), {"A", "B"})
    with pytest.raises(EndpointNotKept):
        project_path(g, Path.parse("A -> U"), {"A", "B"})


def test_cannot_keep_latents():
    g = parse_graph("latent U\nU -> A\n")
    with pytest.raises(KeepContainsLatent):
        latent_project(g, {"U", "A"})


def test_projecting_observed_nodes_away():
    g = parse_graph("X -> M\nM -> Y\nW -> X\nW -> Y\n")
    gp = latent_project(g, {"X", "Y"})
    assert gp.edges() == [("X", "->", "Y"), ("X", "<->", "Y")]


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_projection_preserves_dsep(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 5), rng.randint(0, 3))
    gp = latent_project(g, g.observed)
    obs = list(g.observed)
    for _ in range(15):
        rng.shuffle(obs)
        if len(obs) < 2:
            break
        x, y = {obs[0]}, {obs[1]}
        z = {v for v in obs[2:] if rng.random() < 0.5}
        assert d_separated(g, x, y, z) == d_separated(gp, x, y, z)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_every_projected_edge_has_a_witness(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 5), rng.randint(1, 3))
    gp = latent_project(g, g.observed)
    for e in gp.edges():
        w = projection_witness(g, g.observed, e)
        assert w is not None and w.is_in(g)
        assert project_path(g, w, g.observed).edges() == [e]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_paths_project_into_the_projection(seed):
    rng = random.Random(seed)
    g = random_dag(rng, rng.randint(2, 4), rng.randint(1, 3))
    obs = g.observed
    gp = latent_project(g, obs)
    if len(obs) < 2:
        return
    for p in enumerate_paths(g, {obs[0]}, {obs[1]}):
        try:
            q = project_path(g, p, obs)
        except SegmentNotProjectable:
            continue
        assert q.is_in(gp)
        assert [n for n in p.nodes if n in set(obs)] == list(q.nodes)
