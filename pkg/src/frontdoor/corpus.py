"""Seeded random graphs and queries for property tests and the soundness sweep."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .criteria import Query, check_generalized_fdc
from .graph import Admg

DEFAULT_SEED = 20240601


def random_dag(rng: random.Random, n_observed: int, n_latent: int = 0, p: float = 0.35) -> Admg:
    """Edges follow a random order; each latent gets at least two children when possible."""
    observed = [f"V{i}" for i in range(1, n_observed + 1)]
    latent = [f"U{i}" for i in range(1, n_latent + 1)]
    order = observed + latent
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    edges = set()
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            if rng.random() < p:
                edges.add((a, b))
    for u in latent:
        later = [v for v in order if pos[v] > pos[u]]
        kids = [b for a, b in edges if a == u]
        for v in rng.sample(later, min(len(later), 2)) if len(kids) < 2 else ():
            edges.add((u, v))
    return Admg(order, latent, sorted(edges), ())


def random_admg(rng: random.Random, n: int, p_dir: float = 0.3, p_bi: float = 0.2) -> Admg:
    nodes = [f"V{i}" for i in range(1, n + 1)]
    order = nodes[:]
    rng.shuffle(order)
    directed, bidirected = [], []
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            if rng.random() < p_dir:
                directed.append((a, b))
            if rng.random() < p_bi:
                bidirected.append((a, b))
    return Admg(nodes, (), directed, bidirected)


def random_query(rng: random.Random, g: Admg, max_x: int = 2, max_y: int = 1) -> Query:
    obs = list(g.observed)
    rng.shuffle(obs)
    nx = rng.randint(1, min(max_x, len(obs) - 1))
    ny = rng.randint(1, min(max_y, len(obs) - nx))
    rest = obs[nx + ny:]
    z = [v for v in rest if rng.random() < 0.5]
    return Query(frozenset(obs[:nx]), frozenset(obs[nx:nx + ny]), frozenset(z))


@dataclass(frozen=True)
class CorpusInstance:
    index: int
    graph: Admg
    query: Query
    seed: int


def criterion_corpus(size: int, seed: int = DEFAULT_SEED, max_observed: int = 7,
                     max_latent: int = 3, tries: int = 40, bias: float = 0.5) -> Iterator[CorpusInstance]:
    """Random DAG + query pairs; with probability ``bias`` the query is re-drawn until the criterion holds."""
    master = random.Random(seed)
    for i in range(size):
        s = master.randrange(2**32)
        rng = random.Random(s)
        g = random_dag(rng, rng.randint(3, max_observed), rng.randint(0, max_latent),
                       p=rng.choice((0.3, 0.4, 0.5)))
        q = random_query(rng, g)
        if rng.random() < bias:
            for _ in range(tries):
                if check_generalized_fdc(g, q).holds:
                    break
                q = random_query(rng, g)
        yield CorpusInstance(i, g, q, s)
