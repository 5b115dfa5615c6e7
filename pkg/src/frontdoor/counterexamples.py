"""Models on which the front-door functional disagrees with the true interventional distribution.

Chain models live on the projected patterns X->Z1<->...<->Zk<-Y (pattern b)
and X->Z1<->...<->Zk<->Y (pattern c). Lifted models live on a pre-image of
those patterns and are strictly positive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .criteria import Query
from .distributions import (
    Cpt,
    DiscreteModel,
    JointTable,
    frontdoor_functional,
    interventional,
    observational_joint,
)
from .errors import InvalidK, InvalidLength, InvalidSpec, LengthMismatch
from .graph import Admg

HALF = Fraction(1, 2)
COIN = {(): (HALF, HALF)}


def _multiset_zero(a: int, b: int) -> Fraction:
    """P(Z = 0) when Z is uniform on the multiset [0, 1, a, b]."""
    return Fraction(3 - a - b, 4)


@dataclass(frozen=True)
class TransitionMatrices:
    m0: tuple
    m1: tuple

    @classmethod
    def standard(cls) -> "TransitionMatrices":
        m0 = tuple(tuple(_multiset_zero(a, b) for b in (0, 1)) for a in (0, 1))
        m1 = tuple(tuple(1 - m0[a][b] for b in (0, 1)) for a in (0, 1))
        return cls(m0, m1)

    def matrix(self, z: int) -> tuple:
        return self.m0 if z == 0 else self.m1

    @staticmethod
    def det(m) -> Fraction:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    def product(self, zs) -> tuple:
        acc = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        for z in zs:
            m = self.matrix(z)
            acc = tuple(tuple(sum(acc[i][t] * m[t][j] for t in range(2)) for j in range(2))
                        for i in range(2))
        return acc


def matrix_joint(k: int, a: int, b: int, z) -> Fraction:
    """``2^-(k+1) e_a^T M_{z1} ... M_{zk} e_b`` for the pattern (b) chain model."""
    z = tuple(z)
    if len(z) != k:
        raise LengthMismatch(f"expected {k} z values, got {len(z)}")
    return TransitionMatrices.standard().product(z)[a][b] / 2 ** (k + 1)


@dataclass(frozen=True)
class PreimageSpec:
    """Shape of a pre-image of pattern (b) or (c).

    ``s_chain_lengths[2i]`` and ``s_chain_lengths[2i+1]`` are the copier
    chains from U_i and U_{i+1} into the T chain above Z_{i+1}; pattern (c)
    has one more entry for the chain from U_k into Y. ``t_chain_lengths[i]``
    is the length of the pair-copier chain ending in Z_{i+1}.
    """

    k: int
    s_chain_lengths: tuple
    t_chain_lengths: tuple
    pattern: str = "b"

    def __post_init__(self):
        object.__setattr__(self, "s_chain_lengths", tuple(self.s_chain_lengths))
        object.__setattr__(self, "t_chain_lengths", tuple(self.t_chain_lengths))
        if self.pattern not in ("b", "c"):
            raise InvalidSpec(f"pattern must be 'b' or 'c', not {self.pattern!r}")
        if self.k < 1:
            raise InvalidSpec("k must be at least 1")
        want_s = 2 * self.k + (self.pattern == "c")
        if len(self.s_chain_lengths) != want_s:
            raise InvalidSpec(f"need {want_s} S chain lengths, got {len(self.s_chain_lengths)}")
        if len(self.t_chain_lengths) != self.k:
            raise InvalidSpec(f"need {self.k} T chain lengths, got {len(self.t_chain_lengths)}")
        if any(n < 0 for n in self.s_chain_lengths + self.t_chain_lengths):
            raise InvalidSpec("chain lengths must be non-negative")

    @classmethod
    def uniform(cls, k: int, pattern: str = "b", s: int = 1, t: int = 1) -> "PreimageSpec":
        return cls(k, (s,) * (2 * k + (pattern == "c")), (t,) * k, pattern)

    @classmethod
    def trivial(cls, k: int, pattern: str = "b") -> "PreimageSpec":
        return cls.uniform(k, pattern, 0, 0)

    @property
    def s_count(self) -> int:
        return sum(self.s_chain_lengths)

    @property
    def t_count(self) -> int:
        return sum(self.t_chain_lengths)

    def query(self) -> Query:
        return Query({"X"}, {"Y"}, {f"Z{i}" for i in range(1, self.k + 1)})


def _u(spec: PreimageSpec, i: int) -> str:
    if i == 0:
        return "X"
    if i == spec.k and spec.pattern == "b":
        return "Y"
    return f"U{i}"


class _Builder:
    def __init__(self):
        self.nodes, self.latent, self.edges, self.cpts = [], set(), [], []

    def add(self, name, parents, domain, table, latent=True):
        self.nodes.append(name)
        if latent:
            self.latent.add(name)
        self.edges += [(p, name) for p in parents]
        self.cpts.append(Cpt(name, domain, parents, table))

    def model(self) -> DiscreteModel:
        return DiscreteModel(Admg(self.nodes, self.latent, self.edges, ()), self.cpts)


def _copy_table(p: Fraction) -> dict:
    return {(v,): tuple(p if w == v else 1 - p for w in (0, 1)) for v in (0, 1)}


def _pair_copy_table(p: Fraction, split: bool) -> dict:
    """T = 2*l + r, each component copying its source with probability p."""
    table = {}
    sources = itertools.product((0, 1), (0, 1)) if split else [(v // 2, v % 2) for v in range(4)]
    for key_bits in sources:
        row = []
        for v in range(4):
            l, r = divmod(v, 2)
            pl = p if l == key_bits[0] else 1 - p
            pr = p if r == key_bits[1] else 1 - p
            row.append(pl * pr)
        table[key_bits if split else (2 * key_bits[0] + key_bits[1],)] = tuple(row)
    return table


def _z_table(pair_node: bool) -> dict:
    if pair_node:
        return {(v,): (_multiset_zero(*divmod(v, 2)), 1 - _multiset_zero(*divmod(v, 2)))
                for v in range(4)}
    return {(a, b): (_multiset_zero(a, b), 1 - _multiset_zero(a, b))
            for a in (0, 1) for b in (0, 1)}


def _build(spec: PreimageSpec, p: Fraction) -> DiscreteModel:
    b = _Builder()
    for i in range(spec.k + 1):
        b.add(_u(spec, i), (), (0, 1), COIN, latent=_u(spec, i).startswith("U"))

    def s_chain(branch: int, source: str) -> str:
        last = source
        for j in range(1, spec.s_chain_lengths[branch] + 1):
            name = f"S{branch}_{j}"
            b.add(name, (last,), (0, 1), _copy_table(p))
            last = name
        return last

    for i in range(1, spec.k + 1):
        left = s_chain(2 * (i - 1), _u(spec, i - 1))
        right = s_chain(2 * (i - 1) + 1, _u(spec, i))
        parents = (left, right)
        for j in range(1, spec.t_chain_lengths[i - 1] + 1):
            name = f"T{i}_{j}"
            b.add(name, parents, (0, 1, 2, 3), _pair_copy_table(p, split=(j == 1)))
            parents = (name,)
        b.add(f"Z{i}", parents, (0, 1), _z_table(len(parents) == 1), latent=False)
    if spec.pattern == "c":
        last = s_chain(2 * spec.k, _u(spec, spec.k))
        b.add("Y", (last,), (0, 1), _copy_table(Fraction(1)), latent=False)
    return b.model()


def chain_model(k: int, pattern: str = "b") -> DiscreteModel:
    """U_0..U_k fair coins, X = U_0, Z_i uniform on [0, 1, U_{i-1}, U_i].

    Pattern b: Y = U_k. Pattern c: U_k stays latent and Y copies it exactly.
    """
    if k < 1:
        raise InvalidK("k must be at least 1")
    return _build(PreimageSpec.trivial(k, pattern), Fraction(1))


def chain_query(k: int) -> Query:
    return PreimageSpec.trivial(k).query()


def preimage_graph(spec: PreimageSpec) -> Admg:
    return _build(spec, Fraction(1, 2)).graph


def lifted_model(spec: PreimageSpec, n: int) -> DiscreteModel:
    """Pre-image model where every S and every T component copies with probability n/(n+1)."""
    if n < 1:
        raise InvalidSpec("n must be a positive integer")
    return _build(spec, Fraction(n, n + 1))


def copy_event_probability(spec: PreimageSpec, n: int) -> tuple:
    """``(P_n(E), P_n(X, Y, Z | E))`` where E is "every S and T component copies exactly"."""
    m = lifted_model(spec, n)
    full = observational_joint(DiscreteModel(Admg(m.graph.nodes, (), m.graph.directed_edges, ()), m.cpts))
    names = full.variables
    parents = {v: m.cpts[v].parents for v in names}
    checks = []
    for v in names:
        if v.startswith("S"):
            checks.append((v, lambda a, v=v: a[v] == a[parents[v][0]]))
        elif v.startswith("T"):
            if len(parents[v]) == 2:
                checks.append((v, lambda a, v=v: a[v] == 2 * a[parents[v][0]] + a[parents[v][1]]))
            else:
                checks.append((v, lambda a, v=v: a[v] == a[parents[v][0]]))
    keep = [v for v in names if v in spec.query().nodes]
    p_e = Fraction(0)
    sub = {}
    for key, w in full.weights.items():
        a = dict(zip(names, key))
        if all(ok(a) for _, ok in checks):
            p_e += w
            k2 = tuple(a[v] for v in keep)
            sub[k2] = sub.get(k2, Fraction(0)) + w
    dom = {v: full.domains[v] for v in keep}
    return p_e, JointTable(keep, dom, {k2: w / p_e for k2, w in sub.items()})


@dataclass(frozen=True)
class GapReport:
    functional: Fraction
    oracle: Fraction
    xstar: dict
    y: dict

    @property
    def gap(self) -> Fraction:
        return self.functional - self.oracle

    def to_dict(self) -> dict:
        return {
            "xstar": self.xstar,
            "y": self.y,
            "functional": str(self.functional),
            "oracle": str(self.oracle),
            "gap": str(self.gap),
        }


def evaluate_gap(m: DiscreteModel, q: Query, xstar: dict, y: Optional[dict] = None) -> GapReport:
    """Front-door functional vs. intervention oracle at one y value (default all zeros)."""
    y = y or {v: m.cpts[v].domain[0] for v in sorted(q.y)}
    j = observational_joint(m)
    f = frontdoor_functional(j, q, xstar).prob(y)
    o = interventional(m, q.y, xstar).prob(y)
    return GapReport(f, o, dict(xstar), dict(y))


def frontdoor_gap(k: int) -> Fraction:
    """Functional minus truth at x*=0, y=0 on the pattern (b) chain model."""
    if k < 1:
        raise InvalidK("k must be at least 1")
    return evaluate_gap(chain_model(k, "b"), chain_query(k), {"X": 0}, {"Y": 0}).gap


def direct_path_counterexample(length: int, copy: Fraction = Fraction(3, 4)):
    """X -> W1 -> ... -> Y, each node a noisy copy of its parent, with empty z."""
    if length < 1:
        raise InvalidLength("length must be at least 1")
    copy = Fraction(copy)
    if copy == HALF or not 0 <= copy <= 1:
        raise InvalidLength("copy probability must lie in [0, 1] and differ from 1/2")
    names = ["X"] + [f"W{i}" for i in range(1, length)] + ["Y"]
    b = _Builder()
    b.add("X", (), (0, 1), COIN, latent=False)
    for prev, cur in zip(names, names[1:]):
        b.add(cur, (prev,), (0, 1), _copy_table(copy), latent=False)
    return b.model(), Query({"X"}, {"Y"}, frozenset())


def embed_in_supergraph(m: DiscreteModel, g: Admg) -> DiscreteModel:
    """Extend ``m`` to the DAG ``g``: new nodes are the constant 0, new parents are ignored."""
    old = m.graph
    if not g.is_dag:
        raise InvalidSpec("supergraph must be a DAG")
    if not set(old.nodes) <= set(g.nodes) or not set(old.directed_edges) <= set(g.directed_edges):
        raise InvalidSpec("graph is not a subgraph of the supergraph")
    if old.latent != g.latent & set(old.nodes):
        raise InvalidSpec("supergraph changes which original nodes are latent")
    domains = {v: m.cpts[v].domain if v in m.cpts else (0, 1) for v in g.nodes}
    cpts = []
    for v in g.nodes:
        parents = g.parents_of(v)
        rows = itertools.product(*(domains[p] for p in parents))
        if v not in m.cpts:
            table = {r: (Fraction(1), Fraction(0)) for r in rows}
            cpts.append(Cpt(v, (0, 1), parents, table))
            continue
        c = m.cpts[v]
        pos = [parents.index(p) for p in c.parents]
        table = {r: c.table[tuple(r[i] for i in pos)] for r in rows}
        cpts.append(Cpt(v, c.domain, parents, table))
    return DiscreteModel(g, cpts)
