"""Acyclic directed mixed graphs (ADMGs) and their text format.

A graph is immutable once built. Directed edges are stored as ``(tail, head)``
pairs and bidirected edges as sorted ``(a, b)`` pairs. Edges are exchanged
with callers as triples ``(a, "->", b)`` or ``(a, "<->", b)``.

Text format, one declaration per line::

    node A        # observed node
    latent U      # latent node
    A -> B
    A <-> B

``#`` starts a comment. Nodes mentioned only in edges are observed.
"""

from __future__ import annotations

import heapq
import re
from functools import cached_property
from typing import Iterable

from .errors import (
    CycleDetected,
    DanglingEndpoint,
    DuplicateLabel,
    ParseError,
    SelfLoop,
    UnknownEdge,
    UnknownNode,
)

DIRECTED = "->"
BIDIRECTED = "<->"

Edge = tuple  # (a, "->" | "<->", b)

_LABEL = r"[A-Za-z0-9_.']+"
_LABEL_RE = re.compile(rf"^{_LABEL}$")
_DECL_RE = re.compile(rf"^(node|latent)\s+({_LABEL}(?:\s+{_LABEL})*)$")
_EDGE_RE = re.compile(rf"^({_LABEL})\s*(<->|->|<-)\s*({_LABEL})$")


def _as_set(nodes) -> frozenset:
    if nodes is None:
        return frozenset()
    if isinstance(nodes, str):
        return frozenset([nodes])
    return frozenset(nodes)


class Admg:
    """An acyclic directed mixed graph with optional latent-node marking.

    A DAG is an ``Admg`` without bidirected edges.
    """

    __slots__ = ("_nodes", "_latent", "_directed", "_bidirected", "__dict__")

    def __init__(self, nodes=(), latent=(), directed=(), bidirected=()):
        nodes = list(nodes)
        seen = set()
        for n in nodes:
            if not isinstance(n, str) or not n:
                raise DuplicateLabel(f"invalid node label {n!r}")
            if n in seen:
                raise DuplicateLabel(f"duplicate node label {n!r}")
            seen.add(n)
        latent = _as_set(latent)
        if not latent <= seen:
            raise DanglingEndpoint(f"latent nodes not in graph: {sorted(latent - seen)}")

        dir_edges = set()
        for a, b in directed:
            if a not in seen or b not in seen:
                raise DanglingEndpoint(f"edge {a} -> {b} has an endpoint outside the graph")
            if a == b:
                raise CycleDetected([a, a])
            dir_edges.add((a, b))
        bi_edges = set()
        for a, b in bidirected:
            if a not in seen or b not in seen:
                raise DanglingEndpoint(f"edge {a} <-> {b} has an endpoint outside the graph")
            if a == b:
                raise SelfLoop(f"self-loop {a} <-> {a}")
            bi_edges.add((a, b) if a < b else (b, a))

        self._nodes = tuple(sorted(seen))
        self._latent = latent
        self._directed = frozenset(dir_edges)
        self._bidirected = frozenset(bi_edges)
        self.topological_order()  # raises on cycles

    # -- basic accessors ---------------------------------------------------

    @property
    def nodes(self) -> tuple:
        return self._nodes

    @property
    def latent(self) -> frozenset:
        return self._latent

    @cached_property
    def observed(self) -> tuple:
        return tuple(n for n in self._nodes if n not in self._latent)

    @property
    def directed_edges(self) -> frozenset:
        return self._directed

    @property
    def bidirected_edges(self) -> frozenset:
        return self._bidirected

    @property
    def is_dag(self) -> bool:
        return not self._bidirected

    def edges(self) -> list:
        """All edges as ``(a, kind, b)`` triples in canonical order."""
        out = [(a, DIRECTED, b) for a, b in self._directed]
        out += [(a, BIDIRECTED, b) for a, b in self._bidirected]
        return sorted(out, key=lambda e: (e[0], e[2], e[1]))

    def has_edge(self, edge: Edge) -> bool:
        a, kind, b = edge
        if kind == DIRECTED:
            return (a, b) in self._directed
        if kind == BIDIRECTED:
            return (min(a, b), max(a, b)) in self._bidirected
        raise ValueError(f"unknown edge kind {kind!r}")

    def __contains__(self, node) -> bool:
        return node in self._index

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Admg):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._latent == other._latent
            and self._directed == other._directed
            and self._bidirected == other._bidirected
        )

    def __hash__(self) -> int:
        return hash((self._nodes, self._latent, self._directed, self._bidirected))

    def __repr__(self) -> str:
        parts = [f"{a}{k}{b}" for a, k, b in self.edges()]
        lat = f", latent={sorted(self._latent)}" if self._latent else ""
        return f"Admg({list(self._nodes)}{lat}, [{', '.join(parts)}])"

    # -- adjacency -----------------------------------------------------------

    @cached_property
    def _index(self) -> dict:
        return {n: i for i, n in enumerate(self._nodes)}

    @cached_property
    def _parents(self) -> dict:
        pa = {n: [] for n in self._nodes}
        for a, b in self._directed:
            pa[b].append(a)
        return {n: tuple(sorted(v)) for n, v in pa.items()}

    @cached_property
    def _children(self) -> dict:
        ch = {n: [] for n in self._nodes}
        for a, b in self._directed:
            ch[a].append(b)
        return {n: tuple(sorted(v)) for n, v in ch.items()}

    @cached_property
    def _spouses(self) -> dict:
        sp = {n: [] for n in self._nodes}
        for a, b in self._bidirected:
            sp[a].append(b)
            sp[b].append(a)
        return {n: tuple(sorted(v)) for n, v in sp.items()}

    def check_nodes(self, nodes) -> frozenset:
        """Return ``nodes`` as a frozenset, raising UnknownNode for strangers."""
        s = _as_set(nodes)
        missing = [n for n in s if n not in self._index]
        if missing:
            raise UnknownNode(f"unknown node(s): {sorted(missing)}")
        return s

    def parents_of(self, node: str) -> tuple:
        """Sorted parents of a single node."""
        self.check_nodes([node])
        return self._parents[node]

    def children_of(self, node: str) -> tuple:
        self.check_nodes([node])
        return self._children[node]

    def spouses_of(self, node: str) -> tuple:
        self.check_nodes([node])
        return self._spouses[node]

    def parents(self, s) -> frozenset:
        s = self.check_nodes(s)
        return frozenset(p for n in s for p in self._parents[n])

    def children(self, s) -> frozenset:
        s = self.check_nodes(s)
        return frozenset(c for n in s for c in self._children[n])

    def _closure(self, s, step: dict) -> frozenset:
        seen = set(s)
        stack = list(s)
        while stack:
            for m in step[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return frozenset(seen)

    def ancestors(self, s) -> frozenset:
        """Reflexive ancestors: every node of ``s`` is its own ancestor."""
        return self._closure(self.check_nodes(s), self._parents)

    def descendants(self, s) -> frozenset:
        """Reflexive descendants along directed edges only."""
        return self._closure(self.check_nodes(s), self._children)

    def topological_order(self) -> tuple:
        """Nodes in a topological order of the directed part, ties broken by label."""
        if "_topo" in self.__dict__:
            return self.__dict__["_topo"]
        indeg = {n: 0 for n in self._nodes}
        succ = {n: [] for n in self._nodes}
        for a, b in self._directed:
            indeg[b] += 1
            succ[a].append(b)
        ready = [n for n in self._nodes if indeg[n] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            n = heapq.heappop(ready)
            order.append(n)
            for m in succ[n]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    heapq.heappush(ready, m)
        if len(order) != len(self._nodes):
            raise CycleDetected(self._find_cycle({n for n in self._nodes if indeg[n] > 0}))
        self.__dict__["_topo"] = tuple(order)
        return self.__dict__["_topo"]

    def _find_cycle(self, remaining: set) -> list:
        succ = {n: sorted(b for a, b in self._directed if a == n and b in remaining) for n in remaining}
        start = min(remaining)
        path, pos = [], {}
        node = start
        while node not in pos:
            pos[node] = len(path)
            path.append(node)
            node = succ[node][0]
        return path[pos[node]:] + [node]

    # -- derived graphs ------------------------------------------------------

    def mutilate(self, cut_incoming=(), cut_outgoing=()) -> "Admg":
        """Remove arrowheads into ``cut_incoming`` and tails out of ``cut_outgoing``.

        A bidirected edge carries an arrowhead at both ends, so it is removed
        when either endpoint is in ``cut_incoming``.
        """
        cin = self.check_nodes(cut_incoming)
        cout = self.check_nodes(cut_outgoing)
        directed = [(a, b) for a, b in self._directed if b not in cin and a not in cout]
        bidirected = [(a, b) for a, b in self._bidirected if a not in cin and b not in cin]
        return Admg(self._nodes, self._latent, directed, bidirected)

    def edge_subgraph(self, keep_edges: Iterable[Edge]) -> "Admg":
        """Same nodes, only the listed edges."""
        directed, bidirected = [], []
        for edge in keep_edges:
            a, kind, b = edge
            if kind == "<-":
                a, kind, b = b, DIRECTED, a
            if not self.has_edge((a, kind, b)):
                raise UnknownEdge(f"edge {a} {kind} {b} is not in the graph")
            (directed if kind == DIRECTED else bidirected).append((a, b))
        return Admg(self._nodes, self._latent, directed, bidirected)

    def relabel(self, mapping: dict) -> "Admg":
        f = lambda n: mapping.get(n, n)  # noqa: E731
        return Admg(
            [f(n) for n in self._nodes],
            [f(n) for n in self._latent],
            [(f(a), f(b)) for a, b in self._directed],
            [(f(a), f(b)) for a, b in self._bidirected],
        )

    def expand_bidirected(self) -> "Admg":
        """DAG with each ``a <-> b`` replaced by a fresh latent ``L_a_b -> a, b``."""
        nodes, latent = list(self._nodes), set(self._latent)
        directed = list(self._directed)
        for a, b in sorted(self._bidirected):
            name = f"L_{a}_{b}"
            while name in nodes:
                name += "_"
            nodes.append(name)
            latent.add(name)
            directed += [(name, a), (name, b)]
        return Admg(nodes, latent, directed, ())

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"node {n}" for n in self.observed]
        lines += [f"latent {n}" for n in self._nodes if n in self._latent]
        lines += [f"{a} {k} {b}" for a, k, b in self.edges()]
        return "\n".join(lines) + "\n"


def build_graph(nodes=(), latent=(), directed=(), bidirected=()) -> Admg:
    """Validate and build an ADMG; see :class:`Admg`."""
    return Admg(nodes, latent, directed, bidirected)


def relatives(g: Admg, s, kind: str) -> frozenset:
    if kind == "parents":
        return g.parents(s)
    if kind == "children":
        return g.children(s)
    if kind == "ancestors":
        return g.ancestors(s)
    if kind == "descendants":
        return g.descendants(s)
    raise ValueError(f"unknown relative kind {kind!r}")


def mutilate(g: Admg, cut_incoming=(), cut_outgoing=()) -> Admg:
    return g.mutilate(cut_incoming, cut_outgoing)


def edge_subgraph(g: Admg, keep_edges) -> Admg:
    return g.edge_subgraph(keep_edges)


def parse_graph_lines(lines, first_line: int = 1) -> Admg:
    """Parse graph declarations from an iterable of raw lines."""
    nodes: dict = {}
    latent = set()
    directed, bidirected = [], []

    def declare(name):
        nodes.setdefault(name, None)

    for offset, raw in enumerate(lines):
        lineno = first_line + offset
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DECL_RE.match(line)
        if m:
            for name in m.group(2).split():
                if m.group(1) == "latent":
                    latent.add(name)
                declare(name)
            continue
        m = _EDGE_RE.match(line)
        if m:
            a, arrow, b = m.groups()
            declare(a)
            declare(b)
            if arrow == "->":
                directed.append((a, b))
            elif arrow == "<-":
                directed.append((b, a))
            else:
                bidirected.append((a, b))
            continue
        raise ParseError(f"cannot parse {raw.strip()!r}", lineno)
    try:
        return Admg(list(nodes), latent, directed, bidirected)
    except (CycleDetected, DanglingEndpoint, SelfLoop) as exc:
        raise ParseError(str(exc)) from exc


def parse_graph(text: str) -> Admg:
    return parse_graph_lines(text.splitlines())


def read_graph(path) -> Admg:
    with open(path) as fh:
        return parse_graph(fh.read())


def parse_node_list(text: str) -> frozenset:
    """Parse ``"A,B, C"`` into a node set; the empty string gives the empty set."""
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if not _LABEL_RE.match(n):
            raise ParseError(f"bad node label {n!r}")
    if len(set(names)) != len(names):
        raise ParseError(f"repeated label in {text!r}")
    return frozenset(names)
