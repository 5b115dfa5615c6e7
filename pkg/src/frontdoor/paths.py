"""Paths in mixed graphs: enumeration, classification, openness, d-separation.

A path is stored as its node sequence plus, for every edge traversed, a pair
``(head_at_left, head_at_right)``. A directed edge has exactly one arrowhead,
a bidirected edge has two.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import LimitExceeded, SetsNotDisjoint
from .graph import BIDIRECTED, DIRECTED, Admg

DEFAULT_PATH_LIMIT = 10**6

# traversal codes, also the tie-break order between parallel edges
_FORWARD, _BACKWARD, _BIDIRECTED = 0, 1, 2
_HEADS = {_FORWARD: (False, True), _BACKWARD: (True, False), _BIDIRECTED: (True, True)}
_CODES = {v: k for k, v in _HEADS.items()}


@dataclass(frozen=True)
class Path:
    nodes: tuple
    heads: tuple

    def __post_init__(self):
        if len(self.heads) != len(self.nodes) - 1:
            raise ValueError("a path needs exactly one traversal between consecutive nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"path is not simple: {self.nodes}")
        for h in self.heads:
            if h not in _CODES:
                raise ValueError(f"bad traversal marks {h}")

    @classmethod
    def parse(cls, text: str) -> "Path":
        """Build a path from ``"X -> Z <- Y <-> W"``."""
        toks = text.split()
        if len(toks) % 2 == 0:
            raise ValueError(f"malformed path {text!r}")
        nodes = tuple(toks[0::2])
        arrows = {"->": (False, True), "<-": (True, False), "<->": (True, True)}
        try:
            heads = tuple(arrows[a] for a in toks[1::2])
        except KeyError as exc:
            raise ValueError(f"malformed path {text!r}") from exc
        return cls(nodes, heads)

    def __str__(self) -> str:
        arrows = {(False, True): "->", (True, False): "<-", (True, True): "<->"}
        out = [self.nodes[0]]
        for h, n in zip(self.heads, self.nodes[1:]):
            out += [arrows[h], n]
        return " ".join(out)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def first(self):
        return self.nodes[0]

    @property
    def last(self):
        return self.nodes[-1]

    @property
    def interior(self) -> tuple:
        return self.nodes[1:-1]

    def edges(self) -> list:
        """The graph edges used, as ``(a, kind, b)`` triples."""
        out = []
        for (a, b), (hl, hr) in zip(zip(self.nodes, self.nodes[1:]), self.heads):
            if hl and hr:
                out.append((min(a, b), BIDIRECTED, max(a, b)))
            elif hr:
                out.append((a, DIRECTED, b))
            else:
                out.append((b, DIRECTED, a))
        return out

    def is_collider(self, i: int) -> bool:
        """Collider status of interior position ``i`` (0 < i < len - 1)."""
        if not 0 < i < len(self.nodes) - 1:
            raise IndexError("only interior nodes can be colliders")
        return self.heads[i - 1][1] and self.heads[i][0]

    def reversed(self) -> "Path":
        return Path(self.nodes[::-1], tuple((r, l) for l, r in self.heads[::-1]))

    def is_in(self, g: Admg) -> bool:
        return all(g.has_edge(e) for e in self.edges())

    def sort_key(self):
        codes = tuple(_CODES[h] for h in self.heads)
        return (len(self.nodes), self.nodes[0], tuple(zip(self.nodes[1:], codes)))


@dataclass(frozen=True)
class PathClass:
    kind: str  # "frontdoor" | "backdoor"
    direct: bool
    proper: bool


def _traversals(g: Admg, v) -> list:
    """Edges leaving ``v`` as ``(neighbor, code)`` sorted canonically."""
    cache = g.__dict__.setdefault("_traversal_cache", {})
    if v not in cache:
        out = [(c, _FORWARD) for c in g.children_of(v)]
        out += [(p, _BACKWARD) for p in g.parents_of(v)]
        out += [(s, _BIDIRECTED) for s in g.spouses_of(v)]
        out.sort()
        cache[v] = out
    return cache[v]


def enumerate_paths(g: Admg, sources, targets, max_nodes: Optional[int] = None,
                    limit: int = DEFAULT_PATH_LIMIT) -> list:
    """All simple paths from ``sources`` to ``targets``, both edge kinds in either direction.

    Paths may run through other source or target nodes. Raises LimitExceeded
    instead of truncating when more than ``limit`` paths exist.
    """
    sources = g.check_nodes(sources)
    targets = g.check_nodes(targets)
    if sources & targets:
        raise SetsNotDisjoint("path endpoints must come from disjoint sets")
    max_nodes = len(g.nodes) if max_nodes is None else max_nodes
    found = []

    def extend(nodes, heads, on_path):
        v = nodes[-1]
        if v in targets and len(nodes) > 1:
            found.append(Path(tuple(nodes), tuple(heads)))
            if len(found) > limit:
                raise LimitExceeded(f"more than {limit} paths")
        if len(nodes) >= max_nodes:
            return
        for w, code in _traversals(g, v):
            if w in on_path:
                continue
            nodes.append(w)
            heads.append(_HEADS[code])
            on_path.add(w)
            extend(nodes, heads, on_path)
            on_path.discard(w)
            nodes.pop()
            heads.pop()

    for s in sorted(sources):
        extend([s], [], {s})
    found.sort(key=Path.sort_key)
    return found


def classify_path(p: Path, x_set) -> PathClass:
    x_set = frozenset(x_set)
    kind = "backdoor" if p.heads and p.heads[0][0] else "frontdoor"
    direct = bool(p.heads) and all(h == (False, True) for h in p.heads)
    proper = not any(n in x_set for n in p.nodes[1:])
    return PathClass(kind, direct, proper)


def is_open(g: Admg, p: Path, cond, ancestors_of_cond=None) -> bool:
    """Interior colliders must be ancestors of ``cond``; interior non-colliders must avoid it."""
    cond = g.check_nodes(cond)
    an = g.ancestors(cond) if ancestors_of_cond is None else ancestors_of_cond
    for i in range(1, len(p.nodes) - 1):
        if p.is_collider(i):
            if p.nodes[i] not in an:
                return False
        elif p.nodes[i] in cond:
            return False
    return True


def _check_disjoint(*sets):
    seen = set()
    for s in sets:
        if seen & s:
            raise SetsNotDisjoint(f"sets overlap on {sorted(seen & s)}")
        seen |= s


def d_separated(g: Admg, x, y, z=()) -> bool:
    """Whether ``z`` d-separates ``x`` from ``y``.

    Reachability over states (node, arrived-with-arrowhead). Walks suffice:
    a walk whose colliders are ancestors of ``z`` and whose non-colliders avoid
    ``z`` exists iff such a simple path exists.
    """
    x, y, z = g.check_nodes(x), g.check_nodes(y), g.check_nodes(z)
    _check_disjoint(x, y, z)
    if not x or not y:
        return True
    an_z = g.ancestors(z)
    seen = set()
    queue = deque()
    for s in x:
        for w, code in _traversals(g, s):
            queue.append((w, _HEADS[code][1]))
    while queue:
        state = queue.popleft()
        if state in seen:
            continue
        seen.add(state)
        v, head_in = state
        if v in y:
            return False
        for w, code in _traversals(g, v):
            head_at_v, head_at_w = _HEADS[code]
            if head_in and head_at_v:
                if v not in an_z:
                    continue
            elif v in z:
                continue
            if (w, head_at_w) not in seen:
                queue.append((w, head_at_w))
    return True


def d_separated_oracle(g: Admg, x, y, z=()) -> bool:
    """Brute-force d-separation by enumerating every simple path."""
    x, y, z = g.check_nodes(x), g.check_nodes(y), g.check_nodes(z)
    _check_disjoint(x, y, z)
    if not x or not y:
        return True
    return not any(is_open(g, p, z) for p in enumerate_paths(g, x, y))


def iter_open_paths(g: Admg, sources, targets, cond=(), *, first: str = "any",
                    direct: bool = False, proper_to=None, max_nodes: Optional[int] = None,
                    stop_at_targets: bool = True, accept=None) -> Iterator[Path]:
    """Yield simple open paths in DFS order, pruning blocked prefixes.

    ``first`` restricts the first traversal ("front": no arrowhead at the
    source, "back": arrowhead at the source). ``proper_to`` is a node set the
    path may only touch at its first node. By default paths stop at the first
    target hit, which loses nothing for existence questions: a prefix of an
    open path is open and keeps its first edge. ``accept`` filters complete
    paths.
    """
    sources = g.check_nodes(sources)
    targets = g.check_nodes(targets)
    cond = g.check_nodes(cond)
    avoid = frozenset(proper_to) if proper_to is not None else frozenset()
    an = g.ancestors(cond)
    limit = len(g.nodes) if max_nodes is None else max_nodes

    def extend(nodes, heads, on_path):
        v = nodes[-1]
        if len(nodes) > 1 and v in targets:
            p = Path(tuple(nodes), tuple(heads))
            if accept is None or accept(p):
                yield p
            if stop_at_targets:
                return
        if len(nodes) >= limit:
            return
        for w, code in _traversals(g, v):
            if w in on_path or w in avoid:
                continue
            h = _HEADS[code]
            if len(nodes) == 1:
                if first == "front" and h[0]:
                    continue
                if first == "back" and not h[0]:
                    continue
            else:
                if heads[-1][1] and h[0]:
                    if v not in an:
                        continue
                elif v in cond:
                    continue
            if direct and code != _FORWARD:
                continue
            nodes.append(w)
            heads.append(h)
            on_path.add(w)
            yield from extend(nodes, heads, on_path)
            on_path.discard(w)
            nodes.pop()
            heads.pop()

    for s in sorted(sources - targets):
        yield from extend([s], [], {s})


def find_open_path(g: Admg, sources, targets, cond=(), **kw) -> Optional[Path]:
    """Canonical (shortest, then lexicographic) open path, or None."""
    if next(iter_open_paths(g, sources, targets, cond, **kw), None) is None:
        return None
    for n in range(2, len(g.nodes) + 1):
        best = None
        for p in iter_open_paths(g, sources, targets, cond, max_nodes=n, **kw):
            if len(p) == n and (best is None or p.sort_key() < best.sort_key()):
                best = p
        if best is not None:
            return best
    raise AssertionError("open path vanished during deepening")
