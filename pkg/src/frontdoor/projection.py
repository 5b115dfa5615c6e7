"""Latent projection of a graph onto a retained node set."""

from __future__ import annotations

from typing import Optional

from .errors import EndpointNotKept, KeepContainsLatent, SegmentNotProjectable
from .graph import BIDIRECTED, DIRECTED, Admg
from .paths import Path


def _explicit_dag(g: Admg):
    """Replace each bidirected edge a<->b by a fresh latent fork; return (children map, fork names)."""
    children = {n: list(g.children_of(n)) for n in g.nodes}
    forks = {}
    for a, b in sorted(g.bidirected_edges):
        name = ("<->", a, b)  # tuples never collide with string labels
        children[name] = [a, b]
        forks[name] = (a, b)
    return children, forks


def _reach(children: dict, start, keep: frozenset) -> dict:
    """Kept nodes reachable from ``start`` by directed paths with non-kept interior.

    Returns node -> predecessor map for path reconstruction.
    """
    pred = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in children[v]:
            if w in pred:
                continue
            pred[w] = v
            if w not in keep:
                stack.append(w)
    return pred


def latent_project(g: Admg, keep) -> Admg:
    """Project ``g`` onto ``keep``.

    Adds ``a -> b`` for every directed path a -> ... -> b whose interior avoids
    ``keep``, and ``a <-> b`` for every trek a <- ... <- v -> ... -> b whose
    interior (source included) avoids ``keep``. Bidirected input edges act as
    two-edge treks through an implicit latent.
    """
    keep = g.check_nodes(keep)
    if keep & g.latent:
        raise KeepContainsLatent(f"cannot keep latent node(s) {sorted(keep & g.latent)}")
    children, forks = _explicit_dag(g)
    directed, bidirected = set(), set()
    for a in keep:
        for b in _reach(children, a, keep):
            if b != a and b in keep:
                directed.add((a, b))
    for v in list(g.nodes) + list(forks):
        if v in keep:
            continue
        hit = sorted(b for b in _reach(children, v, keep) if b in keep)
        for i, a in enumerate(hit):
            for b in hit[i + 1:]:
                bidirected.add((a, b))
    return Admg(sorted(keep), (), directed, bidirected)


def _walk_back(pred: dict, end) -> list:
    out = [end]
    while pred[out[-1]] is not None:
        out.append(pred[out[-1]])
    return out[::-1]


def projection_witness(g: Admg, keep, edge) -> Optional[Path]:
    """A path of ``g`` (directed path or trek, non-kept interior) inducing ``edge``, or None."""
    keep = g.check_nodes(keep)
    children, forks = _explicit_dag(g)
    a, kind, b = edge
    if kind == DIRECTED:
        pred = _reach(children, a, keep)
        if b not in pred:
            return None
        nodes = _walk_back(pred, b)
        return Path(tuple(nodes), tuple((False, True) for _ in nodes[1:]))
    for v in list(g.nodes) + list(forks):
        if v in keep:
            continue
        pred = _reach(children, v, keep)
        if a in pred and b in pred:
            left, right = _walk_back(pred, a), _walk_back(pred, b)
            # trim to the last shared node so the two legs are disjoint
            k = 0
            while k + 1 < min(len(left), len(right)) and left[k + 1] == right[k + 1]:
                k += 1
            left, right = left[k:], right[k:]
            if isinstance(left[0], tuple):
                # implicit latent of a bidirected edge: splice the edge itself
                leg_l, leg_r = left[1:], right[1:]
                nodes = leg_l[::-1] + leg_r
                heads = [(True, False)] * (len(leg_l) - 1) + [(True, True)]
                heads += [(False, True)] * (len(leg_r) - 1)
            else:
                nodes = left[::-1] + right[1:]
                heads = [(True, False)] * (len(left) - 1) + [(False, True)] * (len(right) - 1)
            return Path(tuple(nodes), tuple(heads))
    return None


def project_path(g: Admg, p: Path, keep) -> Path:
    """Replace every maximal non-kept segment of ``p`` by the edge it induces.

    A segment without interior colliders is a directed path or a trek, and
    the induced edge keeps the arrowhead marks at the segment's two ends.
    """
    keep = g.check_nodes(keep)
    if p.first not in keep or p.last not in keep:
        raise EndpointNotKept(f"path endpoints {p.first}, {p.last} must be kept")
    nodes, heads = [p.first], []
    seg_start = 0
    for i in range(1, len(p.nodes)):
        if p.nodes[i] not in keep:
            continue
        seg = p.heads[seg_start:i]
        for j in range(1, len(seg)):
            if seg[j - 1][1] and seg[j][0]:
                raise SegmentNotProjectable(
                    f"collider {p.nodes[seg_start + j]} inside a non-kept segment of {p}"
                )
        heads.append((seg[0][0], seg[-1][1]))
        nodes.append(p.nodes[i])
        seg_start = i
    return Path(tuple(nodes), tuple(heads))
