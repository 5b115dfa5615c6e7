"""Graphical criteria for covariate adjustment and the front-door functional.

Every checker returns a :class:`CriterionReport` listing each condition with a
concrete witness path when it fails. Sets are handled per pair: "a back-door
path from X to Z" means a path from any node of X to any node of Z.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidQuery
from .graph import Admg, parse_node_list
from .paths import Path, classify_path, find_open_path
from .projection import latent_project


@dataclass(frozen=True)
class Query:
    x: frozenset
    y: frozenset
    z: frozenset = frozenset()

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = getattr(self, name)
            if isinstance(value, str):
                value = parse_node_list(value)
            object.__setattr__(self, name, frozenset(value))

    @property
    def nodes(self) -> frozenset:
        return self.x | self.y | self.z

    def validate(self, g: Admg) -> "Query":
        if not self.x or not self.y:
            raise InvalidQuery("x and y must be non-empty")
        if self.x & self.y or self.x & self.z or self.y & self.z:
            raise InvalidQuery("x, y and z must be pairwise disjoint")
        unknown = self.nodes - set(g.nodes)
        if unknown:
            raise InvalidQuery(f"query mentions unknown node(s) {sorted(unknown)}")
        hidden = self.nodes & g.latent
        if hidden:
            raise InvalidQuery(f"query mentions latent node(s) {sorted(hidden)}")
        return self

    def to_dict(self) -> dict:
        return {"x": sorted(self.x), "y": sorted(self.y), "z": sorted(self.z)}


@dataclass(frozen=True)
class ConditionResult:
    label: str
    holds: bool
    witness: Optional[Path] = None
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "holds": self.holds,
            "witness": None if self.witness is None else str(self.witness),
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConditionResult":
        w = d.get("witness")
        return cls(d["label"], d["holds"], None if w is None else Path.parse(w), d.get("description", ""))


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    conditions: tuple = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.conditions)

    def condition(self, label: str) -> ConditionResult:
        for c in self.conditions:
            if c.label == label:
                return c
        raise KeyError(label)

    def failing(self) -> list:
        return [c for c in self.conditions if not c.holds]

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "holds": self.holds,
            "conditions": [c.to_dict() for c in self.conditions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CriterionReport":
        return cls(d["criterion"], tuple(ConditionResult.from_dict(c) for c in d["conditions"]))

    def to_text(self) -> str:
        lines = [f"{self.criterion}: {'holds' if self.holds else 'fails'}"]
        for c in self.conditions:
            mark = "ok  " if c.holds else "FAIL"
            line = f"  [{mark}] ({c.label}) {c.description}"
            if c.witness is not None:
                line += f"  witness: {c.witness}"
            lines.append(line)
        return "\n".join(lines)


@dataclass(frozen=True)
class PatternWitness:
    pattern: str  # "a" | "b" | "c"
    path: Path
    k: int


def _cond(label, witness, description) -> ConditionResult:
    return ConditionResult(label, witness is None, witness, description)


def _directed_path(g: Admg, sources, targets, avoid=frozenset()) -> Optional[Path]:
    """Shortest directed path from ``sources`` to ``targets`` with interior outside ``avoid``."""
    pred = {}
    queue = deque()
    for s in sorted(sources):
        pred[s] = None
        queue.append(s)
    while queue:
        v = queue.popleft()
        if v in targets and pred[v] is not None:
            nodes = [v]
            while pred[nodes[-1]] is not None:
                nodes.append(pred[nodes[-1]])
            nodes.reverse()
            return Path(tuple(nodes), tuple((False, True) for _ in nodes[1:]))
        if pred[v] is not None and v in avoid:
            continue
        for w in g.children_of(v):
            if w not in pred:
                pred[w] = v
                queue.append(w)
    return None


def _loop_erase(nodes: list) -> list:
    out, pos = [], {}
    for n in nodes:
        if n in pos:
            del out[pos[n] + 1:]
            pos = {m: i for i, m in enumerate(out)}
        else:
            pos[n] = len(out)
            out.append(n)
    return out


def check_backdoor(g: Admg, q: Query) -> CriterionReport:
    q.validate(g)
    c1 = find_open_path(g, q.x, q.y, q.z, first="back")
    hit = q.z & g.descendants(q.x)
    c2 = _directed_path(g, q.x, hit) if hit else None
    return CriterionReport("backdoor", (
        _cond("1", c1, "z blocks every back-door path from x to y"),
        _cond("2", c2, "no node of z descends from x"),
    ))


def causal_path_nodes(g: Admg, q: Query) -> frozenset:
    """Nodes other than x lying on some proper direct path from x to y."""
    cut = g.mutilate(cut_incoming=q.x)
    return (cut.descendants(q.x) & cut.ancestors(q.y)) - q.x


def check_adjustment(g: Admg, q: Query) -> CriterionReport:
    q.validate(g)
    on_causal = causal_path_nodes(g, q)
    forbidden = g.descendants(on_causal) if on_causal else frozenset()
    bad = q.z & forbidden
    c1 = None
    if bad:
        # x -> ... -> w (proper) then w -> ... -> z, loop-erased
        cut = g.mutilate(cut_incoming=q.x)
        head = _directed_path(cut, q.x, on_causal & g.ancestors(bad))
        tail = _directed_path(g, {head.last}, bad) if head.last not in bad else None
        nodes = list(head.nodes) + (list(tail.nodes[1:]) if tail else [])
        nodes = _loop_erase(nodes)
        c1 = Path(tuple(nodes), tuple((False, True) for _ in nodes[1:]))
    c2 = find_open_path(
        g, q.x, q.y, q.z, proper_to=q.x, stop_at_targets=False,
        accept=lambda p: not classify_path(p, q.x).direct,
    )
    return CriterionReport("adjustment", (
        _cond("1", c1, "no node of z descends from a non-x node on a proper direct path x to y"),
        _cond("2", c2, "z blocks every proper non-direct path from x to y"),
    ))


def find_cond1_violation(g: Admg, q: Query) -> Optional[Path]:
    """A direct path from x to y with no node in z, or None."""
    q.validate(g)
    return find_open_path(g, q.x, q.y, q.z, direct=True)


def check_pearl_fdc(g: Admg, q: Query) -> CriterionReport:
    q.validate(g)
    return CriterionReport("fdc", (
        _cond("1", find_cond1_violation(g, q), "z intercepts every direct path from x to y"),
        _cond("2", find_open_path(g, q.x, q.z, (), first="back"),
              "no open back-door path from x to z"),
        _cond("3", find_open_path(g, q.z, q.y, q.x, first="back"),
              "x blocks every back-door path from z to y"),
    ))


def check_generalized_fdc(g: Admg, q: Query) -> CriterionReport:
    q.validate(g)
    c1 = find_open_path(g, q.x, q.z, (), first="back", proper_to=q.x)
    c2 = find_open_path(g, q.x, q.y, q.z, first="front", proper_to=q.x)
    return CriterionReport("gfdc", (
        _cond("i", c1, "no open proper back-door path from x to z"),
        _cond("ii", c2, "no open proper front-door path from x to y given z"),
    ))


CHECKERS = {
    "backdoor": check_backdoor,
    "adjustment": check_adjustment,
    "fdc": check_pearl_fdc,
    "gfdc": check_generalized_fdc,
}


def find_cond_ii_pattern(g: Admg, q: Query) -> Optional[PatternWitness]:
    """Search the projection onto x, y, z for X->Y, X->Z1<->..<->Zk<-Y or ..<->Zk<->Y."""
    q.validate(g)
    gp = latent_project(g, q.nodes)
    found = []
    for x in sorted(q.x):
        for y in sorted(q.y):
            if gp.has_edge((x, "->", y)):
                found.append(PatternWitness("a", Path((x, y), ((False, True),)), 0))
        for z1 in gp.children_of(x):
            if z1 not in q.z:
                continue
            stack = [[z1]]
            while stack:
                chain = stack.pop()
                last = chain[-1]
                for y in gp.parents_of(last):
                    if y in q.y:
                        found.append(_chain_witness("b", x, chain, y))
                for s in gp.spouses_of(last):
                    if s in q.y:
                        found.append(_chain_witness("c", x, chain, s))
                    elif s in q.z and s not in chain:
                        stack.append(chain + [s])
    if not found:
        return None
    return min(found, key=lambda w: w.path.sort_key())


def _chain_witness(pattern: str, x, chain: list, y) -> PatternWitness:
    nodes = (x, *chain, y)
    heads = [(False, True)] + [(True, True)] * (len(chain) - 1)
    heads.append((True, False) if pattern == "b" else (True, True))
    return PatternWitness(pattern, Path(nodes, tuple(heads)), len(chain))
