"""Do-calculus rule applicability and a mechanical replay of the front-door derivation."""

from __future__ import annotations

from dataclasses import dataclass

from .criteria import Query, check_generalized_fdc
from .errors import CriterionNotSatisfied, SetsNotDisjoint
from .graph import Admg
from .paths import d_separated
from .projection import latent_project


@dataclass(frozen=True)
class RuleQuery:
    rule: int
    x: frozenset = frozenset()
    y: frozenset = frozenset()
    z: frozenset = frozenset()
    w: frozenset = frozenset()

    def __post_init__(self):
        if self.rule not in (1, 2, 3):
            raise ValueError(f"no do-calculus rule {self.rule}")
        for name in ("x", "y", "z", "w"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        sets = [self.x, self.y, self.z, self.w]
        for i in range(4):
            for j in range(i + 1, 4):
                if sets[i] & sets[j]:
                    raise SetsNotDisjoint(f"rule query sets overlap on {sorted(sets[i] & sets[j])}")


def rule_graph(g: Admg, rq: RuleQuery) -> Admg:
    """The mutilated graph in which the rule's independence is checked."""
    if rq.rule == 1:
        return g.mutilate(cut_incoming=rq.x)
    if rq.rule == 2:
        return g.mutilate(cut_incoming=rq.x, cut_outgoing=rq.z)
    gx = g.mutilate(cut_incoming=rq.x)
    z_w = rq.z - gx.ancestors(rq.w) if rq.w else rq.z
    return g.mutilate(cut_incoming=rq.x | z_w)


def rule_applicable(g: Admg, rq: RuleQuery) -> bool:
    """Whether ``(y _||_ z | x, w)`` holds in the rule's mutilated graph."""
    return d_separated(rule_graph(g, rq), rq.y, rq.z, rq.x | rq.w)


@dataclass(frozen=True)
class DerivationStep:
    label: str
    rule: int
    claim: str
    graph: str
    independence: str
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class DerivationTrace:
    projected: Admg
    z_ch: frozenset
    z_nch: frozenset
    steps: tuple

    @property
    def valid(self) -> bool:
        return all(s.holds for s in self.steps)

    def to_dict(self) -> dict:
        return {
            "projected_graph": self.projected.to_text(),
            "z_ch": sorted(self.z_ch),
            "z_nch": sorted(self.z_nch),
            "valid": self.valid,
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_text(self) -> str:
        lines = [
            f"projection onto x, y, z: {self.projected!r}",
            f"z_ch = {sorted(self.z_ch)}   z_nch = {sorted(self.z_nch)}",
        ]
        for s in self.steps:
            mark = "ok  " if s.holds else "FAIL"
            lines.append(f"  [{mark}] ({s.label}) rule {s.rule}: {s.claim}")
            lines.append(f"         check {s.independence} in {s.graph}")
        lines.append("derivation valid" if self.valid else "derivation INVALID")
        return "\n".join(lines)


def _fmt(s) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def _graph_name(rq: RuleQuery, g: Admg) -> str:
    if rq.rule == 1:
        return f"G[cut into {_fmt(rq.x)}]"
    if rq.rule == 2:
        return f"G[cut into {_fmt(rq.x)}, out of {_fmt(rq.z)}]"
    gx = g.mutilate(cut_incoming=rq.x)
    z_w = rq.z - gx.ancestors(rq.w) if rq.w else rq.z
    return f"G[cut into {_fmt(rq.x | z_w)}]"


def replay_main_proof(g: Admg, q: Query) -> DerivationTrace:
    """Replay the six do-calculus steps that derive the front-door functional.

    Works on the projection onto x, y, z. Each step is a rule application
    whose d-separation premise is checked on its mutilated graph.
    """
    report = check_generalized_fdc(g, q)
    if not report.holds:
        raise CriterionNotSatisfied(report.to_text())
    gp = latent_project(g, q.nodes)
    x, y, z = q.x, q.y, q.z
    z_ch = z & gp.children(x)
    z_nch = z - z_ch
    X, Y, Zc, Zn, Z = _fmt(x), _fmt(y), _fmt(z_ch), _fmt(z_nch), _fmt(z)
    plan = [
        ("I", RuleQuery(2, z=x, y=z), f"P_{X}({Z}) = P({Z} | {X})"),
        ("II", RuleQuery(2, x=x, z=z_ch, y=y, w=z_nch),
         f"P_{X}({Y} | {Zc}, {Zn}) = P_{X},{Zc}({Y} | {Zn})"),
        ("III", RuleQuery(3, x=z_ch, z=x, y=y, w=z_nch),
         f"P_{X},{Zc}({Y} | {Zn}) = P_{Zc}({Y} | {Zn})"),
        ("IV", RuleQuery(1, x=z_ch, y=x, z=z_nch), f"P_{Zc}({X} | {Zn}) = P_{Zc}({X})"),
        ("V", RuleQuery(3, z=z_ch, y=x), f"P_{Zc}({X}) = P({X})"),
        ("VI", RuleQuery(2, z=z_ch, y=y, w=x | z_nch),
         f"P_{Zc}({Y} | {X}, {Zn}) = P({Y} | {X}, {Z})"),
    ]
    steps = []
    for label, rq, claim in plan:
        indep = f"({_fmt(rq.y)} _||_ {_fmt(rq.z)} | {_fmt(rq.x | rq.w)})"
        steps.append(DerivationStep(label, rq.rule, claim, _graph_name(rq, gp), indep,
                                    rule_applicable(gp, rq)))
    return DerivationTrace(gp, z_ch, z_nch, tuple(steps))
