"""Exact discrete probability: CPT models, joints, interventions, identifying functionals.

Every probability is a :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional

from .criteria import Query
from .errors import (
    InvalidModel,
    InvalidQuery,
    NonPositiveDistribution,
    ParseError,
    StateSpaceTooLarge,
    UnknownNode,
    ValueOutOfDomain,
    ZeroProbabilityEvent,
)
from .graph import Admg, parse_graph_lines

DEFAULT_STATE_CAP = 2**24
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Cpt:
    """``P(variable | parents)`` as a table keyed by parent-value tuples."""

    variable: str
    domain: tuple
    parents: tuple
    table: Mapping

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "parents", tuple(self.parents))
        if len(set(self.domain)) != len(self.domain) or not self.domain:
            raise InvalidModel(f"{self.variable}: domain must be non-empty without repeats")
        table = {}
        for key, probs in self.table.items():
            probs = tuple(Fraction(p) for p in probs)
            if len(probs) != len(self.domain):
                raise InvalidModel(f"{self.variable}: row {key} has {len(probs)} entries")
            if any(p < 0 for p in probs):
                raise InvalidModel(f"{self.variable}: negative probability in row {key}")
            if sum(probs) != 1:
                raise InvalidModel(f"{self.variable}: row {key} sums to {sum(probs)}")
            table[tuple(key)] = probs
        object.__setattr__(self, "table", table)

    def prob(self, value, parent_values=()) -> Fraction:
        return self.table[tuple(parent_values)][self.domain.index(value)]


class DiscreteModel:
    """A DAG with one CPT per node (latent nodes included)."""

    def __init__(self, graph: Admg, cpts):
        if not graph.is_dag:
            raise InvalidModel("a discrete model needs a DAG; expand bidirected edges into latents")
        cpts = {c.variable: c for c in cpts} if not isinstance(cpts, Mapping) else dict(cpts)
        if set(cpts) != set(graph.nodes):
            missing = set(graph.nodes) ^ set(cpts)
            raise InvalidModel(f"CPTs and graph nodes differ on {sorted(missing)}")
        for v, cpt in cpts.items():
            if set(cpt.parents) != set(graph.parents_of(v)) or len(cpt.parents) != len(set(cpt.parents)):
                raise InvalidModel(f"{v}: CPT parents {cpt.parents} != graph parents {graph.parents_of(v)}")
            rows = itertools.product(*(cpts[p].domain for p in cpt.parents))
            expected = set(rows)
            if set(cpt.table) != expected:
                raise InvalidModel(f"{v}: table does not cover the parent-domain product")
        self.graph = graph
        self.cpts = cpts

    @property
    def domains(self) -> dict:
        return {v: c.domain for v, c in self.cpts.items()}

    @property
    def observed(self) -> tuple:
        return self.graph.observed

    def state_space(self) -> int:
        return math.prod(len(c.domain) for c in self.cpts.values())

    def __eq__(self, other):
        if not isinstance(other, DiscreteModel):
            return NotImplemented
        return self.graph == other.graph and self.cpts == other.cpts

    def __repr__(self):
        return f"DiscreteModel({self.graph!r})"


class JointTable:
    """Exact joint distribution over an ordered list of finite variables.

    ``weights`` is dense: every assignment of the domain product is present.
    """

    def __init__(self, variables, domains: Mapping, weights: Mapping):
        self.variables = tuple(variables)
        self.domains = {v: tuple(domains[v]) for v in self.variables}
        dense = {}
        for key in itertools.product(*(self.domains[v] for v in self.variables)):
            w = weights.get(key, ZERO)
            if w < 0:
                raise InvalidModel(f"negative weight at {key}")
            dense[key] = Fraction(w)
        if len(dense) != len(weights) and set(weights) - set(dense):
            raise InvalidModel("weights mention assignments outside the domains")
        if sum(dense.values()) != 1:
            raise InvalidModel(f"weights sum to {sum(dense.values())}, not 1")
        self.weights = dense

    def __eq__(self, other):
        if not isinstance(other, JointTable):
            return NotImplemented
        return self.variables == other.variables and self.domains == other.domains and self.weights == other.weights

    def __repr__(self):
        rows = ", ".join(f"{k}: {w}" for k, w in self.weights.items())
        return f"JointTable({self.variables}, {{{rows}}})"

    @cached_property
    def is_positive(self) -> bool:
        return all(w > 0 for w in self.weights.values())

    def _index(self, names) -> list:
        missing = [n for n in names if n not in self.domains]
        if missing:
            raise UnknownNode(f"variables not in table: {sorted(missing)}")
        return [self.variables.index(n) for n in names]

    def marginal(self, keep) -> "JointTable":
        order = [v for v in self.variables if v in set(keep)]
        self._index(keep)
        idx = self._index(order)
        out = {}
        for key, w in self.weights.items():
            sub = tuple(key[i] for i in idx)
            out[sub] = out.get(sub, ZERO) + w
        return JointTable(order, {v: self.domains[v] for v in order}, out)

    def prob(self, event: Mapping) -> Fraction:
        """Probability of a partial assignment ``{var: value}``."""
        idx = self._index(list(event))
        for v, val in event.items():
            if val not in self.domains[v]:
                raise ValueOutOfDomain(f"{v}={val} not in {self.domains[v]}")
        vals = list(event.values())
        return sum((w for key, w in self.weights.items()
                    if all(key[i] == val for i, val in zip(idx, vals))), ZERO)

    def conditional(self, target, given: Optional[Mapping] = None) -> "JointTable":
        """``P(target | given)`` as a table over ``target``."""
        given = dict(given or {})
        p_given = self.prob(given)
        if p_given == 0:
            raise ZeroProbabilityEvent(f"P({given}) = 0")
        order = [v for v in self.variables if v in set(target)]
        self._index(target)
        idx = self._index(order)
        gidx = self._index(list(given))
        gvals = list(given.values())
        out = {}
        for key, w in self.weights.items():
            if all(key[i] == val for i, val in zip(gidx, gvals)):
                sub = tuple(key[i] for i in idx)
                out[sub] = out.get(sub, ZERO) + w
        return JointTable(order, {v: self.domains[v] for v in order},
                          {k: w / p_given for k, w in out.items()})

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "rows": [[list(k), str(w)] for k, w in self.weights.items()],
        }

    def max_abs_diff(self, other: "JointTable") -> Fraction:
        if self.variables != other.variables or self.domains != other.domains:
            raise ValueError("tables range over different variables")
        return max(abs(self.weights[k] - other.weights[k]) for k in self.weights)


def marginal(j: JointTable, keep) -> JointTable:
    return j.marginal(keep)


def conditional(j: JointTable, target, given=None) -> JointTable:
    return j.conditional(target, given)


def check_positivity(j: JointTable) -> bool:
    return j.is_positive


def _run(m: DiscreteModel, clamp: Mapping, cap: int) -> JointTable:
    if m.state_space() > cap:
        raise StateSpaceTooLarge(f"{m.state_space()} assignments exceed the cap of {cap}")
    g = m.graph
    keep = set(g.observed)
    order = g.topological_order()
    pending = {v: len(g.children_of(v)) for v in order}
    names: list = []
    table = {(): ONE}
    for v in order:
        cpt = m.cpts[v]
        pidx = [names.index(p) for p in cpt.parents]
        new = {}
        if v in clamp:
            val = clamp[v]
            for key, w in table.items():
                new[key + (val,)] = w
        else:
            for key, w in table.items():
                probs = cpt.table[tuple(key[i] for i in pidx)]
                for val, p in zip(cpt.domain, probs):
                    if p:
                        new[key + (val,)] = w * p
        names.append(v)
        table = new
        for p in cpt.parents:
            pending[p] -= 1
        dead = [i for i, n in enumerate(names) if n not in keep and pending[n] == 0]
        if dead:
            live = [i for i in range(len(names)) if i not in dead]
            summed = {}
            for key, w in table.items():
                sub = tuple(key[i] for i in live)
                summed[sub] = summed.get(sub, ZERO) + w
            names = [names[i] for i in live]
            table = summed
    order_obs = [v for v in g.observed]
    idx = [names.index(v) for v in order_obs]
    weights = {}
    for key, w in table.items():
        sub = tuple(key[i] for i in idx)
        weights[sub] = weights.get(sub, ZERO) + w
    return JointTable(order_obs, {v: m.cpts[v].domain for v in order_obs}, weights)


def observational_joint(m: DiscreteModel, cap: int = DEFAULT_STATE_CAP) -> JointTable:
    """``P(v) = sum_u prod_v P(v | pa(v))`` over the observed nodes."""
    return _run(m, {}, cap)


def intervene(m: DiscreteModel, assignment: Mapping, cap: int = DEFAULT_STATE_CAP) -> JointTable:
    """Truncated factorization for ``do(assignment)``, latents summed out.

    The intervened variables stay in the table, clamped to their values.
    """
    for v, val in assignment.items():
        if v not in m.cpts:
            raise UnknownNode(f"unknown node {v}")
        if v in m.graph.latent:
            raise InvalidQuery(f"cannot intervene on latent node {v}")
        if val not in m.cpts[v].domain:
            raise ValueOutOfDomain(f"{v}={val} not in {m.cpts[v].domain}")
    return _run(m, dict(assignment), cap)


def interventional(m: DiscreteModel, y, assignment: Mapping, cap: int = DEFAULT_STATE_CAP) -> JointTable:
    """``P(y | do(assignment))`` as a table over ``y``."""
    return intervene(m, assignment, cap).marginal(y)


def _split(j: JointTable, names) -> list:
    return [j.variables.index(n) for n in sorted(names)]


def _check_xstar(j: JointTable, q: Query, xstar: Mapping):
    if set(xstar) != set(q.x):
        raise InvalidQuery(f"x* must assign exactly {sorted(q.x)}")
    for v, val in xstar.items():
        if val not in j.domains[v]:
            raise ValueOutOfDomain(f"{v}={val} not in {j.domains[v]}")


def frontdoor_functional(j: JointTable, q: Query, xstar: Mapping) -> JointTable:
    """``sum_z P(z | x*) sum_x P(y | x, z) P(x)`` as a table over y.

    Terms with zero weight are skipped; any conditioner that would need
    dividing by zero raises NonPositiveDistribution.
    """
    _check_xstar(j, q, xstar)
    sub = j.marginal(q.nodes)
    xi, yi, zi = _split(sub, q.x), _split(sub, q.y), _split(sub, q.z)
    p_x, p_xz, p_xyz = {}, {}, {}
    for key, w in sub.weights.items():
        xv = tuple(key[i] for i in xi)
        yv = tuple(key[i] for i in yi)
        zv = tuple(key[i] for i in zi)
        p_x[xv] = p_x.get(xv, ZERO) + w
        p_xz[xv, zv] = p_xz.get((xv, zv), ZERO) + w
        p_xyz[xv, yv, zv] = p_xyz.get((xv, yv, zv), ZERO) + w
    xs = tuple(xstar[n] for n in sorted(q.x))
    if p_x.get(xs, ZERO) == 0:
        raise NonPositiveDistribution(f"P(x*={xs}) = 0")
    y_vals = list(itertools.product(*(sub.domains[n] for n in sorted(q.y))))
    z_vals = list(itertools.product(*(sub.domains[n] for n in sorted(q.z))))
    x_vals = [xv for xv in p_x if p_x[xv] > 0]
    out = {yv: ZERO for yv in y_vals}
    for zv in z_vals:
        w_z = p_xz[xs, zv] / p_x[xs]
        if w_z == 0:
            continue
        for xv in x_vals:
            denom = p_xz[xv, zv]
            if denom == 0:
                raise NonPositiveDistribution(f"P(x={xv}, z={zv}) = 0")
            f = w_z * p_x[xv] / denom
            for yv in y_vals:
                out[yv] += f * p_xyz[xv, yv, zv]
    return _as_y_table(sub, q, out)


def adjustment_functional(j: JointTable, q: Query, xstar: Mapping) -> JointTable:
    """``sum_z P(y | x*, z) P(z)`` as a table over y."""
    _check_xstar(j, q, xstar)
    sub = j.marginal(q.nodes)
    xi, yi, zi = _split(sub, q.x), _split(sub, q.y), _split(sub, q.z)
    xs = tuple(xstar[n] for n in sorted(q.x))
    p_z, p_xsz, p_xsyz = {}, {}, {}
    for key, w in sub.weights.items():
        xv = tuple(key[i] for i in xi)
        yv = tuple(key[i] for i in yi)
        zv = tuple(key[i] for i in zi)
        p_z[zv] = p_z.get(zv, ZERO) + w
        if xv == xs:
            p_xsz[zv] = p_xsz.get(zv, ZERO) + w
            p_xsyz[yv, zv] = p_xsyz.get((yv, zv), ZERO) + w
    y_vals = list(itertools.product(*(sub.domains[n] for n in sorted(q.y))))
    out = {yv: ZERO for yv in y_vals}
    for zv, pz in p_z.items():
        if pz == 0:
            continue
        denom = p_xsz.get(zv, ZERO)
        if denom == 0:
            raise NonPositiveDistribution(f"P(x*={xs}, z={zv}) = 0")
        for yv in y_vals:
            out[yv] += pz * p_xsyz.get((yv, zv), ZERO) / denom
    return _as_y_table(sub, q, out)


def _as_y_table(sub: JointTable, q: Query, out: dict) -> JointTable:
    ys = sorted(q.y)
    order = [v for v in sub.variables if v in q.y]
    perm = [ys.index(v) for v in order]
    weights = {tuple(k[i] for i in perm): w for k, w in out.items()}
    return JointTable(order, {v: sub.domains[v] for v in order}, weights)


# -- random models -----------------------------------------------------------

def random_distribution(rng: random.Random, size: int, max_weight: int = 9) -> tuple:
    """Strictly positive rational vector: numerators uniform on 1..max_weight, normalized."""
    raw = [rng.randint(1, max_weight) for _ in range(size)]
    total = sum(raw)
    return tuple(Fraction(r, total) for r in raw)


def random_model(g: Admg, rng: random.Random, domains: Optional[Mapping] = None,
                 max_weight: int = 9) -> DiscreteModel:
    """Random strictly positive CPTs on a DAG; binary domains by default."""
    domains = {v: tuple((domains or {}).get(v, (0, 1))) for v in g.nodes}
    cpts = []
    for v in g.nodes:
        parents = g.parents_of(v)
        rows = itertools.product(*(domains[p] for p in parents))
        table = {row: random_distribution(rng, len(domains[v]), max_weight) for row in rows}
        cpts.append(Cpt(v, domains[v], parents, table))
    return DiscreteModel(g, cpts)


# -- model file format -------------------------------------------------------

def _fmt_value(v) -> str:
    return str(v)


def _parse_value(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def model_to_text(m: DiscreteModel) -> str:
    """Graph block followed by one ``cpt`` block per node, in label order."""
    out = [m.graph.to_text().rstrip("\n"), ""]
    for v in m.graph.nodes:
        cpt = m.cpts[v]
        head = f"cpt {v}"
        if cpt.parents:
            head += " | " + " ".join(cpt.parents)
        out.append(head)
        out.append("domain " + " ".join(_fmt_value(d) for d in cpt.domain))
        for row in itertools.product(*(m.cpts[p].domain for p in cpt.parents)):
            lhs = " ".join(_fmt_value(x) for x in row)
            rhs = " ".join(str(p) for p in cpt.table[row])
            out.append(f"{lhs} : {rhs}" if lhs else f": {rhs}")
        out.append("")
    return "\n".join(out)


def parse_model(text: str) -> DiscreteModel:
    lines = text.splitlines()
    starts = [i for i, raw in enumerate(lines) if raw.split("#", 1)[0].strip().startswith("cpt ")]
    graph_end = starts[0] if starts else len(lines)
    graph = parse_graph_lines(lines[:graph_end])
    blocks = []
    for n, start in enumerate(starts):
        end = starts[n + 1] if n + 1 < len(starts) else len(lines)
        blocks.append((start, lines[start:end]))
    domains, specs = {}, []
    for start, block in blocks:
        head = block[0].split("#", 1)[0].strip()[4:]
        name, _, parents = head.partition("|")
        name = name.strip()
        parents = tuple(parents.split())
        domain, rows = None, []
        for off, raw in enumerate(block[1:], start=start + 2):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("domain"):
                domain = tuple(_parse_value(t) for t in line.split()[1:])
                continue
            if ":" not in line:
                raise ParseError(f"expected 'parent values : probabilities', got {line!r}", off)
            lhs, rhs = line.split(":", 1)
            try:
                probs = tuple(Fraction(t) for t in rhs.split())
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad probability in {line!r}", off) from exc
            rows.append((tuple(_parse_value(t) for t in lhs.split()), probs, off))
        if domain is None:
            raise ParseError(f"cpt {name} has no domain line", start + 1)
        domains[name] = domain
        specs.append((name, parents, domain, rows))
    cpts = []
    try:
        for name, parents, domain, rows in specs:
            table = {}
            for key, probs, off in rows:
                if len(key) != len(parents):
                    raise ParseError(f"row has {len(key)} parent values, expected {len(parents)}", off)
                table[key] = probs
            cpts.append(Cpt(name, domain, parents, table))
        return DiscreteModel(graph, cpts)
    except InvalidModel as exc:
        raise ParseError(str(exc)) from exc


def read_model(path) -> DiscreteModel:
    with open(path) as fh:
        return parse_model(fh.read())
