"""The reproducibility checks behind ``frontdoor verify-paper`` and the acceptance tests.

Each check returns ``(passed, detail)``; :func:`run_check` adds wall-clock
timing and fails any check that exceeds its time budget.
"""

from __future__ import annotations

import inspect
import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .corpus import DEFAULT_SEED, criterion_corpus, random_admg, random_dag
from .counterexamples import (
    PreimageSpec,
    TransitionMatrices,
    chain_model,
    chain_query,
    direct_path_counterexample,
    evaluate_gap,
    frontdoor_gap,
    lifted_model,
    matrix_joint,
)
from .criteria import Query, check_generalized_fdc, check_pearl_fdc, find_cond_ii_pattern
from .distributions import (
    DiscreteModel,
    frontdoor_functional,
    interventional,
    observational_joint,
    random_model,
)
from .docalc import replay_main_proof
from .graph import Admg, parse_graph
from .paths import d_separated, enumerate_paths, is_open
from .projection import latent_project

SWEEP_SIZE = 500
DSEP_GRAPHS = 200
PROJECTION_GRAPHS = 200
FIXTURE_MODELS = 20
CONVERGENCE_BOUND = Fraction(1, 100)

# fixture name -> (x, y, z)
EXAMPLE_QUERIES = {
    "fig_nonexample_a": ("X", "Y", "Z1,Z2"),
    "fig_nonexample_a2": ("X1,X2", "Y", "Z"),
    "fig_nonexample_a3": ("X", "Y", "Z1,Z2,Z3,Z4"),
    "violate2": ("X1,X2", "Y", "Z"),
    "fig_nonexample_b2": ("X1,X2", "Y", "Z1,Z2,Z3"),
    "fig_nonexample_c1": ("X", "Y", "Z1,Z2"),
    "fig_nonexample_c2": ("X", "Y", "Z1,Z2,Z3,Z4"),
    "fig_nonexample_c3": ("X", "Y", "Z1,Z2,Z3"),
}

# fixture name -> (x, y, z, pearl holds, failing pearl conditions, generalized holds)
VERDICT_FIXTURES = {
    "violate2": ("X1,X2", "Y", "Z", False, ["2"], True),
    "violate3": ("X", "Y", "Z1,Z2", False, ["3"], True),
    "identifiability_a": ("X", "Y", "Z", False, None, False),
    "identifiability_b": ("X", "Y", "Z", True, [], True),
}


def fixture_text(name: str) -> str:
    return resources.files("frontdoor").joinpath("fixtures").joinpath(name).read_text()


def load_fixture(name: str) -> Admg:
    return parse_graph(fixture_text(name + ".graph"))


def _x_assignments(m: DiscreteModel, x) -> list:
    names = sorted(x)
    return [dict(zip(names, vals)) for vals in itertools.product(*(m.cpts[v].domain for v in names))]


def functional_matches_oracle(m: DiscreteModel, q: Query) -> bool:
    """Exact agreement of the whole y-table for every x*."""
    j = observational_joint(m)
    return all(frontdoor_functional(j, q, xs) == interventional(m, q.y, xs)
               for xs in _x_assignments(m, q.x))


# -- the checks ----------------------------------------------------------------

def check_collider_example():
    r = evaluate_gap(chain_model(1, "b"), chain_query(1), {"X": 0}, {"Y": 0})
    ok = (r.functional, r.oracle, r.gap) == (Fraction(8, 15), Fraction(1, 2), Fraction(1, 30))
    return ok, f"functional {r.functional}, oracle {r.oracle}, gap {r.gap}"


def check_sign_law():
    signs = []
    ok = True
    for k in range(1, 6):
        gap = frontdoor_gap(k)
        sign = (gap > 0) - (gap < 0)
        signs.append(sign)
        ok &= gap != 0 and sign == (-1) ** (k - 1)
    return ok, "signs for k=1..5: " + " ".join(f"{s:+d}" for s in signs)


def check_matrix_representation():
    tm = TransitionMatrices.standard()
    ok = tm.det(tm.m0) == tm.det(tm.m1) == Fraction(-1, 16)
    count = 0
    for k in range(1, 5):
        j = observational_joint(chain_model(k, "b"))
        zs = [f"Z{i}" for i in range(1, k + 1)]
        for key, w in j.weights.items():
            a = dict(zip(j.variables, key))
            ok &= w == matrix_joint(k, a["X"], a["Y"], tuple(a[z] for z in zs))
            count += 1
    return ok, f"det M0 = det M1 = -1/16: {ok}; {count} assignments compared"


def check_fixture_verdicts(n_models: int = FIXTURE_MODELS, seed: int = DEFAULT_SEED):
    ok, notes = True, []
    rng = random.Random(seed)
    for name, (x, y, z, pearl, failing, general) in VERDICT_FIXTURES.items():
        g, q = load_fixture(name), Query(x, y, z)
        rp, rg = check_pearl_fdc(g, q), check_generalized_fdc(g, q)
        good = rp.holds == pearl and rg.holds == general
        if failing is not None:
            good &= [c.label for c in rp.failing()] == failing
        if rg.holds:
            dag = g.expand_bidirected()
            good &= all(functional_matches_oracle(random_model(dag, rng), q) for _ in range(n_models))
        ok &= good
        notes.append(f"{name}:{'ok' if good else 'MISMATCH'}")
    return ok, ", ".join(notes)


def _sweep_model(inst) -> DiscreteModel:
    return random_model(inst.graph, random.Random(inst.seed ^ 0x5EED))


def check_soundness_sweep(size: int = SWEEP_SIZE, seed: int = DEFAULT_SEED):
    holds = matched = pearl = pearl_bad = 0
    for inst in criterion_corpus(size, seed):
        g, q = inst.graph, inst.query
        general = check_generalized_fdc(g, q).holds
        if check_pearl_fdc(g, q).holds:
            pearl += 1
            pearl_bad += not general
        if general:
            holds += 1
            matched += functional_matches_oracle(_sweep_model(inst), q)
    ok = matched == holds and pearl_bad == 0 and holds > 0
    return ok, (f"{size} instances, criterion holds on {holds}, functional = oracle on {matched}; "
                f"Pearl holds on {pearl}, of which {pearl_bad} fail the generalized criterion")


def check_necessity():
    gaps = []
    for length in (1, 2, 3):
        m, q = direct_path_counterexample(length)
        gaps.append(evaluate_gap(m, q, {"X": 0}).gap)
    for pattern in ("b", "c"):
        for k in (1, 2, 3):
            gaps.append(evaluate_gap(chain_model(k, pattern), chain_query(k), {"X": 0}).gap)
    positive = True
    for pattern in ("b", "c"):
        spec = PreimageSpec.uniform(1, pattern)
        m = lifted_model(spec, 1000)
        positive &= observational_joint(m).is_positive
        gaps.append(evaluate_gap(m, spec.query(), {"X": 0}).gap)
    ok = positive and all(g != 0 for g in gaps)
    return ok, f"{sum(g != 0 for g in gaps)}/{len(gaps)} models show a gap; lifted joints positive: {positive}"


def _disjoint_triples(nodes):
    for labels in itertools.product(range(4), repeat=len(nodes)):
        x = frozenset(n for n, l in zip(nodes, labels) if l == 1)
        y = frozenset(n for n, l in zip(nodes, labels) if l == 2)
        z = frozenset(n for n, l in zip(nodes, labels) if l == 3)
        if x and y and min(x) < min(y):
            yield x, y, z


def check_dsep_oracle(n_graphs: int = DSEP_GRAPHS, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    triples = disagreements = 0
    for _ in range(n_graphs):
        g = random_admg(rng, rng.randint(2, 6), rng.choice((0.2, 0.35, 0.5)), rng.choice((0.1, 0.25)))
        paths, an = {}, {}
        for x, y, z in _disjoint_triples(g.nodes):
            if (x, y) not in paths:
                paths[x, y] = enumerate_paths(g, x, y)
            if z not in an:
                an[z] = g.ancestors(z)
            oracle = not any(is_open(g, p, z, an[z]) for p in paths[x, y])
            triples += 1
            disagreements += oracle != d_separated(g, x, y, z)
    return disagreements == 0, f"{n_graphs} graphs, {triples} triples, {disagreements} disagreements"


def check_projection(n_graphs: int = PROJECTION_GRAPHS, seed: int = DEFAULT_SEED):
    a, b = load_fixture("latent_projection_a"), load_fixture("latent_projection_b")
    reference_ok = latent_project(a, a.observed) == b
    rng = random.Random(seed)
    triples = disagreements = 0
    for _ in range(n_graphs):
        n_lat = rng.randint(0, 3)
        g = random_dag(rng, rng.randint(2, 8 - n_lat), n_lat, rng.choice((0.25, 0.4, 0.55)))
        gp = latent_project(g, g.observed)
        for x, y, z in _disjoint_triples(g.observed):
            triples += 1
            disagreements += d_separated(g, x, y, z) != d_separated(gp, x, y, z)
    ok = reference_ok and disagreements == 0
    return ok, f"reference projection exact: {reference_ok}; {n_graphs} graphs, {triples} triples, {disagreements} disagreements"


def check_proof_replay(size: int = SWEEP_SIZE, seed: int = DEFAULT_SEED):
    replayed = valid = 0
    for inst in criterion_corpus(size, seed):
        if check_generalized_fdc(inst.graph, inst.query).holds:
            replayed += 1
            valid += replay_main_proof(inst.graph, inst.query).valid
    fig = []
    for name, (x, y, z) in EXAMPLE_QUERIES.items():
        g, q = load_fixture(name), Query(x, y, z)
        if check_generalized_fdc(g, q).holds:
            replayed += 1
            ok = replay_main_proof(g, q).valid
            valid += ok
            fig.append(name)
    return valid == replayed and fig, f"{valid}/{replayed} traces valid (example graphs replayed: {', '.join(fig)})"


def check_pattern_equivalence(size: int = SWEEP_SIZE, seed: int = DEFAULT_SEED):
    total = bad = violated = 0
    for inst in criterion_corpus(size, seed):
        fails = not check_generalized_fdc(inst.graph, inst.query).condition("ii").holds
        found = find_cond_ii_pattern(inst.graph, inst.query) is not None
        total += 1
        violated += fails
        bad += fails != found
    return bad == 0 and violated > 0, f"{total} instances, (ii) fails on {violated}, {bad} disagreements"


def convergence_distances(ns=(10, 100, 1000)) -> list:
    spec = PreimageSpec.uniform(1, "b")
    base = observational_joint(chain_model(1, "b"))
    out = []
    for n in ns:
        j = observational_joint(lifted_model(spec, n)).marginal(spec.query().nodes)
        out.append(j.max_abs_diff(base))
    return out


def check_convergence():
    d = convergence_distances()
    ok = d[0] > d[1] > d[2] and d[2] < CONVERGENCE_BOUND
    return ok, "max-norm distance at n=10,100,1000: " + ", ".join(f"{float(x):.3e}" for x in d)


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    limit: float
    run: object


CHECKS = (
    Check(1, "8/15 reproduction", 1.0, check_collider_example),
    Check(2, "sign law k=1..5", 10.0, check_sign_law),
    Check(3, "matrix representation", 10.0, check_matrix_representation),
    Check(4, "fixture verdicts", 30.0, check_fixture_verdicts),
    Check(5, "soundness sweep", 300.0, check_soundness_sweep),
    Check(6, "necessity", 60.0, check_necessity),
    Check(7, "d-separation oracle", 120.0, check_dsep_oracle),
    Check(8, "projection preservation", 120.0, check_projection),
    Check(9, "proof replay", 60.0, check_proof_replay),
    Check(10, "pattern equivalence", 60.0, check_pattern_equivalence),
    Check(11, "convergence", 30.0, check_convergence),
)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:>2}. {self.name}: {self.detail} ({self.seconds:.2f}s / {self.limit:.0f}s)"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def run_check(check: Check, seed: int = DEFAULT_SEED) -> CheckResult:
    kw = {"seed": seed} if "seed" in inspect.signature(check.run).parameters else {}
    start = time.perf_counter()
    ok, detail = check.run(**kw)
    elapsed = time.perf_counter() - start
    if elapsed >= check.limit:
        detail += "; over time budget"
    return CheckResult(check.number, check.name, bool(ok) and elapsed < check.limit, detail, elapsed, check.limit)


def run_all(numbers=None, seed: int = DEFAULT_SEED) -> list:
    return [run_check(c, seed) for c in CHECKS if numbers is None or c.number in numbers]
