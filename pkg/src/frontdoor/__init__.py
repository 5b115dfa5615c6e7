"""Front-door identification in causal graphs, with exact rational verification."""

from .criteria import (
    Query,
    check_adjustment,
    check_backdoor,
    check_generalized_fdc,
    check_pearl_fdc,
    find_cond_ii_pattern,
)
from .distributions import (
    Cpt,
    DiscreteModel,
    JointTable,
    adjustment_functional,
    frontdoor_functional,
    intervene,
    observational_joint,
)
from .docalc import replay_main_proof, rule_applicable
from .graph import Admg, parse_graph, read_graph
from .paths import Path, d_separated
from .projection import latent_project

__version__ = "0.1.0"

__all__ = [
    "Admg",
    "Cpt",
    "DiscreteModel",
    "JointTable",
    "Path",
    "Query",
    "adjustment_functional",
    "check_adjustment",
    "check_backdoor",
    "check_generalized_fdc",
    "check_pearl_fdc",
    "d_separated",
    "find_cond_ii_pattern",
    "frontdoor_functional",
    "intervene",
    "latent_project",
    "observational_joint",
    "parse_graph",
    "read_graph",
    "replay_main_proof",
    "rule_applicable",
]
