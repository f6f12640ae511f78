"""Symbolic epistemic model checking over knowledge structures.

Knowledge, common knowledge, and public announcements are computed by
Boolean variable forgetting over a canonical function store, with explicit
Kripke models as brute-force oracles.
"""

from .boolfn import BddStore, BoolFn, TableStore, VarTable, mk_store
from .evaluate import (
    positive_translate,
    realized,
    scenario_check,
    truth_set,
)
from .group import (
    common_set,
    is_definable,
    mk_context,
    reachability_oracle,
    snc_group,
    wsc_group,
)
from .kripke import build_kripke, from_kripke, mc_kripke
from .kstruct import KnowledgeStructure, State
from .lang import (
    Formula,
    Fragment,
    classify,
    parse_formula,
    parse_model,
    print_formula,
)
from .pal import announce_iterate, announce_set, restrict

__version__ = "0.1.0"

__all__ = [
    "BddStore",
    "BoolFn",
    "Formula",
    "Fragment",
    "KnowledgeStructure",
    "State",
    "TableStore",
    "VarTable",
    "announce_iterate",
    "announce_set",
    "build_kripke",
    "classify",
    "common_set",
    "from_kripke",
    "is_definable",
    "mc_kripke",
    "mk_context",
    "mk_store",
    "parse_formula",
    "parse_model",
    "positive_translate",
    "print_formula",
    "reachability_oracle",
    "realized",
    "restrict",
    "scenario_check",
    "snc_group",
    "truth_set",
    "wsc_group",
]
