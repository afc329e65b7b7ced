"""Reversal distance of rooted unicellular fatgraphs."""
from importlib import resources

from .core import (
    Fatgraph,
    FatgraphError,
    InconsistencyError,
    Ribbon,
    canonical_form,
    euler_genus,
    is_orientable,
    make_fatgraph,
    ribbons,
    validate,
)
from .decomposition import blocks, component_tree, components, decompose, e_blocks, s_blocks
from .formats import emit_fatg, emit_script, parse_fatg, parse_script
from .planner import execute, formula_distance, plan, r_distance
from .reversals import Reversal, apply_reversal, classify_reversal, glue, half_flip, legal_reversals, slice

FIXTURES = ("T1", "P1", "T2", "X2", "Y2", "O2", "F2B")


def fixture(name: str) -> Fatgraph:
    """One of the shipped example fatgraphs, by name."""
    if name not in FIXTURES:
        raise FatgraphError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return parse_fatg(resources.files(__package__).joinpath("data", f"{name}.fatg").read_text())


__all__ = [
    "FIXTURES", "Fatgraph", "FatgraphError", "InconsistencyError", "Reversal", "Ribbon",
    "apply_reversal", "blocks", "canonical_form", "classify_reversal", "component_tree", "components",
    "decompose", "e_blocks", "emit_fatg", "emit_script", "euler_genus", "execute", "fixture",
    "formula_distance", "glue", "half_flip", "is_orientable", "legal_reversals", "make_fatgraph",
    "parse_fatg", "parse_script", "plan", "r_distance", "ribbons", "s_blocks", "slice", "validate",
]
