"""Toolkit for unscoped logical forms over an episodic semantics.

Pipeline stages: parse -> check -> expand macros -> postprocess ->
scope -> deindex, plus structural inference, triple-based agreement
scoring, and an annotation service.
"""

from .expr import UlfExpr, walk, node_at, replace_at
from .reader import parse, parse_all, print_expr, try_parse
from .typesys import infer_type, atom_type, compose, print_type
from .checker import check, suggest

__all__ = [
    "UlfExpr", "walk", "node_at", "replace_at",
    "parse", "parse_all", "print_expr", "try_parse",
    "infer_type", "atom_type", "compose", "print_type",
    "check", "suggest",
]
