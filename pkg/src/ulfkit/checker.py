"""Whole-formula sanity checking with located diagnostics and suggested fixes.

check() types a parsed expression (macros recognized in place), demands a
sentence-intension result unless fragment mode is on, and attaches the
first catalog suggestion that strictly reduces the error count.  The
suggestion catalog is an ordered rule file (data/suggestions.rules) so the
annotation environment can grow it without code changes.
"""

from __future__ import annotations

import re
from importlib import resources

from . import expr as E
from .diagnostics import Diagnostic, ERROR, has_errors
from .expr import Keyword, LexAtom, List, Name, UlfExpr, Var
from .reader import print_expr, try_parse
from .typesys import (
    AnyType, ErrorType, Pred, Proposition, SentIntension, Truth,
    infer_type, print_type,
)

_SHIFTERS = ("mod-n", "mod-a", "nnp", "adv-a")


def _load_catalog() -> list[tuple[str, str]]:
    rules = []
    text = resources.files("ulfkit.data").joinpath("suggestions.rules").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, action = line.split()
        rules.append((code, action))
    return rules


_CATALOG: list[tuple[str, str]] | None = None


def _catalog() -> list[tuple[str, str]]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _load_catalog()
    return _CATALOG


def check(expr: UlfExpr, fragment: bool = False, mode: str = "raw",
          with_suggestions: bool = True) -> list[Diagnostic]:
    """Validate a parsed expression; an empty list means valid."""
    result = infer_type(expr, mode=mode)
    diags = list(result.diagnostics)
    t = result.type
    if not fragment and not isinstance(t, (SentIntension, Truth, ErrorType, AnyType)):
        diags.append(Diagnostic(
            path=(), severity=ERROR, code="NotASentence",
            message=f"expression types as {print_type(t)}, not a sentence intension"))
    if with_suggestions:
        for d in diags:
            if d.is_error():
                cands = suggest(expr, d, fragment=fragment, mode=mode)
                if cands:
                    d.suggestion = cands[0]
    return diags


def check_text(text: str, fragment: bool = False,
               mode: str = "raw") -> tuple[str | None, list[Diagnostic]]:
    """Parse-and-check; returns (printed type or None, diagnostics)."""
    parsed, diags = try_parse(text)
    if parsed is None:
        return None, diags
    result = infer_type(parsed, mode=mode)
    return print_type(result.type), check(parsed, fragment=fragment, mode=mode)


def _error_count(expr: UlfExpr, fragment: bool, mode: str) -> int:
    return sum(1 for d in check(expr, fragment=fragment, mode=mode,
                                with_suggestions=False) if d.is_error())


def suggest(expr: UlfExpr, diag: Diagnostic, fragment: bool = False,
            mode: str = "raw") -> list[UlfExpr]:
    """Catalog rewrites for one diagnostic, filtered so each candidate
    strictly reduces the error count when applied at the diagnostic's path."""
    baseline = _error_count(expr, fragment, mode)
    out: list[UlfExpr] = []
    seen: set[str] = set()
    for code, action in _catalog():
        if code != diag.code:
            continue
        for cand in _apply_action(expr, diag, action):
            key = print_expr(cand)
            if key in seen:
                continue
            seen.add(key)
            if _error_count(cand, fragment, mode) < baseline:
                out.append(cand)
    return out


def _apply_action(expr: UlfExpr, diag: Diagnostic, action: str) -> list[UlfExpr]:
    try:
        node = E.node_at(expr, diag.path)
    except KeyError:
        return []
    if action == "insert-shifter":
        return _insert_shifter(expr, diag, node)
    if action == "retag":
        return _retag(expr, diag, node)
    if action == "wrap-k":
        return _wrap_k(expr, diag, node)
    if action == "wrap-that":
        return _wrap_that(expr, diag, node)
    return []


def _insert_shifter(expr: UlfExpr, diag: Diagnostic, node: UlfExpr) -> list[UlfExpr]:
    m = re.search(r"missing explicit (\S+)", diag.message)
    names = [m.group(1)] if m and m.group(1) in _SHIFTERS else list(_SHIFTERS)
    if not isinstance(node, List) or len(node.children) < 2:
        return []
    out = []
    for name in names:
        shifted = E.lst(Keyword(name), node.children[0])
        out.append(E.replace_at(expr, diag.path,
                                List((shifted,) + node.children[1:])))
    return out


def _retag(expr: UlfExpr, diag: Diagnostic, node: UlfExpr) -> list[UlfExpr]:
    target = node
    inner_path = diag.path
    if isinstance(node, List) and len(node.children) == 1:
        target = node.children[0]
        inner_path = diag.path + (0,)
    if not isinstance(target, LexAtom):
        return []
    out = []
    for tag in ("n", "a", "v"):
        if tag != target.tag:
            out.append(E.replace_at(expr, inner_path, LexAtom(target.stem, tag)))
    return out


def _nominal_head(node: UlfExpr) -> bool:
    if E.has_tag(node, "n"):
        return True
    return (isinstance(node, List) and len(node.children) == 2
            and E.is_keyword(node.children[0], "plur"))


def _wrap_k(expr: UlfExpr, diag: Diagnostic, node: UlfExpr) -> list[UlfExpr]:
    out = []
    if isinstance(node, List) and len(node.children) >= 2 \
            and _nominal_head(node.children[0]):
        wrapped = E.lst(Keyword("k"), node.children[0])
        out.append(E.replace_at(expr, diag.path,
                                List((wrapped,) + node.children[1:])))
    if _nominal_head(node):
        out.append(E.replace_at(expr, diag.path, E.lst(Keyword("k"), node)))
    return out


def _wrap_that(expr: UlfExpr, diag: Diagnostic, node: UlfExpr) -> list[UlfExpr]:
    t = infer_type(node).type
    if isinstance(t, SentIntension):
        return [E.replace_at(expr, diag.path, E.lst(Keyword("that"), node))]
    return []
