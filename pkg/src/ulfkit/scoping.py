"""Quantifier/tense scoping: unscoped elements float to pre-sentential
positions, determiner phrases leaving a bound variable behind.

Scoped forms are ordinary expression trees, printable with the canonical
printer: a scoped determiner is a four-element list (det var restrictor
matrix) and a lifted tense operator wraps its clause.  Subordinate clauses
(complements of `that`/`ke` and both arguments of `if.ps`) are scope
islands: their elements are scoped inside the clause and never float out.
Infinitive complements are opaque values, not clauses, so determiners
inside them escape to the nearest enclosing clause.

Enumeration permutes the clause-level elements; the default scoping is
surface order with tense outermost in its clause.  Nested clauses keep
their default internal order during enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from . import expr as E
from .diagnostics import UlfError
from .expr import Keyword, LexAtom, List, Name, UlfExpr, Var
from .macros import beta_reduce
from .reader import print_expr
from .typesys import (
    SentIntension, UnscopedDetResult, infer_type,
)

_TENSEY = ("pres", "past", "cf", "perf", "prog")
_ISLAND_HEADS = ("that", "ke")


# ---------------------------------------------------------------------------
# Scoped-form IR (used by the model evaluator and the deindexer)


@dataclass(frozen=True)
class Quant:
    det: str
    var: str
    restrictor: Optional["ScopedForm"]
    matrix: "ScopedForm"


@dataclass(frozen=True)
class Tense:
    op: str
    body: "ScopedForm"


@dataclass(frozen=True)
class Coord:
    op: str
    parts: tuple["ScopedForm", ...]


@dataclass(frozen=True)
class Not:
    body: "ScopedForm"


@dataclass(frozen=True)
class Lambda:
    var: str
    body: "ScopedForm"


@dataclass(frozen=True)
class Episodic:
    op: str  # ** | * | @
    body: "ScopedForm"
    episode: UlfExpr


@dataclass(frozen=True)
class Atom:
    expr: UlfExpr


ScopedForm = Union[Quant, Tense, Coord, Not, Lambda, Episodic, Atom]


def _is_det_head(node: UlfExpr) -> bool:
    if E.has_tag(node, "d"):
        return True
    return (isinstance(node, List)
            and isinstance(node.children[0], Keyword)
            and node.children[0].name in ("fquan", "nquan"))


def to_scoped_form(expr: UlfExpr) -> ScopedForm:
    """Interpret a scoped tree as the evaluator's IR."""
    if not isinstance(expr, List):
        return Atom(expr)
    ch = expr.children
    if len(ch) == 4 and _is_det_head(ch[0]) and isinstance(ch[1], Var):
        return Quant(print_expr(ch[0]), ch[1].name,
                     to_scoped_form(ch[2]), to_scoped_form(ch[3]))
    if len(ch) == 2 and isinstance(ch[0], Keyword) and ch[0].name in _TENSEY:
        return Tense(ch[0].name, to_scoped_form(ch[1]))
    if len(ch) == 2 and E.is_keyword(ch[0], "not"):
        return Not(to_scoped_form(ch[1]))
    if len(ch) == 3 and isinstance(ch[1], Keyword) \
            and ch[1].name in E.EPISODIC_KEYWORDS:
        return Episodic(ch[1].name, to_scoped_form(ch[0]), ch[2])
    if len(ch) == 3 and E.is_keyword(ch[0], "λ") and isinstance(ch[1], Var):
        return Lambda(ch[1].name, to_scoped_form(ch[2]))
    if len(ch) >= 3 and any(E.has_tag(c, "cc") for c in ch[1:]):
        cc = next(c for c in ch[1:] if E.has_tag(c, "cc"))
        parts = tuple(to_scoped_form(c) for c in ch if not E.has_tag(c, "cc"))
        return Coord(print_expr(cc), parts)
    if len(ch) == 2 and isinstance(ch[0], List) \
            and len(ch[0].children) == 2 and E.has_tag(ch[0].children[0], "ps"):
        antecedent = to_scoped_form(ch[0].children[1])
        return Coord(print_expr(ch[0].children[0]),
                     (antecedent, to_scoped_form(ch[1])))
    return Atom(expr)


# ---------------------------------------------------------------------------
# Element collection


@dataclass
class _Element:
    path: E.Path
    kind: str  # determiner-phrase | tense | coordination
    expr: UlfExpr
    ops: tuple[str, ...] = ()  # tense stack, outermost first


def _is_sentence(expr: UlfExpr) -> bool:
    return isinstance(infer_type(expr).type, SentIntension)


def _is_det_phrase(node: UlfExpr) -> bool:
    if not (isinstance(node, List) and len(node.children) == 2):
        return False
    return isinstance(infer_type(node).type, UnscopedDetResult)


def _is_marker_kw(node: UlfExpr) -> bool:
    return isinstance(node, Keyword) and node.name in _TENSEY


def _is_compound_marker(node: UlfExpr) -> bool:
    return (isinstance(node, List)
            and all(_is_marker_kw(c) for c in node.children))


def _is_island(node: UlfExpr) -> bool:
    """Subordinate clause boundary: sentential complement of that/ke, or
    either argument of if.ps."""
    if not isinstance(node, List):
        return False
    ch = node.children
    if len(ch) == 2 and isinstance(ch[0], Keyword) \
            and ch[0].name in _ISLAND_HEADS and _is_sentence(ch[1]):
        return True
    return False


def _clause_elements(expr: UlfExpr, path: E.Path = ()) -> list[_Element]:
    """Unscoped elements of the clause rooted here, surface order, not
    descending into islands or other determiner phrases."""
    out: list[_Element] = []
    if _is_det_phrase(expr):
        out.append(_Element(path, "determiner-phrase", expr))
        return out
    if not isinstance(expr, List):
        return out
    if path == () and _is_clause_coordination(expr):
        return out
    ch = expr.children
    # if.ps: both clause arguments are islands
    if len(ch) == 2 and isinstance(ch[0], List) and len(ch[0].children) == 2 \
            and E.has_tag(ch[0].children[0], "ps"):
        return out
    for i, c in enumerate(ch):
        cpath = path + (i,)
        if _is_marker_kw(c):
            out.append(_Element(cpath, "tense", c, (c.name,)))
        elif _is_compound_marker(c):
            ops = tuple(k.name for k in c.children)  # type: ignore[union-attr]
            out.append(_Element(cpath, "tense", c, ops))
        elif _is_island(c):
            continue
        elif isinstance(c, List) and any(E.has_tag(g, "cc") for g in c.children[1:]) \
                and any(_is_sentence(g) for g in c.children if not E.has_tag(g, "cc")):
            # clause coordination: each conjunct scopes as its own clause
            out.append(_Element(cpath, "coordination", c))
        elif isinstance(c, List) and any(E.has_tag(g, "cc") for g in c.children[1:]):
            out.append(_Element(cpath, "coordination", c))
            out.extend(_clause_elements(c, cpath))
        else:
            out.extend(_clause_elements(c, cpath))
    return out


def collect_unscoped(expr: UlfExpr) -> list[tuple[E.Path, str]]:
    """Surface-order unscoped elements of the top clause (islands excluded)."""
    return [(e.path, e.kind) for e in _clause_elements(expr)]


# ---------------------------------------------------------------------------
# Scoping proper


def default_scoping(expr: UlfExpr, avoid: set[str] | None = None) -> UlfExpr:
    return enumerate_scopings(expr, limit=1, avoid=avoid)[0]


def enumerate_scopings(expr: UlfExpr, limit: int | None = None,
                       strict_limit: bool = False,
                       avoid: set[str] | None = None) -> list[UlfExpr]:
    """All admissible scopings of the clause-level elements, deduplicated;
    the first is the default scoping (surface order, tense outermost)."""
    elements = [e for e in _clause_elements(expr)
                if e.kind in ("determiner-phrase", "tense")]
    default = _default_order(elements)
    orders = [default]
    for perm in itertools.permutations(elements):
        if list(perm) != default:
            orders.append(list(perm))
    out: list[UlfExpr] = []
    seen: set[str] = set()
    for order in orders:
        scoped = _build_scoped(expr, order, set(avoid or ()))
        key = print_expr(scoped)
        if key in seen:
            continue
        seen.add(key)
        out.append(scoped)
        if limit is not None and len(out) > limit:
            break
    if limit is not None and len(out) > limit:
        if strict_limit:
            raise UlfError.at("TooManyScopings",
                              f"more than {limit} admissible scopings", ())
        out = out[:limit]
    return out


def _default_order(elements: list[_Element]) -> list[_Element]:
    tenses = [e for e in elements if e.kind == "tense"]
    others = [e for e in elements if e.kind != "tense"]
    return tenses + others


def _build_scoped(expr: UlfExpr, order: list[_Element],
                  avoid: set[str]) -> UlfExpr:
    used = E.atom_texts(expr) | avoid
    # replace determiner phrases by fresh variables, innermost paths first
    residual = expr
    bound: list[tuple[_Element, Var, UlfExpr]] = []  # (element, var, restrictor)
    for el in order:
        if el.kind != "determiner-phrase":
            continue
        v = E.fresh_var(used)
        used.add(v.name)
        det_node = E.node_at(residual, el.path)
        assert isinstance(det_node, List)
        bound.append((el, v, det_node.children[1]))
        residual = E.replace_at(residual, el.path, v)
    # beta-reduce restrictors before scoping islands inside them, so the
    # substitution never reaches under a quantifier binder
    bound = [(el, v, beta_reduce(E.lst(v, pred))) for el, v, pred in bound]
    bound = [(el, v, _scope_islands(restr, used)) for el, v, restr in bound]
    residual = _strip_tenses(residual, [e for e in order if e.kind == "tense"])
    residual = _scope_islands(residual, used)
    # wrap innermost-last: reverse order, innermost first
    scoped = residual
    for el in reversed(order):
        if el.kind == "tense":
            for op in reversed(el.ops):
                scoped = E.lst(Keyword(op), scoped)
        else:
            _, v, restr = next(b for b in bound if b[0] is el)
            det_node = E.node_at(expr, el.path)
            assert isinstance(det_node, List)
            scoped = List((det_node.children[0], v, restr, scoped))
    return scoped


def _strip_tenses(expr: UlfExpr, tense_elements: list[_Element]) -> UlfExpr:
    # remove deepest first so shallower paths stay valid
    for el in sorted(tense_elements, key=lambda e: len(e.path), reverse=True):
        parent_path, idx = el.path[:-1], el.path[-1]
        parent = E.node_at(expr, parent_path)
        assert isinstance(parent, List)
        rest = parent.children[:idx] + parent.children[idx + 1:]
        replacement: UlfExpr = rest[0] if len(rest) == 1 else List(rest)
        expr = E.replace_at(expr, parent_path, replacement)
    return expr


def _is_clause_coordination(node: UlfExpr) -> bool:
    if not (isinstance(node, List) and len(node.children) >= 3):
        return False
    if not any(E.has_tag(c, "cc") for c in node.children[1:]):
        return False
    return any(_is_sentence(c) for c in node.children if not E.has_tag(c, "cc"))


def _register_vars(scoped: UlfExpr, used: set[str]) -> UlfExpr:
    for node, _ in E.walk(scoped):
        if isinstance(node, List) and len(node.children) == 4 \
                and isinstance(node.children[1], Var):
            used.add(node.children[1].name)
    return scoped


def _scope_islands(expr: UlfExpr, used: set[str]) -> UlfExpr:
    """Default-scope subordinate clauses and coordinated clauses in place,
    keeping their quantifier variables distinct from the enclosing ones."""
    if not isinstance(expr, List):
        return expr
    ch = expr.children
    if len(ch) == 2 and isinstance(ch[0], List) and len(ch[0].children) == 2 \
            and E.has_tag(ch[0].children[0], "ps") and _is_sentence(ch[1]):
        head = ch[0]
        ant = _register_vars(default_scoping(head.children[1], avoid=used), used)
        cons = _register_vars(default_scoping(ch[1], avoid=used), used)
        return E.lst(E.lst(head.children[0], ant), cons)
    if _is_island(expr):
        return E.lst(ch[0], _register_vars(default_scoping(ch[1], avoid=used), used))
    if _is_clause_coordination(expr):
        return List(tuple(
            c if E.has_tag(c, "cc")
            else _register_vars(default_scoping(c, avoid=used), used)
            for c in ch))
    return List(tuple(_scope_islands(c, used) for c in ch))
