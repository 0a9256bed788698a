"""Syntactic rewriting macros and relativizer processing.

Five macros are expanded innermost-first: sub (substitute into *h), rep
(substitute into *p), n+preds / np+preds (postnominal modification as a
lambda-abstracted conjunction), and the possessive 's.  Relativizer
processing lambda-abstracts the smallest sentence enclosing each .rel atom
and runs before macro evaluation so the printed intermediate forms of the
relative-clause derivation are reproduced exactly.

Beta reduction is exposed separately and is not run inside expand_all: the
lambda form produced by n+preds is itself the canonical postprocessed
output.
"""

from __future__ import annotations

from . import expr as E
from .diagnostics import Diagnostic, ERROR, UlfError
from .expr import Hole, Keyword, LexAtom, List, UlfExpr, Var
from .typesys import SentIntension, infer_type


def _macro_head(node: UlfExpr) -> str | None:
    if not isinstance(node, List):
        return None
    head = node.children[0]
    if isinstance(head, Keyword) and head.name in ("sub", "rep", "n+preds", "np+preds"):
        return head.name
    if len(node.children) == 2 and isinstance(node.children[0], List) \
            and len(node.children[0].children) == 2 \
            and E.is_keyword(node.children[0].children[1], "'s"):
        return "'s"
    return None


def contains_macro(expr: UlfExpr) -> bool:
    return any(_macro_head(n) is not None for n, _ in E.walk(expr))


def expand_all(expr: UlfExpr) -> UlfExpr:
    """Innermost-first expansion of sub, rep, n+preds, np+preds, and 's.

    The output contains no macro keywords; lambda variables introduced by
    the nominal macros are fresh with respect to every atom in the tree.
    """
    while True:
        target = _innermost_macro(expr)
        if target is None:
            break
        path, name = target
        node = E.node_at(expr, path)
        expr = E.replace_at(expr, path, _expand_one(node, name, path, expr))
    _check_no_macros(expr)
    return expr


def _innermost_macro(expr: UlfExpr) -> tuple[E.Path, str] | None:
    best: tuple[E.Path, str] | None = None
    for node, path in E.walk(expr):
        name = _macro_head(node)
        if name is not None and (best is None or len(path) > len(best[0])):
            best = (path, name)
    return best


def _expand_one(node: List, name: str, path: E.Path, whole: UlfExpr) -> UlfExpr:
    ch = node.children
    if name == "sub":
        if len(ch) != 3:
            raise UlfError.at("ArityError", "sub takes exactly two arguments", path)
        return _substitute_hole(ch[2], "*h", ch[1], path + (2,))
    if name == "rep":
        if len(ch) != 3:
            raise UlfError.at("ArityError", "rep takes exactly two arguments", path)
        return _substitute_hole(ch[1], "*p", ch[2], path + (1,))
    if name == "n+preds":
        if len(ch) < 3:
            raise UlfError.at("ArityError",
                              "n+preds needs a noun and at least one predicate", path)
        v = E.fresh_var(E.atom_texts(whole))
        conjuncts = [E.lst(v, c) for c in ch[1:]]
        return E.lst(Keyword("λ"), v, _conjoin(conjuncts))
    if name == "np+preds":
        if len(ch) < 3:
            raise UlfError.at("ArityError",
                              "np+preds needs an entity and at least one predicate", path)
        v = E.fresh_var(E.atom_texts(whole))
        head = List((v, Keyword("="), ch[1]))
        conjuncts = [head] + [E.lst(v, c) for c in ch[2:]]
        return E.lst(LexAtom("the", "d"), E.lst(Keyword("λ"), v, _conjoin(conjuncts)))
    if name == "'s":
        possessor = node.children[0].children[0]  # type: ignore[union-attr]
        noun = node.children[1]
        return E.lst(LexAtom("the", "d"),
                     E.lst(E.lst(Keyword("poss-by"), possessor), noun))
    raise AssertionError(name)


def _conjoin(conjuncts: list[UlfExpr]) -> UlfExpr:
    out: list[UlfExpr] = [conjuncts[0]]
    for c in conjuncts[1:]:
        out.append(LexAtom("and", "cc"))
        out.append(c)
    return List(tuple(out))


def _substitute_hole(body: UlfExpr, kind: str, filler: UlfExpr,
                     path: E.Path) -> UlfExpr:
    n = E.count_holes(body, kind)
    if n == 0:
        raise UlfError.at("MissingHole", f"no free {kind} in macro body", path)
    if n > 1:
        raise UlfError.at("MultipleHoles", f"{n} occurrences of {kind} in macro body",
                          path)
    return E.transform(body, lambda x: filler
                       if isinstance(x, Hole) and x.kind == kind else x)


def _check_no_macros(expr: UlfExpr) -> None:
    for node, path in E.walk(expr):
        if E.is_keyword(node, "'s"):
            raise UlfError.at("ArityError",
                              "dangling possessive marker outside ((NP 's) N)", path)


# ---------------------------------------------------------------------------
# Relativizers


def expand_rel(expr: UlfExpr) -> UlfExpr:
    """Lambda-abstract the smallest enclosing sentence of each .rel atom;
    the lambda variable replaces the relativizer."""
    while True:
        rel_path = _find_rel(expr)
        if rel_path is None:
            return expr
        expr = _abstract_rel(expr, rel_path)


def _find_rel(expr: UlfExpr) -> E.Path | None:
    for node, path in E.walk(expr):
        if E.has_tag(node, "rel"):
            return path
    return None


def _abstract_rel(expr: UlfExpr, rel_path: E.Path) -> UlfExpr:
    v = E.fresh_var(E.atom_texts(expr))
    probe = E.replace_at(expr, rel_path, v)
    # deepest ancestor list that types as a sentence intension
    for cut in range(len(rel_path) - 1, -1, -1):
        anc_path = rel_path[:cut]
        candidate = E.node_at(probe, anc_path)
        if not isinstance(candidate, List):
            continue
        t = infer_type(candidate).type
        if isinstance(t, SentIntension):
            wrapped = E.lst(Keyword("λ"), v, candidate)
            return E.replace_at(probe, anc_path, wrapped)
    raise UlfError.at("RelOutsideClause",
                      "no enclosing sentence for relativizer", rel_path)


# ---------------------------------------------------------------------------
# Beta reduction


def beta_reduce(expr: UlfExpr) -> UlfExpr:
    """Capture-avoiding normal-order reduction to beta-normal form.

    Redexes come in two shapes: a lambda applied prefix, ((λ v B) A), and a
    term placed subject-style on the left of a lambda predicate, (A (λ v B)).
    """
    while True:
        reduced = _step(expr)
        if reduced is None:
            return expr
        expr = reduced


def _is_lambda(node: UlfExpr) -> bool:
    return (isinstance(node, List) and len(node.children) == 3
            and E.is_keyword(node.children[0], "λ")
            and isinstance(node.children[1], Var))


def _is_termlike(node: UlfExpr) -> bool:
    """Individual-denoting leaves that may stand subject-style before a
    lambda predicate.  Operators (determiners, type-shifters) are excluded;
    (the.d (λ ...)) is an application of the determiner, not a redex."""
    from .expr import ElidedAtom, Name
    if isinstance(node, (Var, Hole)):
        return True
    if isinstance(node, Name) and node.tag is None:
        return True
    return E.has_tag(node, "pro")


def _step(expr: UlfExpr) -> UlfExpr | None:
    """Leftmost-outermost single reduction; None when in normal form."""
    if isinstance(expr, List) and len(expr.children) == 2:
        f, a = expr.children
        if _is_lambda(f):
            return substitute(f.children[2], f.children[1].name, a)  # type: ignore
        if _is_lambda(a) and _is_termlike(f):
            return substitute(a.children[2], a.children[1].name, f)  # type: ignore
    if isinstance(expr, List):
        for i, c in enumerate(expr.children):
            r = _step(c)
            if r is not None:
                children = list(expr.children)
                children[i] = r
                return List(tuple(children))
    return None


def free_vars(expr: UlfExpr, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(expr, Var):
        return set() if expr.name in bound else {expr.name}
    if _is_lambda(expr):
        v = expr.children[1].name  # type: ignore[union-attr]
        return free_vars(expr.children[2], bound | {v})  # type: ignore[union-attr]
    if isinstance(expr, List):
        out: set[str] = set()
        for c in expr.children:
            out |= free_vars(c, bound)
        return out
    return set()


def substitute(body: UlfExpr, name: str, value: UlfExpr) -> UlfExpr:
    """body[name := value], renaming bound variables to avoid capture."""
    if isinstance(body, Var):
        return value if body.name == name else body
    if _is_lambda(body):
        v = body.children[1]
        assert isinstance(v, Var)
        inner = body.children[2]
        if v.name == name:
            return body
        if v.name in free_vars(value):
            used = E.atom_texts(body) | free_vars(value) | {name}
            v2 = E.fresh_var(used)
            inner = substitute(inner, v.name, v2)
            v = v2
        return E.lst(Keyword("λ"), v, substitute(inner, name, value))
    if isinstance(body, List):
        return List(tuple(substitute(c, name, value) for c in body.children))
    return body
