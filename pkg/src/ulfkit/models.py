"""Finite models and the satisfaction relation for scoped forms.

A model declares a domain of individuals, a set of situations with a
part-of partial order and a time map, and per-situation predicate
extensions.  Quantified formulas (det var restrictor matrix) are evaluated
by restricted quantification over the domain; the episodic operators
relate a formula to an episode: ** holds when the formula characterizes
the episode, * when it holds in some subepisode, and @ when it
characterizes some episode with the same time.

Predicate keys are the canonical printed form of the predicate expression
(e.g. "cake.n", "(plur flower.n)"); extension tuples list arguments in
surface order, subject first.  Terms under reifiers (to/ka/that/ke/k) are
opaque constants keyed by their printed form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import expr as E
from .diagnostics import UlfError
from .expr import Keyword, List, Name, UlfExpr, Var
from .reader import parse_all, print_expr
from .scoping import (
    Atom, Coord, Episodic, Lambda, Not, Quant, ScopedForm, Tense,
)

_REIFIERS = ("to", "ka", "that", "ke", "k")


@dataclass
class FiniteModel:
    domain: set[str] = field(default_factory=set)
    situations: set[str] = field(default_factory=set)
    part_of: set[tuple[str, str]] = field(default_factory=set)  # (sub, super)
    time: dict[str, str] = field(default_factory=dict)
    extensions: dict[tuple[str, str], set[tuple[str, ...]]] = field(default_factory=dict)
    declared: set[str] = field(default_factory=set)  # predicate keys
    constants: dict[str, str] = field(default_factory=dict)
    episode: str | None = None  # default evaluation episode

    def close(self) -> None:
        """Reflexive-transitive closure of part-of; antisymmetry checked."""
        for s in self.situations:
            self.part_of.add((s, s))
        changed = True
        while changed:
            changed = False
            for (a, b) in list(self.part_of):
                for (c, d) in list(self.part_of):
                    if b == c and (a, d) not in self.part_of:
                        self.part_of.add((a, d))
                        changed = True
        for (a, b) in self.part_of:
            if a != b and (b, a) in self.part_of:
                raise UlfError.at("UndeclaredPredicate",
                                  f"part-of is not antisymmetric: {a} <-> {b}")

    def subepisodes(self, ep: str) -> list[str]:
        return sorted(s for (s, sup) in self.part_of if sup == ep)

    def same_time(self, ep: str) -> list[str]:
        t = self.time.get(ep)
        return sorted(s for s in self.situations if self.time.get(s) == t)

    def extension(self, key: str, situation: str) -> set[tuple[str, ...]]:
        if key not in self.declared:
            raise UlfError.at("UndeclaredPredicate",
                              f"predicate {key} not declared in model")
        return self.extensions.get((key, situation), set())


def parse_model(text: str) -> FiniteModel:
    """Model file: s-expression declarations, one of
    (domain d ...), (situations s ...), (part-of sub super), (time s t),
    (const |Name| d), (pred key ...), (ext key s arg-or-tuple ...),
    (episode s)."""
    m = FiniteModel()
    for form in parse_all(text):
        if not isinstance(form, List):
            raise UlfError.at("UndeclaredPredicate", f"bad model entry {form}")
        head = print_expr(form.children[0])
        args = form.children[1:]
        if head == "domain":
            m.domain |= {print_expr(a) for a in args}
        elif head == "situations":
            m.situations |= {print_expr(a) for a in args}
        elif head == "part-of":
            m.part_of.add((print_expr(args[0]), print_expr(args[1])))
        elif head == "time":
            m.time[print_expr(args[0])] = print_expr(args[1])
        elif head == "const":
            m.constants[print_expr(args[0])] = print_expr(args[1])
        elif head == "pred":
            m.declared |= {print_expr(a) for a in args}
        elif head == "ext":
            key = print_expr(args[0])
            sit = print_expr(args[1])
            m.declared.add(key)
            tuples = m.extensions.setdefault((key, sit), set())
            for a in args[2:]:
                if isinstance(a, List):
                    tuples.add(tuple(print_expr(c) for c in a.children))
                else:
                    tuples.add((print_expr(a),))
        elif head == "episode":
            m.episode = print_expr(args[0])
        else:
            raise UlfError.at("UndeclaredPredicate", f"unknown model entry {head}")
    m.situations |= set(m.time)
    m.close()
    return m


def load_model(path: str) -> FiniteModel:
    with open(path, encoding="utf-8") as f:
        return parse_model(f.read())


# ---------------------------------------------------------------------------
# Quantity registry for fquan/nquan determiners

# maps a quantity token to a test over (satisfying count, restrictor count)
QUANTITY_REGISTRY = {
    "few": lambda k, n: 0 <= k <= max(0, n // 3),
    "many": lambda k, n: k > n // 2,
}

_NUM_CMP = re.compile(r"^\((<|<=|>|>=|=) (\d+)\)$")


def _quantity_test(token: str):
    if token in QUANTITY_REGISTRY:
        return QUANTITY_REGISTRY[token]
    m = _NUM_CMP.match(token)
    if m:
        op, n = m.group(1), int(m.group(2))
        return {
            "<": lambda k, _n: k < n,
            "<=": lambda k, _n: k <= n,
            ">": lambda k, _n: k > n,
            ">=": lambda k, _n: k >= n,
            "=": lambda k, _n: k == n,
        }[op]
    return None


def _det_stem(det: str) -> str:
    """'every.d' -> 'every'; '(fquan (very.mod-a few.a))' -> quantity token."""
    if det.startswith("(") and (det[1:].startswith("fquan")
                                or det[1:].startswith("nquan")):
        inner = det[det.index(" ") + 1:-1]
        # strip modifier applications down to the quantity adjective stem
        stems = re.findall(r"([a-z+<>=0-9-]+)\.a\b", inner)
        if stems:
            return stems[-1]
        return inner
    return det.split(".")[0]


# ---------------------------------------------------------------------------
# Satisfaction


def eval_model(form: ScopedForm, model: FiniteModel,
               episode: str | None = None,
               assignment: dict[str, str] | None = None) -> bool:
    """Truth of a closed scoped form at an episode of the model."""
    ep = episode or model.episode
    if ep is None or ep not in model.situations:
        raise UlfError.at("UndeclaredPredicate",
                          f"evaluation episode {ep!r} not among situations")
    return _eval(form, model, ep, dict(assignment or {}))


def _eval(form: ScopedForm, m: FiniteModel, ep: str, u: dict[str, str]) -> bool:
    if isinstance(form, Atom):
        return _eval_atom(form.expr, m, ep, u)
    if isinstance(form, Not):
        return not _eval(form.body, m, ep, u)
    if isinstance(form, Tense):
        return _eval(form.body, m, ep, u)  # tense is deindexed separately
    if isinstance(form, Coord):
        vals = [_eval(p, m, ep, u) for p in form.parts]
        if form.op.endswith("or.cc"):
            return any(vals)
        if form.op.startswith("if") or form.op.endswith(".ps"):
            return (not vals[0]) or vals[1]
        return all(vals)
    if isinstance(form, Episodic):
        target = _eval_term(form.episode, m, u)
        if form.op == "**":
            return _eval(form.body, m, target, u)
        if form.op == "*":
            return any(_eval(form.body, m, s, u) for s in m.subepisodes(target))
        if form.op == "@":
            return any(_eval(form.body, m, s, u) for s in m.same_time(target))
        raise UlfError.at("UndeclaredPredicate", f"unknown episodic operator {form.op}")
    if isinstance(form, Quant):
        return _eval_quant(form, m, ep, u)
    if isinstance(form, Lambda):
        raise UlfError.at("UndeclaredPredicate",
                          "bare lambda abstraction is not a formula")
    raise AssertionError(form)


def _eval_quant(q: Quant, m: FiniteModel, ep: str, u: dict[str, str]) -> bool:
    satisfiers = []
    for d in sorted(m.domain):
        u2 = dict(u)
        u2[q.var] = d
        if q.restrictor is None or _eval(q.restrictor, m, ep, u2):
            satisfiers.append(d)

    def matrix_true(d: str) -> bool:
        u2 = dict(u)
        u2[q.var] = d
        return _eval(q.matrix, m, ep, u2)

    stem = _det_stem(q.det)
    if stem in ("every", "all", "each"):
        return all(matrix_true(d) for d in satisfiers)
    if stem in ("some", "a", "an"):
        return any(matrix_true(d) for d in satisfiers)
    if stem == "no":
        return not any(matrix_true(d) for d in satisfiers)
    if stem == "most":
        # strictly more than half of the restrictor satisfiers
        k = sum(1 for d in satisfiers if matrix_true(d))
        return k * 2 > len(satisfiers)
    if stem == "the":
        if len(satisfiers) != 1:
            raise UlfError.at("PresuppositionFailure",
                              f"'the' restrictor has {len(satisfiers)} satisfiers")
        return matrix_true(satisfiers[0])
    test = _quantity_test(stem)
    if test is not None:
        k = sum(1 for d in satisfiers if matrix_true(d))
        return test(k, len(satisfiers))
    raise UlfError.at("UndeclaredPredicate",
                      f"determiner {q.det} has no registered satisfaction rule")


def _eval_atom(expr: UlfExpr, m: FiniteModel, ep: str, u: dict[str, str]) -> bool:
    pred, args = _split_predication(expr)
    key = print_expr(pred)
    values = tuple(_eval_term(a, m, u) for a in args)
    return values in m.extension(key, ep)


def _split_predication(expr: UlfExpr) -> tuple[UlfExpr, list[UlfExpr]]:
    """(subj pred) | (subj (pred obj ...)) | (subj pred obj ...) -> pred, args."""
    if not isinstance(expr, List):
        raise UlfError.at("UndeclaredPredicate",
                          f"cannot evaluate non-predication {print_expr(expr)}")
    ch = expr.children
    if len(ch) == 2:
        subj, rest = ch[0], ch[1]
        if isinstance(rest, List) and not _is_term(rest):
            return rest.children[0], [subj] + list(rest.children[1:])
        return rest, [subj]
    if len(ch) == 3 and _is_term(ch[0]) and not _is_term(ch[1]):
        # infix relation: (e1 rel e2), as in temporal predications
        return ch[1], [ch[0], ch[2]]
    return ch[1], [ch[0]] + list(ch[2:])


def _is_term(node: UlfExpr) -> bool:
    if isinstance(node, (Var, Name)):
        return True
    if E.has_tag(node, "pro", "sk"):
        return True
    if isinstance(node, List):
        head = node.children[0]
        if isinstance(head, Keyword) and head.name in _REIFIERS + ("pair",):
            return True
    return False


def _eval_term(node: UlfExpr, m: FiniteModel, u: dict[str, str]) -> str | tuple:
    if isinstance(node, Var):
        if node.name in u:
            return u[node.name]
        if node.name in m.constants:
            return m.constants[node.name]
        if node.name in m.situations or node.name in m.domain:
            return node.name
        raise UlfError.at("UndeclaredPredicate",
                          f"unbound variable {node.name} in evaluation")
    if isinstance(node, List) and E.is_keyword(node.children[0], "pair"):
        return tuple(_eval_term(c, m, u) for c in node.children[1:])
    key = print_expr(node)
    if key in m.constants:
        return m.constants[key]
    if isinstance(node, Name):
        if node.text in m.domain or node.text in m.situations:
            return node.text
        raise UlfError.at("UndeclaredPredicate",
                          f"name {key} not bound to a model element")
    if key in m.domain or key in m.situations:
        return key
    raise UlfError.at("UndeclaredPredicate",
                      f"term {key} not declared as a constant")
