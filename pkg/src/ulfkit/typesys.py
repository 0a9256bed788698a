"""Semantic types and bottom-up type inference for composed forms.

The type algebra mirrors the ontology the forms are interpreted in:
individuals D, truth values 2, sentence intensions S=>2, sorted monadic
predicates D=>(S=>2) (written P with sort subscripts), functions between
types, and reified categories (kinds, kinds of action, propositions,
episodes).  Unscoped determiner phrases occupy argument positions as if
they were individuals; tense, aspect, and counterfactual markers act as
identity on verbal predicates.

Verb adicity is not stored in a lexicon: a verbal predicate starts out
flexible and is resolved by how many right arguments it consumes before a
subject is placed on its left, which closes it into a sentence intension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as E
from .diagnostics import Diagnostic, ERROR, NOTE, WARNING
from .expr import (
    ElidedAtom, Hole, Keyword, LexAtom, List, Name, Punct, UlfExpr, Var,
)

SORT_N = "n"
SORT_V = "v"
SORT_ADJ = "adj"
SORT_P = "p"
SORT_NONE = "none"


@dataclass(frozen=True)
class Entity:
    def __str__(self) -> str:
        return "D"


@dataclass(frozen=True)
class Truth:
    def __str__(self) -> str:
        return "2"


@dataclass(frozen=True)
class SentIntension:
    def __str__(self) -> str:
        return "S=>2"


@dataclass(frozen=True)
class Pred:
    """n-adic intensional predicate D^n => (S=>2); remaining=None means a
    verbal predicate whose adicity is still open."""
    sort: str = SORT_NONE
    remaining: int | None = 1

    def __str__(self) -> str:
        if self.remaining is not None and self.remaining > 1:
            return f"(D=>{Pred(self.sort, self.remaining - 1)})"
        if self.sort == SORT_NONE:
            return "P"
        return f"P[{self.sort.upper()}]"


def _nest(t: "SemType") -> str:
    s = str(t)
    if "=>" in s and not s.startswith("("):
        return f"({s})"
    return s


@dataclass(frozen=True)
class Fn:
    frm: "SemType"
    to: "SemType"

    def __str__(self) -> str:
        return f"({_nest(self.frm)}=>{_nest(self.to)})"


@dataclass(frozen=True)
class Kind:
    def __str__(self) -> str:
        return "K"


@dataclass(frozen=True)
class KindAction:
    def __str__(self) -> str:
        return "KA"


@dataclass(frozen=True)
class Proposition:
    def __str__(self) -> str:
        return "PROP"


@dataclass(frozen=True)
class Episode:
    def __str__(self) -> str:
        return "EP"


@dataclass(frozen=True)
class UnscopedDetResult:
    """Determiner phrase kept in argument position as if of type D."""
    def __str__(self) -> str:
        return "D[np]"


@dataclass(frozen=True)
class TenseMarker:
    def __str__(self) -> str:
        return "TENSE"


@dataclass(frozen=True)
class AspectMarker:
    def __str__(self) -> str:
        return "ASPECT"


@dataclass(frozen=True)
class CfMarker:
    def __str__(self) -> str:
        return "CF"


@dataclass(frozen=True)
class AuxMarker:
    def __str__(self) -> str:
        return "AUX"


@dataclass(frozen=True)
class CoordMarker:
    def __str__(self) -> str:
        return "COORD"


@dataclass(frozen=True)
class EpisodicMarker:
    op: str  # ** | * | @

    def __str__(self) -> str:
        return f"EPISODIC[{self.op}]"


@dataclass(frozen=True)
class MacroSig:
    name: str

    def __str__(self) -> str:
        return f"MACRO[{self.name}]"


@dataclass(frozen=True)
class AnyType:
    """Metavariables, free holes, and poisoned recovery positions."""
    def __str__(self) -> str:
        return "?"


@dataclass(frozen=True)
class ErrorType:
    """Poison type: suppresses cascading diagnostics above a failure."""
    def __str__(self) -> str:
        return "<error>"


SemType = object  # structural union of the classes above

_MARKERS = (TenseMarker, AspectMarker, CfMarker, AuxMarker)
_ENTITY_LIKE = (Entity, UnscopedDetResult, Kind, KindAction, Proposition, Episode)


def print_type(t: SemType) -> str:
    return str(t)


def is_marker(t: SemType) -> bool:
    return isinstance(t, _MARKERS)


def is_entity_like(t: SemType) -> bool:
    return isinstance(t, _ENTITY_LIKE)


def is_monadic_pred(t: SemType) -> bool:
    return isinstance(t, Pred) and (t.remaining is None or t.remaining == 1)


def is_sentence(t: SemType) -> bool:
    return isinstance(t, SentIntension)


def unify_sorts(a: str, b: str) -> str | None:
    """`none` unifies with any sort; named sorts only with themselves."""
    if a == b:
        return a
    if a == SORT_NONE:
        return b
    if b == SORT_NONE:
        return a
    return None


# ---------------------------------------------------------------------------
# Signature: atom -> type


def _tag_type(tag: str) -> SemType:
    if tag == "pro":
        return Entity()
    if tag == "n":
        return Pred(SORT_N, 1)
    if tag == "v":
        return Pred(SORT_V, None)
    if tag == "a":
        return Pred(SORT_ADJ, 1)
    if tag in ("p", "p-arg"):
        return Pred(SORT_P, 2)
    if tag == "d":
        return Fn(Pred(SORT_N, 1), UnscopedDetResult())
    if tag == "cc":
        return CoordMarker()
    if tag in ("aux-v", "aux-s"):
        return AuxMarker()
    if tag == "adv-a":
        return Fn(Pred(SORT_V, 1), Pred(SORT_V, 1))
    if tag in ("adv-e", "adv-s", "adv-f", "pq"):
        return Fn(SentIntension(), SentIntension())
    if tag == "ps":
        return Fn(SentIntension(), Fn(SentIntension(), SentIntension()))
    if tag == "mod-n":
        return Fn(Pred(SORT_NONE, 1), Pred(SORT_N, 1))
    if tag == "mod-a":
        return Fn(Pred(SORT_NONE, 1), Pred(SORT_ADJ, 1))
    if tag == "rel":
        return Entity()
    if tag == "sk":
        return Episode()
    raise AssertionError(f"unhandled tag {tag}")


_KEYWORD_TYPES: dict[str, SemType] = {
    "k": Fn(Pred(SORT_N, 1), Kind()),
    "to": Fn(Pred(SORT_V, 1), KindAction()),
    "ka": Fn(Pred(SORT_V, 1), KindAction()),
    "that": Fn(SentIntension(), Proposition()),
    "ke": Fn(SentIntension(), Entity()),
    "plur": Fn(Pred(SORT_N, 1), Pred(SORT_N, 1)),
    "pres": TenseMarker(),
    "past": TenseMarker(),
    "perf": AspectMarker(),
    "prog": AspectMarker(),
    "cf": CfMarker(),
    "not": Fn(SentIntension(), SentIntension()),
    "adv-a": Fn(Pred(SORT_NONE, 1), Fn(Pred(SORT_V, 1), Pred(SORT_V, 1))),
    "adv-e": Fn(Pred(SORT_NONE, 1), Fn(SentIntension(), SentIntension())),
    "adv-s": Fn(Pred(SORT_NONE, 1), Fn(SentIntension(), SentIntension())),
    "adv-f": Fn(Pred(SORT_NONE, 1), Fn(SentIntension(), SentIntension())),
    "mod-n": Fn(Pred(SORT_NONE, 1), Fn(Pred(SORT_N, 1), Pred(SORT_N, 1))),
    "mod-a": Fn(Pred(SORT_NONE, 1), Fn(Pred(SORT_ADJ, 1), Pred(SORT_ADJ, 1))),
    "nnp": Fn(Entity(), Fn(Pred(SORT_N, 1), Pred(SORT_N, 1))),
    "fquan": Fn(Pred(SORT_ADJ, 1), Fn(Pred(SORT_N, 1), UnscopedDetResult())),
    "nquan": Fn(Pred(SORT_ADJ, 1), Fn(Pred(SORT_N, 1), UnscopedDetResult())),
    "=": Fn(Entity(), Pred(SORT_NONE, 1)),
    "poss-by": Pred(SORT_NONE, 2),
    "pair": Fn(Entity(), Fn(Episode(), Entity())),
}


def atom_type(atom: UlfExpr) -> SemType:
    """Signature lookup for a leaf atom."""
    if isinstance(atom, (LexAtom, ElidedAtom)):
        return _tag_type(atom.tag)
    if isinstance(atom, Name):
        if atom.tag is None:
            return Entity()
        return _tag_type(atom.tag)
    if isinstance(atom, Keyword):
        if atom.name in _KEYWORD_TYPES:
            return _KEYWORD_TYPES[atom.name]
        if atom.name in E.MACRO_KEYWORDS or atom.name == "λ":
            return MacroSig(atom.name)
        if atom.name in E.EPISODIC_KEYWORDS:
            return EpisodicMarker(atom.name)
        raise KeyError(f"UnknownOperator: {atom.name}")
    if isinstance(atom, Var):
        return AnyType()
    if isinstance(atom, Hole):
        return AnyType()
    if isinstance(atom, Punct):
        return Fn(SentIntension(), SentIntension())
    raise KeyError(f"UnknownOperator: {atom}")


# ---------------------------------------------------------------------------
# Binary composition


@dataclass
class Composed:
    type: SemType
    orientation: str  # "left-op" | "right-op" | "predication" | "implicit-<shifter>"
    notes: list[tuple[str, str]] = field(default_factory=list)


def _accepts(param: SemType, arg: SemType) -> tuple[bool, tuple[str, str] | None]:
    """Whether `arg` may fill a parameter slot of type `param`."""
    if isinstance(arg, AnyType) or isinstance(param, AnyType):
        return True, None
    if isinstance(param, Entity):
        return is_entity_like(arg), None
    if isinstance(param, Episode):
        return isinstance(arg, Episode) or is_entity_like(arg), None
    if isinstance(param, SentIntension):
        return isinstance(arg, SentIntension), None
    if isinstance(param, Pred) and isinstance(arg, Pred):
        if param.remaining is not None and arg.remaining is not None \
                and param.remaining != arg.remaining:
            return False, None
        if param.sort == SORT_NONE or param.sort == arg.sort:
            return True, None
        if arg.sort == SORT_NONE:
            return True, ("SortCoercion",
                          f"untyped predicate used where {Pred(param.sort, 1)} is expected")
        return False, None
    if isinstance(param, Fn) and isinstance(arg, Fn):
        return param == arg, None
    return type(param) is type(arg), None


def compose(left: SemType, right: SemType, *,
            left_is_name: bool = False, mode: str = "raw") -> Composed | None:
    """Type-apply one side to the other, inferring the orientation.

    Returns None when neither orientation fits.  Notes carry diagnostic
    codes for compositions that are only admissible in raw form (implicit
    type-shifters, floating modifiers).
    """
    if isinstance(left, ErrorType) or isinstance(right, ErrorType):
        return Composed(ErrorType(), "poisoned")

    # markers: tense/aspect/cf/aux act as identity on verbal predicates,
    # compose with each other, and distribute over sentences (aux inversion)
    if is_marker(left):
        if is_marker(right):
            return Composed(left, "left-op")
        if isinstance(right, Pred):
            if right.sort in (SORT_V, SORT_NONE):
                return Composed(right, "left-op")
            return Composed(right, "left-op",
                            [("SortCoercion", "tense marker on a non-verbal predicate")])
        if isinstance(right, SentIntension):
            return Composed(right, "left-op")
        if isinstance(right, AnyType):
            return Composed(AnyType(), "left-op")
        return None

    both: list[Composed] = []

    if isinstance(left, Fn):
        ok, note = _accepts(left.frm, right)
        if ok:
            both.append(Composed(left.to, "left-op", [note] if note else []))
        elif isinstance(left.frm, SentIntension) and isinstance(left.to, SentIntension) \
                and isinstance(right, Pred) and right.sort in (SORT_V, SORT_NONE):
            # sentence-level modifier applied directly to a verbal predicate;
            # it commutes with the subject, so this is allowed in both modes
            both.append(Composed(right, "left-op"))

    if isinstance(right, Fn):
        ok, note = _accepts(right.frm, left)
        if ok:
            notes = [note] if note else []
            if isinstance(left, Pred):
                # modifier written after its operand: raw-form dislocation
                sev_code = ("FloatingModifier",
                            "modifier follows its operand; normalized by postprocessing")
                notes = notes + [sev_code]
            both.append(Composed(right.to, "right-op", notes))

    if len(both) == 2:
        picked = both[1]  # left-as-operand default
        picked.notes.append(("Ambiguous",
                             "both orientations type; left treated as operand"))
        return picked
    if len(both) == 1:
        return both[0]

    # predicate taking its next argument on the right
    if isinstance(left, Pred):
        arg_ok = is_entity_like(right) or isinstance(right, AnyType)
        complement_ok = (left.sort == SORT_V and is_monadic_pred(right))
        if (arg_ok or complement_ok) and (left.remaining is None or left.remaining >= 2):
            if left.remaining is None:
                return Composed(left, "left-op")
            sort = SORT_NONE if left.sort == SORT_P else left.sort
            return Composed(Pred(sort, left.remaining - 1), "left-op")
        # relational reading of nominal/adjectival predicates ("able to go",
        # "father of"): one entity-like complement, predicate stays monadic
        if arg_ok and left.remaining == 1 and left.sort in (SORT_N, SORT_ADJ):
            return Composed(left, "left-op")
        # implicit type-shifter: prefixed predicate modifying a predicate
        if isinstance(right, Pred) and is_monadic_pred(left) and is_monadic_pred(right):
            if right.sort == SORT_N:
                return Composed(Pred(SORT_N, 1), "implicit-mod-n",
                                [("ImplicitShifter", "mod-n")])
            if right.sort == SORT_ADJ:
                return Composed(Pred(SORT_ADJ, 1), "implicit-mod-a",
                                [("ImplicitShifter", "mod-a")])
            if right.sort in (SORT_V, SORT_NONE, SORT_P):
                return Composed(right, "implicit-adv-a",
                                [("ImplicitShifter", "adv-a")])

    # subject placed on the left of a predicate with all other args in place
    if is_entity_like(left) or isinstance(left, AnyType):
        if isinstance(right, Pred) and (right.remaining is None or right.remaining == 1):
            if left_is_name and right.sort == SORT_N:
                return Composed(Pred(SORT_N, 1), "implicit-nnp",
                                [("ImplicitShifter", "nnp")])
            return Composed(SentIntension(), "predication")
        if isinstance(right, AnyType):
            return Composed(AnyType(), "predication")
    if isinstance(left, AnyType):
        return Composed(AnyType(), "left-op")

    return None


# ---------------------------------------------------------------------------
# Whole-expression inference


@dataclass
class TypeResult:
    type: SemType
    diagnostics: list[Diagnostic]

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error()]


def infer_type(expr: UlfExpr, mode: str = "raw") -> TypeResult:
    """Bottom-up type of a parsed expression.

    `mode` controls how raw-form licenses are reported: implicit
    type-shifters and dislocated modifiers are notes in "raw" mode and
    errors/warnings in "strict" mode.  Macros are typed in place so
    diagnostic paths refer to the original tree.
    """
    inf = _Inferencer(mode)
    t, _ = inf.infer(expr, (), {})
    return TypeResult(t, inf.diags)


_NOTE_SEVERITY = {
    "raw": {"ImplicitShifter": NOTE, "FloatingModifier": NOTE},
    "strict": {"ImplicitShifter": ERROR, "FloatingModifier": WARNING},
}


class _Inferencer:
    def __init__(self, mode: str):
        self.mode = mode if mode in ("raw", "strict") else "raw"
        self.diags: list[Diagnostic] = []

    def note(self, code: str, message: str, path: E.Path) -> None:
        severity = _NOTE_SEVERITY[self.mode].get(code, NOTE)
        self.diags.append(Diagnostic(path=path, severity=severity,
                                     code=code, message=message))

    def error(self, code: str, message: str, path: E.Path) -> None:
        self.diags.append(Diagnostic(path=path, severity=ERROR,
                                     code=code, message=message))

    # (type, contains-free-relativizer)
    def infer(self, expr: UlfExpr, path: E.Path,
              env: dict[str, SemType]) -> tuple[SemType, bool]:
        if isinstance(expr, List):
            t, rel = self.infer_list(expr, path, env)
            if rel and isinstance(t, SentIntension):
                # a relativizer makes its smallest enclosing sentence an
                # (implicitly lambda-abstracted) monadic predicate
                return Pred(SORT_NONE, 1), False
            return t, rel
        return self.infer_atom(expr, path, env), E.has_tag(expr, "rel")

    def infer_atom(self, expr: UlfExpr, path: E.Path,
                   env: dict[str, SemType]) -> SemType:
        if isinstance(expr, Var):
            return env.get(expr.name, AnyType())
        if isinstance(expr, Hole):
            if expr.kind in env:
                return env[expr.kind]
            self.note("FreeHole", f"{expr.kind} not bound by sub/rep here", path)
            return AnyType()
        if E.has_tag(expr, "pq"):
            self.note("ExperimentalTag",
                      "'.pq' typing is provisional (sentence-modifier placeholder)", path)
        try:
            return atom_type(expr)
        except KeyError:
            self.error("UnknownOperator", f"no signature entry for {expr}", path)
            return ErrorType()

    def infer_list(self, expr: List, path: E.Path,
                   env: dict[str, SemType]) -> tuple[SemType, bool]:
        ch = expr.children
        if len(ch) == 1:
            return self.infer(ch[0], path + (0,), env)
        head = ch[0]

        if E.is_keyword(head, "λ"):
            return self.infer_lambda(expr, path, env)
        if isinstance(head, Keyword) and head.name in E.MACRO_KEYWORDS \
                and head.name != "'s":
            return self.infer_macro(expr, path, env)
        if len(ch) == 2 and E.is_keyword(ch[1], "'s"):
            t, rel = self.infer(ch[0], path + (0,), env)
            if not (is_entity_like(t) or isinstance(t, (AnyType, ErrorType))):
                self.error("NoFit", f"possessor must be an individual, got {t}",
                           path + (0,))
            return Fn(Pred(SORT_N, 1), UnscopedDetResult()), rel
        if len(ch) == 3 and isinstance(ch[1], Keyword) \
                and ch[1].name in E.EPISODIC_KEYWORDS:
            return self.infer_episodic(expr, path, env)
        if len(ch) == 3 and E.is_keyword(ch[1], "="):
            return self.infer_infix_eq(expr, path, env)
        if len(ch) >= 3 and any(E.has_tag(c, "cc") for c in ch[1:]):
            return self.infer_coordination(expr, path, env)

        return self.infer_application(expr, path, env)

    def infer_lambda(self, expr: List, path: E.Path,
                     env: dict[str, SemType]) -> tuple[SemType, bool]:
        ch = expr.children
        if len(ch) != 3 or not isinstance(ch[1], Var):
            self.error("ArityError", "lambda needs a variable and one body", path)
            return ErrorType(), False
        env2 = dict(env)
        env2[ch[1].name] = Entity()
        body_t, rel = self.infer(ch[2], path + (2,), env2)
        if isinstance(body_t, ErrorType):
            return ErrorType(), rel
        if isinstance(body_t, (SentIntension, Truth)):
            return Pred(SORT_NONE, 1), rel
        return Fn(Entity(), body_t), rel

    def infer_macro(self, expr: List, path: E.Path,
                    env: dict[str, SemType]) -> tuple[SemType, bool]:
        name = expr.children[0].name  # type: ignore[union-attr]
        ch = expr.children
        if name in ("sub", "rep"):
            if len(ch) != 3:
                self.error("ArityError", f"{name} takes exactly two arguments", path)
                return ErrorType(), False
            if name == "sub":
                c_ix, s_ix, hole = 1, 2, "*h"
            else:
                c_ix, s_ix, hole = 2, 1, "*p"
            t_c, rel_c = self.infer(ch[c_ix], path + (c_ix,), env)
            env2 = dict(env)
            env2[hole] = t_c
            t_s, rel_s = self.infer(ch[s_ix], path + (s_ix,), env2)
            return t_s, rel_c or rel_s
        if name == "n+preds":
            if len(ch) < 3:
                self.error("ArityError", "n+preds needs a noun and at least one predicate",
                           path)
                return ErrorType(), False
            rel = False
            for i, c in enumerate(ch[1:], start=1):
                t, r = self.infer(c, path + (i,), env)
                rel = rel or r
                if not (is_monadic_pred(t) or isinstance(t, (AnyType, ErrorType))):
                    self.error("NoFit",
                               f"n+preds argument must be a monadic predicate, got {t}",
                               path + (i,))
            return Pred(SORT_NONE, 1), rel
        if name == "np+preds":
            if len(ch) < 3:
                self.error("ArityError",
                           "np+preds needs an entity and at least one predicate", path)
                return ErrorType(), False
            t0, rel = self.infer(ch[1], path + (1,), env)
            if not (is_entity_like(t0) or isinstance(t0, (AnyType, ErrorType))):
                self.error("NoFit", f"np+preds head must be an individual, got {t0}",
                           path + (1,))
            for i, c in enumerate(ch[2:], start=2):
                t, r = self.infer(c, path + (i,), env)
                rel = rel or r
                if not (is_monadic_pred(t) or isinstance(t, (AnyType, ErrorType))):
                    self.error("NoFit",
                               f"np+preds argument must be a monadic predicate, got {t}",
                               path + (i,))
            return UnscopedDetResult(), rel
        raise AssertionError(name)

    def infer_episodic(self, expr: List, path: E.Path,
                       env: dict[str, SemType]) -> tuple[SemType, bool]:
        ch = expr.children
        t_body, rel_b = self.infer(ch[0], path + (0,), env)
        t_ep, rel_e = self.infer(ch[2], path + (2,), env)
        if not isinstance(t_body, (SentIntension, Truth, AnyType, ErrorType)):
            self.error("NoFit",
                       f"episodic operator relates a sentence intension, got {t_body}",
                       path + (0,))
        if not (is_entity_like(t_ep) or isinstance(t_ep, (AnyType, ErrorType))):
            self.error("NoFit", f"episodic operand must be an episode, got {t_ep}",
                       path + (2,))
        return Truth(), rel_b or rel_e

    def infer_infix_eq(self, expr: List, path: E.Path,
                       env: dict[str, SemType]) -> tuple[SemType, bool]:
        ch = expr.children
        t_l, rel_l = self.infer(ch[0], path + (0,), env)
        t_r, rel_r = self.infer(ch[2], path + (2,), env)
        for t, p in ((t_l, path + (0,)), (t_r, path + (2,))):
            if not (is_entity_like(t) or isinstance(t, (AnyType, ErrorType))):
                self.error("NoFit", f"'=' relates individuals, got {t}", p)
        return SentIntension(), rel_l or rel_r

    def infer_coordination(self, expr: List, path: E.Path,
                           env: dict[str, SemType]) -> tuple[SemType, bool]:
        operands: list[tuple[SemType, E.Path]] = []
        rel = False
        for i, c in enumerate(expr.children):
            if E.has_tag(c, "cc") and i > 0:
                continue
            t, r = self.infer(c, path + (i,), env)
            rel = rel or r
            operands.append((t, path + (i,)))
        types = [t for t, _ in operands if not isinstance(t, (AnyType, ErrorType))]
        if any(isinstance(t, ErrorType) for t, _ in operands):
            return ErrorType(), rel
        if not types:
            return AnyType(), rel
        if all(isinstance(t, (SentIntension, Truth)) for t in types):
            if any(isinstance(t, Truth) for t in types) \
                    and any(isinstance(t, SentIntension) for t in types):
                self.note("MixedCoord",
                          "coordination mixes episodic and intensional formulas", path)
            return (Truth() if any(isinstance(t, Truth) for t in types)
                    else SentIntension()), rel
        if all(isinstance(t, Pred) for t in types):
            sort = types[0].sort
            remaining = types[0].remaining
            for t in types[1:]:
                u = unify_sorts(sort, t.sort)
                if u is None:
                    self.note("MixedCoord",
                              "coordinated predicates have different sorts", path)
                    u = SORT_NONE
                sort = u
                if remaining != t.remaining:
                    remaining = 1 if 1 in (remaining, t.remaining) else remaining
            return Pred(sort, remaining), rel
        if all(is_entity_like(t) for t in types):
            return Entity(), rel
        self.error("NoFit",
                   "coordination requires like-typed conjuncts: "
                   + ", ".join(print_type(t) for t in types), path)
        return ErrorType(), rel

    def _is_floating_modifier(self, t: SemType) -> bool:
        return (isinstance(t, Fn)
                and ((t.frm == Pred(SORT_V, 1) and t.to == Pred(SORT_V, 1))
                     or (isinstance(t.frm, SentIntension)
                         and isinstance(t.to, SentIntension))))

    def infer_application(self, expr: List, path: E.Path,
                          env: dict[str, SemType]) -> tuple[SemType, bool]:
        ch = expr.children
        typed: list[tuple[SemType, bool]] = []
        for i, c in enumerate(ch):
            typed.append(self.infer(c, path + (i,), env))
        rel = any(r for _, r in typed)
        types = [t for t, _ in typed]

        reals: list[int] = [0]
        floats: list[int] = []
        for i in range(1, len(ch)):
            if self._is_floating_modifier(types[i]) and not isinstance(ch[i], Punct):
                floats.append(i)
            else:
                reals.append(i)

        acc = types[reals[0]]
        acc_expr = ch[reals[0]]
        for i in reals[1:]:
            res = self._apply(acc, types[i], acc_expr, ch[i], path, path + (i,))
            if res is None and is_marker(acc) and len(reals) >= 3 and i == reals[1]:
                # aux inversion: the fronted tense/aux operates on the whole
                # clause formed by the remaining constituents
                rest = self._fold(types, ch, reals[1:], path)
                if rest is not None:
                    res = compose(acc, rest)
                    if res is not None:
                        acc = res.type
                        acc_expr = expr
                        break
            if res is None:
                self._nofit(acc, types[i], acc_expr, path + (i,))
                acc = ErrorType()
                acc_expr = expr
                continue
            acc = res.type
            acc_expr = expr
        for i in floats:
            res = compose(types[i], acc)
            if res is None:
                self._nofit(acc, types[i], acc_expr, path + (i,))
                acc = ErrorType()
                continue
            self.note("FloatingModifier",
                      f"dislocated modifier {ch[i]} applies to its clause/verb phrase",
                      path + (i,))
            acc = res.type
        # Punct typed as sentence-identity already composes in the real fold
        return acc, rel

    def _fold(self, types: list[SemType], ch: tuple[UlfExpr, ...],
              indices: list[int], path: E.Path) -> SemType | None:
        acc = types[indices[0]]
        acc_expr = ch[indices[0]]
        for i in indices[1:]:
            res = self._apply(acc, types[i], acc_expr, ch[i], path, path + (i,),
                              record=False)
            if res is None:
                return None
            acc = res.type
            acc_expr = None  # composite
        return acc

    def _apply(self, left: SemType, right: SemType,
               left_expr: UlfExpr | None, right_expr: UlfExpr,
               list_path: E.Path, arg_path: E.Path,
               record: bool = True) -> Composed | None:
        left_is_name = isinstance(left_expr, Name) and left_expr.tag is None
        res = compose(left, right, left_is_name=left_is_name, mode=self.mode)
        if res is not None and record:
            for code, msg in res.notes:
                if code == "ImplicitShifter":
                    self.note(code, f"missing explicit {msg} type-shifter here",
                              list_path)
                else:
                    self.note(code, msg, arg_path)
        return res

    def _nofit(self, left: SemType, right: SemType,
               left_expr: UlfExpr | None, arg_path: E.Path) -> None:
        if isinstance(left, (ErrorType,)) or isinstance(right, ErrorType):
            return
        if isinstance(left, Fn) and isinstance(left.frm, Pred) \
                and left.frm.sort == SORT_N and E.has_tag(left_expr, "d"):
            self.error("NoFit",
                       f"determiner needs a nominal predicate, got {right}", arg_path)
            return
        self.error("NoFit",
                   f"cannot compose {print_type(left)} with {print_type(right)}; "
                   f"neither orientation applies", arg_path)
