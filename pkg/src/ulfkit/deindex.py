"""Minimal deindexing of scoped forms.

Each tensed clause introduces a fresh skolemized episode constant |En|.sk
and a fresh reference time |Nowk|; the output contains one temporal
predication per clause (the tense relation applied to episode and
reference time) and the clause's formula related to its episode with the
characterizing operator **, the tense marker removed.  Canonicalization
splits top-level conjunctions into separate formulas.

Verb-phrase and episode adverbials expand into conjoined predications over
(agent, episode) pairs: a modifier pi on a clause with subject s and
episode e contributes the conjunct ((pair s e) pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as E
from .diagnostics import Diagnostic, UlfError, WARNING
from .expr import Keyword, LexAtom, List, Name, UlfExpr, Var

# tense -> temporal relation on (episode, reference time); the present-tense
# relation is fixed by the pipeline's canonical output, the others are
# configurable choices
TENSE_RELATIONS = {
    "pres": "at-about",
    "past": "before",
    "cf": "at-about",
}

_TENSE_OPS = ("pres", "past", "cf")
_ASPECT_OPS = ("perf", "prog")
_ADV_KINDS = ("adv-a", "adv-e")


@dataclass
class _Deindexer:
    episodes: int = 0
    nows: int = 0
    side: list[UlfExpr] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def fresh_episode(self) -> Name:
        self.episodes += 1
        return Name(f"E{self.episodes}", "sk")

    def fresh_now(self) -> Name:
        self.nows += 1
        return Name(f"Now{self.nows}")


def deindex(form: UlfExpr) -> tuple[list[UlfExpr], list[Diagnostic]]:
    """Split a default-scoped form into top-level deindexed formulas."""
    dx = _Deindexer()
    formulas = _deindex_top(form, dx)
    return dx.side + formulas, dx.diagnostics


def _tense_split(form: UlfExpr) -> tuple[list[str], UlfExpr] | None:
    """((pres (prog X))) -> (["pres","prog"], X); None when untensed."""
    ops: list[str] = []
    node = form
    while isinstance(node, List) and len(node.children) == 2 \
            and isinstance(node.children[0], Keyword) \
            and node.children[0].name in _TENSE_OPS + _ASPECT_OPS:
        ops.append(node.children[0].name)
        node = node.children[1]
    if not ops or ops[0] not in _TENSE_OPS:
        return None
    return ops, node


def _has_adverbial(form: UlfExpr) -> bool:
    for node, _ in E.walk(form):
        if isinstance(node, List) and len(node.children) == 2 \
                and isinstance(node.children[0], Keyword) \
                and node.children[0].name in _ADV_KINDS:
            return True
    return False


def _is_coordination(form: UlfExpr) -> bool:
    return (isinstance(form, List) and len(form.children) >= 3
            and any(E.has_tag(c, "cc") for c in form.children[1:]))


def _deindex_top(form: UlfExpr, dx: _Deindexer) -> list[UlfExpr]:
    if _is_coordination(form) and _coord_op(form) == "and":
        out: list[UlfExpr] = []
        for c in form.children:
            if not E.has_tag(c, "cc"):
                out.extend(_deindex_top(c, dx))
        return out
    return [_deindex_clause(form, dx)]


def _coord_op(form: List) -> str:
    for c in form.children[1:]:
        if E.has_tag(c, "cc"):
            return c.stem  # type: ignore[union-attr]
    return "and"


def _deindex_clause(form: UlfExpr, dx: _Deindexer) -> UlfExpr:
    """One formula for one clause (or clause structure), emitting temporal
    predications as side formulas."""
    if isinstance(form, List) and len(form.children) == 2 \
            and isinstance(form.children[0], List) \
            and len(form.children[0].children) == 2 \
            and E.has_tag(form.children[0].children[0], "ps"):
        head = form.children[0]
        ant = _deindex_clause(head.children[1], dx)
        cons = _deindex_clause(form.children[1], dx)
        return E.lst(E.lst(head.children[0], ant), cons)
    if _is_coordination(form):
        return List(tuple(
            c if E.has_tag(c, "cc") else _deindex_clause(c, dx)
            for c in form.children))

    split = _tense_split(form)
    if split is None:
        if _has_adverbial(form):
            episode = dx.fresh_episode()
            return List((form, Keyword("**"), episode))
        return form

    ops, body = split
    aspects = ops[1:]
    if len(aspects) > 1:
        dx.diagnostics.append(Diagnostic(
            path=(), severity=WARNING, code="UnsupportedTense",
            message=f"aspect stack {aspects} passed through undeindexed"))
    episode = dx.fresh_episode()
    now = dx.fresh_now()
    relation = TENSE_RELATIONS.get(ops[0], "at-about")
    dx.side.append(List((episode, LexAtom(relation, "p"), now)))
    for op in reversed(aspects):
        body = E.lst(Keyword(op), body)
    return List((body, Keyword("**"), episode))


# ---------------------------------------------------------------------------
# Adverbial expansion


def expand_adverbial(form: UlfExpr) -> UlfExpr:
    """Rewrite adv-a / adv-e applications inside a characterizing formula
    into (agent, episode)-pair predications conjoined with it."""
    if not (isinstance(form, List) and len(form.children) == 3
            and E.is_keyword(form.children[1], "**")):
        if _has_adverbial(form):
            raise UlfError.at("NoEpisodeInScope",
                              "adverbial outside a characterized clause", ())
        return form
    body, _, episode = form.children
    if isinstance(body, List) and len(body.children) == 4 \
            and isinstance(body.children[1], Var):
        # ** applies to the whole quantified formula; modifiers under a
        # scoped quantifier are left in place (finer-grained subepisode
        # readings are out of scope)
        return form
    clause, mods = _extract_adverbials(body)
    if not mods:
        return form
    char = List((clause, Keyword("**"), episode))
    subject = _subject_of(clause)
    conjuncts: list[UlfExpr] = [char]
    for pi in mods:
        pair = E.lst(Keyword("pair"), subject, episode)
        conjuncts.append(E.lst(pair, pi))
    out: list[UlfExpr] = [conjuncts[0]]
    for c in conjuncts[1:]:
        out.append(LexAtom("and", "cc"))
        out.append(c)
    return List(tuple(out))


def _adv_application(node: UlfExpr) -> UlfExpr | None:
    if isinstance(node, List) and len(node.children) == 2 \
            and isinstance(node.children[0], Keyword) \
            and node.children[0].name in _ADV_KINDS:
        return node.children[1]
    return None


_REIFIER_HEADS = ("to", "ka", "that", "ke", "k")


def _extract_adverbials(body: UlfExpr) -> tuple[UlfExpr, list[UlfExpr]]:
    """Strip adv-a/adv-e applications off a clause, collecting their
    operands in surface order.  Reified complements are opaque: modifiers
    inside them belong to the embedded predicate, not to this episode."""
    mods: list[UlfExpr] = []
    clause = _strip(body, mods)
    return clause, mods


def _strip(node: UlfExpr, mods: list[UlfExpr]) -> UlfExpr:
    if not isinstance(node, List):
        return node
    head = node.children[0]
    if isinstance(head, Keyword) and head.name in _REIFIER_HEADS:
        return node
    kept: list[UlfExpr] = []
    for c in node.children:
        pi = _adv_application(c)
        if pi is not None:
            mods.append(pi)
        else:
            kept.append(_strip(c, mods))
    if not kept:
        return node
    if len(kept) == 1:
        return kept[0]
    return List(tuple(kept))


def _subject_of(clause: UlfExpr) -> UlfExpr:
    if isinstance(clause, List) and len(clause.children) >= 2:
        return clause.children[0]
    raise UlfError.at("NoEpisodeInScope",
                      "cannot identify the subject of the characterized clause", ())
