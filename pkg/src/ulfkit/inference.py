"""Situated structural inferences over composed forms.

Four inference families: lexical template rules loaded from a rule file
(implicatives like "manage", attitudinal/communicative verbs like
"denounce"), natural-logic substitution licensed by determiner
monotonicity plus a small knowledge base, counterfactual implicatures
from cf-marked clauses, and request/question inferences from
question-marked auxiliaries.

Rule and knowledge files are line-oriented s-expressions.  Template slots
are $-/?-prefixed tokens; the builtin (!retense ?t ?comp) grafts a tense
marker onto the head verb of a complement.  Attitudinal conclusions carry
a strength label (entails / probably), never a number.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import expr as E
from .checker import check
from .diagnostics import UlfError
from .expr import ElidedAtom, Keyword, LexAtom, List, Name, UlfExpr, Var
from .reader import parse_all, print_expr

# irregular stems normalized when a counterfactual is re-tensed
_CF_STEMS = {"were": "be", "was": "be", "had": "have", "did": "do"}

_REQUEST_AUX = ("could", "can", "will", "would")

# determiner monotonicity: (restrictor direction, matrix direction);
# +1 upward, -1 downward, 0 non-monotone
MONOTONICITY = {
    "every": (-1, 1), "all": (-1, 1), "each": (-1, 1),
    "some": (1, 1), "a": (1, 1), "an": (1, 1),
    "no": (-1, -1),
    "most": (0, 1),
    "the": (0, 0),
}


@dataclass(frozen=True)
class Inference:
    conclusion: UlfExpr
    rule_class: str  # implicative | attitudinal | nlog | counterfactual | request | question
    strength: str    # entails | probably | implicature
    trigger: str


@dataclass
class LexRule:
    rule_class: str
    trigger: str
    polarity: str  # pos-entail | neg-entail | both
    strength: str
    pattern: UlfExpr
    conclusions: list[UlfExpr]


@dataclass(frozen=True)
class KBFact:
    relation: str  # isa-member | isa-hypernym
    subject: UlfExpr
    object: UlfExpr


# ---------------------------------------------------------------------------
# Rule / KB files


def parse_rules(text: str) -> list[LexRule]:
    rules = []
    for form in parse_all(text):
        if not isinstance(form, List) or print_expr(form.children[0]) != "rule":
            raise UlfError.at("ArityError", f"bad rule entry {print_expr(form)}")
        ch = form.children
        if len(ch) < 7:
            raise UlfError.at("ArityError", "rule needs class, trigger, polarity, "
                                            "strength, pattern, conclusions")
        rules.append(LexRule(
            rule_class=print_expr(ch[1]),
            trigger=print_expr(ch[2]),
            polarity=print_expr(ch[3]),
            strength=print_expr(ch[4]),
            pattern=ch[5],
            conclusions=list(ch[6:]),
        ))
    return rules


def parse_kb(text: str) -> list[KBFact]:
    facts = []
    for form in parse_all(text):
        if not isinstance(form, List) or len(form.children) != 3:
            raise UlfError.at("ArityError", f"bad kb entry {print_expr(form)}")
        rel = print_expr(form.children[0])
        if rel not in ("isa-member", "isa-hypernym"):
            raise UlfError.at("ArityError", f"unknown kb relation {rel}")
        facts.append(KBFact(rel, form.children[1], form.children[2]))
    _check_acyclic(facts)
    return facts


def _check_acyclic(facts: list[KBFact]) -> None:
    edges: dict[str, set[str]] = {}
    for f in facts:
        if f.relation == "isa-hypernym":
            edges.setdefault(print_expr(f.subject), set()).add(print_expr(f.object))
    seen: set[str] = set()
    stack: set[str] = set()

    def visit(n: str) -> None:
        if n in stack:
            raise UlfError.at("ArityError", f"hypernymy cycle through {n}")
        if n in seen:
            return
        stack.add(n)
        for m in edges.get(n, ()):
            visit(m)
        stack.discard(n)
        seen.add(n)

    for n in list(edges):
        visit(n)


def load_default_rules() -> list[LexRule]:
    text = resources.files("ulfkit.data").joinpath("inference.rules").read_text()
    return parse_rules(text)


# ---------------------------------------------------------------------------
# Pattern matching and instantiation


def _is_slot(node: UlfExpr) -> bool:
    return isinstance(node, Var) and node.name[:1] in ("$", "?")


def match(pattern: UlfExpr, expr: UlfExpr,
          bindings: dict[str, UlfExpr]) -> bool:
    if _is_slot(pattern):
        name = pattern.name  # type: ignore[union-attr]
        if name in bindings:
            return bindings[name] == expr
        bindings[name] = expr
        return True
    if isinstance(pattern, List) and isinstance(expr, List):
        if len(pattern.children) != len(expr.children):
            return False
        return all(match(p, e, bindings)
                   for p, e in zip(pattern.children, expr.children))
    return pattern == expr


def instantiate(template: UlfExpr, bindings: dict[str, UlfExpr]) -> UlfExpr:
    if _is_slot(template):
        name = template.name  # type: ignore[union-attr]
        if name not in bindings:
            raise UlfError.at("ArityError", f"unbound template slot {name}")
        return bindings[name]
    if isinstance(template, List):
        head = template.children[0]
        if isinstance(head, Var) and head.name == "!retense":
            t = instantiate(template.children[1], bindings)
            comp = instantiate(template.children[2], bindings)
            return retense(t, comp)
        return List(tuple(instantiate(c, bindings) for c in template.children))
    return template


def retense(tense: UlfExpr, comp: UlfExpr) -> UlfExpr:
    """Graft a tense marker onto the head verb of a verb phrase."""
    if isinstance(comp, List) and E.has_tag(comp.children[0], "v"):
        return List((E.lst(tense, comp.children[0]),) + comp.children[1:])
    if E.has_tag(comp, "v"):
        return E.lst(tense, comp)
    return E.lst(tense, comp)


# ---------------------------------------------------------------------------
# Lexical rules (implicatives, attitudinals)


def _negated(expr: UlfExpr) -> UlfExpr | None:
    if isinstance(expr, List) and len(expr.children) == 2 \
            and E.is_keyword(expr.children[0], "not"):
        return expr.children[1]
    return None


def _negate(expr: UlfExpr) -> UlfExpr:
    inner = _negated(expr)
    if inner is not None:
        return inner  # double negation normalizes away
    return E.lst(Keyword("not"), expr)


def apply_lex_rules(expr: UlfExpr, rules: list[LexRule]) -> list[Inference]:
    out: list[Inference] = []
    inner = _negated(expr)
    for rule in rules:
        b: dict[str, UlfExpr] = {}
        if match(rule.pattern, expr, b):
            if rule.polarity in ("pos-entail", "both"):
                for c in rule.conclusions:
                    out.append(Inference(instantiate(c, b), rule.rule_class,
                                         rule.strength, rule.trigger))
        elif inner is not None:
            b = {}
            if match(rule.pattern, inner, b):
                if rule.polarity == "both":
                    for c in rule.conclusions:
                        out.append(Inference(_negate(instantiate(c, b)),
                                             rule.rule_class, rule.strength,
                                             rule.trigger))
                elif rule.polarity == "neg-entail":
                    for c in rule.conclusions:
                        out.append(Inference(instantiate(c, b), rule.rule_class,
                                             rule.strength, rule.trigger))
    return out


# ---------------------------------------------------------------------------
# Natural-logic substitution


def _det_phrases(expr: UlfExpr) -> list[tuple[E.Path, str, UlfExpr]]:
    """(path, determiner stem, restrictor pred) for each surface det phrase."""
    out = []
    for node, path in E.walk(expr):
        if isinstance(node, List) and len(node.children) == 2 \
                and E.has_tag(node.children[0], "d"):
            out.append((path, node.children[0].stem, node.children[1]))  # type: ignore
    return out


def polarity_at(expr: UlfExpr, path: E.Path) -> int:
    """Monotonicity direction of a position: +1 up, -1 down, 0 unknown.

    Composes negation flips along the path with restrictor/matrix factors
    of the clause's surface determiner phrases (assumed to scope over their
    clause)."""
    factor = 1
    for i in range(len(path)):
        node = E.node_at(expr, path[:i])
        if isinstance(node, List) and E.is_keyword(node.children[0], "not"):
            factor *= -1
    for dp_path, det, _pred in _det_phrases(expr):
        restr_dir, matrix_dir = MONOTONICITY.get(det, (0, 0))
        if path[:len(dp_path)] == dp_path and len(path) > len(dp_path):
            factor *= restr_dir
        elif path[:len(dp_path)] != dp_path:
            factor *= matrix_dir
    return factor


def monotone_subst(expr: UlfExpr, kb: list[KBFact],
                   depth: int = 2) -> list[Inference]:
    """Substitution instances licensed by determiner monotonicity: instances
    of universally quantified phrases, existential generalization of terms
    in upward positions, and hypernym moves on predicates."""
    seen = {print_expr(expr)}
    frontier = [expr]
    out: list[Inference] = []
    for _ in range(depth):
        next_frontier = []
        for e in frontier:
            for cand in _single_edits(e, kb):
                key = print_expr(cand)
                if key in seen:
                    continue
                seen.add(key)
                if any(d.is_error() for d in check(cand, with_suggestions=False)):
                    continue
                out.append(Inference(cand, "nlog", "entails", "monotonicity"))
                next_frontier.append(cand)
        frontier = next_frontier
    return out


def _single_edits(expr: UlfExpr, kb: list[KBFact]) -> list[UlfExpr]:
    edits: list[UlfExpr] = []
    # universal instantiation: (every.d P) -> member term
    for path, det, pred in _det_phrases(expr):
        if det in ("every", "all", "each") and polarity_at(expr, path) == 1:
            for f in kb:
                if f.object == pred:
                    edits.append(E.replace_at(expr, path, f.subject))
    for node, path in E.walk(expr):
        pol = polarity_at(expr, path)
        # existential generalization of a term in an upward position
        if isinstance(node, Name) and node.tag is None and pol == 1:
            for f in kb:
                if f.subject == node:
                    edits.append(E.replace_at(
                        expr, path, E.lst(LexAtom("a", "d"), f.object)))
        # hypernym moves on predicates
        if pol != 0 and not isinstance(node, Name):
            for f in kb:
                if f.relation != "isa-hypernym":
                    continue
                if pol == 1 and f.subject == node:
                    edits.append(E.replace_at(expr, path, f.object))
                if pol == -1 and f.object == node:
                    edits.append(E.replace_at(expr, path, f.subject))
    return edits


# ---------------------------------------------------------------------------
# Counterfactuals


def _retense_cf(expr: UlfExpr) -> UlfExpr:
    """Replace cf markers with pres and normalize irregular stems."""
    def fix(node: UlfExpr) -> UlfExpr:
        if E.is_keyword(node, "cf"):
            return Keyword("pres")
        if isinstance(node, LexAtom) and node.tag == "v" \
                and node.stem in _CF_STEMS:
            return LexAtom(_CF_STEMS[node.stem], "v")
        return node
    return E.transform(expr, fix)


def _has_cf(expr: UlfExpr) -> bool:
    return any(E.is_keyword(n, "cf") for n, _ in E.walk(expr))


def counterfactual_implicature(expr: UlfExpr) -> list[Inference]:
    """A cf-marked antecedent (under if.ps) or wish-complement implicates
    the negation of its present-tense counterpart."""
    out: list[Inference] = []
    if isinstance(expr, List) and len(expr.children) == 2 \
            and isinstance(expr.children[0], List) \
            and len(expr.children[0].children) == 2 \
            and E.has_tag(expr.children[0].children[0], "ps"):
        antecedent = expr.children[0].children[1]
        if _has_cf(antecedent):
            out.append(Inference(E.lst(Keyword("not"), _retense_cf(antecedent)),
                                 "counterfactual", "implicature", "if.ps"))
    b: dict[str, UlfExpr] = {}
    wish_pat = _pat("($subj ((?t wish.v) (that ?comp)))")
    if match(wish_pat, expr, b) and _has_cf(b["?comp"]):
        out.append(Inference(E.lst(Keyword("not"), _retense_cf(b["?comp"])),
                             "counterfactual", "implicature", "wish.v"))
    return out


_PAT_CACHE: dict[str, UlfExpr] = {}


def _pat(text: str) -> UlfExpr:
    if text not in _PAT_CACHE:
        _PAT_CACHE[text] = parse_all(text)[0]
    return _PAT_CACHE[text]


# ---------------------------------------------------------------------------
# Requests and questions


def request_inference(expr: UlfExpr) -> list[Inference]:
    """Question-marked could/can/will auxiliaries with an addressee subject
    yield speaker-wants and addressee-expected inferences; wh-questions
    yield their presupposition."""
    if not (isinstance(expr, List) and len(expr.children) == 2
            and isinstance(expr.children[1], E.Punct)
            and expr.children[1].kind == "?"):
        return []
    clause = expr.children[0]
    out: list[Inference] = []
    if isinstance(clause, List) and len(clause.children) == 3:
        marker, subj, vp = clause.children
        if _is_request_marker(marker) and E.has_tag(subj, "pro") \
                and subj.stem == "you":  # type: ignore[union-attr]
            tensed = retense(Keyword("pres"), vp)
            that_comp = E.lst(Keyword("that"), E.lst(subj, tensed))
            out.append(Inference(
                E.lst(LexAtom("i", "pro"),
                      E.lst(E.lst(Keyword("pres"), LexAtom("want", "v")), that_comp)),
                "request", "entails", "request-aux"))
            will_vp = E.lst(E.lst(Keyword("pres"), LexAtom("will", "aux-s")), vp)
            out.append(Inference(
                E.lst(LexAtom("i", "pro"),
                      E.lst(E.lst(Keyword("pres"), LexAtom("expect", "v")),
                            E.lst(Keyword("that"), E.lst(subj, will_vp)))),
                "request", "probably", "request-aux"))
    out.extend(_wh_presupposition(clause))
    return out


def _is_request_marker(node: UlfExpr) -> bool:
    if not (isinstance(node, List) and len(node.children) == 2):
        return False
    t, aux = node.children
    return E.is_keyword(t, "pres") and E.has_tag(aux, "aux-v", "aux-s") \
        and aux.stem in _REQUEST_AUX  # type: ignore[union-attr]


def _wh_presupposition(clause: UlfExpr) -> list[Inference]:
    if not (isinstance(clause, List) and len(clause.children) == 3
            and E.is_keyword(clause.children[0], "sub")
            and E.has_tag(clause.children[1], "pq")):
        return []
    body = _drop_holes(clause.children[2])
    out = [Inference(body, "question", "entails", "wh-presupposition")]
    know = E.lst(LexAtom("i", "pro"),
                 E.lst(E.lst(Keyword("pres"), LexAtom("want", "v")),
                       E.lst(Keyword("to"),
                             E.lst(LexAtom("know", "v"),
                                   ElidedAtom("ans", "pro")))))
    out.append(Inference(know, "question", "probably", "wh-presupposition"))
    return out


def _drop_holes(expr: UlfExpr) -> UlfExpr:
    if not isinstance(expr, List):
        return expr
    kept = [_drop_holes(c) for c in expr.children if not isinstance(c, E.Hole)]
    if not kept:
        return expr
    if len(kept) == 1:
        return kept[0]
    return List(tuple(kept))


# ---------------------------------------------------------------------------
# Union


def infer_all(expr: UlfExpr, rules: list[LexRule] | None = None,
              kb: list[KBFact] | None = None) -> list[Inference]:
    """Union of all rule-class outputs, deduplicated and well-typed."""
    if rules is None:
        rules = load_default_rules()
    kb = kb or []
    out: list[Inference] = []
    out.extend(apply_lex_rules(expr, rules))
    out.extend(monotone_subst(expr, kb))
    out.extend(counterfactual_implicature(expr))
    out.extend(request_inference(expr))
    seen: set[str] = set()
    unique: list[Inference] = []
    for inf in out:
        key = print_expr(inf.conclusion)
        if key in seen:
            continue
        seen.add(key)
        unique.append(inf)
    return unique
