"""Raw-to-postprocessed normalization.

Raw annotations may drop the mod-n/mod-a/nnp type-shifters, interleave
verb-phrase adverbials with a verb's arguments, and leave sentence-level
modifiers floating mid-sentence.  The pipeline here makes those licenses
explicit: relativizer processing, macro expansion, shifter insertion,
adverbial normalization, and sentence-modifier lifting.  Every stage
preserves the inferred type, and the full pipeline is idempotent.
"""

from __future__ import annotations

from . import expr as E
from .diagnostics import UlfError
from .expr import Keyword, List, Name, UlfExpr, Var
from .macros import expand_all, expand_rel
from .typesys import (
    Pred, SentIntension, SORT_V, compose, infer_type,
)

_SENT_MOD_TAGS = ("adv-s", "adv-e", "adv-f")


def _type_of(expr: UlfExpr):
    return infer_type(expr).type


def insert_shifters(expr: UlfExpr) -> UlfExpr:
    """Insert mod-n / mod-a / nnp at prefixed predicate-predicate pairs.

    The prefixed constituent is read as the operator; the head's sort picks
    the shifter.  Bottom-up, so stacked modifiers shift innermost first.
    """
    return E.transform(expr, _shift_node)


def _shift_node(node: UlfExpr) -> UlfExpr:
    if not isinstance(node, List) or len(node.children) != 2:
        return node
    left, right = node.children
    lt = _type_of(left)
    rt = _type_of(right)
    res = compose(lt, rt, left_is_name=isinstance(left, Name) and left.tag is None)
    if res is None or not res.orientation.startswith("implicit-"):
        return node
    shifter = res.orientation.removeprefix("implicit-")
    if shifter in ("mod-n", "mod-a", "nnp"):
        return E.lst(E.lst(Keyword(shifter), left), right)
    # a prefixed predicate over a verbal head is left for the checker to
    # suggest (adv-a ...); heads of undetermined sort cannot pick a shifter
    if isinstance(rt, Pred) and rt.sort not in (SORT_V,):
        raise UlfError.at("ShiftAmbiguous",
                          "cannot pick a type-shifter: head sort undetermined", ())
    return node


def _is_adv_a_modifier(node: UlfExpr) -> bool:
    if E.has_tag(node, "adv-a"):
        return True
    return (isinstance(node, List) and len(node.children) == 2
            and E.is_keyword(node.children[0], "adv-a"))


def _is_sent_modifier(node: UlfExpr) -> bool:
    if E.has_tag(node, *_SENT_MOD_TAGS):
        return True
    return (isinstance(node, List) and len(node.children) == 2
            and isinstance(node.children[0], Keyword)
            and node.children[0].name in _SENT_MOD_TAGS)


def _verb_headed(node: UlfExpr) -> bool:
    t = _type_of(node)
    return isinstance(t, Pred) and t.sort == SORT_V


def normalize_adv_a(expr: UlfExpr) -> UlfExpr:
    """Extract verb-phrase adverbials interleaved with a verb's arguments
    and apply them prefix to the saturated verb predicate, leftmost
    innermost."""
    return E.transform(expr, _normalize_node)


def _normalize_node(node: UlfExpr) -> UlfExpr:
    if not isinstance(node, List) or len(node.children) < 2:
        return node
    head = node.children[0]
    if _is_adv_a_modifier(head) or not _verb_headed(head):
        return node
    mods = [c for c in node.children[1:] if _is_adv_a_modifier(c)]
    if not mods:
        return node
    args = [c for c in node.children[1:] if not _is_adv_a_modifier(c)]
    core: UlfExpr = head if not args else List((head, *args))
    for m in mods:
        core = E.lst(m, core)
    return core


def lift_adv_s(expr: UlfExpr) -> UlfExpr:
    """Lift floating sentence-level modifiers (adv-s / adv-e / adv-f) to
    prefix their smallest enclosing sentence, preserving surface order
    (leftmost ends up outermost)."""
    lifted, floats = _lift(expr)
    for m in reversed(floats):  # no enclosing clause: attach at the root
        lifted = E.lst(m, lifted)
    return lifted


def _lift(expr: UlfExpr) -> tuple[UlfExpr, list[UlfExpr]]:
    if not isinstance(expr, List):
        return expr, []
    new_children: list[UlfExpr] = []
    floats: list[UlfExpr] = []
    for i, child in enumerate(expr.children):
        child2, inner = _lift(child)
        floats.extend(inner)
        if i >= 1 and _is_sent_modifier(child2) and _floating_position(expr, i):
            floats.append(child2)
        else:
            new_children.append(child2)
    if len(new_children) == 1:
        node: UlfExpr = new_children[0]
    else:
        node = List(tuple(new_children))
    if floats and isinstance(_type_of(node), SentIntension):
        for m in reversed(floats):
            node = E.lst(m, node)
        return node, []
    return node, floats


def _floating_position(parent: List, index: int) -> bool:
    """A sentence modifier is floating when interleaved as an extra sibling
    or written after a verb it cannot be an operand of; a two-element list
    with the modifier first is a proper prefix application."""
    if len(parent.children) > 2:
        return True
    return index == 1 and _verb_headed(parent.children[0])


_STAGES = ("rel", "macros", "shifters", "adv-a", "adv-s")


def postprocess(expr: UlfExpr, stage: str = "adv-s") -> UlfExpr:
    """Full raw-to-postprocessed pipeline; `stage` selects a prefix of it."""
    if stage not in _STAGES:
        raise ValueError(f"unknown stage {stage!r}; one of {_STAGES}")
    upto = _STAGES.index(stage)
    out = expand_rel(expr)
    if upto >= 1:
        out = expand_all(out)
    if upto >= 2:
        out = insert_shifters(out)
    if upto >= 3:
        out = normalize_adv_a(out)
    if upto >= 4:
        out = lift_adv_s(out)
    return out
