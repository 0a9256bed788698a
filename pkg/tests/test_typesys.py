import pytest

from ulfkit.expr import walk, List, node_at, replace_at
from ulfkit.reader import parse, print_expr
from ulfkit.typesys import (
    AnyType, Entity, Fn, Kind, KindAction, Pred, Proposition, SentIntension,
    UnscopedDetResult, atom_type, compose, infer_type, print_type,
)


def t(text):
    return infer_type(parse(text))


def test_atom_types():
    assert atom_type(parse("me.pro")) == Entity()
    assert atom_type(parse("for.p")) == Pred("p", 2)
    assert atom_type(parse("perhaps.adv-s")) == Fn(SentIntension(), SentIntension())
    assert atom_type(parse("dog.n")) == Pred("n", 1)
    assert atom_type(parse("run.v")) == Pred("v", None)
    assert atom_type(parse("|John|")) == Entity()
    assert atom_type(parse("|Earth|.n")) == Pred("n", 1)


def test_compose_orientations():
    # modifier over verb predicate: the function side is the operator
    mod = Fn(Pred("v", 1), Pred("v", 1))
    res = compose(mod, Pred("v", 1))
    assert res.type == Pred("v", 1) and res.orientation == "left-op"
    # two-place predicate applied to an individual gives a monadic predicate
    res = compose(Pred("p", 2), Entity())
    assert res.type == Pred("none", 1)
    # subject placed on the left yields a sentence intension
    res = compose(Entity(), Pred("none", 1))
    assert res.type == SentIntension() and res.orientation == "predication"
    # no fit
    assert compose(Entity(), Entity()) is None


def test_unscoped_det_result_fills_entity_slots():
    res = compose(Pred("v", None), UnscopedDetResult())
    assert res.type == Pred("v", None)
    # but never acts as an operator
    assert compose(UnscopedDetResult(), Entity()) is None


def test_fig1_types_to_sentence():
    r = t("(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))")
    assert r.type == SentIntension()
    assert not r.errors()


def test_flowers_types_to_sentence():
    r = t("((k (plur flower.n)) ((pres be.v) (weak.a (plur creature.n))))")
    assert r.type == SentIntension()
    assert not r.errors()


def test_reifiers():
    assert t("(k grass.n)").type == Kind()
    assert t("(to succeed.v)").type == KindAction()
    assert t("(that ((k grass.n) red.a))").type == Proposition()


def test_verb_adicity_from_context():
    # flexible verb saturates from bracketing; extra args are fine
    r = t("(run.v (the.d dog.n) extra.pro)")
    assert isinstance(r.type, Pred) and r.type.sort == "v"
    assert not r.errors()


def test_all_goldens_type_clean(goldens):
    for name, text, fragment in goldens:
        r = t(text)
        errs = r.errors()
        assert not errs, f"{name}: {[d.message for d in errs]}"


def test_golden_sentences_are_sentences(golden_sentences):
    for name, text in golden_sentences:
        r = t(text)
        assert r.type == SentIntension(), f"{name} typed {print_type(r.type)}"


def test_det_phrase_substitutability(golden_sentences):
    """Replacing (every.d dog.n) by |John| or they.pro anywhere preserves
    typability."""
    for name, text in golden_sentences:
        e = parse(text)
        for node, path in walk(e):
            if isinstance(node, List) and len(node.children) == 2 \
                    and isinstance(infer_type(node).type, UnscopedDetResult):
                for repl in (parse("|John|"), parse("they.pro")):
                    mutated = replace_at(e, path, repl)
                    r = infer_type(mutated)
                    assert not r.errors(), (name, path, print_expr(mutated))


def test_orientation_unambiguous_on_goldens(golden_texts):
    """Every application node resolves exactly one orientation (no
    Ambiguous diagnostics on the corpus)."""
    for text in golden_texts:
        r = infer_type(parse(text))
        assert not [d for d in r.diagnostics if d.code == "Ambiguous"], text


def test_nofit_diagnostic_paths():
    r = t("(the.d (run.v))")
    errs = r.errors()
    assert len(errs) == 1
    assert errs[0].path == (1,)
    assert "nominal predicate" in errs[0].message


def test_cascade_deduplication():
    # one independent failure, not one per enclosing node
    r = t("(she.pro ((pres want.v) (the.d (run.v))))")
    assert len(r.errors()) == 1


def test_strict_mode_flags_implicit_shifters():
    raw = t("(weak.a (plur creature.n))")
    assert not raw.errors()
    strict = infer_type(parse("(weak.a (plur creature.n))"), mode="strict")
    assert any(d.code == "ImplicitShifter" for d in strict.errors())


def test_type_printing_syntax():
    assert print_type(Entity()) == "D"
    assert print_type(SentIntension()) == "S=>2"
    assert print_type(Pred("n", 1)) == "P[N]"
    assert print_type(Fn(Entity(), SentIntension())) == "(D=>(S=>2))"


def test_pq_tag_is_provisional():
    r = t("when.pq")
    assert any(d.code == "ExperimentalTag" for d in r.diagnostics)
    assert not r.errors()
