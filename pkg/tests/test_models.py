import itertools

import pytest

from ulfkit.diagnostics import UlfError
from ulfkit.models import FiniteModel, eval_model, parse_model
from ulfkit.reader import parse
from ulfkit.scoping import to_scoped_form


def formf(text):
    return to_scoped_form(parse(text))


def single_situation_model(domain, p_ext, q_ext=()):
    m = FiniteModel()
    m.domain = set(domain)
    m.situations = {"e"}
    m.time = {"e": "t0"}
    m.declared = {"p.n", "q.v"}
    m.extensions[("p.n", "e")] = {(d,) for d in p_ext}
    m.extensions[("q.v", "e")] = {(d,) for d in q_ext}
    m.episode = "e"
    m.close()
    return m


EVERY = formf("(every.d x (x p.n) (x q.v))")
SOME = formf("(some.d x (x p.n) (x q.v))")
MOST = formf("(most.d x (x p.n) (x q.v))")
NO = formf("(no.d x (x p.n) (x q.v))")
THE = formf("(the.d x (x p.n) (x q.v))")


def test_every_vacuous_true():
    m = single_situation_model("abc", "", "ab")
    assert eval_model(EVERY, m) is True


def test_most_strict_majority():
    m = single_situation_model("abc", "abc", "ab")
    assert eval_model(MOST, m) is True  # 2 of 3
    m4 = single_situation_model("abcd", "abcd", "ab")
    assert eval_model(MOST, m4) is False  # 2 of 4


def test_the_presupposition():
    m = single_situation_model("abc", "a", "a")
    assert eval_model(THE, m) is True
    with pytest.raises(UlfError) as exc:
        eval_model(THE, single_situation_model("abc", "ab", "ab"))
    assert exc.value.diagnostic.code == "PresuppositionFailure"
    with pytest.raises(UlfError):
        eval_model(THE, single_situation_model("abc", "", ""))


def test_undeclared_predicate():
    m = single_situation_model("ab", "ab", "ab")
    with pytest.raises(UlfError) as exc:
        eval_model(formf("(every.d x (x zebra.n) (x q.v))"), m)
    assert exc.value.diagnostic.code == "UndeclaredPredicate"


def test_unregistered_quantity_adjective():
    m = single_situation_model("ab", "ab", "ab")
    with pytest.raises(UlfError) as exc:
        eval_model(formf("((fquan scarce.a) x (x p.n) (x q.v))"), m)
    assert exc.value.diagnostic.code == "UndeclaredPredicate"


def test_registered_quantity():
    m = single_situation_model("abcd", "abcd", "a")
    assert eval_model(formf("((nquan (< 2)) x (x p.n) (x q.v))"), m) is True
    assert eval_model(formf("((nquan (>= 2)) x (x p.n) (x q.v))"), m) is False
    assert eval_model(formf("((fquan few.a) x (x p.n) (x q.v))"), m) is True


def test_not_flips():
    m = single_situation_model("ab", "ab", "")
    assert eval_model(formf("(no.d x (x p.n) (x q.v))"), m) is True
    assert eval_model(formf("(not (no.d x (x p.n) (x q.v)))"), m) is False


def test_binary_extension_surface_order():
    m = FiniteModel()
    m.domain = {"romeo", "juliet"}
    m.situations = {"e"}
    m.time = {"e": "t0"}
    m.declared = {"love.v"}
    m.extensions[("love.v", "e")] = {("romeo", "juliet")}
    m.constants = {"|Romeo|": "romeo", "|Juliet|": "juliet"}
    m.episode = "e"
    m.close()
    assert eval_model(formf("(|Romeo| (love.v |Juliet|))"), m) is True
    assert eval_model(formf("(|Juliet| (love.v |Romeo|))"), m) is False


def test_model_file_round_trip(tmp_path):
    text = """
; situations form a chain s1 < e
(domain d1 d2)
(situations s1 e)
(part-of s1 e)
(time s1 t1) (time e t1)
(ext dog.n e d1 d2) (ext dog.n s1 d1)
(ext run.v s1 d1)
(ext run.v e d1)
(episode e)
"""
    m = parse_model(text)
    assert ("s1", "e") in m.part_of and ("s1", "s1") in m.part_of
    every = formf("(every.d x (x dog.n) (x run.v))")
    assert eval_model(every, m) is False
    assert eval_model(formf("((every.d x (x dog.n) (x run.v)) * e)"), m) is True


def test_antisymmetry_enforced():
    with pytest.raises(UlfError):
        parse_model("(situations a b)\n(part-of a b)\n(part-of b a)\n(time a t)(time b t)")


def test_tense_transparent():
    m = single_situation_model("ab", "ab", "ab")
    assert eval_model(formf("(pres (every.d x (x p.n) (x q.v)))"), m) is True


# -- exhaustive properties on small models ------------------------------------

def _all_single_situation_models(max_n=4):
    for n in range(1, max_n + 1):
        domain = [f"d{i}" for i in range(n)]
        subsets = list(itertools.chain.from_iterable(
            itertools.combinations(domain, k) for k in range(n + 1)))
        for p_ext in subsets:
            for q_ext in subsets:
                yield single_situation_model(domain, p_ext, q_ext)


def test_monotone_agreement_every_implies_some():
    """every => some on nonempty restrictor extensions, all |D| <= 4."""
    count = 0
    for m in _all_single_situation_models():
        if not m.extensions[("p.n", "e")]:
            continue
        if eval_model(EVERY, m):
            assert eval_model(SOME, m) is True
        count += 1
    assert count > 300


def _chain_models():
    """Models over chains/antichains of up to 3 situations with a unary
    predicate varying per situation."""
    domain = ["d0", "d1"]
    sits = ["s0", "s1", "s2"]
    part_ofs = [
        set(),                                  # antichain
        {("s0", "s1")},                         # two-chain
        {("s0", "s1"), ("s1", "s2")},           # three-chain
        {("s0", "s2"), ("s1", "s2")},           # V shape
    ]
    times = [
        {"s0": "t0", "s1": "t0", "s2": "t1"},
        {"s0": "t0", "s1": "t1", "s2": "t1"},
    ]
    ext_options = list(itertools.product([(), ("d0",), ("d0", "d1")], repeat=3))
    for po in part_ofs:
        for tm in times:
            for exts in ext_options:
                m = FiniteModel()
                m.domain = set(domain)
                m.situations = set(sits)
                m.part_of = set(po)
                m.time = dict(tm)
                m.declared = {"p.n"}
                for s, ext in zip(sits, exts):
                    m.extensions[("p.n", s)] = {(d,) for d in ext}
                m.episode = "s2"
                m.close()
                yield m


def test_characterizing_entails_truth_in():
    """[phi ** eta] entails [phi * eta] on all chain models."""
    phi_star = formf("((d0 p.n) * s2)")
    phi_charz = formf("((d0 p.n) ** s2)")
    checked = 0
    for m in _chain_models():
        if eval_model(phi_charz, m):
            assert eval_model(phi_star, m) is True
        checked += 1
    assert checked > 200


def test_at_time_equivalence():
    """[phi @ eta] iff some same-time episode is characterized by phi."""
    phi_at = formf("((d0 p.n) @ s2)")
    for m in _chain_models():
        expected = any(
            m.time.get(s) == m.time.get("s2")
            and ("d0",) in m.extensions.get(("p.n", s), set())
            for s in m.situations)
        assert eval_model(phi_at, m) is expected
