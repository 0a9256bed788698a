import time

import pytest
from fastapi.testclient import TestClient

from ulfkit.diagnostics import UlfError
from ulfkit.service import (
    AnnotationRecord, Comment, Store, create_app, format_stats, live_check,
)


@pytest.fixture
def store(tmp_path):
    s = Store(tmp_path)
    s.add_sentence("s1", "tatoeba", "She wants to eat the cake.")
    s.add_sentence("s2", "tatoeba", "Flowers are weak creatures.")
    s.add_sentence("s3", "pg", "Could you dial for me?")
    return s


def rec(sid, ulf, certainty="certain", author="ann1", comments=()):
    return AnnotationRecord(sentenceId=sid, dataset="", sentence="",
                            ulf=ulf, certainty=certainty, author=author,
                            comments=list(comments))


def test_upsert_and_history(store):
    r1 = store.upsert(rec("s1", "(she.pro run.v)", "uncertain"))
    assert r1.version == 1
    assert len(store.get_history("s1")) == 1
    r2 = store.upsert(rec("s1", "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))"))
    assert r2.version == 2
    assert len(store.get_history("s1")) == 2
    assert store.get("s1").ulf == r2.ulf


def test_unknown_sentence(store):
    with pytest.raises(UlfError) as exc:
        store.upsert(rec("nope", "(she.pro run.v)"))
    assert exc.value.diagnostic.code == "UnknownSentence"


def test_stale_write(store):
    store.upsert(rec("s1", "(she.pro run.v)"))
    with pytest.raises(UlfError) as exc:
        store.upsert(rec("s1", "(he.pro run.v)"), base_version=0)
    assert exc.value.diagnostic.code == "StaleWrite"
    # correct base version is accepted
    out = store.upsert(rec("s1", "(he.pro run.v)"), base_version=1)
    assert out.version == 2


def test_empty_ulf_requires_incomplete(store):
    with pytest.raises(UlfError):
        store.upsert(rec("s1", "", "certain"))
    out = store.upsert(rec("s1", "", "incomplete"))
    assert out.certainty == "incomplete"


def test_durability_across_restart(store, tmp_path):
    store.upsert(rec("s1", "(she.pro run.v)", "uncertain",
                     comments=[Comment("ann1", "2026-01-01", "WIP")]))
    store.upsert(rec("s2", "((k (plur flower.n)) ((pres be.v) (weak.a (plur creature.n))))"))
    reopened = Store(tmp_path)
    got = reopened.get("s1")
    assert got.ulf == "(she.pro run.v)"
    assert got.comments[0].text == "WIP"
    assert len(reopened.get_history("s1")) == 1
    assert reopened.get("s2").certainty == "certain"


def test_history_monotone(store):
    lengths = []
    for i in range(4):
        store.upsert(rec("s1", f"(she.pro run.v)", "uncertain"))
        lengths.append(len(store.get_history("s1")))
    assert lengths == sorted(lengths)
    assert store.get("s1").version == 4


def test_compaction_keeps_latest(store, tmp_path):
    store.upsert(rec("s1", "(she.pro run.v)", "uncertain"))
    store.upsert(rec("s1", "(he.pro run.v)"))
    store.compact()
    reopened = Store(tmp_path)
    assert reopened.get("s1").ulf == "(he.pro run.v)"


def test_stats_rows(store):
    store.upsert(rec("s1", "(she.pro run.v)"))
    store.upsert(rec("s2", "(she.pro run.v)"))
    store.upsert(rec("s3", "", "incomplete"))
    stats = store.stats()
    tat = next(r for r in stats["rows"] if r["dataset"] == "tatoeba")
    assert (tat["certain"], tat["uncertain"], tat["incomplete"], tat["total"]) \
        == (2, 0, 0, 2)
    assert stats["total"]["total"] == 3
    text = format_stats(stats)
    assert "Cert." in text and "Total" in text


def test_stats_empty(tmp_path):
    s = Store(tmp_path)
    assert s.stats()["rows"] == []
    assert s.stats()["total"]["total"] == 0


def test_live_check_clean():
    out = live_check("(((pres could.aux-v) you.pro (dial.v {ref1}.pro "
                     "(adv-a (for.p me.pro)))) ?)")
    assert out["type"] == "S=>2"
    assert [d for d in out["diagnostics"] if d["severity"] == "error"] == []


def test_live_check_parse_error_offset():
    out = live_check("((a.d")
    assert out["type"] is None
    assert out["diagnostics"][0]["code"] == "UnbalancedBracket"
    assert out["diagnostics"][0]["offset"] is not None


def test_live_check_suggestion():
    out = live_check("(the.d (run.v))")
    errs = [d for d in out["diagnostics"] if d["severity"] == "error"]
    assert errs and errs[0]["suggestion"] == "(the.d (run.n))"
    assert errs[0]["path"] == [1]


def test_live_check_purity_and_latency():
    text = "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))" * 1
    first = live_check(text)
    start = time.perf_counter()
    second = live_check(text)
    elapsed = time.perf_counter() - start
    assert first == second
    assert elapsed < 0.1


# -- HTTP API -----------------------------------------------------------------


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def test_api_sentence_listing(client):
    got = client.get("/sentences", params={"dataset": "tatoeba"}).json()
    assert [s["sentenceId"] for s in got] == ["s1", "s2"]
    assert got[0]["annotated"] is False


def test_api_put_get_roundtrip(client):
    body = {"ulf": "(she.pro run.v)", "certainty": "uncertain",
            "author": "ann1", "comments": [{"author": "ann1", "text": "hm"}]}
    put = client.put("/annotation/s1", json=body)
    assert put.status_code == 200
    assert put.json()["version"] == 1
    got = client.get("/annotation/s1").json()
    assert got["ulf"] == "(she.pro run.v)"
    assert got["comments"][0]["text"] == "hm"
    hist = client.get("/annotation/s1/history").json()
    assert len(hist) == 1


def test_api_unknown_sentence(client):
    r = client.put("/annotation/zzz",
                   json={"ulf": "(she.pro run.v)", "certainty": "certain",
                         "author": "a"})
    assert r.status_code == 404


def test_api_stale_write_conflict(client):
    body = {"ulf": "(she.pro run.v)", "certainty": "certain", "author": "a"}
    client.put("/annotation/s1", json=body)
    conflict = client.put("/annotation/s1", json={**body, "baseVersion": 0})
    assert conflict.status_code == 409
    assert conflict.json()["detail"]["currentVersion"] == 1


def test_api_check_latency(client):
    text = "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))"
    assert len(text) <= 2000
    client.post("/check", json={"ulf": text})  # warm
    start = time.perf_counter()
    r = client.post("/check", json={"ulf": text})
    elapsed = time.perf_counter() - start
    assert r.status_code == 200
    assert r.json()["type"] == "S=>2"
    assert elapsed < 0.1


def test_api_stats_and_ia(client):
    a = {"ulf": "(a.d dog.n)", "certainty": "certain", "author": "ann1"}
    b = {"ulf": "(a.d dog.n)", "certainty": "certain", "author": "ann2"}
    client.put("/annotation/s1", json=a)
    client.put("/annotation/s1", json=b)
    stats = client.get("/stats").json()
    assert stats["total"]["total"] == 1
    ia = client.get("/ia").json()
    assert ia["pairwise"]["ann1|ann2"] == 1.0
    assert ia["version"].startswith("elsmatch-triples/")
