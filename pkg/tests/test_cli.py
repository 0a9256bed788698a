import json
import subprocess
import sys

import pytest

from ulfkit.cli import main

FIG1 = "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))"


def run_cli(args, stdin=""):
    proc = subprocess.run([sys.executable, "-m", "ulfkit.cli", *args],
                          input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_parse_roundtrip(tmp_path):
    f = tmp_path / "in.ulf"
    f.write_text("; comment\n" + FIG1 + "\n")
    code, out, _ = run_cli(["parse", str(f)])
    assert code == 0
    assert out.strip() == FIG1


def test_check_prints_type(tmp_path):
    f = tmp_path / "in.ulf"
    f.write_text(FIG1)
    code, out, _ = run_cli(["check", str(f)])
    assert code == 0
    assert out.splitlines()[0] == "S=>2"


def test_check_nonzero_exit_on_error():
    code, out, _ = run_cli(["check", "--fragment"], stdin="(the.d (run.v))")
    assert code == 1
    assert any("NoFit" in line for line in out.splitlines())


def test_expand_sub():
    code, out, _ = run_cli(["expand"], stdin="(sub A (B *h))")
    assert code == 0
    assert out.strip() == "(b a)"


def test_expand_beta_flag():
    raw = "(the.d (n+preds coffee.n (sub that.rel (you.pro ((past drink.v) *h)))))"
    code, out, _ = run_cli(["expand", "--beta"], stdin=raw)
    assert out.strip() == \
        "(the.d (λ y ((y coffee.n) and.cc (you.pro ((past drink.v) y)))))"


def test_postproc_stage_flag():
    code, out, _ = run_cli(["postproc", "--stage", "shifters"],
                           stdin="(|Seattle| skyline.n)")
    assert out.strip() == "((nnp |Seattle|) skyline.n)"


def test_pipe_composability():
    """postproc | scope | deindex reproduces the two contextual formulas."""
    _, post, _ = run_cli(["postproc"], stdin=FIG1)
    _, slf, _ = run_cli(["scope"], stdin=post)
    code, clf, _ = run_cli(["deindex"], stdin=slf)
    assert code == 0
    assert clf.splitlines() == [
        "(|E1|.sk at-about.p |Now1|)",
        "((the.d x (x cake.n) (she.pro (want.v (to (eat.v x))))) ** |E1|.sk)",
    ]


def test_scope_all_and_limit():
    code, out, _ = run_cli(["scope", "--all"],
                           stdin="((every.d dog.n) (pres run.v))")
    assert len(out.splitlines()) == 2
    code, out, _ = run_cli(["scope", "--all", "--limit", "1"],
                           stdin="((every.d dog.n) (pres run.v))")
    assert len(out.splitlines()) == 1


def test_eval_subcommand(tmp_path):
    model = tmp_path / "m.model"
    model.write_text("""
(domain d1 d2)
(situations e)
(time e t)
(ext dog.n e d1 d2)
(ext run.v e d1 d2)
(episode e)
""")
    code, out, _ = run_cli(["eval", "--model", str(model)],
                           stdin="(every.d x (x dog.n) (x run.v))")
    assert code == 0
    assert out.strip() == "1"


def test_infer_subcommand(tmp_path):
    kb = tmp_path / "kb.facts"
    kb.write_text("(isa-member |France| ((nnp |NATO|) member.n))\n")
    premise = ("((every.d ((nnp |NATO|) member.n)) "
               "((past send.v) (k (plur troop.n)) (to.p-arg |Afghanistan|)))")
    code, out, _ = run_cli(["infer", "--kb", str(kb)], stdin=premise)
    assert code == 0
    assert any(line.startswith("(|France|") for line in out.splitlines())
    assert any(line.startswith("# nlog") for line in out.splitlines())


def test_score_identical(tmp_path):
    a = tmp_path / "a.ulf"
    a.write_text(FIG1)
    code, out, _ = run_cli(["score", str(a), str(a)])
    assert code == 0
    assert out.splitlines()[-1] == "1.000"


def test_stats_and_ia(tmp_path):
    from ulfkit.service import AnnotationRecord, Store
    store = Store(tmp_path / "corpus")
    store.add_sentence("s1", "tatoeba", "x")
    for author in ("ann1", "ann2"):
        store.upsert(AnnotationRecord(
            sentenceId="s1", dataset="", sentence="", ulf="(a.d dog.n)",
            certainty="certain", author=author))
    code, out, _ = run_cli(["stats", "--corpus", str(tmp_path / "corpus")])
    assert code == 0
    assert "tatoeba" in out and "Total" in out
    code, out, _ = run_cli(["ia", "--corpus", str(tmp_path / "corpus")])
    assert code == 0
    assert "1.00/1.00" in out


def test_main_callable_in_process(tmp_path, capsys):
    f = tmp_path / "in.ulf"
    f.write_text(FIG1)
    rc = main(["check", str(f)])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == "S=>2"
