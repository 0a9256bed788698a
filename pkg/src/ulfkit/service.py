"""Annotation corpus persistence and the HTTP API behind the editor UI.

Storage is an append-only JSON-lines log per dataset: every write appends
the full record, so history is a replay and the latest version per
sentence wins.  Writes are serialized per sentence with an optimistic
version check (a stale baseVersion is rejected).  The sentence inventory
lives in sentences.jsonl in the same directory.

Record fields: sentenceId, dataset, sentence, ulf, certainty (certain |
uncertain | incomplete), comments [{author, timestamp, text}], updatedAt,
author, version.  An empty ulf is only valid for incomplete records.
"""

import json
import os
import threading
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .checker import check
from .diagnostics import Diagnostic, UlfError
from .elsmatch import agreement_matrix, AgreementReport
from .reader import try_parse
from .typesys import infer_type, print_type

CERTAINTIES = ("certain", "uncertain", "incomplete")


@dataclass
class Comment:
    author: str
    timestamp: str
    text: str


@dataclass
class AnnotationRecord:
    sentenceId: str
    dataset: str
    sentence: str
    ulf: str
    certainty: str
    comments: list[Comment] = field(default_factory=list)
    updatedAt: str = ""
    author: str = ""
    version: int = 1

    def validate(self) -> None:
        if self.certainty not in CERTAINTIES:
            raise UlfError.at("ArityError",
                              f"certainty must be one of {CERTAINTIES}")
        if not self.ulf.strip() and self.certainty != "incomplete":
            raise UlfError.at("ArityError",
                              "ulf may be empty only when certainty=incomplete")

    def to_json(self) -> str:
        d = asdict(self)
        return json.dumps(d, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "AnnotationRecord":
        d = json.loads(line)
        d["comments"] = [Comment(**c) for c in d.get("comments", [])]
        return cls(**d)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class Store:
    """Append-only per-dataset logs with an in-memory index."""

    def __init__(self, data_dir: str | os.PathLike):
        self.dir = Path(data_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._id_locks: dict[str, threading.Lock] = {}
        self.sentences: dict[str, dict] = {}
        self.latest: dict[str, AnnotationRecord] = {}
        self.history: dict[str, list[AnnotationRecord]] = {}
        self._load()

    # -- loading ------------------------------------------------------------

    def _load(self) -> None:
        inv = self.dir / "sentences.jsonl"
        if inv.exists():
            for line in inv.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                d = json.loads(line)
                self.sentences[d["sentenceId"]] = d
        for log in sorted(self.dir.glob("*.jsonl")):
            if log.name == "sentences.jsonl":
                continue
            for line in log.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = AnnotationRecord.from_json(line)
                self.history.setdefault(rec.sentenceId, []).append(rec)
                self.latest[rec.sentenceId] = rec

    def add_sentence(self, sentence_id: str, dataset: str, sentence: str) -> None:
        with self._lock:
            d = {"sentenceId": sentence_id, "dataset": dataset, "sentence": sentence}
            self.sentences[sentence_id] = d
            with open(self.dir / "sentences.jsonl", "a", encoding="utf-8") as f:
                f.write(json.dumps(d, ensure_ascii=False) + "\n")

    def list_sentences(self, dataset: str | None = None) -> list[dict]:
        out = []
        for d in self.sentences.values():
            if dataset and d["dataset"] != dataset:
                continue
            out.append({**d, "annotated": d["sentenceId"] in self.latest})
        return sorted(out, key=lambda d: d["sentenceId"])

    # -- writes -------------------------------------------------------------

    def _lock_for(self, sentence_id: str) -> threading.Lock:
        with self._lock:
            return self._id_locks.setdefault(sentence_id, threading.Lock())

    def upsert(self, record: AnnotationRecord,
               base_version: int | None = None) -> AnnotationRecord:
        record.validate()
        if record.sentenceId not in self.sentences:
            raise UlfError.at("UnknownSentence",
                              f"sentence {record.sentenceId!r} is not in the inventory")
        with self._lock_for(record.sentenceId):
            current = self.latest.get(record.sentenceId)
            current_version = current.version if current else 0
            if base_version is not None and base_version != current_version:
                raise UlfError.at("StaleWrite",
                                  f"stale write: base {base_version}, "
                                  f"current {current_version}")
            record.version = current_version + 1
            record.updatedAt = _now()
            record.dataset = self.sentences[record.sentenceId]["dataset"]
            record.sentence = self.sentences[record.sentenceId]["sentence"]
            path = self.dir / f"{record.dataset}.jsonl"
            with open(path, "a", encoding="utf-8") as f:
                f.write(record.to_json() + "\n")
                f.flush()
                os.fsync(f.fileno())
            self.history.setdefault(record.sentenceId, []).append(record)
            self.latest[record.sentenceId] = record
            return record

    def get(self, sentence_id: str) -> AnnotationRecord | None:
        return self.latest.get(sentence_id)

    def get_history(self, sentence_id: str) -> list[AnnotationRecord]:
        return list(self.history.get(sentence_id, []))

    def compact(self) -> None:
        """Rewrite logs keeping each (sentence, author) pair's last version;
        trades replayable history for space."""
        with self._lock:
            by_dataset: dict[str, dict[tuple[str, str], AnnotationRecord]] = {}
            for recs in self.history.values():
                for r in recs:
                    by_dataset.setdefault(r.dataset, {})[(r.sentenceId, r.author)] = r
            for dataset, keep in by_dataset.items():
                path = self.dir / f"{dataset}.jsonl"
                with open(path, "w", encoding="utf-8") as f:
                    for r in keep.values():
                        f.write(r.to_json() + "\n")
            self.history = {}
            for keep in by_dataset.values():
                for r in keep.values():
                    self.history.setdefault(r.sentenceId, []).append(r)

    # -- reports ------------------------------------------------------------

    def stats(self) -> dict:
        """Counts by dataset and certainty with row and grand totals."""
        rows: dict[str, dict[str, int]] = {}
        for rec in self.latest.values():
            row = rows.setdefault(rec.dataset, dict.fromkeys(CERTAINTIES, 0))
            row[rec.certainty] += 1
        table = []
        total = dict.fromkeys(CERTAINTIES, 0)
        for dataset in sorted(rows):
            row = rows[dataset]
            table.append({"dataset": dataset, **row,
                          "total": sum(row.values())})
            for k in CERTAINTIES:
                total[k] += row[k]
        return {"rows": table,
                "total": {"dataset": "Total", **total,
                          "total": sum(total.values())}}

    def ia_corpus(self) -> dict[str, dict[str, tuple[str, str]]]:
        """Latest record per (author, sentence), for agreement scoring."""
        out: dict[str, dict[str, tuple[str, str]]] = {}
        for recs in self.history.values():
            for r in recs:
                if not r.ulf.strip():
                    continue
                out.setdefault(r.author, {})[r.sentenceId] = (r.ulf, r.certainty)
        return out

    def agreement(self, certain_only: bool = False,
                  restarts: int = 4, seed: int = 0) -> AgreementReport:
        return agreement_matrix(self.ia_corpus(), certain_only=certain_only,
                                restarts=restarts, seed=seed)


def format_stats(stats: dict) -> str:
    """Table layout: dataset rows with Cert. / Unc. / Inc. / All columns."""
    lines = [f"{'':12} {'Cert.':>6} {'Unc.':>6} {'Inc.':>6} {'All':>6}"]
    for row in stats["rows"] + [stats["total"]]:
        lines.append(f"{row['dataset']:<12} {row['certain']:>6} "
                     f"{row['uncertain']:>6} {row['incomplete']:>6} "
                     f"{row['total']:>6}")
    return "\n".join(lines)


def live_check(ulf_text: str, fragment: bool = True) -> dict:
    """Parse and check; diagnostics plus the inferred type, as records."""
    parsed, diags = try_parse(ulf_text)
    if parsed is None:
        return {"type": None, "diagnostics": [d.to_record() for d in diags]}
    t = print_type(infer_type(parsed).type)
    out = check(parsed, fragment=fragment)
    return {"type": t, "diagnostics": [d.to_record() for d in out]}


# ---------------------------------------------------------------------------
# HTTP API


from pydantic import BaseModel


class CommentIn(BaseModel):
    author: str
    timestamp: str = ""
    text: str


class AnnotationIn(BaseModel):
    ulf: str
    certainty: str
    author: str
    comments: list[CommentIn] = []
    baseVersion: Optional[int] = None


class CheckIn(BaseModel):
    ulf: str
    fragment: bool = True


def create_app(store: Store):
    from fastapi import FastAPI, HTTPException

    app = FastAPI(title="ulf annotation service")

    def _status_for(code: str) -> int:
        return {"UnknownSentence": 404, "StaleWrite": 409}.get(code, 422)

    @app.get("/sentences")
    def sentences(dataset: str | None = None):
        return store.list_sentences(dataset)

    @app.get("/annotation/{sentence_id}")
    def get_annotation(sentence_id: str):
        rec = store.get(sentence_id)
        if rec is None:
            if sentence_id not in store.sentences:
                raise HTTPException(404, "UnknownSentence")
            return {"sentenceId": sentence_id, "version": 0, "ulf": "",
                    "certainty": "incomplete", "comments": []}
        return json.loads(rec.to_json())

    @app.get("/annotation/{sentence_id}/history")
    def get_history(sentence_id: str):
        return [json.loads(r.to_json()) for r in store.get_history(sentence_id)]

    @app.put("/annotation/{sentence_id}")
    def put_annotation(sentence_id: str, body: AnnotationIn):
        comments = [Comment(c.author, c.timestamp or _now(), c.text)
                    for c in body.comments]
        rec = AnnotationRecord(
            sentenceId=sentence_id, dataset="", sentence="",
            ulf=body.ulf, certainty=body.certainty,
            comments=comments, author=body.author)
        try:
            stored = store.upsert(rec, base_version=body.baseVersion)
        except UlfError as e:
            raise HTTPException(_status_for(e.diagnostic.code),
                                detail={"code": e.diagnostic.code,
                                        "message": e.diagnostic.message,
                                        "currentVersion":
                                            (store.get(sentence_id).version
                                             if store.get(sentence_id) else 0)})
        return json.loads(stored.to_json())

    @app.post("/check")
    def post_check(body: CheckIn):
        return live_check(body.ulf, fragment=body.fragment)

    @app.get("/stats")
    def get_stats():
        return store.stats()

    @app.get("/ia")
    def get_ia(certainOnly: bool = False, restarts: int = 4, seed: int = 0):
        try:
            rep = store.agreement(certain_only=certainOnly,
                                  restarts=restarts, seed=seed)
        except UlfError as e:
            raise HTTPException(422, detail={"code": e.diagnostic.code,
                                             "message": e.diagnostic.message})
        return {
            "version": rep.version,
            "annotators": rep.annotators,
            "pairwise": {f"{a}|{b}": v for (a, b), v in rep.pairwise.items()},
            "pairwiseCertain": {f"{a}|{b}": v
                                for (a, b), v in rep.pairwise_certain.items()},
            "overall": rep.overall,
            "certainOnly": rep.certain_only,
        }

    return app
