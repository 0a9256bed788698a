/**
 * End-to-end tests against the real annotation service: a uvicorn child
 * process backed by a temporary corpus directory.  Covers the live-check
 * round trip (the checker's diagnostic for the determiner fixture) and
 * the certainty/comment save-reload cycle, including the stale-write
 * conflict surfaced to the merge prompt.
 */

import { spawn, ChildProcess, execFileSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, StaleWriteError } from "../src/api.js";
import { renderDiagnostics, typeBadge } from "../src/editor.js";

const PORT = 8742;
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess | null = null;

async function waitReady(): Promise<void> {
  for (let i = 0; i < 60; i++) {
    try {
      const res = await fetch(`${BASE}/sentences`);
      if (res.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "ulf-annotator-"));
  writeFileSync(join(dir, "sentences.jsonl"), [
    '{"sentenceId": "s1", "dataset": "tatoeba", "sentence": "She wants to eat the cake."}',
    '{"sentenceId": "s2", "dataset": "tatoeba", "sentence": "The run."}',
  ].join("\n") + "\n");
  proc = spawn("python3", ["-m", "ulfkit.cli", "serve",
                           "--port", String(PORT), "--data", dir],
               { stdio: "ignore" });
  await waitReady();
}, 30_000);

afterAll(() => {
  proc?.kill();
});

const api = new ApiClient(BASE);

describe("live-check round trip", () => {
  it("reports a clean sentence with its type", async () => {
    const res = await api.check(
      "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))");
    expect(typeBadge(res, "x")).toEqual({ state: "ok", label: "S=>2" });
  });

  it("renders the determiner diagnostic with a one-click fix", async () => {
    const text = "(the.d (run.v))";
    const res = await api.check(text);
    const views = renderDiagnostics(text, res);
    const errors = views.filter((v) => v.severity === "error");
    expect(errors).toHaveLength(1);
    expect(errors[0].message).toContain("nominal predicate");
    expect(text.slice(errors[0].span!.start, errors[0].span!.end))
      .toBe("(run.v)");
    expect(errors[0].suggestion).toBe("(the.d (run.n))");
    // applying the suggestion re-checks clean
    const fixed = await api.check(errors[0].suggestion!);
    expect(fixed.diagnostics.filter((d) => d.severity === "error")).toEqual([]);
  });

  it("reports unbalanced brackets with an offset", async () => {
    const res = await api.check("((a.d");
    expect(res.type).toBeNull();
    expect(res.diagnostics[0].code).toBe("UnbalancedBracket");
    expect(res.diagnostics[0].offset).not.toBeNull();
  });
});

describe("certainty and comments persist through the service", () => {
  it("save-reload cycle preserves certainty and the comment thread", async () => {
    const first = await api.annotation("s1");
    const saved = await api.save("s1", {
      ulf: "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))",
      certainty: "certain",
      author: "ann1",
      comments: [{ author: "ann1", timestamp: "", text: "looks right" }],
      baseVersion: first.version,
    });
    expect(saved.version).toBe(first.version + 1);

    const reloaded = await api.annotation("s1");
    expect(reloaded.certainty).toBe("certain");
    expect(reloaded.comments).toHaveLength(1);
    expect(reloaded.comments[0].text).toBe("looks right");

    // adding a comment grows the thread by one on reload
    await api.save("s1", {
      ulf: reloaded.ulf,
      certainty: reloaded.certainty,
      author: "ann2",
      comments: [...reloaded.comments,
                 { author: "ann2", timestamp: "", text: "agreed" }],
      baseVersion: reloaded.version,
    });
    const again = await api.annotation("s1");
    expect(again.comments.map((c) => c.text)).toEqual(["looks right", "agreed"]);
  });

  it("concurrent edits surface a merge prompt (stale write)", async () => {
    const mine = await api.annotation("s2");
    await api.save("s2", {
      ulf: "(the.d run.n)", certainty: "uncertain", author: "other",
      baseVersion: mine.version,
    });
    let conflict: StaleWriteError | null = null;
    try {
      await api.save("s2", {
        ulf: "(the.d (run.n))", certainty: "certain", author: "me",
        baseVersion: mine.version,
      });
    } catch (e) {
      conflict = e as StaleWriteError;
    }
    expect(conflict).toBeInstanceOf(StaleWriteError);
    expect(conflict!.detail.currentVersion).toBe(mine.version + 1);
  });
});
