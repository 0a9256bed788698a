import { describe, expect, it } from "vitest";

import { CheckResult } from "../src/api.js";
import {
  applySuggestion, renderDiagnostics, renderHighlights, typeBadge,
} from "../src/editor.js";

// The service's actual response for "(the.d (run.v))" (checker fixture).
const DET_RUN_RESPONSE: CheckResult = {
  type: "<error>",
  diagnostics: [
    {
      path: [1],
      severity: "error",
      code: "NoFit",
      message: "determiner needs a nominal predicate, got P[V]",
      suggestion: "(the.d (run.n))",
      offset: null,
    },
  ],
};

describe("diagnostic rendering", () => {
  it("renders the determiner diagnostic inline at its path", () => {
    const text = "(the.d (run.v))";
    const views = renderDiagnostics(text, DET_RUN_RESPONSE);
    expect(views).toHaveLength(1);
    const v = views[0];
    expect(v.severity).toBe("error");
    expect(v.code).toBe("NoFit");
    expect(v.location).toBe("path [1]");
    expect(text.slice(v.span!.start, v.span!.end)).toBe("(run.v)");
    expect(v.suggestion).toBe("(the.d (run.n))");
  });

  it("one-click suggestion replaces the form", () => {
    const views = renderDiagnostics("(the.d (run.v))", DET_RUN_RESPONSE);
    expect(applySuggestion(views[0])).toBe("(the.d (run.n))");
  });

  it("renders parse errors at their offset", () => {
    const views = renderDiagnostics("((a.d", {
      type: null,
      diagnostics: [{
        path: [], severity: "error", code: "UnbalancedBracket",
        message: "missing closing parenthesis", suggestion: null, offset: 1,
      }],
    });
    expect(views[0].location).toBe("offset 1");
    expect(views[0].span).toEqual({ start: 1, end: 2 });
  });
});

describe("type badge", () => {
  it("green for a clean sentence", () => {
    const b = typeBadge({ type: "S=>2", diagnostics: [] }, "(she.pro run.v)");
    expect(b).toEqual({ state: "ok", label: "S=>2" });
  });

  it("stays green with note-level diagnostics", () => {
    const b = typeBadge({
      type: "S=>2",
      diagnostics: [{ path: [0], severity: "note", code: "FloatingModifier",
                      message: "", suggestion: null, offset: null }],
    }, "x");
    expect(b.state).toBe("ok");
  });

  it("error state for failed checks", () => {
    expect(typeBadge(DET_RUN_RESPONSE, "(the.d (run.v))").state).toBe("error");
  });

  it("neutral for empty text and offline without a result", () => {
    expect(typeBadge(null, "").state).toBe("neutral");
    expect(typeBadge(null, "(a.d").state).toBe("offline");
  });
});

describe("highlight rendering", () => {
  it("escapes html and wraps decorations", () => {
    const html = renderHighlights("(sub a (b *h))", 1);
    expect(html).toContain('<span class="dec-pair">(</span>');
    expect(html).toContain('<span class="dec-macro">sub</span>');
  });

  it("marks unmatched brackets with the error class", () => {
    const html = renderHighlights("((a.d dog.n)", 3);
    expect(html).toContain('<span class="dec-unmatched">(</span>');
  });
});
