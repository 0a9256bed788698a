/** View-model helpers for the editor pane: decoration HTML and the
 * diagnostics list. Pure string/DOM-model functions so they are testable
 * without a browser. */

import { Decoration, highlight, pathToSpan } from "./brackets.js";
import { CheckResult, DiagnosticRecord } from "./api.js";

const KIND_CLASS: Record<Decoration["kind"], string> = {
  "bracket-pair": "dec-pair",
  unmatched: "dec-unmatched",
  "macro-keyword": "dec-macro",
  "sentence-op": "dec-sentop",
};

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render the editor text to highlighted HTML for the overlay layer. */
export function renderHighlights(text: string, cursor: number): string {
  const decs = highlight(text, cursor);
  let out = "";
  let i = 0;
  for (const d of decs) {
    if (d.start < i) continue; // overlapping decoration, first wins
    out += escapeHtml(text.slice(i, d.start));
    out += `<span class="${KIND_CLASS[d.kind]}">` +
      escapeHtml(text.slice(d.start, d.end)) + "</span>";
    i = d.end;
  }
  out += escapeHtml(text.slice(i));
  return out;
}

export interface DiagnosticView {
  severity: DiagnosticRecord["severity"];
  code: string;
  message: string;
  location: string;        // "offset 3" | "path [1]" | "whole form"
  span: { start: number; end: number } | null;
  suggestion: string | null;
}

/** Inline view of a check response: one entry per diagnostic, resolved to
 * a text span through the bracket structure. */
export function renderDiagnostics(text: string, result: CheckResult): DiagnosticView[] {
  return result.diagnostics.map((d) => {
    let span: { start: number; end: number } | null = null;
    let location = "whole form";
    if (d.offset !== null && d.offset !== undefined) {
      span = { start: d.offset, end: Math.min(d.offset + 1, text.length) };
      location = `offset ${d.offset}`;
    } else if (d.path.length > 0) {
      span = pathToSpan(text, d.path);
      location = `path [${d.path.join(",")}]`;
    }
    return {
      severity: d.severity,
      code: d.code,
      message: d.message,
      location,
      span,
      suggestion: d.suggestion,
    };
  });
}

/** Applying a suggestion replaces the whole form (the service returns the
 * full rewritten expression). */
export function applySuggestion(view: DiagnosticView): string | null {
  return view.suggestion;
}

export type BadgeState = "neutral" | "ok" | "error" | "offline";

export function typeBadge(result: CheckResult | null, text: string): {
  state: BadgeState;
  label: string;
} {
  if (text.trim() === "") return { state: "neutral", label: "—" };
  if (result === null) return { state: "offline", label: "service offline" };
  const hasError = result.diagnostics.some((d) => d.severity === "error");
  if (hasError || result.type === null) {
    return { state: "error", label: result.type ?? "parse error" };
  }
  return { state: "ok", label: result.type };
}
