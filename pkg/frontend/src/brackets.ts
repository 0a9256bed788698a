/**
 * Bracket matching and editor decorations, computed locally.
 *
 * This mirrors the reader's bracket discipline: parentheses delimit lists,
 * vertical bars quote names (brackets inside bars do not count), curly
 * braces delimit elided atoms, and `;` starts a comment to end of line.
 * Everything semantic stays on the server; the only client-side analysis
 * is this scan.
 */

export type DecorationKind =
  | "bracket-pair"   // the bracket at the cursor and its match
  | "unmatched"      // unmatched bracket or quote bar
  | "macro-keyword"  // sub, rep, n+preds, np+preds, 's
  | "sentence-op";   // sentence-level operators (.adv-s/.adv-e/.adv-f, not, .ps)

export interface Decoration {
  start: number; // character offset, inclusive
  end: number;   // character offset, exclusive
  kind: DecorationKind;
}

export const MACRO_KEYWORDS = new Set(["sub", "rep", "n+preds", "np+preds", "'s"]);

const SENTENCE_OP_TAGS = [".adv-s", ".adv-e", ".adv-f", ".ps"];
const SENTENCE_OP_ATOMS = new Set(["not", "adv-s", "adv-e", "adv-f"]);

const DELIMS = new Set(["(", ")", "|", "{", "}", " ", "\t", "\n", "\r", ";"]);

interface Scan {
  pairs: Map<number, number>;     // both directions
  unmatched: number[];            // offsets of unmatched brackets/bars
  atoms: { start: number; end: number; text: string }[];
}

/** Single pass over the text collecting bracket pairs, unmatched
 * brackets/bars, and atom spans. */
export function scan(text: string): Scan {
  const pairs = new Map<number, number>();
  const unmatched: number[] = [];
  const atoms: Scan["atoms"] = [];
  const stack: number[] = [];
  let i = 0;
  while (i < text.length) {
    const c = text[i];
    if (c === ";") {
      while (i < text.length && text[i] !== "\n") i++;
    } else if (c === "(") {
      stack.push(i);
      i++;
    } else if (c === ")") {
      const open = stack.pop();
      if (open === undefined) {
        unmatched.push(i);
      } else {
        pairs.set(open, i);
        pairs.set(i, open);
      }
      i++;
    } else if (c === "|" || c === "{") {
      const closer = c === "|" ? "|" : "}";
      const close = text.indexOf(closer, i + 1);
      if (close < 0) {
        unmatched.push(i);
        i = text.length;
      } else {
        i = close + 1;
        while (i < text.length && !DELIMS.has(text[i])) i++; // tag suffix
      }
    } else if (c === "}") {
      unmatched.push(i);
      i++;
    } else if (c === " " || c === "\t" || c === "\n" || c === "\r") {
      i++;
    } else {
      const start = i;
      while (i < text.length && !DELIMS.has(text[i])) i++;
      atoms.push({ start, end: i, text: text.slice(start, i) });
    }
  }
  unmatched.push(...stack);
  return { pairs, unmatched, atoms };
}

function isSentenceOp(atom: string): boolean {
  if (SENTENCE_OP_ATOMS.has(atom)) return true;
  return SENTENCE_OP_TAGS.some((t) => atom.endsWith(t));
}

/** Offset of the bracket the cursor refers to: the character at the
 * cursor, else the one just before it (the common editor convention). */
function cursorBracket(text: string, cursor: number): number | null {
  if (cursor < text.length && (text[cursor] === "(" || text[cursor] === ")")) {
    return cursor;
  }
  const before = cursor - 1;
  if (before >= 0 && (text[before] === "(" || text[before] === ")")) {
    return before;
  }
  return null;
}

/** Full decoration set for an editor state. */
export function highlight(text: string, cursor: number): Decoration[] {
  const { pairs, unmatched, atoms } = scan(text);
  const out: Decoration[] = [];
  const at = cursorBracket(text, cursor);
  if (at !== null && pairs.has(at)) {
    const match = pairs.get(at)!;
    out.push({ start: at, end: at + 1, kind: "bracket-pair" });
    out.push({ start: match, end: match + 1, kind: "bracket-pair" });
  }
  for (const offset of unmatched) {
    out.push({ start: offset, end: offset + 1, kind: "unmatched" });
  }
  for (const atom of atoms) {
    if (MACRO_KEYWORDS.has(atom.text)) {
      out.push({ start: atom.start, end: atom.end, kind: "macro-keyword" });
    } else if (isSentenceOp(atom.text)) {
      out.push({ start: atom.start, end: atom.end, kind: "sentence-op" });
    }
  }
  return out.sort((a, b) => a.start - b.start || a.end - b.end);
}

/**
 * Resolve a diagnostic path (child-index sequence into the parsed tree)
 * to the text span it addresses, using only the bracket structure: a list
 * node is a parenthesized span, leaves are atom/name/elided spans.
 */
export function pathToSpan(
  text: string,
  path: number[],
): { start: number; end: number } | null {
  let start = 0;
  let end = text.length;
  for (const index of path) {
    const children = childSpans(text, start, end);
    if (index >= children.length) return null;
    ({ start, end } = children[index]);
  }
  const trimmed = trimSpan(text, start, end);
  return trimmed;
}

function trimSpan(text: string, start: number, end: number) {
  while (start < end && /\s/.test(text[start])) start++;
  while (end > start && /\s/.test(text[end - 1])) end--;
  return { start, end };
}

/** Child spans of the list whose span is [start, end); the span may have
 * surrounding whitespace or be the whole document (one top-level form). */
function childSpans(
  text: string,
  start: number,
  end: number,
): { start: number; end: number }[] {
  const { pairs } = scan(text);
  let i = start;
  while (i < end && /\s/.test(text[i])) i++;
  if (text[i] !== "(") return [];
  const close = pairs.get(i);
  if (close === undefined) return [];
  const children: { start: number; end: number }[] = [];
  let j = i + 1;
  while (j < close) {
    const c = text[j];
    if (/\s/.test(c)) {
      j++;
    } else if (c === "(") {
      const e = pairs.get(j);
      if (e === undefined) return children;
      children.push({ start: j, end: e + 1 });
      j = e + 1;
    } else if (c === "|" || c === "{") {
      const closer = c === "|" ? "|" : "}";
      let e = text.indexOf(closer, j + 1);
      if (e < 0) e = close - 1;
      // include a dotted tag suffix after the closer
      let k = e + 1;
      while (k < close && !DELIMS.has(text[k])) k++;
      children.push({ start: j, end: k });
      j = k;
    } else {
      let k = j;
      while (k < close && !DELIMS.has(text[k])) k++;
      children.push({ start: j, end: k });
      j = k;
    }
  }
  return children;
}
