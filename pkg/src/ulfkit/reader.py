"""Concrete ULF syntax: tokenizer, parser, and canonical printer.

The grammar is parenthesized S-expressions whose atoms fall into a small
number of classes:

  she.pro  heat_up.v     tagged lexical atoms (tag = substring after the
                         last dot; stems may contain underscores and dashes)
  |John|  |Earth|.n      names, optionally tagged; interior case preserved
  {ref1}.pro             elided atoms supplied by the annotator
  k that sub 's = λ **   operator keywords (exact lowercase match)
  x y z x1               plain variables (any untagged non-keyword atom)
  *h *p                  substitution holes
  ? !                    clause punctuation

Input is lowercased outside bars.  `;` starts a comment running to end of
line.  Parse errors report the first structural problem per form, with a
character offset.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, UlfError
from .expr import (
    HOLE_KINDS, KEYWORDS, PUNCT_KINDS, TAG_KINDS,
    ElidedAtom, Hole, Keyword, LexAtom, List, Name, Punct, UlfExpr, Var,
)

_DELIMS = "()|{} \t\r\n;"


@dataclass
class _Token:
    kind: str  # "(", ")", "atom", "name", "elided"
    text: str
    offset: int
    tag: str | None = None  # for name/elided: raw tag text or None


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "(":
            tokens.append(_Token("(", c, i))
            i += 1
        elif c == ")":
            tokens.append(_Token(")", c, i))
            i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise UlfError.at("StrayBar", "unterminated name bar", offset=i)
            inner = text[i + 1:j]
            if not inner:
                raise UlfError.at("StrayBar", "empty name between bars", offset=i)
            tag, j2 = _read_tag_suffix(text, j + 1)
            tokens.append(_Token("name", inner, i, tag))
            i = j2
        elif c == "{":
            j = text.find("}", i + 1)
            if j < 0:
                raise UlfError.at("UnbalancedBracket", "unterminated elided-atom brace", offset=i)
            inner = text[i + 1:j].lower()
            tag, j2 = _read_tag_suffix(text, j + 1)
            tokens.append(_Token("elided", inner, i, tag))
            i = j2
        elif c == "}":
            raise UlfError.at("UnbalancedBracket", "unmatched closing brace", offset=i)
        else:
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            tokens.append(_Token("atom", text[i:j], i))
            i = j
    return tokens


def _read_tag_suffix(text: str, i: int) -> tuple[str | None, int]:
    """After a closing bar/brace, read an optional `.tag` suffix."""
    if i < len(text) and text[i] == ".":
        j = i + 1
        while j < len(text) and text[j] not in _DELIMS:
            j += 1
        return text[i + 1:j].lower(), j
    return None, i


def classify_atom(text: str, offset: int = 0) -> UlfExpr:
    """Classify a bare (non-name, non-elided) atom token."""
    low = text.lower()
    if low in HOLE_KINDS:
        return Hole(low)
    if low in PUNCT_KINDS:
        return Punct(low)
    if low == "lambda":
        return Keyword("λ")
    if low in KEYWORDS:
        return Keyword(low)
    dot = low.rfind(".")
    if dot > 0 and dot < len(low) - 1:
        stem, tag = low[:dot], low[dot + 1:]
        if tag in TAG_KINDS:
            return LexAtom(stem, tag)
        raise UlfError.at("UnknownTag", f"unknown atomic tag '.{tag}' in '{text}'",
                          offset=offset)
    if dot == len(low) - 1 or dot == 0:
        raise UlfError.at("UnknownTag", f"malformed tagged atom '{text}'", offset=offset)
    return Var(low)


def _atom_from_token(tok: _Token) -> UlfExpr:
    if tok.kind == "name":
        if tok.tag is not None and tok.tag not in TAG_KINDS:
            raise UlfError.at("UnknownTag", f"unknown atomic tag '.{tok.tag}' on name",
                              offset=tok.offset)
        return Name(tok.text, tok.tag)
    if tok.kind == "elided":
        if tok.tag is None:
            raise UlfError.at("UnknownTag",
                              f"elided atom '{{{tok.text}}}' is missing its tag",
                              offset=tok.offset)
        if tok.tag not in TAG_KINDS:
            raise UlfError.at("UnknownTag", f"unknown atomic tag '.{tok.tag}' on elided atom",
                              offset=tok.offset)
        return ElidedAtom(tok.text, tok.tag)
    return classify_atom(tok.text, tok.offset)


def parse_all(text: str) -> list[UlfExpr]:
    """Parse every top-level form in `text` (comments and blank lines skipped)."""
    tokens = _tokenize(text)
    forms: list[UlfExpr] = []
    pos = 0
    while pos < len(tokens):
        form, pos = _parse_form(tokens, pos)
        forms.append(form)
    return forms


def parse(text: str) -> UlfExpr:
    """Parse exactly one expression; raises UlfError on any structural problem."""
    forms = parse_all(text)
    if not forms:
        raise UlfError.at("EmptyList", "no expression in input", offset=0)
    if len(forms) > 1:
        raise UlfError.at("UnbalancedBracket",
                          "trailing content after first expression",
                          offset=0)
    return forms[0]


def try_parse(text: str) -> tuple[UlfExpr | None, list[Diagnostic]]:
    """Diagnostic-returning variant used by the checker and the service."""
    try:
        return parse(text), []
    except UlfError as e:
        return None, [e.diagnostic]


def _parse_form(tokens: list[_Token], pos: int) -> tuple[UlfExpr, int]:
    tok = tokens[pos]
    if tok.kind == "(":
        children: list[UlfExpr] = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise UlfError.at("UnbalancedBracket", "missing closing parenthesis",
                                  offset=tok.offset)
            if tokens[pos].kind == ")":
                if not children:
                    raise UlfError.at("EmptyList", "empty list ()", offset=tok.offset)
                return List(tuple(children)), pos + 1
            child, pos = _parse_form(tokens, pos)
            children.append(child)
    if tok.kind == ")":
        raise UlfError.at("UnbalancedBracket", "unmatched closing parenthesis",
                          offset=tok.offset)
    return _atom_from_token(tok), pos + 1


def print_expr(expr: UlfExpr) -> str:
    """Canonical form: single spaces, lowercase tags, bars and braces restored.

    parse(print_expr(e)) is structurally equal to e.
    """
    return str(expr)


def parse_file(path: str) -> list[UlfExpr]:
    with open(path, encoding="utf-8") as f:
        return parse_all(f.read())
