"""Tree representation for unscoped logical forms.

Every expression is an immutable tree.  Leaves are atoms classified by the
tokenizer (tagged lexical atoms, bar-delimited names, curly-brace elided
atoms, operator keywords, plain variables, substitution holes, and clause
punctuation); internal nodes are plain lists.  Paths are tuples of child
indices and are the addressing scheme used by diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

# Closed set of atomic syntactic tags.  `p-arg` marks argument-supplying
# prepositions, `rel` relativizers, `sk` skolemized episode constants.
TAG_KINDS = frozenset({
    "v", "n", "a", "p", "p-arg", "pro", "d", "aux-v", "aux-s",
    "adv-a", "adv-e", "adv-s", "adv-f", "cc", "ps", "pq",
    "mod-n", "mod-a", "rel", "sk",
})

# Untagged operator atoms recognized exactly (lowercase).  `and.cc` and
# other coordinators are tagged atoms, not keywords.
KEYWORDS = frozenset({
    "k", "that", "to", "ka", "ke", "plur",
    "pres", "past", "perf", "prog", "cf", "not",
    "adv-a", "adv-e", "adv-s", "adv-f", "mod-n", "mod-a", "nnp",
    "fquan", "nquan", "n+preds", "np+preds", "sub", "rep", "'s",
    "=", "λ", "**", "*", "@", "pair", "poss-by",
})

MACRO_KEYWORDS = frozenset({"sub", "rep", "n+preds", "np+preds", "'s"})
TENSE_KEYWORDS = frozenset({"pres", "past"})
ASPECT_KEYWORDS = frozenset({"perf", "prog"})
EPISODIC_KEYWORDS = frozenset({"**", "*", "@"})

HOLE_KINDS = frozenset({"*h", "*p"})
PUNCT_KINDS = frozenset({"?", "!"})

Path = tuple[int, ...]


@dataclass(frozen=True)
class LexAtom:
    stem: str
    tag: str

    def __str__(self) -> str:
        return f"{self.stem}.{self.tag}"


@dataclass(frozen=True)
class Name:
    text: str
    tag: str | None = None

    def __str__(self) -> str:
        if self.tag is None:
            return f"|{self.text}|"
        return f"|{self.text}|.{self.tag}"


@dataclass(frozen=True)
class ElidedAtom:
    stem: str
    tag: str

    def __str__(self) -> str:
        return f"{{{self.stem}}}.{self.tag}"


@dataclass(frozen=True)
class Keyword:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Hole:
    kind: str  # "*h" or "*p"

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Punct:
    kind: str  # "?" or "!"

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class List:
    children: tuple["UlfExpr", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("List requires at least one child")

    def __str__(self) -> str:
        return "(" + " ".join(str(c) for c in self.children) + ")"


UlfExpr = Union[LexAtom, Name, ElidedAtom, Keyword, Var, Hole, Punct, List]

Atom = (LexAtom, Name, ElidedAtom, Keyword, Var, Hole, Punct)


def lst(*children: UlfExpr) -> List:
    """Convenience constructor used heavily in tests."""
    return List(tuple(children))


def is_atom(expr: UlfExpr) -> bool:
    return isinstance(expr, Atom)


def is_keyword(expr: UlfExpr, name: str | None = None) -> bool:
    if not isinstance(expr, Keyword):
        return False
    return name is None or expr.name == name


def has_tag(expr: UlfExpr, *tags: str) -> bool:
    return isinstance(expr, (LexAtom, ElidedAtom, Name)) and expr.tag in tags


def walk(expr: UlfExpr, visit: Callable[[UlfExpr, Path], None] | None = None,
         _path: Path = ()) -> Iterator[tuple[UlfExpr, Path]]:
    """Depth-first pre-order traversal yielding (node, path) pairs.

    When `visit` is given it is called on every node in the same order;
    the iterator is fully consumed before returning.
    """
    if visit is not None:
        for node, path in _walk_iter(expr, _path):
            visit(node, path)
        return iter(())
    return _walk_iter(expr, _path)


def _walk_iter(expr: UlfExpr, path: Path) -> Iterator[tuple[UlfExpr, Path]]:
    yield expr, path
    if isinstance(expr, List):
        for i, child in enumerate(expr.children):
            yield from _walk_iter(child, path + (i,))


def node_at(expr: UlfExpr, path: Path) -> UlfExpr:
    node = expr
    for i in path:
        if not isinstance(node, List) or i >= len(node.children):
            raise KeyError(f"no node at path {path}")
        node = node.children[i]
    return node


def replace_at(expr: UlfExpr, path: Path, new: UlfExpr) -> UlfExpr:
    """Return a copy of the tree with the node at `path` replaced."""
    if not path:
        return new
    if not isinstance(expr, List):
        raise KeyError(f"no node at path {path}")
    i = path[0]
    children = list(expr.children)
    children[i] = replace_at(children[i], path[1:], new)
    return List(tuple(children))


def transform(expr: UlfExpr, fn: Callable[[UlfExpr], UlfExpr]) -> UlfExpr:
    """Bottom-up rewrite: children are rebuilt first, then fn sees the node."""
    if isinstance(expr, List):
        expr = List(tuple(transform(c, fn) for c in expr.children))
    return fn(expr)


def atom_texts(expr: UlfExpr) -> set[str]:
    """All atom spellings in the tree; used for fresh-variable choice."""
    texts: set[str] = set()
    for node, _ in walk(expr):
        if isinstance(node, LexAtom) or isinstance(node, ElidedAtom):
            texts.add(node.stem)
        elif isinstance(node, Name):
            texts.add(node.text)
        elif isinstance(node, (Keyword, Var)):
            texts.add(node.name)
    return texts


def fresh_var(used: set[str], hint_order: str = "xyz") -> Var:
    """Deterministic fresh variable: x, y, z, x1, x2, ... skipping `used`."""
    for c in hint_order:
        if c not in used:
            return Var(c)
    i = 1
    while True:
        cand = f"{hint_order[0]}{i}"
        if cand not in used:
            return Var(cand)
        i += 1


def count_holes(expr: UlfExpr, kind: str) -> int:
    return sum(1 for node, _ in walk(expr)
               if isinstance(node, Hole) and node.kind == kind)
