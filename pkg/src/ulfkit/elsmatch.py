"""Triple-graph agreement scoring for logical-form annotations.

A tree converts to a graph deterministically: every list node becomes a
variable (depth-first order) whose instance concept is the reserved token
`complex`; child positions become relation triples (op for the operator
position, argN for the rest); leaf children are constants.  Two graphs are
compared by searching for the variable mapping that maximizes matched
triples; F1 = 2 * matched / (|a| + |b|).  Pairs with at most eight
variables on each side are scored by exhaustive alignment, larger pairs by
seeded hill-climbing with restarts.

The triple encoding is versioned; scores are comparable only within a
version.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .diagnostics import UlfError
from .expr import List, UlfExpr
from .reader import parse, print_expr

TRIPLES_VERSION = "elsmatch-triples/1"

EXHAUSTIVE_LIMIT = 8

# targets are tagged so a constant can never collide with a variable name
_VAR = "v"
_CONST = "c"


@dataclass
class TripleGraph:
    variables: list[str] = field(default_factory=list)
    instances: list[tuple[str, str]] = field(default_factory=list)
    relations: list[tuple[str, str, tuple[str, str]]] = field(default_factory=list)

    def size(self) -> int:
        return len(self.instances) + len(self.relations)


def to_triples(expr: UlfExpr) -> TripleGraph:
    """Deterministic graph: one variable per list node, depth-first."""
    g = TripleGraph()
    if not isinstance(expr, List):
        g.variables.append("n0")
        g.instances.append(("n0", print_expr(expr)))
        return g
    _convert(expr, g)
    return g


def _convert(node: List, g: TripleGraph) -> str:
    var = f"n{len(g.variables)}"
    g.variables.append(var)
    g.instances.append((var, "complex"))
    for i, child in enumerate(node.children):
        rel = "op" if i == 0 else f"arg{i}"
        if isinstance(child, List):
            child_var = _convert(child, g)
            g.relations.append((rel, var, (_VAR, child_var)))
        else:
            g.relations.append((rel, var, (_CONST, print_expr(child))))
    return var


def _matched(a: TripleGraph, b: TripleGraph,
             mapping: dict[str, str | None]) -> int:
    b_instances = set(b.instances)
    b_relations = set(b.relations)
    n = 0
    for var, concept in a.instances:
        if mapping.get(var) is not None and (mapping[var], concept) in b_instances:
            n += 1
    for rel, var, (kind, target) in a.relations:
        if mapping.get(var) is None:
            continue
        if kind == _VAR:
            if mapping.get(target) is not None \
                    and (rel, mapping[var], (_VAR, mapping[target])) in b_relations:
                n += 1
        else:
            if (rel, mapping[var], (_CONST, target)) in b_relations:
                n += 1
    return n


def _f1(matched: int, size_a: int, size_b: int) -> float:
    if size_a + size_b == 0:
        return 1.0
    return 2.0 * matched / (size_a + size_b)


def score(a: TripleGraph, b: TripleGraph, restarts: int = 4,
          seed: int = 0) -> tuple[float, dict[str, str]]:
    """Best-alignment F1 and the variable mapping that achieves it."""
    if len(a.variables) <= EXHAUSTIVE_LIMIT and len(b.variables) <= EXHAUSTIVE_LIMIT:
        matched, mapping = _exhaustive(a, b)
    else:
        matched, mapping = _hill_climb(a, b, restarts, seed)
    return _f1(matched, a.size(), b.size()), mapping


def _exhaustive(a: TripleGraph, b: TripleGraph) -> tuple[int, dict[str, str]]:
    swap = len(a.variables) > len(b.variables)
    small, big = (b, a) if swap else (a, b)
    best, best_map = -1, {}
    for perm in itertools.permutations(big.variables, len(small.variables)):
        mapping = dict(zip(small.variables, perm))
        if swap:
            mapping_ab = {v: k for k, v in mapping.items()}
        else:
            mapping_ab = mapping
        m = _matched(a, b, mapping_ab)
        if m > best:
            best, best_map = m, mapping_ab
    return best, best_map


def _total_mapping(a_vars: list[str], targets: list[str | None]) -> dict:
    padded = list(targets) + [None] * (len(a_vars) - len(targets))
    return dict(zip(a_vars, padded))


def _const_signature(g: TripleGraph) -> dict[str, set[tuple[str, str]]]:
    sig: dict[str, set[tuple[str, str]]] = {v: set() for v in g.variables}
    for rel, var, (kind, target) in g.relations:
        if kind == _CONST:
            sig[var].add((rel, target))
    return sig


def _children(g: TripleGraph) -> dict[str, list[tuple[str, str]]]:
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in g.variables}
    for rel, var, (kind, target) in g.relations:
        if kind == _VAR:
            out[var].append((rel, target))
    return out


def _anchor_init(a: TripleGraph, b: TripleGraph,
                 root_a: str, root_b: str) -> dict[str, str | None]:
    """Align the subtrees under an anchor pair by parallel traversal."""
    mapping: dict[str, str | None] = {v: None for v in a.variables}
    kids_a, kids_b = _children(a), _children(b)
    used: set[str] = set()

    def go(va: str, vb: str) -> None:
        if mapping[va] is not None or vb in used:
            return
        mapping[va] = vb
        used.add(vb)
        by_rel = {}
        for rel, child in kids_b[vb]:
            by_rel.setdefault(rel, []).append(child)
        for rel, child in kids_a[va]:
            if by_rel.get(rel):
                go(child, by_rel[rel].pop(0))

    go(root_a, root_b)
    return mapping


def _smart_inits(a: TripleGraph, b: TripleGraph) -> list[dict[str, str | None]]:
    """Deterministic structural initializations: greedy by shared constant
    signatures, plus parallel-subtree alignments anchored at the most
    similar variable pairs."""
    sig_a, sig_b = _const_signature(a), _const_signature(b)
    weights = []
    for va in a.variables:
        for vb in b.variables:
            w = len(sig_a[va] & sig_b[vb])
            weights.append((w, va, vb))
    weights.sort(key=lambda t: (-t[0], t[1], t[2]))
    greedy: dict[str, str | None] = {v: None for v in a.variables}
    used: set[str] = set()
    for w, va, vb in weights:
        if greedy[va] is None and vb not in used:
            greedy[va] = vb
            used.add(vb)
    inits = [greedy]
    if len(a.variables) * len(b.variables) <= 100:
        # small graphs: anchor a parallel-subtree alignment at every pair
        for va in a.variables:
            for vb in b.variables:
                inits.append(_anchor_init(a, b, va, vb))
    else:
        for w, va, vb in weights[:6]:
            if w > 0:
                inits.append(_anchor_init(a, b, va, vb))
        inits.append(_anchor_init(a, b, a.variables[0], b.variables[0]))
    seen: set[tuple] = set()
    unique = []
    for m in inits:
        key = tuple(sorted((k, v) for k, v in m.items() if v is not None))
        if key not in seen:
            seen.add(key)
            unique.append(m)
    return unique


def _pair_weight(a: TripleGraph, b: TripleGraph, va: str, vb: str,
                 mapping: dict[str, str | None]) -> int:
    """Triple matches attributable to aligning va with vb, given the rest
    of the current mapping."""
    w = 0
    inst_a = dict(a.instances)
    inst_b = dict(b.instances)
    if inst_a.get(va) == inst_b.get(vb):
        w += 1
    b_rel = set(b.relations)
    for rel, var, (kind, target) in a.relations:
        if var == va:
            if kind == _CONST and (rel, vb, (_CONST, target)) in b_rel:
                w += 1
            elif kind == _VAR and target != va:
                tb = mapping.get(target)
                if tb is not None and (rel, vb, (_VAR, tb)) in b_rel:
                    w += 1
        elif kind == _VAR and target == va:
            sb = mapping.get(var)
            if sb is not None and (rel, sb, (_VAR, vb)) in b_rel:
                w += 1
    return w


def _solve_assignment(a_vars: list[str], b_vars: list[str],
                      weight) -> dict[str, str | None]:
    """Max-weight assignment on a precomputed weight matrix: exact bitmask
    DP when the target side is small, greedy otherwise."""
    W = {(va, vb): weight(va, vb) for va in a_vars for vb in b_vars}
    if len(b_vars) > 12:
        pairs = sorted(((W[va, vb], va, vb)
                        for va in a_vars for vb in b_vars),
                       key=lambda t: (-t[0], t[1], t[2]))
        mapping: dict[str, str | None] = {v: None for v in a_vars}
        used: set[str] = set()
        for w, va, vb in pairs:
            if w > 0 and mapping[va] is None and vb not in used:
                mapping[va] = vb
                used.add(vb)
        return mapping
    n_b = len(b_vars)
    prev: dict[int, int] = {0: 0}
    paths: dict[int, list[int | None]] = {0: []}
    for va in a_vars:
        nxt: dict[int, int] = {}
        nxt_paths: dict[int, list[int | None]] = {}
        for mask, val in prev.items():
            if val > nxt.get(mask, -1):
                nxt[mask] = val
                nxt_paths[mask] = paths[mask] + [None]
            for j in range(n_b):
                if mask & (1 << j):
                    continue
                v2 = val + W[va, b_vars[j]]
                m2 = mask | (1 << j)
                if v2 > nxt.get(m2, -1):
                    nxt[m2] = v2
                    nxt_paths[m2] = paths[mask] + [j]
        prev, paths = nxt, nxt_paths
    best_mask = max(prev, key=lambda m: prev[m])
    assignment = paths[best_mask]
    return {va: (b_vars[j] if j is not None else None)
            for va, j in zip(a_vars, assignment)}


def _assignment_init(a: TripleGraph, b: TripleGraph,
                     start: dict[str, str | None]) -> dict[str, str | None]:
    """Iterate exact assignment over pair weights until matches stop
    improving; a strong structural initialization for the climb."""
    mapping = dict(start)
    best = _matched(a, b, mapping)
    for _ in range(8):
        new = _solve_assignment(
            a.variables, b.variables,
            lambda va, vb: _pair_weight(a, b, va, vb, mapping))
        m = _matched(a, b, new)
        if m <= best:
            break
        mapping, best = new, m
    return mapping


def _hill_climb(a: TripleGraph, b: TripleGraph, restarts: int,
                seed: int) -> tuple[int, dict[str, str]]:
    rng = random.Random(seed)
    best, best_map = -1, {}
    inits = _smart_inits(a, b)
    inits.append(_total_mapping(a.variables, list(b.variables)))
    inits.append(_assignment_init(a, b, inits[0]))
    for _ in range(max(1, restarts)):
        targets: list[str | None] = list(b.variables)
        rng.shuffle(targets)
        inits.append(_assignment_init(
            a, b, _total_mapping(a.variables, targets)))
    for mapping in inits:
        mapping = dict(mapping)
        m = _matched(a, b, mapping)
        improved = True
        while improved:
            m, mapping, improved = _best_neighbor(a, b, m, mapping)
        if m > best:
            best, best_map = m, {k: v for k, v in mapping.items() if v is not None}
    return best, best_map


def _best_neighbor(a: TripleGraph, b: TripleGraph, current: int,
                   mapping: dict[str, str | None]):
    used = {v for v in mapping.values() if v is not None}
    best_gain, best_mapping = 0, None
    # remap one variable to a free target (or detach it)
    free = [t for t in b.variables if t not in used] + [None]
    for var in a.variables:
        for target in free:
            if mapping.get(var) == target:
                continue
            cand = dict(mapping)
            cand[var] = target
            m = _matched(a, b, cand)
            if m - current > best_gain:
                best_gain, best_mapping = m - current, cand
    # swap two variables' targets (covers moving onto a taken target)
    for v1, v2 in itertools.combinations(a.variables, 2):
        if mapping.get(v1) == mapping.get(v2):
            continue
        cand = dict(mapping)
        cand[v1], cand[v2] = cand[v2], cand[v1]
        m = _matched(a, b, cand)
        if m - current > best_gain:
            best_gain, best_mapping = m - current, cand
    if best_mapping is None:
        return current, mapping, False
    return current + best_gain, best_mapping, True


def score_texts(text_a: str, text_b: str, restarts: int = 4,
                seed: int = 0) -> float:
    return score(to_triples(parse(text_a)), to_triples(parse(text_b)),
                 restarts=restarts, seed=seed)[0]


# ---------------------------------------------------------------------------
# Interannotator agreement


@dataclass
class AgreementReport:
    annotators: list[str]
    pairwise: dict[tuple[str, str], float]
    pairwise_certain: dict[tuple[str, str], float]
    overall: float
    certain_only: float
    version: str = TRIPLES_VERSION


CorpusEntry = tuple[str, str]  # (ulf text, certainty)


def agreement_matrix(corpus: dict[str, dict[str, CorpusEntry]],
                     certain_only: bool = False,
                     restarts: int = 4, seed: int = 0) -> AgreementReport:
    """Document-level pairwise agreement over shared sentence ids,
    micro-averaged (pooled matched and total triple counts).  Both the
    all-annotations and certain-only scores are computed; `certain_only`
    restricts which one the `pairwise` field of the report carries."""
    annotators = sorted(corpus)
    pairwise: dict[tuple[str, str], float] = {}
    pairwise_certain: dict[tuple[str, str], float] = {}
    pool = {"m": 0, "t": 0, "mc": 0, "tc": 0}
    for x, y in itertools.combinations(annotators, 2):
        shared = sorted(set(corpus[x]) & set(corpus[y]))
        if not shared:
            raise UlfError.at("NoOverlap",
                              f"annotators {x} and {y} share no sentences")
        m = t = mc = tc = 0
        for sid in shared:
            ulf_x, cert_x = corpus[x][sid]
            ulf_y, cert_y = corpus[y][sid]
            ga = to_triples(parse(ulf_x))
            gb = to_triples(parse(ulf_y))
            if len(ga.variables) <= EXHAUSTIVE_LIMIT \
                    and len(gb.variables) <= EXHAUSTIVE_LIMIT:
                matched, _ = _exhaustive(ga, gb)
            else:
                matched, _ = _hill_climb(ga, gb, restarts, seed)
            m += matched
            t += ga.size() + gb.size()
            if cert_x == "certain" and cert_y == "certain":
                mc += matched
                tc += ga.size() + gb.size()
        pairwise[(x, y)] = 2.0 * m / t if t else 1.0
        pairwise_certain[(x, y)] = 2.0 * mc / tc if tc else 1.0
        pool["m"] += m
        pool["t"] += t
        pool["mc"] += mc
        pool["tc"] += tc
    if certain_only:
        pairwise = dict(pairwise_certain)
    overall = 2.0 * pool["m"] / pool["t"] if pool["t"] else 1.0
    certain = 2.0 * pool["mc"] / pool["tc"] if pool["tc"] else 1.0
    return AgreementReport(annotators, pairwise, pairwise_certain,
                           overall, certain)


def format_report(report: AgreementReport) -> str:
    """Aligned text table; each cell is all/certain."""
    lines = [f"# encoding {report.version}"]
    names = report.annotators
    if len(names) < 2:
        lines.append("(fewer than two annotators)")
        return "\n".join(lines)
    header = "      " + "  ".join(f"{n:>9}" for n in names[1:])
    lines.append(header)
    for i, x in enumerate(names[:-1]):
        cells = []
        for y in names[i + 1:]:
            cells.append(f"{report.pairwise[(x, y)]:.2f}"
                         f"/{report.pairwise_certain[(x, y)]:.2f}")
        pad = "  ".join(f"{'-':>9}" for _ in range(i))
        row = f"{x:<6}" + (pad + "  " if pad else "") + "  ".join(f"{cell:>9}" for cell in cells)
        lines.append(row)
    lines.append(f"overall {report.overall:.2f}/{report.certain_only:.2f}")
    return "\n".join(lines)
