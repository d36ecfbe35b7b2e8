"""
Generalized traces Tr_j of hypergraph adjacency tensors.

All engines evaluate

    Tr_j = (k-1)^(n-1) * sum_F  b(F)/c(F) * pi_F * |W(F)|

over tuples F of rooted edge orderings with nondecreasing roots. They differ
in how F is enumerated:

* ``trace_naive`` walks every tuple F literally, with balance pruning.
* ``trace_structured`` enumerates edge-usage vectors and per-vertex root
  splits, and counts the tuples behind each split combinatorially.
* ``trace_closed_c4k`` evaluates the closed forms for C_{4,k}, j = dk.
* ``trace_matrix_oracle`` is tr(A^j) for ordinary graphs (k = 2).
"""

from __future__ import annotations

import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

from .digraph import Atom, arcs_from_atoms, b_factor, c_factor, count_rooted_walks, multidigraph
from .errors import ResourceError, UnsupportedShapeError
from .exact import multinomial, rat_to_str
from .hypergraph import BaseGraph, UniformHypergraph, hypercycle_length

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    env = os.environ.get("HYPERTRACE_BUDGET")
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError("HYPERTRACE_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class FPattern:
    """
    An equivalence class of tuples F: how often each edge is used and, for
    every (vertex, edge) incidence, how many atoms of that edge are rooted there.
    """

    usage: tuple[int, ...]
    roots: tuple[tuple[int, int, int], ...]  # (vertex, edge index, count), count > 0

    def root_counts(self) -> dict[int, int]:
        out: Counter = Counter()
        for v, _, r in self.roots:
            out[v] += r
        return dict(out)


@dataclass
class PatternRecord:
    pattern: FPattern
    count: int
    b: int
    c: int
    walks: int
    contribution: Fraction

    def to_json(self) -> dict:
        return {
            "usage": list(self.pattern.usage),
            "roots": [list(t) for t in self.pattern.roots],
            "count": str(self.count),
            "b": str(self.b),
            "c": str(self.c),
            "walks": str(self.walks),
            "contribution": rat_to_str(self.contribution),
        }


@dataclass
class TraceReport:
    k: int
    j: int
    engine: str
    value: Fraction
    patterns: list[PatternRecord] = field(default_factory=list)
    wall_time: float = 0.0
    status: str = "verified"
    n: int | None = None

    def to_json(self) -> dict:
        # wall_time is left out so that reports are byte-reproducible
        v = self.value
        return {
            "k": self.k,
            "j": self.j,
            "engine": self.engine,
            "value": str(v.numerator) if v.denominator == 1 else rat_to_str(v),
            "status": self.status,
            "patterns": [p.to_json() for p in self.patterns],
        }


def _prefactor(H: UniformHypergraph) -> int:
    return (H.k - 1) ** (H.n - 1)


def _arcs_from_roots(H: UniformHypergraph, roots) -> dict:
    arcs: Counter = Counter()
    for v, e, r in roots:
        for w in H.edges[e]:
            if w != v:
                arcs[(v, w)] += r
    return dict(arcs)


# ---------------------------------------------------------------------------
# naive engine

def _atoms_by_root(H: UniformHypergraph) -> dict[int, list[tuple[Atom, int]]]:
    """Every atom with nonzero tensor weight, grouped by root, paired with its edge index."""
    out = {v: [] for v in H.vertices}
    for idx, e in enumerate(H.edges):
        for v in e:
            rest = [u for u in e if u != v]
            for tail in permutations(rest):
                out[v].append((Atom(v, tail), idx))
    return out


def estimate_tuple_count(H: UniformHypergraph, j: int) -> int:
    """Number of root-sorted atom sequences of length j, before any pruning."""
    per_vertex = [len(H.incident_edges(v)) * factorial(H.k - 1) for v in H.vertices]
    poly = [1] + [0] * j
    for a in per_vertex:
        # multiply by 1 / (1 - a x)
        for t in range(1, j + 1):
            poly[t] += a * poly[t - 1]
    return poly[j]


def trace_naive(H: UniformHypergraph, j: int, budget: int | None = None) -> TraceReport:
    """
    Tr_j by literal enumeration of root-sorted tuples F with balance pruning.
    Raises ResourceError when the unpruned tuple count exceeds `budget`.
    """
    if j < 1:
        raise ValueError("trace order j must be positive")
    budget = default_budget() if budget is None else budget
    estimate = estimate_tuple_count(H, j)
    if estimate > budget:
        raise ResourceError(
            f"naive enumeration of Tr_{j} would visit up to {estimate} tuples "
            f"(budget {budget}); use the structured engine"
        )
    start = time.perf_counter()
    k, n = H.k, H.n
    atoms = _atoms_by_root(H)
    # last vertex sharing an edge with v; once the roots move past it, v's in-degree is final
    last_nbr = [0] * (n + 1)
    for e in H.edges:
        top = max(e)
        for v in e:
            last_nbr[v] = max(last_nbr[v], top)

    outdeg = [0] * (n + 2)
    indeg = [0] * (n + 2)
    seq: list[tuple[Atom, int]] = []
    groups: dict[tuple, list] = {}

    def record():
        for v in range(1, n + 1):
            if outdeg[v] != indeg[v]:
                return
        rc: Counter = Counter()
        for (atom, e) in seq:
            rc[(atom.root, e)] += 1
        key = tuple(sorted((v, e, r) for (v, e), r in rc.items()))
        g = groups.get(key)
        if g is None:
            groups[key] = [1, [a for a, _ in seq]]
        else:
            g[0] += 1

    def advance_ok(v: int, placed: int) -> bool:
        deficit = 0
        for w in range(1, v + 1):
            gap = outdeg[w] - indeg[w]
            if gap < 0:
                return False
            if gap and last_nbr[w] <= v:
                return False
            deficit += gap
        # each later atom raises total in-degree of earlier vertices by at most k-1
        return deficit <= (k - 1) * (j - placed)

    def rec(v: int, placed: int):
        if placed == j:
            record()
            return
        if v > n:
            return
        for atom, e in atoms[v]:
            outdeg[v] += k - 1
            for w in atom.tail:
                indeg[w] += 1
            seq.append((atom, e))
            rec(v, placed + 1)
            seq.pop()
            for w in atom.tail:
                indeg[w] -= 1
            outdeg[v] -= k - 1
        if advance_ok(v, placed):
            rec(v + 1, placed)

    rec(1, 0)

    pref = _prefactor(H)
    pi = Fraction(1, factorial(k - 1) ** j)
    records = []
    total = Fraction(0)
    for key in sorted(groups):
        count, rep_atoms = groups[key]
        D = arcs_from_atoms(rep_atoms)
        occ: Counter = Counter()
        for a in rep_atoms:
            occ[a.root] += 1
            for w in a.tail:
                occ[w] += 1
        if any(c % k for c in occ.values()):
            raise AssertionError("balanced tuple that is not k-valent")
        walks = count_rooted_walks(D)
        if walks == 0:
            continue
        b, c = b_factor(D), c_factor(D)
        contrib = pref * count * Fraction(b, c) * pi * walks
        usage = [0] * len(H.edges)
        for _, e, r in key:
            usage[e] += r
        records.append(PatternRecord(FPattern(tuple(usage), key), count, b, c, walks, contrib))
        total += contrib
    records.sort(key=lambda r: (r.pattern.usage, r.pattern.roots))
    return TraceReport(k, j, "naive", total, records, time.perf_counter() - start, n=n)


# ---------------------------------------------------------------------------
# structured engine

def _usage_vectors(H: UniformHypergraph, j: int) -> list[tuple[int, ...]]:
    """Edge-usage vectors summing to j with every vertex occurrence count divisible by k."""
    k = H.k
    m = len(H.edges)
    deg = H.degrees()
    step = [k if any(deg[v - 1] == 1 for v in e) else 1 for e in H.edges]
    out = []
    cur = [0] * m

    def rec(i, left):
        if i == m - 1:
            if left % step[i]:
                return
            cur[i] = left
            if _valent(H, cur):
                out.append(tuple(cur))
            return
        for u in range(0, left + 1, step[i]):
            cur[i] = u
            rec(i + 1, left - u)
        cur[i] = 0

    if m:
        rec(0, j)
    return out


def _valent(H: UniformHypergraph, usage: Sequence[int]) -> bool:
    for v in H.vertices:
        if sum(usage[e] for e in H.incident_edges(v)) % H.k:
            return False
    return True


def _used_edges_connected(H: UniformHypergraph, usage: Sequence[int]) -> bool:
    used = [i for i, u in enumerate(usage) if u]
    if not used:
        return False
    verts = {i: set(H.edges[i]) for i in used}
    seen = {used[0]}
    stack = [used[0]]
    while stack:
        a = stack.pop()
        for b in used:
            if b not in seen and verts[a] & verts[b]:
                seen.add(b)
                stack.append(b)
    return len(seen) == len(used)


def root_assignments(H: UniformHypergraph, usage: Sequence[int]) -> list[tuple]:
    """
    All balanced splits: r[v,e] >= 0 with sum_e r[v,e] = (sum_{e ni v} u_e)/k
    at every vertex and sum_{v in e} r[v,e] = u_e on every edge.
    """
    k = H.k
    verts = [v for v in H.vertices if any(usage[e] for e in H.incident_edges(v))]
    need = {v: sum(usage[e] for e in H.incident_edges(v)) // k for v in verts}
    # an edge is closed once its largest-labelled vertex has been split
    closes_at = {}
    for e, edge in enumerate(H.edges):
        if usage[e]:
            closes_at.setdefault(max(edge), []).append(e)
    edge_sum = [0] * len(H.edges)
    chosen: list[tuple[int, int, int]] = []
    out = []

    def split(v, edges, i, left):
        if i == len(edges) - 1:
            e = edges[i]
            if left > usage[e] - edge_sum[e]:
                return
            yield [(e, left)]
            return
        e = edges[i]
        for r in range(0, min(left, usage[e] - edge_sum[e]) + 1):
            for rest in split(v, edges, i + 1, left - r):
                yield [(e, r)] + rest

    def rec(idx):
        if idx == len(verts):
            out.append(tuple(chosen))
            return
        v = verts[idx]
        edges = [e for e in H.incident_edges(v) if usage[e]]
        for parts in split(v, edges, 0, need[v]):
            for e, r in parts:
                edge_sum[e] += r
            if all(edge_sum[e] == usage[e] for e in closes_at.get(v, ())):
                added = [(v, e, r) for e, r in parts if r]
                chosen.extend(added)
                rec(idx + 1)
                del chosen[len(chosen) - len(added):]
            for e, r in parts:
                edge_sum[e] -= r

    rec(0)
    return [tuple(sorted(t)) for t in out]


def evaluate_pattern(H: UniformHypergraph, usage: tuple, roots: tuple, j: int) -> PatternRecord:
    """Number of tuples F behind one pattern, and their combined contribution."""
    k = H.k
    per_vertex: dict[int, list[int]] = {}
    for v, _, r in roots:
        per_vertex.setdefault(v, []).append(r)
    interleavings = 1
    for parts in per_vertex.values():
        interleavings *= multinomial(parts)
    tail_orders = factorial(k - 1) ** j
    count = interleavings * tail_orders
    D = multidigraph(_arcs_from_roots(H, roots))
    b, c = b_factor(D), c_factor(D)
    walks = count_rooted_walks(D)
    # tail orderings cancel pi_F = (1/(k-1)!)^j exactly
    contrib = _prefactor(H) * interleavings * Fraction(b, c) * walks
    return PatternRecord(FPattern(usage, roots), count, b, c, walks, contrib)


def _evaluate_usage(args) -> list[PatternRecord]:
    H, usage, j = args
    return [evaluate_pattern(H, usage, roots, j) for roots in root_assignments(H, usage)]


def trace_structured(H: UniformHypergraph, j: int, workers: int = 1) -> TraceReport:
    """Tr_j of a hypercycle by pattern enumeration. Exact; deterministic for any worker count."""
    if j < 1:
        raise ValueError("trace order j must be positive")
    m = hypercycle_length(H)
    start = time.perf_counter()
    usages = [u for u in _usage_vectors(H, j) if _used_edges_connected(H, u)]
    tasks = [(H, u, j) for u in usages]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate_usage, tasks))
    else:
        chunks = [_evaluate_usage(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk if r.walks]
    records.sort(key=lambda r: (r.pattern.usage, r.pattern.roots))
    total = sum((r.contribution for r in records), Fraction(0))
    status = "verified" if m == 4 and H.k >= 3 and j % H.k == 0 and j // H.k <= 4 else "extrapolated"
    return TraceReport(H.k, j, "structured", total, records, time.perf_counter() - start,
                       status=status, n=H.n)


# ---------------------------------------------------------------------------
# closed forms for C_{4,k}

CLOSED_COEFFS = {
    1: (4, 0, 0, 0),
    2: (4, 8, 0, 0),
    3: (4, 24, 12, 0),
    4: (4, 56, 64, 40),
}


def closed_basis(k: int) -> tuple[int, int, int, int]:
    """k^(k-1)(k-1)^(3k-4), k^(2k-3)(k-1)^(2k-3), k^(3k-5)(k-1)^(k-2), k^(4k-8)."""
    return (
        k ** (k - 1) * (k - 1) ** (3 * k - 4),
        k ** (2 * k - 3) * (k - 1) ** (2 * k - 3),
        k ** (3 * k - 5) * (k - 1) ** (k - 2),
        k ** (4 * k - 8),
    )


def trace_closed_c4k(k: int, d: int) -> int:
    """Tr_{dk} of C_{4,k} from the closed forms, d = 1..4."""
    if k < 3:
        raise ValueError(f"closed forms need k >= 3 (got {k})")
    if d not in CLOSED_COEFFS:
        raise ValueError(f"closed forms exist only for d in 1..4 (got {d})")
    return sum(c * t for c, t in zip(CLOSED_COEFFS[d], closed_basis(k)))


def closed_report(k: int, d: int) -> TraceReport:
    start = time.perf_counter()
    value = trace_closed_c4k(k, d)
    return TraceReport(k, d * k, "closed", Fraction(value), [], time.perf_counter() - start,
                       n=4 * (k - 1))


# ---------------------------------------------------------------------------
# k = 2 oracle

def trace_matrix_oracle(G: BaseGraph, j: int) -> int:
    """tr(A^j) by exact integer matrix powering."""
    if j < 1:
        raise ValueError("trace order j must be positive")
    A = G.adjacency()
    n = G.n

    def mul(X, Y):
        cols = list(zip(*Y))
        return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]

    result = [[int(i == t) for t in range(n)] for i in range(n)]
    base = A
    e = j
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return sum(result[i][i] for i in range(n))

