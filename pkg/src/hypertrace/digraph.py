"""
Arc multisets built from rooted edges, and exact counting on them:
arborescences (Matrix-Tree), Eulerian circuits (BEST) and rooted Eulerian
closed walks with indistinguishable parallel arcs.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exact import det_exact


class Atom(NamedTuple):
    """One rooted edge ordering: the root followed by an ordered tail."""

    root: int
    tail: tuple[int, ...]


@dataclass(frozen=True)
class MultiDigraph:
    arcs: Mapping[tuple[int, int], int]
    vertices: frozenset = frozenset()
    out_deg: Mapping[int, int] = field(default=None, compare=False, repr=False)
    in_deg: Mapping[int, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        arcs = {}
        for (u, v), m in sorted(self.arcs.items()):
            if m < 0:
                raise ValueError(f"negative multiplicity on arc {u}->{v}")
            if m:
                arcs[(u, v)] = int(m)
        outd: Counter = Counter()
        ind: Counter = Counter()
        for (u, v), m in arcs.items():
            outd[u] += m
            ind[v] += m
        verts = frozenset(self.vertices) | frozenset(outd) | frozenset(ind)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "out_deg", {v: outd.get(v, 0) for v in sorted(verts)})
        object.__setattr__(self, "in_deg", {v: ind.get(v, 0) for v in sorted(verts)})

    def __hash__(self):
        return hash((frozenset(self.arcs.items()), self.vertices))

    @property
    def arc_count(self) -> int:
        return sum(self.arcs.values())

    def is_balanced(self) -> bool:
        return all(self.out_deg[v] == self.in_deg[v] for v in self.vertices)

    def support(self) -> list[int]:
        return sorted(v for v in self.vertices if self.out_deg[v] or self.in_deg[v])

    def is_weakly_connected(self) -> bool:
        supp = self.support()
        if not supp:
            return True
        nbrs = {v: set() for v in supp}
        for u, v in self.arcs:
            nbrs[u].add(v)
            nbrs[v].add(u)
        seen = {supp[0]}
        stack = [supp[0]]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(supp)

    def key(self) -> tuple:
        return tuple(sorted(self.arcs.items()))

    def to_json(self) -> str:
        return json.dumps(
            {"arcs": [[u, v, m] for (u, v), m in self.arcs.items()]}, sort_keys=True
        )


def multidigraph(arcs: Iterable[tuple[int, int]] | Mapping[tuple[int, int], int]) -> MultiDigraph:
    """Build from a mapping arc -> multiplicity, or from an iterable of arcs with repeats."""
    if isinstance(arcs, Mapping):
        return MultiDigraph(dict(arcs))
    return MultiDigraph(dict(Counter(tuple(a) for a in arcs)))


def arcs_from_atoms(atoms: Sequence[Atom]) -> MultiDigraph:
    """E(F): each atom (i, v_1..v_{k-1}) contributes arcs i->v_1, ..., i->v_{k-1}."""
    if not atoms:
        raise ValueError("need at least one atom")
    counts: Counter = Counter()
    for root, tail in atoms:
        for v in tail:
            counts[(root, v)] += 1
    return MultiDigraph(dict(counts))


def b_factor(D: MultiDigraph) -> int:
    out = 1
    for m in D.arcs.values():
        out *= factorial(m)
    return out


def c_factor(D: MultiDigraph) -> int:
    out = 1
    for d in D.out_deg.values():
        out *= factorial(d)
    return out


def laplacian(D: MultiDigraph, order: Sequence[int]) -> list[list[int]]:
    """Out-degree Laplacian restricted to `order`; arcs leaving the set are ignored."""
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    L = [[0] * n for _ in range(n)]
    for (u, v), m in D.arcs.items():
        if u == v or u not in idx or v not in idx:
            continue
        L[idx[u]][idx[u]] += m
        L[idx[u]][idx[v]] -= m
    return L


def count_arborescences(D: MultiDigraph, root: int, vertices: Sequence[int] | None = None) -> int:
    """
    Spanning arborescences oriented toward `root` (every vertex has a path to
    it), parallel arcs counted as distinct. Spans `vertices`, default all of D.
    """
    order = sorted(D.vertices if vertices is None else vertices)
    if root not in order:
        raise ValueError(f"root {root} is not a vertex")
    L = laplacian(D, order)
    r = order.index(root)
    minor = [row[:r] + row[r + 1:] for i, row in enumerate(L) if i != r]
    return det_exact(minor)


def count_eulerian_circuits(D: MultiDigraph) -> int:
    """
    BEST theorem with labeled parallel arcs: circuits up to rotation equal
    t_r(D) * prod_v (d+_v - 1)! for any root r. Zero if D is unbalanced or
    its support is disconnected.
    """
    if D.arc_count == 0 or not D.is_balanced() or not D.is_weakly_connected():
        return 0
    supp = D.support()
    trees = count_arborescences(D, supp[0], supp)
    out = trees
    for v in supp:
        out *= factorial(D.out_deg[v] - 1)
    return out


def count_rooted_walks(D: MultiDigraph) -> int:
    """
    |W|: Eulerian closed walks with a distinguished first arc, parallel arcs
    not distinguished. arcs * circuits / b, the division being exact.
    """
    eps = count_eulerian_circuits(D)
    if eps == 0:
        return 0
    num = D.arc_count * eps
    b = b_factor(D)
    q, r = divmod(num, b)
    if r:
        raise ArithmeticError(f"rooted walk count {num}/{b} is not an integer")
    return q


# ---------------------------------------------------------------------------
# brute-force oracles (exponential, for cross-checking small instances)

def brute_force_arborescences(D: MultiDigraph, root: int) -> int:
    """Each non-root vertex picks one outgoing arc; count acyclic choices, weighted by multiplicity."""
    verts = sorted(D.vertices)
    others = [v for v in verts if v != root]
    choices = {v: [(w, m) for (u, w), m in D.arcs.items() if u == v and w != v] for v in others}
    total = 0

    def rec(i, parent, weight):
        nonlocal total
        if i == len(others):
            for v in others:
                seen = set()
                x = v
                while x != root:
                    if x in seen:
                        return
                    seen.add(x)
                    x = parent[x]
            total += weight
            return
        v = others[i]
        for w, m in choices[v]:
            parent[v] = w
            rec(i + 1, parent, weight * m)
        parent.pop(v, None)

    rec(0, {}, 1)
    return total


def brute_force_eulerian_circuits(D: MultiDigraph) -> int:
    """Label every arc copy, fix the first labeled arc, and count Eulerian arc orders by backtracking."""
    labeled = []
    for (u, v), m in D.arcs.items():
        labeled.extend((u, v) for _ in range(m))
    total_arcs = len(labeled)
    if total_arcs == 0:
        return 0
    out_lists = {}
    for i, (u, v) in enumerate(labeled):
        out_lists.setdefault(u, []).append(i)
    used = [False] * total_arcs
    start_arc = 0
    start_vertex = labeled[0][0]
    used[0] = True
    count = 0

    def rec(at, n_used):
        nonlocal count
        if n_used == total_arcs:
            if at == start_vertex:
                count += 1
            return
        for i in out_lists.get(at, ()):
            if not used[i]:
                used[i] = True
                rec(labeled[i][1], n_used + 1)
                used[i] = False

    rec(labeled[start_arc][1], 1)
    return count


def brute_force_rooted_walks(D: MultiDigraph) -> int:
    """Distinct closed arc sequences using every arc with its multiplicity, parallel arcs identical."""
    remaining = dict(D.arcs)
    total_arcs = D.arc_count
    if total_arcs == 0:
        return 0
    outs = {}
    for (u, v) in remaining:
        outs.setdefault(u, []).append(v)
    count = 0

    def rec(start, at, n_used):
        nonlocal count
        if n_used == total_arcs:
            if at == start:
                count += 1
            return
        for v in outs.get(at, ()):
            if remaining[(at, v)]:
                remaining[(at, v)] -= 1
                rec(start, v, n_used + 1)
                remaining[(at, v)] += 1

    for (u, v) in list(remaining):
        remaining[(u, v)] -= 1
        rec(u, v, 1)
        remaining[(u, v)] += 1
    return count
