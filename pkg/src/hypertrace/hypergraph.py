"""
k-uniform hypergraphs over vertices 1..n, the hypercycle and power-graph
builders, and the adjacency tensor as an implicit operator.

The tensor is never stored as an array: its entries are 1/(k-1)! on every
ordering of an edge, so applying it only needs the edge list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UnsupportedShapeError
from .exact import Quad5


@dataclass(frozen=True)
class UniformHypergraph:
    k: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    _incidence: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k, n = self.k, self.n
        if k < 2:
            raise ValueError(f"edge size k={k} must be at least 2")
        if n < k:
            raise ValueError(f"vertex count n={n} is smaller than k={k}")
        canon = []
        seen = set()
        for e in self.edges:
            e = tuple(int(v) for v in e)
            if len(e) != k or len(set(e)) != k:
                raise ValueError(f"edge {e} does not have {k} distinct vertices")
            if min(e) < 1 or max(e) > n:
                raise ValueError(f"edge {e} has a vertex outside 1..{n}")
            key = frozenset(e)
            if key in seen:
                raise ValueError(f"duplicate edge {sorted(e)}")
            seen.add(key)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))
        inc = {v: [] for v in range(1, n + 1)}
        for idx, e in enumerate(canon):
            for v in e:
                inc[v].append(idx)
        object.__setattr__(self, "_incidence", {v: tuple(ix) for v, ix in inc.items()})

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def incident_edges(self, v: int) -> tuple[int, ...]:
        """Indices of the edges containing v."""
        return self._incidence[v]

    def degree(self, v: int) -> int:
        return len(self._incidence[v])

    def degrees(self) -> list[int]:
        return [len(self._incidence[v]) for v in self.vertices]

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "UniformHypergraph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["k"]), int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))


@dataclass(frozen=True)
class BaseGraph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            A[u - 1][v - 1] = A[v - 1][u - 1] = 1
        return A

    def as_hypergraph(self) -> UniformHypergraph:
        """The graph viewed as a 2-uniform hypergraph."""
        return UniformHypergraph(2, self.n, self.edges)


def cycle_graph(m: int) -> BaseGraph:
    return BaseGraph(m, tuple((i, i % m + 1) for i in range(1, m + 1)))


def path_graph(m: int) -> BaseGraph:
    return BaseGraph(m, tuple((i, i + 1) for i in range(1, m)))


NAMED_GRAPHS = {
    "c4": lambda: cycle_graph(4),
    "p2": lambda: path_graph(2),
    "p3": lambda: path_graph(3),
    "p4": lambda: path_graph(4),
}


def named_graph(name: str) -> BaseGraph:
    try:
        return NAMED_GRAPHS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown graph {name!r}; choose from {sorted(NAMED_GRAPHS)}") from None


def build_hypercycle(m: int, k: int) -> UniformHypergraph:
    """
    C_{m,k}: edge i is {(i-1)(k-1)+1, ..., i(k-1)+1}, with label m(k-1)+1
    wrapped around to 1.
    """
    if m < 2 or k < 2:
        raise ValueError(f"hypercycle needs m >= 2 and k >= 2 (got m={m}, k={k})")
    n = m * (k - 1)
    edges = []
    for i in range(1, m + 1):
        first = (i - 1) * (k - 1) + 1
        e = [first + t for t in range(k)]
        if e[-1] == n + 1:
            e[-1] = 1
        edges.append(tuple(e))
    return UniformHypergraph(k, n, tuple(edges))


def build_power(G: BaseGraph, k: int) -> UniformHypergraph:
    """G^k: every edge {u, v} gets k-2 fresh vertices numbered after G's."""
    if k < 2:
        raise ValueError("power hypergraph needs k >= 2")
    fresh = G.n
    edges = []
    for u, v in G.edges:
        extra = tuple(range(fresh + 1, fresh + k - 1))
        fresh += k - 2
        edges.append((u, v) + extra)
    return UniformHypergraph(k, fresh, tuple(edges))


def hypercycle_length(H: UniformHypergraph) -> int:
    """
    Return m if H is (up to relabeling) a hypercycle C_{m,k} with m >= 3,
    else raise UnsupportedShapeError.
    """
    m = len(H.edges)
    if m < 3 or H.n != m * (H.k - 1):
        raise UnsupportedShapeError("not a hypercycle: wrong vertex/edge counts")
    deg = H.degrees()
    if any(d not in (1, 2) for d in deg):
        raise UnsupportedShapeError("not a hypercycle: vertex degree outside {1, 2}")
    for e in H.edges:
        if sum(1 for v in e if deg[v - 1] == 2) != 2:
            raise UnsupportedShapeError("not a hypercycle: edge without two shared vertices")
    # edge adjacency must form one cycle
    nbrs = {i: set() for i in range(m)}
    for v in H.vertices:
        inc = H.incident_edges(v)
        if len(inc) == 2:
            a, b = inc
            nbrs[a].add(b)
            nbrs[b].add(a)
    if any(len(s) != 2 for s in nbrs.values()):
        raise UnsupportedShapeError("not a hypercycle: edges do not chain cyclically")
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in nbrs[x] - seen:
            seen.add(y)
            stack.append(y)
    if len(seen) != m:
        raise UnsupportedShapeError("not a hypercycle: edge chain is disconnected")
    return m


# ---------------------------------------------------------------------------
# the adjacency tensor as an operator

def _check_len(H: UniformHypergraph, x: Sequence):
    if len(x) != H.n:
        raise ValueError(f"vector has length {len(x)}, hypergraph has {H.n} vertices")


def tensor_apply(H: UniformHypergraph, x: Sequence) -> list:
    """
    (A x)_v = sum over edges e containing v of prod_{u in e, u != v} x_u.

    The (k-1)! orderings of each tail cancel the 1/(k-1)! entry weight, so
    integer input stays integer. Coordinates may be int, Fraction or Quad5.
    """
    _check_len(H, x)
    out = [0] * H.n
    for e in H.edges:
        for v in e:
            prod = 1
            for u in e:
                if u != v:
                    prod = prod * x[u - 1]
            out[v - 1] = out[v - 1] + prod
    return out


def _magnitude(z) -> Fraction:
    # for a + b*sqrt5 use max(|a|, |b|): rational, and zero exactly when z is
    if isinstance(z, Quad5):
        if z.b == 0:
            return abs(z.a)
        return max(abs(z.a), abs(z.b))
    return abs(Fraction(z))


def eigen_residual(H: UniformHypergraph, lam, x: Sequence) -> Fraction:
    """Max coordinate magnitude of A x - lam * x^[k-1]; zero iff (lam, x) is an eigenpair."""
    _check_len(H, x)
    Ax = tensor_apply(H, x)
    worst = Fraction(0)
    for v in range(H.n):
        r = Ax[v] - lam * (x[v] ** (H.k - 1))
        worst = max(worst, _magnitude(r))
    return worst


def edge_list_canonical(H: UniformHypergraph) -> list[tuple[int, ...]]:
    return sorted(tuple(sorted(e)) for e in H.edges)


def hypergraph_from_edges(k: int, edges: Iterable[Iterable[int]]) -> UniformHypergraph:
    edges = [tuple(e) for e in edges]
    n = max(max(e) for e in edges)
    return UniformHypergraph(k, n, tuple(edges))
