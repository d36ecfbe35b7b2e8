"""
Characteristic polynomials from traces.

* ``schur_assemble`` rebuilds a monic polynomial from its power sums.
* ``signed_subgraph_classes`` lists the values lambda^k = beta^2 that the
  eigenvalues of a power hypergraph G^k can take, beta running over the
  adjacency eigenvalues of signed (induced) subgraphs of G.
* ``solve_multiplicities`` / ``charpoly_c4k`` give the factored
  characteristic polynomial of C_{4,k} from its four traces Tr_{dk}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .errors import ConsistencyError, ResourceError
from .exact import PHI_MINUS, PHI_PLUS, Quad5, det_exact, solve_linear_exact
from .hypergraph import BaseGraph
from .trace import trace_closed_c4k

MAX_SIGNED_VERTICES = 6


# ---------------------------------------------------------------------------
# power sums -> coefficients

def schur_assemble(traces: Sequence, s: int) -> list[Fraction]:
    """
    Coefficients [1, c_1, ..., c_s] of the monic degree-s polynomial whose
    root power sums are traces[0..s-1], highest degree first.

    With p_i = -Tr_i / i the coefficients are P_j, where j P_j = sum_i i p_i P_{j-i}.
    """
    if s < 1:
        raise ValueError("degree must be positive")
    if len(traces) < s:
        raise ValueError(f"need {s} traces, got {len(traces)}")
    p = [None] + [Fraction(-Fraction(traces[i - 1]), i) for i in range(1, s + 1)]
    P = [Fraction(1)]
    for j in range(1, s + 1):
        acc = sum((i * p[i] * P[j - i] for i in range(1, j + 1)), Fraction(0))
        P.append(acc / j)
    return P


def charpoly_integer(A: Sequence[Sequence[int]]) -> list[int]:
    """det(x I - A) by Faddeev-LeVerrier, coefficients highest degree first."""
    n = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for step in range(1, n + 1):
        # M <- A M + c_{step-1} I
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[-1]
        M = AM
        AM2 = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM2[i][i] for i in range(n)) / step
        coeffs.append(c)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial coefficient")
        out.append(int(c))
    return out


def charpoly_by_interpolation(A: Sequence[Sequence[int]]) -> list[int]:
    """det(x I - A) from Bareiss determinants at x = 0..n and Lagrange interpolation."""
    n = len(A)
    xs = list(range(n + 1))
    ys = [det_exact([[(x if i == j else 0) - A[i][j] for j in range(n)] for i in range(n)])
          for x in xs]
    coeffs = [Fraction(0)] * (n + 1)          # ascending
    for i, xi in enumerate(xs):
        basis = [Fraction(1)]
        denom = 1
        for t, xt in enumerate(xs):
            if t == i:
                continue
            basis = [Fraction(0)] + basis
            for q in range(len(basis) - 1):
                basis[q] -= xt * basis[q + 1]
            denom *= xi - xt
        for q in range(n + 1):
            coeffs[q] += ys[i] * basis[q] / denom
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolated characteristic polynomial is not integral")
    return [int(c) for c in reversed(coeffs)]


# ---------------------------------------------------------------------------
# exact roots in Q(sqrt 5) of integer polynomials (coefficients highest first)

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    q = []
    lead = den[0]
    while len(num) >= len(den):
        c, r = divmod(num[0], lead)
        if r:
            return q, num
        q.append(c)
        for i, d in enumerate(den):
            num[i] -= c * d
        num.pop(0)
    return q, num


def _squared_root_poly(p: list[int]) -> list[int]:
    """Monic q with q(mu) = 0 exactly when mu = beta^2 for a root beta of p."""
    n = len(p) - 1
    asc = p[::-1]
    even = asc[0::2]          # E(mu): coefficient of beta^(2i)
    odd = asc[1::2]           # O(mu): coefficient of beta^(2i+1)

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    E2 = mul(even, even)
    O2 = [0] + mul(odd, odd) if odd else []
    size = max(len(E2), len(O2))
    q = [(E2[i] if i < len(E2) else 0) - (O2[i] if i < len(O2) else 0) for i in range(size)]
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    desc = q[::-1]
    if desc[0] < 0:
        desc = [-c for c in desc]
    assert len(desc) - 1 == n
    return desc


def roots_in_q5(q: list[int], bound: int) -> list[Quad5]:
    """
    Roots of the monic integer polynomial q lying in Q(sqrt 5), assuming all
    roots are real and in [0, bound]. Raises ValueError if any root lies outside Q(sqrt 5).
    """
    found: list[Quad5] = []
    rest = list(q)
    for r in range(0, bound + 1):
        while len(rest) > 1:
            quot, rem = _poly_divmod(rest, [1, -r])
            if any(rem):
                break
            found.append(Quad5(r))
            rest = quot
    # conjugate pairs (t +- f sqrt5)/2 with t^2 - 5 f^2 = 4 s
    for t in range(0, 2 * bound + 1):
        f = 1
        while 5 * f * f <= t * t:
            if (t * t - 5 * f * f) % 4 == 0:
                s = (t * t - 5 * f * f) // 4
                while len(rest) > 2:
                    quot, rem = _poly_divmod(rest, [1, -t, s])
                    if any(rem):
                        break
                    found.append(Quad5(Fraction(t, 2), Fraction(f, 2)))
                    found.append(Quad5(Fraction(t, 2), Fraction(-f, 2)))
                    rest = quot
            f += 1
    if len(rest) > 1:
        raise ValueError(f"polynomial factor {rest} has roots outside Q(sqrt 5)")
    return found


@dataclass(frozen=True)
class EigenClassSet:
    values: frozenset

    def sorted(self) -> list[Quad5]:
        return sorted(self.values, key=Quad5.sort_key)

    def is_conjugation_closed(self) -> bool:
        return all(v.conjugate() in self.values for v in self.values)

    def __contains__(self, x):
        return Quad5.coerce(x) in self.values

    def __len__(self):
        return len(self.values)


def _signed_graphs(G: BaseGraph, induced: bool):
    verts = list(range(1, G.n + 1))
    if induced:
        for size in range(1, G.n + 1):
            for vs in combinations(verts, size):
                vset = set(vs)
                es = [e for e in G.edges if e[0] in vset and e[1] in vset]
                yield vs, es
    else:
        # isolated vertices only add zeros; one vertex stands in for the empty edge set
        for size in range(0, len(G.edges) + 1):
            for es in combinations(G.edges, size):
                vs = sorted({v for e in es for v in e}) or [1]
                yield tuple(vs), list(es)


def signed_subgraph_classes(G: BaseGraph, k: int) -> EigenClassSet:
    """
    beta^2 for every adjacency eigenvalue beta of every signed subgraph of G
    (induced subgraphs only when k = 3).
    """
    if k < 3:
        raise ValueError("signed-subgraph classes are defined for k >= 3")
    if G.n > MAX_SIGNED_VERTICES:
        raise ResourceError(
            f"base graph has {G.n} vertices; exhaustive signing is limited to {MAX_SIGNED_VERTICES}"
        )
    max_deg = max((sum(1 for e in G.edges if v in e) for v in range(1, G.n + 1)), default=0)
    bound = max(max_deg, 1) ** 2
    found = set()
    seen_polys = set()
    for vs, es in _signed_graphs(G, induced=(k == 3)):
        idx = {v: i for i, v in enumerate(vs)}
        for signs in product((1, -1), repeat=len(es)):
            A = [[0] * len(vs) for _ in vs]
            for (u, v), sg in zip(es, signs):
                A[idx[u]][idx[v]] = A[idx[v]][idx[u]] = sg
            p = tuple(charpoly_integer(A))
            if p in seen_polys:
                continue
            seen_polys.add(p)
            q = _squared_root_poly(list(p))
            found.update(roots_in_q5(q, bound))
    return EigenClassSet(frozenset(found))


# ---------------------------------------------------------------------------
# C_{4,k} multiplicities

ROOT_CLASSES = (Quad5(1), Quad5(2), Quad5(4), PHI_PLUS, PHI_MINUS)


def lucas_pair_sum(d: int) -> int:
    """((3+sqrt5)/2)^d + ((3-sqrt5)/2)^d, an integer."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    s = PHI_PLUS ** d + PHI_MINUS ** d
    if s.b != 0 or s.a.denominator != 1:
        raise ConsistencyError(f"pair power sum at d={d} is not an integer: {s}")
    return int(s.a)


@dataclass(frozen=True)
class Multiplicities:
    k: int
    m0: int
    m1: int
    m2: int
    m4: int
    mp: int   # multiplicity of each of (3 +- sqrt5)/2

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.m0, self.m1, self.m2, self.m4, self.mp)


def total_degree_c4k(k: int) -> int:
    """n (k-1)^(n-1) with n = 4(k-1)."""
    return 4 * (k - 1) ** (4 * k - 4)


def multiplicity_system(k: int) -> list[list[int]]:
    return [[1, 2 ** d, 4 ** d, lucas_pair_sum(d)] for d in range(1, 5)]


def solve_multiplicities(k: int, traces: Sequence) -> Multiplicities:
    """
    Solve k (m1 + 2^d m2 + 4^d m4 + L_d m') = Tr_{dk}, d = 1..4, then close
    with the degree identity m0 + k (m1 + m2 + m4 + 2 m') = 4 (k-1)^(4k-4).
    """
    if k < 3:
        raise ValueError(f"multiplicity solve needs k >= 3 (got {k})")
    if len(traces) != 4:
        raise ValueError("need exactly the four traces Tr_k, Tr_2k, Tr_3k, Tr_4k")
    rhs = [Fraction(t) / k for t in traces]
    sol = solve_linear_exact(multiplicity_system(k), rhs)
    for name, v in zip(("m1", "m2", "m4", "m'"), sol):
        if v.denominator != 1 or v < 0:
            raise ConsistencyError(f"{name} = {v} is not a nonnegative integer; check the trace inputs")
    m1, m2, m4, mp = (int(v) for v in sol)
    m0 = total_degree_c4k(k) - k * (m1 + m2 + m4 + 2 * mp)
    if m0 < 0:
        raise ConsistencyError(f"m0 = {m0} is negative; check the trace inputs")
    return Multiplicities(k, m0, m1, m2, m4, mp)


@dataclass
class FactoredCharPoly:
    """lambda^lambda_power * prod (lambda^k - root)^mult."""

    k: int
    lambda_power: int
    factors: list[tuple[Quad5, int]]
    status: str = "verified"
    note: str = ""

    @property
    def degree(self) -> int:
        return self.lambda_power + self.k * sum(m for _, m in self.factors)

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "lambda_power": str(self.lambda_power),
            "factors": [{"root": r.to_json(), "mult": str(m)} for r, m in self.factors],
            "degree": str(self.degree),
            "status": self.status,
        }
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self):
        parts = [f"λ^{self.lambda_power}"]
        for r, m in self.factors:
            if m:
                parts.append(f"(λ^{self.k} - ({r}))^{m}")
        return "·".join(parts)


def charpoly_c4k(k: int, traces: Sequence | None = None) -> FactoredCharPoly:
    """Factored characteristic polynomial of C_{4,k}; traces default to the closed forms."""
    if k < 3:
        raise ValueError(f"charpoly of C_(4,k) needs k >= 3 (got {k})")
    if traces is None:
        traces = [trace_closed_c4k(k, d) for d in range(1, 5)]
    m = solve_multiplicities(k, traces)
    factors = list(zip(ROOT_CLASSES, (m.m1, m.m2, m.m4, m.mp, m.mp)))
    poly = FactoredCharPoly(k, m.m0, factors)
    if poly.degree != total_degree_c4k(k):
        raise ConsistencyError(f"degree {poly.degree} != {total_degree_c4k(k)}")
    if k == 3:
        poly.status = "extrapolated"
        poly.note = "k=3 lies outside the k >= 4 range of the published factorization"
    return poly


# ---------------------------------------------------------------------------
# the two printed variants of the multiplicity formulas

PRINTED_FORMULAS: dict[str, dict[str, Callable[[int], int]]] = {
    "m0": {
        "statement": lambda k: 4 * (k - 1) ** (4 * k - 4) - 4 * k ** (k - 1) * (k - 1) ** (3 * k - 4)
        + 4 * k ** (2 * k - 3) * (k - 1) ** (2 * k - 3) - 4 * k ** (3 * k - 5) * (k - 1) ** (k - 2)
        + 5 * k ** (4 * k - 8),
        "proof": lambda k: 4 * (k - 1) ** (4 * k - 4) - 4 * k ** (k - 1) * (k - 1) ** (3 * k - 4)
        + 4 * k ** (2 * k - 3) * (k - 1) ** (2 * k - 3) - 4 * k ** (3 * k - 4) * (k - 1) ** (k - 2)
        + 5 * k ** (4 * k - 8),
    },
    "m1": {
        "statement": lambda k: 4 * k ** (k - 2) * (k - 1) ** (3 * k - 4)
        - 8 * k ** (2 * k - 4) * (k - 1) ** (2 * k - 3) + 4 * k ** (3 * k - 6) * (k - 1) ** (k - 2),
        "proof": lambda k: 4 * k ** (k - 2) * (k - 1) ** (3 * k - 4)
        - 8 * k ** (2 * k - 4) * (k - 1) ** (2 * k - 3) + 4 * k ** (3 * k - 5) * (k - 1) ** (k - 2),
    },
    "m2": {
        "statement": lambda k: 4 * k ** (2 * k - 4) * (k - 1) ** (2 * k - 3)
        - 8 * k ** (3 * k - 6) * (k - 1) ** (k - 2) + 10 * k ** (4 * k - 9),
        "proof": lambda k: 4 * k ** (2 * k - 4) * (k - 1) ** (2 * k - 3)
        - 8 * k ** (3 * k - 5) * (k - 1) ** (k - 2) + 10 * k ** (4 * k - 9),
    },
    "m4": {
        "statement": lambda k: k ** (4 * k - 9),
        "proof": lambda k: k ** (4 * k - 9),
    },
    "m'": {
        "statement": lambda k: 4 * k ** (3 * k - 5) * (k - 1) ** (k - 2) - 8 * k ** (4 * k - 9),
        "proof": lambda k: 4 * k ** (3 * k - 6) * (k - 1) ** (k - 2) - 8 * k ** (4 * k - 9),
    },
}


@dataclass
class DiscrepancyRow:
    k: int
    name: str
    solved: int
    statement: int
    proof: int

    @property
    def verdict(self) -> str:
        s, p = self.solved == self.statement, self.solved == self.proof
        return {(True, True): "both", (True, False): "statement",
                (False, True): "proof", (False, False): "neither"}[(s, p)]

    def to_json(self) -> dict:
        return {"k": self.k, "multiplicity": self.name, "solved": str(self.solved),
                "statement": str(self.statement), "proof": str(self.proof),
                "matches": self.verdict}


def discrepancy_rows(ks: Sequence[int] = (4, 5),
                     names: Sequence[str] = ("m0", "m1", "m2", "m4", "m'")) -> list[DiscrepancyRow]:
    """Compare solved multiplicities with both printed variants of each formula."""
    rows = []
    for k in ks:
        m = charpoly_c4k(k)
        solved = {"m0": m.lambda_power, "m1": m.factors[0][1], "m2": m.factors[1][1],
                  "m4": m.factors[2][1], "m'": m.factors[3][1]}
        for name in names:
            f = PRINTED_FORMULAS[name]
            rows.append(DiscrepancyRow(k, name, solved[name], f["statement"](k), f["proof"](k)))
    return rows
