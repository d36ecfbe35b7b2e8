from fractions import Fraction

import pytest

from hypertrace.errors import ConsistencyError, ResourceError
from hypertrace.exact import PHI_MINUS, PHI_PLUS, Quad5, det_cofactor
from hypertrace.hypergraph import BaseGraph, build_hypercycle, cycle_graph, path_graph
from hypertrace.spectra import (
    charpoly_by_interpolation,
    charpoly_c4k,
    charpoly_integer,
    discrepancy_rows,
    lucas_pair_sum,
    schur_assemble,
    signed_subgraph_classes,
    solve_multiplicities,
    total_degree_c4k,
)
from hypertrace.trace import trace_closed_c4k, trace_matrix_oracle, trace_structured


def closed_traces(k):
    return [trace_closed_c4k(k, d) for d in range(1, 5)]


def charpoly_by_expansion(A):
    """det(x I - A) via Laplace expansion over polynomial entries (ascending coefficient lists)."""
    n = len(A)

    def padd(p, q):
        size = max(len(p), len(q))
        return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(size)]

    def pmul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    class P:
        def __init__(self, c):
            self.c = c

        def __mul__(self, o):
            return P(pmul(self.c, o.c if isinstance(o, P) else [o]))

        __rmul__ = __mul__

        def __add__(self, o):
            return P(padd(self.c, o.c if isinstance(o, P) else [o]))

        __radd__ = __add__

        def __neg__(self):
            return P([-x for x in self.c])

        def __sub__(self, o):
            return self + (-o)

        def __eq__(self, o):
            return o == 0 and not any(self.c)

    M = [[P([-A[i][j], 1]) if i == j else P([-A[i][j]]) for j in range(n)] for i in range(n)]
    c = det_cofactor(M).c
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return list(reversed(c))


# --- Schur assembly

def test_schur_zero_traces():
    assert schur_assemble([0] * 5, 5) == [1, 0, 0, 0, 0, 0]


def test_schur_c4():
    assert schur_assemble([0, 8, 0, 32], 4) == [1, 0, -4, 0, 0]


def test_schur_p2():
    assert schur_assemble([0, 2], 2) == [1, 0, -1]


@pytest.mark.parametrize("G", [cycle_graph(4), path_graph(2), path_graph(3), path_graph(4),
                               cycle_graph(3), cycle_graph(5)], ids=["C4", "P2", "P3", "P4", "C3", "C5"])
def test_schur_reproduces_determinant(G):
    A = G.adjacency()
    traces = [trace_matrix_oracle(G, j) for j in range(1, G.n + 1)]
    expected = charpoly_by_expansion(A)
    assert schur_assemble(traces, G.n) == [Fraction(c) for c in expected]
    assert charpoly_by_interpolation(A) == expected
    assert charpoly_integer(A) == expected


def test_p4_polynomial():
    assert charpoly_by_expansion(path_graph(4).adjacency()) == [1, 0, -3, 0, 1]


# --- signed subgraphs

def test_classes_c4_k4():
    s = signed_subgraph_classes(cycle_graph(4), 4)
    assert set(s.values) == {Quad5(0), Quad5(1), Quad5(2), Quad5(4), PHI_PLUS, PHI_MINUS}
    assert len(s) == 6


def test_classes_c4_k3():
    s = signed_subgraph_classes(cycle_graph(4), 3)
    assert set(s.values) == {Quad5(0), Quad5(1), Quad5(2), Quad5(4)}


@pytest.mark.parametrize("k", [3, 4, 7])
def test_classes_p2(k):
    assert set(signed_subgraph_classes(path_graph(2), k).values) == {Quad5(0), Quad5(1)}


@pytest.mark.parametrize("G", [cycle_graph(4), path_graph(4), cycle_graph(5), path_graph(3)])
@pytest.mark.parametrize("k", [3, 4])
def test_classes_conjugation_closed(G, k):
    assert signed_subgraph_classes(G, k).is_conjugation_closed()


def test_classes_reject_irrational_outside_field():
    # K4 minus an edge: eigenvalues (1 +- sqrt17)/2
    G = BaseGraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (3, 4)))
    with pytest.raises(ValueError, match="outside"):
        signed_subgraph_classes(G, 4)


def test_classes_size_limit():
    with pytest.raises(ResourceError):
        signed_subgraph_classes(cycle_graph(7), 4)


# --- multiplicities

@pytest.mark.parametrize("d,expected", [(0, 2), (1, 3), (4, 47)])
def test_lucas_examples(d, expected):
    assert lucas_pair_sum(d) == expected


def test_lucas_sequence():
    assert [lucas_pair_sum(d) for d in range(6)] == [2, 3, 7, 18, 47, 123]


def test_solve_k4():
    m = solve_multiplicities(4, closed_traces(4))
    assert m.as_tuple() == (1179332, 69696, 117760, 16384, 16384)
    assert m.m4 == 4 ** 7


def test_solve_k3():
    assert solve_multiplicities(3, closed_traces(3)).as_tuple() == (493, 24, 126, 27, 0)


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_m4_power_law(k):
    m = solve_multiplicities(k, closed_traces(k))
    if k >= 4:
        assert m.m4 == k ** (4 * k - 9)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_power_sum_reproduction_from_structured(k):
    if k == 5:
        traces = closed_traces(k)
    else:
        H = build_hypercycle(4, k)
        traces = [int(trace_structured(H, d * k).value) for d in range(1, 5)]
        assert traces == closed_traces(k)
    m = solve_multiplicities(k, traces)
    for d in range(1, 5):
        L = lucas_pair_sum(d)
        assert k * (m.m1 + 2 ** d * m.m2 + 4 ** d * m.m4 + L * m.mp) == traces[d - 1]
    assert m.m0 + k * (m.m1 + m.m2 + m.m4 + 2 * m.mp) == 4 * (k - 1) ** (4 * k - 4)


def test_inconsistent_traces_rejected():
    bad = closed_traces(4)
    bad[2] += 4
    with pytest.raises(ConsistencyError):
        solve_multiplicities(4, bad)


def test_charpoly_k4():
    p = charpoly_c4k(4)
    assert p.lambda_power == 1179332
    assert [m for _, m in p.factors] == [69696, 117760, 16384, 16384, 16384]
    assert [r for r, _ in p.factors] == [1, 2, 4, PHI_PLUS, PHI_MINUS]
    assert p.status == "verified"
    assert p.degree == total_degree_c4k(4)


def test_charpoly_k3():
    p = charpoly_c4k(3)
    assert p.lambda_power == 493
    assert [m for _, m in p.factors] == [24, 126, 27, 0, 0]
    assert p.degree == 1024 == 8 * 2 ** 7
    assert p.status == "extrapolated" and p.note


def test_charpoly_json():
    obj = charpoly_c4k(4).to_json()
    assert obj["lambda_power"] == "1179332"
    assert obj["factors"][3] == {"root": {"a": "3/2", "b": "1/2"}, "mult": "16384"}
    assert obj["degree"] == str(4 * 3 ** 12)


def test_discrepancy_rows_k4():
    rows = {r.name: r for r in discrepancy_rows((4,))}
    assert rows["m4"].verdict == "both"
    assert all(r.solved == v for r, v in zip(
        [rows[n] for n in ("m0", "m1", "m2", "m4", "m'")],
        solve_multiplicities(4, closed_traces(4)).as_tuple()))
    for r in rows.values():
        assert r.verdict in {"statement", "proof", "both", "neither"}
