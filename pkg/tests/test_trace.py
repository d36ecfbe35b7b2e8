import json

import pytest

from hypertrace.errors import ResourceError, UnsupportedShapeError
from hypertrace.hypergraph import (
    UniformHypergraph,
    build_hypercycle,
    build_power,
    cycle_graph,
    path_graph,
)
from hypertrace.trace import (
    estimate_tuple_count,
    root_assignments,
    trace_closed_c4k,
    trace_matrix_oracle,
    trace_naive,
    trace_structured,
)

C43 = build_hypercycle(4, 3)
C44 = build_hypercycle(4, 4)
C4 = cycle_graph(4)
P4 = path_graph(4)


def closed_by_hand(k, d):
    """Direct substitution into the four trace formulas, kept apart from the library."""
    t1 = 4 * k ** (k - 1) * (k - 1) ** (3 * k - 4)
    t2 = k ** (2 * k - 3) * (k - 1) ** (2 * k - 3)
    t3 = k ** (3 * k - 5) * (k - 1) ** (k - 2)
    t4 = k ** (4 * k - 8)
    return {1: t1, 2: t1 + 8 * t2, 3: t1 + 24 * t2 + 12 * t3, 4: t1 + 56 * t2 + 64 * t3 + 40 * t4}[d]


# --- closed forms

@pytest.mark.parametrize("k,d,expected", [(3, 1, 1152), (3, 3, 8280), (4, 4, 27672832)])
def test_closed_examples(k, d, expected):
    assert trace_closed_c4k(k, d) == expected


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_closed_matches_substitution(k, d):
    assert trace_closed_c4k(k, d) == closed_by_hand(k, d)


def test_closed_domain():
    with pytest.raises(ValueError):
        trace_closed_c4k(3, 5)
    with pytest.raises(ValueError):
        trace_closed_c4k(2, 1)


# --- matrix oracle

@pytest.mark.parametrize("j,expected", [(2, 8), (3, 0), (4, 32)])
def test_matrix_oracle_c4(j, expected):
    assert trace_matrix_oracle(C4, j) == expected


# --- naive

def test_naive_j1_is_zero_for_k3():
    assert trace_naive(C43, 1).value == 0
    assert trace_naive(build_power(P4, 4), 1).value == 0


def test_naive_c4_k2_j2():
    assert trace_naive(C4.as_hypergraph(), 2).value == 8


def test_naive_c43_j3():
    assert trace_naive(C43, 3).value == 1152


@pytest.mark.parametrize("G", [C4, P4, cycle_graph(3), path_graph(3)], ids=["C4", "P4", "C3", "P3"])
@pytest.mark.parametrize("j", range(1, 9))
def test_naive_matches_matrix_oracle(G, j):
    assert trace_naive(G.as_hypergraph(), j).value == trace_matrix_oracle(G, j)


@pytest.mark.parametrize("j", [1, 2, 4, 5])
def test_k_symmetry_c43(j):
    assert trace_naive(C43, j).value == 0


def test_naive_budget():
    with pytest.raises(ResourceError, match="structured"):
        trace_naive(C43, 12, budget=10**6)
    assert estimate_tuple_count(C43, 6) == 1489664


def test_naive_budget_from_env(monkeypatch):
    monkeypatch.setenv("HYPERTRACE_BUDGET", "1000")
    with pytest.raises(ResourceError):
        trace_naive(C43, 6)


def test_naive_on_power_of_path():
    # P_4^3 is not a hypercycle; only the naive engine applies
    H = build_power(P4, 3)
    r = trace_naive(H, 3)
    # three edges, each contributing k^(k-1)(k-1)^(n-k) as in a lone edge
    assert r.value == 3 * 3 ** 2 * 2 ** (H.n - 3)


# --- structured

def test_structured_examples():
    assert trace_structured(C43, 6).value == 2880
    assert trace_structured(C43, 12).value == 26856
    assert trace_structured(C44, 4).value == 1679616


def test_structured_zero_when_k_does_not_divide_j():
    assert trace_structured(C43, 4).value == 0
    assert trace_structured(C43, 4).patterns == []


@pytest.mark.parametrize("j", [3, 6])
def test_engines_agree_c43(j):
    naive = trace_naive(C43, j)
    struct = trace_structured(C43, j)
    assert naive.value == struct.value
    # both group tuples by (vertex, edge) root counts, so the breakdowns line up
    assert [p.to_json() for p in naive.patterns] == [p.to_json() for p in struct.patterns]


def test_engines_agree_c33():
    H = build_hypercycle(3, 3)
    assert trace_naive(H, 3).value == trace_structured(H, 3).value


@pytest.mark.parametrize("k", [3, 4])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_structured_matches_closed(k, d):
    assert trace_structured(build_hypercycle(4, k), d * k).value == trace_closed_c4k(k, d)


@pytest.mark.parametrize("m,j", [(4, 2), (4, 4), (4, 6), (5, 5), (3, 3), (6, 6), (3, 4)])
def test_structured_k2_cycles_match_matrix(m, j):
    assert trace_structured(build_hypercycle(m, 2), j).value == trace_matrix_oracle(cycle_graph(m), j)


def test_structured_rejects_non_hypercycle():
    with pytest.raises(UnsupportedShapeError):
        trace_structured(build_power(P4, 3), 3)
    with pytest.raises(UnsupportedShapeError):
        trace_structured(UniformHypergraph(3, 3, ((1, 2, 3),)), 3)


def test_pattern_invariants():
    r = trace_structured(C44, 12)
    k = 4
    for rec in r.patterns:
        usage = rec.pattern.usage
        assert all(u % k == 0 for u in usage)
        per_edge = {}
        for v, e, cnt in rec.pattern.roots:
            per_edge[e] = per_edge.get(e, 0) + cnt
        assert all(per_edge.get(e, 0) == u for e, u in enumerate(usage))
        for v, total in rec.pattern.root_counts().items():
            occ = sum(usage[e] for e in C44.incident_edges(v))
            assert occ == k * total


def test_single_edge_root_assignment_is_forced():
    assignments = root_assignments(C43, (3, 0, 0, 0))
    assert assignments == [((1, 0, 1), (2, 0, 1), (3, 0, 1))]


def test_report_values_are_nonnegative_integers():
    for d in range(1, 5):
        v = trace_structured(C44, 4 * d).value
        assert v >= 0 and v.denominator == 1


def test_report_sums_contributions():
    r = trace_structured(C43, 9)
    assert sum(p.contribution for p in r.patterns) == r.value


def test_report_json_shape():
    obj = trace_structured(C43, 6).to_json()
    assert obj["value"] == "2880" and obj["engine"] == "structured"
    keys = {"usage", "roots", "count", "b", "c", "walks", "contribution"}
    assert all(keys <= set(p) for p in obj["patterns"])
    json.dumps(obj)


def test_structured_deterministic_across_workers():
    one = json.dumps(trace_structured(C44, 12, workers=1).to_json())
    many = json.dumps(trace_structured(C44, 12, workers=3).to_json())
    assert one == many


def test_extrapolated_status():
    assert trace_structured(build_hypercycle(5, 3), 6).status == "extrapolated"
    assert trace_structured(C43, 15).status == "extrapolated"
    assert trace_structured(C43, 12).status == "verified"
