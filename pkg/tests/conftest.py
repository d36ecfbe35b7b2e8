from collections import Counter
from itertools import combinations_with_replacement

import pytest

from hypertrace.digraph import MultiDigraph
from hypertrace.hypergraph import build_hypercycle


def atom_digraphs(H, max_arcs):
    """Arc multisets of every multiset of rooted edges of H with at most max_arcs arcs."""
    pairs = [(v, i) for i, e in enumerate(H.edges) for v in e]
    max_atoms = max_arcs // (H.k - 1)
    seen = {}
    for size in range(1, max_atoms + 1):
        for combo in combinations_with_replacement(pairs, size):
            arcs = Counter()
            for v, i in combo:
                for w in H.edges[i]:
                    if w != v:
                        arcs[(v, w)] += 1
            D = MultiDigraph(dict(arcs))
            seen.setdefault(D.key(), D)
    return list(seen.values())


@pytest.fixture(scope="session")
def c43_digraphs():
    return atom_digraphs(build_hypercycle(4, 3), 8)


@pytest.fixture(scope="session")
def c43_digraphs_12():
    return atom_digraphs(build_hypercycle(4, 3), 12)


# acceptance criteria report -------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split("_")[2])):
        number = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        verdict = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {label}")
