"""
Command-line entry point.

    hypertrace trace    --k 3 --d 2 --engine structured
    hypertrace charpoly --k 4
    hypertrace verify   --k 3 --max-d 2
    hypertrace verify   --oracle-k2 --graph c4 --max-j 8

Exit codes: 0 success, 1 usage, 2 resource limit, 3 mathematical inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, ResourceError, UnsupportedShapeError
from .hypergraph import BaseGraph, UniformHypergraph, build_hypercycle, build_power, named_graph
from .spectra import (
    DiscrepancyRow,
    charpoly_c4k,
    charpoly_by_interpolation,
    discrepancy_rows,
    lucas_pair_sum,
    multiplicity_system,
    schur_assemble,
    total_degree_c4k,
)
from .trace import (
    TraceReport,
    closed_report,
    default_budget,
    trace_closed_c4k,
    trace_matrix_oracle,
    trace_naive,
    trace_structured,
)

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INCONSISTENT = 0, 1, 2, 3
ENGINES = ("naive", "structured", "closed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    m: int = 4
    j: int | None = None
    d: int | None = None
    engine: str | None = None
    format: str = "json"
    threads: int = 1
    budget: int | None = None
    graph: str | None = None
    hypergraph: str | None = None
    max_d: int = 2
    max_j: int = 8
    oracle_k2: bool = False
    out: str | None = None

    def validate(self):
        if self.k is not None and self.k < 2:
            raise UsageError("--k must be at least 2")
        if self.m < 2:
            raise UsageError("--m must be at least 2")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.engine is not None and self.engine not in ENGINES + ("all",):
            raise UsageError(f"unknown engine {self.engine!r}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# trace

def _target_hypergraph(cfg: RunConfig) -> UniformHypergraph:
    if cfg.hypergraph:
        with open(cfg.hypergraph) as fh:
            return UniformHypergraph.from_json(json.load(fh))
    if cfg.k is None:
        raise UsageError("--k is required")
    if cfg.graph:
        G = named_graph(cfg.graph)
        return G.as_hypergraph() if cfg.k == 2 else build_power(G, cfg.k)
    return build_hypercycle(cfg.m, cfg.k)


def cmd_trace(cfg: RunConfig) -> tuple[int, str]:
    engine = cfg.engine or "structured"
    if engine == "all":
        raise UsageError("trace takes a single engine")
    if cfg.j is None and cfg.d is None:
        raise UsageError("give --j or --d")
    H = _target_hypergraph(cfg)
    k = H.k
    j = cfg.j if cfg.j is not None else cfg.d * k
    if engine == "closed":
        if cfg.hypergraph or cfg.graph or cfg.m != 4:
            raise UsageError("the closed engine covers only C_(4,k)")
        if j % k:
            report = TraceReport(k, j, "closed", Fraction(0), n=H.n)
        else:
            try:
                report = closed_report(k, j // k)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    elif engine == "naive":
        report = trace_naive(H, j, budget=cfg.budget)
        report.status = "verified" if (cfg.m == 4 and not cfg.graph and not cfg.hypergraph) else "extrapolated"
    else:
        report = trace_structured(H, j, workers=cfg.threads)
    if cfg.format == "json":
        return EXIT_OK, _dump(report.to_json())
    lines = [f"Tr_{j} (k={k}, n={H.n}, engine={report.engine}) = {report.value}  [{report.status}]"]
    for p in report.patterns:
        lines.append(
            f"  usage={list(p.pattern.usage)} count={p.count} b={p.b} c={p.c} "
            f"walks={p.walks} contribution={p.contribution}"
        )
    lines.append(f"  time {report.wall_time:.3f}s")
    return EXIT_OK, "\n".join(lines)


# ---------------------------------------------------------------------------
# charpoly

def _traces_for(k: int, engine: str, threads: int) -> list[int]:
    if engine == "structured":
        H = build_hypercycle(4, k)
        out = []
        for d in range(1, 5):
            v = trace_structured(H, d * k, workers=threads).value
            out.append(int(v))
        return out
    return [trace_closed_c4k(k, d) for d in range(1, 5)]


def cmd_charpoly(cfg: RunConfig) -> tuple[int, str]:
    if cfg.k is None:
        raise UsageError("--k is required")
    if cfg.k < 3:
        raise UsageError("charpoly needs --k >= 3")
    engine = cfg.engine or "closed"
    if engine not in ("closed", "structured"):
        raise UsageError("charpoly takes traces from the closed or structured engine")
    poly = charpoly_c4k(cfg.k, _traces_for(cfg.k, engine, cfg.threads))
    degree_ok = poly.degree == total_degree_c4k(cfg.k)
    if cfg.format == "json":
        obj = poly.to_json()
        obj["degree_identity"] = "pass" if degree_ok else "fail"
        return EXIT_OK, _dump(obj)
    lines = [
        f"phi_C(4,{cfg.k})(λ) = {poly}",
        f"degree {poly.degree} = 4(k-1)^(4k-4): {'pass' if degree_ok else 'FAIL'}",
        f"status: {poly.status}" + (f" ({poly.note})" if poly.note else ""),
    ]
    return EXIT_OK, "\n".join(lines)


# ---------------------------------------------------------------------------
# verify

@dataclass
class Check:
    name: str
    ok: bool | None       # None: skipped
    detail: str = ""

    @property
    def status(self) -> str:
        return {True: "pass", False: "FAIL", None: "skip"}[self.ok]


def _verify_oracle_k2(cfg: RunConfig) -> list[Check]:
    G: BaseGraph = named_graph(cfg.graph or "c4")
    H = G.as_hypergraph()
    checks = []
    traces = []
    for j in range(1, cfg.max_j + 1):
        naive = trace_naive(H, j, budget=cfg.budget).value
        oracle = trace_matrix_oracle(G, j)
        traces.append(oracle)
        checks.append(Check(f"{cfg.graph or 'c4'}: naive Tr_{j} = tr(A^{j})", naive == oracle,
                            f"{naive} vs {oracle}"))
    if cfg.max_j >= G.n:
        assembled = schur_assemble(traces, G.n)
        direct = charpoly_by_interpolation(G.adjacency())
        checks.append(Check(f"{cfg.graph or 'c4'}: power sums rebuild det(λI - A)",
                            assembled == [Fraction(c) for c in direct],
                            " ".join(str(c) for c in direct)))
    return checks


def _verify_hypercycle(cfg: RunConfig) -> tuple[list[Check], dict]:
    k, m = cfg.k, cfg.m
    H = build_hypercycle(m, k)
    engines = ENGINES if cfg.engine in (None, "all") else (cfg.engine,)
    checks: list[Check] = []
    values: dict[tuple[str, int], int] = {}
    budget = cfg.budget if cfg.budget is not None else default_budget()

    if k >= 3 and "naive" in engines:
        for j in range(1, k):
            try:
                v = trace_naive(H, j, budget=budget).value
                checks.append(Check(f"Tr_{j} = 0 (k does not divide j)", v == 0, str(v)))
            except ResourceError as exc:
                checks.append(Check(f"Tr_{j} = 0 (k does not divide j)", None, str(exc)))

    for d in range(1, cfg.max_d + 1):
        j = d * k
        if "closed" in engines and m == 4 and k >= 3 and d <= 4:
            values[("closed", d)] = trace_closed_c4k(k, d)
        if "structured" in engines:
            values[("structured", d)] = trace_structured(H, j, workers=cfg.threads).value
        if "naive" in engines:
            try:
                values[("naive", d)] = trace_naive(H, j, budget=budget).value
            except ResourceError as exc:
                checks.append(Check(f"naive Tr_{j}", None, f"budget: {exc}"))
        found = {e: values[(e, d)] for e in engines if (e, d) in values}
        if len(found) >= 2:
            distinct = set(found.values())
            detail = ", ".join(f"{e}={v}" for e, v in found.items())
            checks.append(Check(f"engines agree on Tr_{j}", len(distinct) == 1, detail))
        for e, v in found.items():
            ok = v >= 0 and Fraction(v).denominator == 1
            checks.append(Check(f"{e} Tr_{j} is a nonnegative integer", ok, str(v)))

    extra = {}
    if m == 4 and k >= 3 and (cfg.max_d >= 4 or cfg.engine == "closed"):
        source = "structured" if all(("structured", d) in values for d in range(1, 5)) else "closed"
        traces = [int(values[(source, d)]) if (source, d) in values else trace_closed_c4k(k, d)
                  for d in range(1, 5)]
        try:
            poly = charpoly_c4k(k, traces)
        except ConsistencyError as exc:
            checks.append(Check("multiplicity system consistent", False, str(exc)))
            return checks, extra
        mults = {"m0": poly.lambda_power, "m1": poly.factors[0][1], "m2": poly.factors[1][1],
                 "m4": poly.factors[2][1], "m'": poly.factors[3][1]}
        checks.append(Check(f"multiplicity system consistent ({source} traces)", True,
                            " ".join(f"{n}={v}" for n, v in mults.items())))
        checks.append(Check("degree identity m0 + k(m1+m2+m4+2m') = 4(k-1)^(4k-4)",
                            poly.degree == total_degree_c4k(k), str(poly.degree)))
        rows = multiplicity_system(k)
        sol = [mults["m1"], mults["m2"], mults["m4"], mults["m'"]]
        for d, row in enumerate(rows, start=1):
            rebuilt = k * sum(a * x for a, x in zip(row, sol))
            checks.append(Check(f"power sum reproduces Tr_{d * k}", rebuilt == traces[d - 1],
                                f"{rebuilt}"))
        checks.append(Check("conjugate classes share multiplicity",
                            poly.factors[3][1] == poly.factors[4][1]))
        extra["multiplicities"] = {n: str(v) for n, v in mults.items()}
    return checks, extra


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    checks: list[Check] = []
    extra: dict = {}
    if cfg.oracle_k2:
        checks.extend(_verify_oracle_k2(cfg))
    if cfg.k is not None:
        c, extra = _verify_hypercycle(cfg)
        checks.extend(c)
    if not cfg.oracle_k2 and cfg.k is None:
        raise UsageError("verify needs --k or --oracle-k2")
    checks.append(Check("pair power sums L_0..L_5 = 2,3,7,18,47,123",
                        [lucas_pair_sum(d) for d in range(6)] == [2, 3, 7, 18, 47, 123]))
    rows = discrepancy_rows((4, 5), ("m0", "m1", "m2", "m'"))
    failed = [c for c in checks if c.ok is False]
    code = EXIT_INCONSISTENT if failed else EXIT_OK
    if cfg.format == "json":
        obj = {
            "passed": not failed,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in checks],
            "discrepancies": [r.to_json() for r in rows],
        }
        obj.update(extra)
        return code, _dump(obj)
    width = max(len(c.name) for c in checks)
    lines = [f"{c.status:>4}  {c.name.ljust(width)}  {c.detail}".rstrip() for c in checks]
    lines.append("")
    lines.append("printed multiplicity formulas vs exact solve:")
    lines.extend(_discrepancy_lines(rows))
    lines.append("")
    if failed:
        lines.append("FAILED: " + "; ".join(c.name for c in failed))
    else:
        lines.append("all checks passed")
    return code, "\n".join(lines)


def _discrepancy_lines(rows: Sequence[DiscrepancyRow]) -> list[str]:
    out = [f"  {'k':>2} {'mult':<4} {'solved':>14} {'statement':>14} {'proof':>14}  matches"]
    for r in rows:
        out.append(f"  {r.k:>2} {r.name:<4} {r.solved:>14} {r.statement:>14} {r.proof:>14}  {r.verdict}")
    return out


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--k", type=int)
    common.add_argument("--m", type=int, default=4, help="hypercycle length (default 4)")
    common.add_argument("--engine", choices=ENGINES + ("all",))
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, help="naive enumeration budget (env HYPERTRACE_BUDGET)")
    common.add_argument("--graph", choices=("c4", "p2", "p3", "p4"))
    common.add_argument("--out", help="write output to this file")

    parser = _Parser(prog="hypertrace", description=__doc__.split("\n\n")[1].strip())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", parents=[common], help="compute one trace Tr_j")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--j", type=int)
    g.add_argument("--d", type=int, help="shorthand for j = d*k")
    p.add_argument("--hypergraph", help="JSON hypergraph file instead of a hypercycle")

    sub.add_parser("charpoly", parents=[common], help="factored characteristic polynomial of C_(4,k)")

    p = sub.add_parser("verify", parents=[common], help="run the cross-check matrix")
    p.add_argument("--max-d", type=int, default=2)
    p.add_argument("--max-j", type=int, default=8)
    p.add_argument("--oracle-k2", action="store_true")
    return parser


COMMANDS = {"trace": cmd_trace, "charpoly": cmd_charpoly, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = {f: getattr(args, f) for f in RunConfig.__dataclass_fields__ if hasattr(args, f)}
    cfg = RunConfig(**fields)
    try:
        cfg.validate()
        code, text = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"hypertrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"hypertrace: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConsistencyError as exc:
        print(f"hypertrace: inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (UnsupportedShapeError, ValueError, OSError) as exc:
        print(f"hypertrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
