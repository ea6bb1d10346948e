"""Experiment tables: run algorithms on dataset families and report sizes.

Every decomposition is checked with :func:`pairdecomp.core.validate`
before its size enters a table; a failed check aborts the run.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from .abc_euclid import build_abc_euclid
from .abc_metric import build_abc_metric
from .core import DistanceOracle, PairDecomposition, PointSet, to_fraction, validate
from .datasets import DatasetSpec, generate
from .exact_oracle import DEFAULT_NODE_LIMIT, exact_min_cover
from .one_dim import (
    ck_wspd_1d,
    cleanup,
    cover_to_decomposition,
    cover_to_partition,
    greedy_cover,
    sweep3_cover,
)
from .wspd_doubling import build_net_tree, build_wspd_doubling

__all__ = [
    "ALGORITHMS",
    "CSV_COLUMNS",
    "ValidationError",
    "ExperimentRow",
    "ExperimentTable",
    "run_algorithm",
    "run_experiment",
]

# algorithm name -> table column
ALGORITHMS = {
    "greedy": "Greedy",
    "ck-wspd": "WSPD",
    "aprx3": "Aprx3",
    "aprx3c": "Aprx3C",
    "exact": "Exact",
    "partition": "Partition",
    "abc-metric": "ABC_metric",
    "abc-euclid": "ABC_euclid",
    "wspd-doubling": "WSPD_doubling",
}
ONE_DIM = ("greedy", "ck-wspd", "aprx3", "aprx3c", "exact", "partition")
CSV_COLUMNS = ("n", "N", "Greedy", "WSPD", "Aprx3", "Aprx3C", "Exact", "Exact_LB")
_COVERS = ("exact", "aprx3c", "greedy", "aprx3")  # partition source preference


class ValidationError(RuntimeError):
    """A produced decomposition failed validation."""


@dataclass
class ExperimentRow:
    n: int
    N: int
    sizes: dict = field(default_factory=dict)
    runtimes: dict = field(default_factory=dict)
    exact_status: str | None = None
    exact_lb: int | None = None
    results: dict = field(default_factory=dict)  # algorithm -> decomposition or cover
    diagnostics: dict = field(default_factory=dict)


def _check(W: PairDecomposition, P: PointSet, oracle, eps, name: str, kind=None):
    rep = validate(P, W, oracle=oracle, eps=eps, kind=kind)
    if not rep.ok:
        where = rep.violations[0] if rep.violations else "coverage"
        raise ValidationError(f"{name}: validation failed ({where}); "
                              f"histogram {rep.multiplicity_histogram}")
    return rep


def run_algorithm(name: str, P: PointSet, eps, row: ExperimentRow, budget: int = DEFAULT_NODE_LIMIT):
    """Run one algorithm, validate its output and record it in ``row``."""
    if name not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    if name in ONE_DIM and not P.exact:
        raise ValueError(f"{name} needs points on the line")
    oracle = DistanceOracle.from_points(P)
    t0 = time.perf_counter()
    cover = None
    if name == "greedy":
        cover = greedy_cover(P, eps)
    elif name == "aprx3":
        cover = sweep3_cover(P, eps)
    elif name == "aprx3c":
        cover = cleanup(sweep3_cover(P, eps), P)
    elif name == "exact":
        res = exact_min_cover(P, eps, budget=budget)
        cover = res.cover
        row.exact_status, row.exact_lb = res.status, res.lower_bound
    elif name == "ck-wspd":
        W = ck_wspd_1d(P, eps)
    elif name == "partition":
        src = next((row.results[a] for a in _COVERS if a in row.results), None)
        W = cover_to_partition(P, src if src is not None else greedy_cover(P, eps))
    elif name == "abc-metric":
        W = build_abc_metric(oracle, P.n, float(eps))
    elif name == "abc-euclid":
        diag = row.diagnostics.setdefault(name, {})
        W = build_abc_euclid(P, float(eps), diagnostics=diag)
    else:
        W = build_wspd_doubling(build_net_tree(oracle), float(eps),
                                stats=row.diagnostics.setdefault(name, {}))
    row.runtimes[name] = time.perf_counter() - t0

    if cover is not None:
        W = cover_to_decomposition(P, cover)
        row.results[name] = cover
        row.sizes[name] = len(cover)
    else:
        row.results[name] = W
        row.sizes[name] = W.size
    _check(W, P, oracle, eps, name)
    if W.kind == "abc":
        _check(W, P, oracle, eps, name, kind="sspd")
    return W


def _ordered(algorithms):
    # partition reuses a cover from the same row, so it runs last
    algos = list(dict.fromkeys(algorithms))
    return [a for a in algos if a != "partition"] + [a for a in algos if a == "partition"]


def run_experiment(specs, eps, algorithms, budget: int = DEFAULT_NODE_LIMIT) -> "ExperimentTable":
    """One validated row per dataset spec (typically one per ``n``).

    ``eps`` may be a decimal string; 1D algorithms use it as an exact
    rational.
    """
    if isinstance(specs, DatasetSpec):
        specs = [specs]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    exact_eps = to_fraction(eps)
    rows = []
    for spec in sorted(specs, key=lambda s: s.n):
        P = generate(spec)
        row = ExperimentRow(P.n, P.n * (P.n - 1) // 2)
        for a in _ordered(algorithms):
            run_algorithm(a, P, exact_eps if P.exact else float(exact_eps), row, budget)
        rows.append(row)
    return ExperimentTable(rows, [a for a in ALGORITHMS if a in algorithms], exact_eps)


@dataclass
class ExperimentTable:
    rows: list
    algorithms: list
    eps: object

    def _cells(self, row: ExperimentRow, algos):
        out = {"n": row.n, "N": row.N}
        for a in algos:
            out[ALGORITHMS[a]] = row.sizes.get(a, "")
        if "exact" in algos:
            out["Exact_LB"] = row.exact_lb
        return out

    def to_csv(self) -> str:
        """Exactly the columns n,N,Greedy,WSPD,Aprx3,Aprx3C,Exact,Exact_LB."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            cells = self._cells(row, [a for a in ALGORITHMS if a in self.algorithms])
            w.writerow([cells.get(c, "") if cells.get(c) is not None else "" for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_markdown(self) -> str:
        cols = ["n", "N"] + [ALGORITHMS[a] for a in self.algorithms]
        if "exact" in self.algorithms:
            cols.append("Exact_LB")
        lines = ["| " + " | ".join(cols) + " |", "|" + "---:|" * len(cols)]
        for row in self.rows:
            cells = self._cells(row, self.algorithms)
            if row.exact_status == "bound_only":
                cells["Exact"] = f"{cells['Exact']}*"
            lines.append("| " + " | ".join(str(cells.get(c, "")) for c in cols) + " |")
        if any(r.exact_status == "bound_only" for r in self.rows):
            lines.append("")
            lines.append("`*` search budget exhausted: best cover found, optimality not proven.")
        return "\n".join(lines) + "\n"

    def to_json(self, timings: bool = False) -> str:
        rows = []
        for row in self.rows:
            obj = {"n": row.n, "N": row.N,
                   "sizes": {ALGORITHMS[a]: row.sizes[a] for a in self.algorithms if a in row.sizes}}
            if "exact" in self.algorithms:
                obj["exact_status"] = row.exact_status
                obj["Exact_LB"] = row.exact_lb
            if row.diagnostics:
                obj["diagnostics"] = {ALGORITHMS[a]: d for a, d in sorted(row.diagnostics.items())}
            if timings:
                obj["runtimes"] = {ALGORITHMS[a]: round(t, 6) for a, t in row.runtimes.items()}
            rows.append(obj)
        return json.dumps({"eps": float(self.eps), "rows": rows}, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown table format {fmt!r}")
