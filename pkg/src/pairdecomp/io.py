"""Reading and writing point files, distance matrices and decompositions.

Point files hold one point per line with whitespace-separated decimal
coordinates; ``#`` starts a comment.  One column gives an exact point set
on the line.  Decompositions are JSON objects
``{"eps", "kind", "coverage", "pairs": [[ids, ids], ...]}``; covers by
shadow squares also carry ``"squares": [{"anchor": [a, b], "tau": t}]``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import Pair, PairDecomposition, PointSet, to_fraction

__all__ = [
    "read_points",
    "write_points",
    "read_matrix",
    "decomposition_to_json",
    "decomposition_from_json",
    "read_decomposition",
    "write_decomposition",
]


def _rows(path):
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def read_points(path) -> PointSet:
    rows = list(_rows(path))
    if not rows:
        raise ValueError(f"{path}: no points")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: rows have different numbers of coordinates")
    if widths == {1}:
        return PointSet.line(r[0] for r in rows)
    return PointSet.euclidean([[float(v) for v in r] for r in rows])


def write_points(P: PointSet, path):
    if P.exact:
        text = "".join(f"{_decimal(c)}\n" for c in P.coords)
    else:
        text = "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in P.coords)
    Path(path).write_text(text)


def _decimal(q: Fraction) -> str:
    """Shortest exact text for ``q``: an integer, a finite decimal or ``p/q``."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(twos, fives)
    digits = str(abs(q.numerator) * 10**k // q.denominator).rjust(k + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def read_matrix(path) -> np.ndarray:
    """Square distance matrix from a row-major text file."""
    rows = [[float(v) for v in r] for r in _rows(path)]
    m = np.array(rows, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{path}: expected a square matrix")
    return m


def decomposition_to_json(W: PairDecomposition, squares=None) -> str:
    # short decimals such as 0.1 survive the round trip: reading parses the
    # shortest repr as an exact decimal
    obj = {
        "eps": float(W.eps),
        "kind": W.kind,
        "coverage": W.coverage,
        "pairs": [[list(p.a), list(p.b)] for p in W.pairs],
    }
    if squares is not None:
        obj["squares"] = [s.to_json() for s in squares]
    return json.dumps(obj, indent=None, separators=(",", ":"))


def decomposition_from_json(text: str) -> PairDecomposition:
    # decimals stay strings so eps converts exactly
    obj = json.loads(text, parse_float=str)
    for key in ("eps", "kind", "coverage", "pairs"):
        if key not in obj:
            raise ValueError(f"decomposition JSON lacks {key!r}")
    pairs = [Pair(tuple(a), tuple(b)) for a, b in obj["pairs"]]
    return PairDecomposition(pairs, to_fraction(obj["eps"]), obj["kind"], obj["coverage"])


def read_decomposition(path) -> PairDecomposition:
    return decomposition_from_json(Path(path).read_text())


def write_decomposition(W: PairDecomposition, path, squares=None):
    Path(path).write_text(decomposition_to_json(W, squares) + "\n")
