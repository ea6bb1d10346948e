"""Deterministic point families for the experiments.

Random families draw from splitmix64 in counter mode: output ``k`` of seed
``s`` mixes ``s + (k + 1) * 0x9E3779B97F4A7C15 (mod 2^64)``.  Anything that
implements the same three-line mixer reproduces the point sets bit for bit.
Uniforms are ``(z >> 11) * 2^-53``; normals use Box-Muller on consecutive
pairs of uniforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import PointSet

__all__ = ["FAMILIES", "DatasetSpec", "splitmix64", "uniform01", "standard_normal", "generate"]

FAMILIES = ("uniform", "urandom", "normal", "squares", "cubes", "log", "logsq", "file", "euclid-random")

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class DatasetSpec:
    family: str
    n: int
    seed: int = 0
    dims: int = 1
    path: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")


def splitmix64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the splitmix64 stream for ``seed``."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + k * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniform01(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Floats in ``[0, 1)`` with 53 random bits each."""
    return (splitmix64(seed, count, start) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def standard_normal(seed: int, count: int, start: int = 0) -> np.ndarray:
    m = (count + 1) // 2
    u = uniform01(seed, 2 * m, 2 * start)
    u1 = 1.0 - u[0::2]  # (0, 1], keeps the log finite
    r = np.sqrt(-2.0 * np.log(u1))
    t = 2.0 * math.pi * u[1::2]
    return np.column_stack([r * np.cos(t), r * np.sin(t)]).ravel()[:count]


def _distinct_line(draw, n: int) -> PointSet:
    # the first n distinct values of the stream; duplicates are skipped
    seen, values, start = set(), [], 0
    while len(values) < n:
        for v in draw(n, start).tolist():
            if v not in seen:
                seen.add(v)
                values.append(v)
                if len(values) == n:
                    break
        start += n
    return PointSet.line([Fraction(v) for v in values])


def generate(spec: DatasetSpec) -> PointSet:
    """Point set of a family.

    ``log`` and ``logsq`` store the exact binary value of the float
    ``ln(i + 1)`` (squared in floating point for ``logsq``).
    """
    n = spec.n
    if n < 2:
        raise ValueError("need n >= 2")
    f = spec.family
    idx = range(1, n + 1)
    if f == "uniform":
        return PointSet.line(idx)
    if f == "squares":
        return PointSet.line(i * i for i in idx)
    if f == "cubes":
        return PointSet.line(i**3 for i in idx)
    if f == "log":
        return PointSet.line(Fraction(math.log(i + 1)) for i in idx)
    if f == "logsq":
        return PointSet.line(Fraction(math.log(i + 1) ** 2) for i in idx)
    if f == "urandom":
        return _distinct_line(lambda m, s: uniform01(spec.seed, m, s), n)
    if f == "normal":
        return _distinct_line(lambda m, s: standard_normal(spec.seed, m, s), n)
    if f == "euclid-random":
        if spec.dims < 1:
            raise ValueError("dims must be positive")
        return PointSet.euclidean(uniform01(spec.seed, n * spec.dims).reshape(n, spec.dims))
    # file
    if spec.path is None:
        raise ValueError("family 'file' needs a path")
    from .io import read_points

    P = read_points(spec.path)
    if P.n != n:
        raise ValueError(f"{spec.path} holds {P.n} points, expected {n}")
    return P
