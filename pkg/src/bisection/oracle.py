"""Exhaustive reference solvers.

Assignments are enumerated as integers ``x`` where bit ``n-1-v`` is the
side of vertex ``v`` (1 = B), so integer order is lexicographic order of
the side vector and ``argmax``/``argmin`` return the lexicographically
smallest optimum.
"""
from __future__ import annotations

import numpy as np

from .graph import Bisection, Cut, Graph
from .treewidth import CutProfile

BISECTION_CAP = 24
MAXCUT_CAP = 24
PROFILE_CAP = 20
_CHUNK = 1 << 18


class OracleCapError(ValueError):
    pass


def _check_cap(g: Graph, cap: int):
    if g.n > cap:
        raise OracleCapError(f"brute force capped at n={cap}, got n={g.n}")


def _chunks(g: Graph):
    n = g.n
    total = 1 << n
    for start in range(0, total, _CHUNK):
        x = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        val = np.zeros(len(x), dtype=np.int64)
        for u, v, w in g.edges:
            val += w * (((x >> (n - 1 - u)) ^ (x >> (n - 1 - v))) & 1)
        yield x, val


def _popcount(x):
    c = np.zeros(len(x), dtype=np.int64)
    y = x.copy()
    while y.any():
        c += y & 1
        y >>= 1
    return c


def _side(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> (n - 1 - v)) & 1 for v in range(n))


def _enumerate(g: Graph, sign: int, balanced: bool):
    best_val, best_x = None, None
    for x, val in _chunks(g):
        if balanced:
            pc = _popcount(x)
            keep = np.abs(2 * pc - g.n) <= 1
            x, val = x[keep], val[keep]
        if not len(x):
            continue
        i = int(np.argmax(sign * val))
        if best_val is None or sign * val[i] > sign * best_val:
            best_val, best_x = int(val[i]), int(x[i])
    return best_val, best_x


def brute_bisection(g: Graph, objective: str = "max") -> tuple[int, Bisection]:
    """Optimum over all balanced assignments; ``objective`` is ``min`` or ``max``."""
    _check_cap(g, BISECTION_CAP)
    if objective not in ("min", "max"):
        raise ValueError(f"objective must be 'min' or 'max', got {objective!r}")
    if g.n == 0:
        return 0, Bisection((), 0)
    val, x = _enumerate(g, 1 if objective == "max" else -1, balanced=True)
    return val, Bisection(_side(x, g.n), val)


def brute_maxcut(g: Graph) -> tuple[int, Cut]:
    _check_cap(g, MAXCUT_CAP)
    if g.n == 0:
        return 0, Cut((), 0)
    val, x = _enumerate(g, 1, balanced=False)
    return val, Cut(_side(x, g.n), val)


def brute_profile(g: Graph) -> CutProfile:
    """``profile[d]`` = best cut with exactly ``d`` vertices on side A."""
    _check_cap(g, PROFILE_CAP)
    best = np.full(g.n + 1, np.iinfo(np.int64).min, dtype=np.int64)
    for x, val in _chunks(g):
        d = g.n - _popcount(x)
        np.maximum.at(best, d, val)
    return CutProfile(tuple(int(v) for v in best))
