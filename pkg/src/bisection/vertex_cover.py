"""Min/Max Bisection parameterized by a vertex cover.

For a cover ``C`` and a guess ``X = A & C``, the rest ``V \\ C`` is
independent, so every outside vertex ``v`` contributes independently:
``p_v = w(C \\ X, v) - w(X, v)`` if it joins A, nothing extra otherwise.
The best completion to ``|A| = a`` takes the ``a - |X|`` largest ``p_v``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import selection
from .graph import A, B, Bisection, Graph


@dataclass(frozen=True)
class VertexCoverResult:
    cover: frozenset

    @property
    def k(self) -> int:
        return len(self.cover)

    def covers(self, g: Graph) -> bool:
        return all(u in self.cover or v in self.cover for u, v, _ in g.edges)


def vertex_cover(g: Graph, k: int) -> VertexCoverResult | None:
    """A cover of size at most ``k``, or ``None`` if none exists.

    Bounded search: branch on an uncovered edge (take u, or take v). A vertex
    whose remaining degree exceeds the budget is forced into the cover, and a
    branch with more than ``budget**2`` remaining edges is cut off.
    """
    if k < 0:
        raise ValueError("budget must be non-negative")
    found = _branch([(u, v) for u, v, _ in g.edges], k)
    return None if found is None else VertexCoverResult(frozenset(found))


def _branch(edges, k):
    forced = []
    while True:
        if not edges:
            return forced
        if k <= 0:
            return None
        deg = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        # every vertex of degree > k is in any cover of size <= k, and stays
        # forced as the others are taken, so take them all at once
        heavy = sorted(x for x, d in deg.items() if d > k)
        if not heavy:
            break
        if len(heavy) > k:
            return None
        forced += heavy
        k -= len(heavy)
        hs = set(heavy)
        edges = [(u, v) for u, v in edges if u not in hs and v not in hs]
    if len(edges) > k * k:
        return None
    u, v = edges[0]
    for x in (u, v):
        sub = _branch([e for e in edges if x not in e], k - 1)
        if sub is not None:
            return forced + [x] + sub
    return None


def minimum_vertex_cover(g: Graph, max_k: int | None = None) -> VertexCoverResult | None:
    """Smallest cover found by raising the budget from 0."""
    limit = g.n if max_k is None else max_k
    for k in range(limit + 1):
        res = vertex_cover(g, k)
        if res is not None:
            return res
    return None


@dataclass(frozen=True)
class SideProfile:
    """Per-guess constants for a fixed ``X`` subset of the cover."""

    x: frozenset
    p: dict                 # v -> p_v for v outside the cover
    inner: int              # w(X, C \ X)
    base: int               # sum over outside v of w(X, {v})

    def completion_value(self, outside_a) -> int:
        return self.inner + self.base + sum(self.p[v] for v in outside_a)


def side_profile(g: Graph, cover: VertexCoverResult, x) -> SideProfile:
    x = frozenset(x)
    rest = cover.cover - x
    inner = sum(w for u, v, w in g.edges
                if (u in x and v in rest) or (v in x and u in rest))
    p, base = {}, 0
    for v in range(g.n):
        if v in cover.cover:
            continue
        to_x = sum(w for u, w in g.adjacency[v] if u in x)
        to_rest = sum(w for u, w in g.adjacency[v] if u in rest)
        p[v] = to_rest - to_x
        base += to_x
    return SideProfile(x, p, inner, base)


def _check_cover(g: Graph, cover: VertexCoverResult):
    if not cover.covers(g):
        raise ValueError("vertex set does not cover every edge")


# below this total |weight| every partial sum is exact in float64, so the
# big product can go through BLAS instead of numpy's integer matmul
FLOAT_EXACT = 1 << 53


def _group_best(masks, pop, k, M, Wc, targets, nout, method, Mf=None):
    """Best (value, mask, target) among masks sharing popcount ``pop``."""
    bits = ((masks[:, None] >> np.arange(k)) & 1).astype(np.int64)
    if Mf is not None:
        to_x = (bits.astype(np.float64) @ Mf).astype(np.int64)   # w(X, {v}) per outside v
    else:
        to_x = bits @ M
    p = M.sum(axis=0)[None, :] - 2 * to_x
    const = ((bits @ Wc) * (1 - bits)).sum(axis=1) + to_x.sum(axis=1)
    best = None
    for a in targets:
        m = a - pop
        if not 0 <= m <= nout:
            continue
        if m == 0:
            top = np.zeros(len(masks), dtype=np.int64)
        elif method == "numpy":
            top = np.partition(p, nout - m, axis=1)[:, nout - m:].sum(axis=1)
        else:
            top = np.array([selection.top_sum(row.tolist(), m, method) for row in p],
                           dtype=np.int64)
        vals = const + top
        i = int(np.argmax(vals))
        cand = (int(vals[i]), int(masks[i]), a)
        if best is None or _better(cand, best):
            best = cand
    return best


def _better(c, d):
    # larger value, then smaller mask, then smaller target
    return (c[0], -c[1], -c[2]) > (d[0], -d[1], -d[2])


def max_bisection_vc(g: Graph, cover: VertexCoverResult, *, method: str = "numpy",
                     threads: int = 1) -> tuple[int, Bisection]:
    """Exact Max Bisection in ``O(2^k k n)`` given a cover of size ``k``."""
    _check_cover(g, cover)
    if g.n == 0:
        return 0, Bisection((), 0)
    C = sorted(cover.cover)
    k = len(C)
    pos = {v: i for i, v in enumerate(C)}
    outside = [v for v in range(g.n) if v not in pos]
    opos = {v: i for i, v in enumerate(outside)}
    M = np.zeros((k, len(outside)), dtype=np.int64)
    Wc = np.zeros((k, k), dtype=np.int64)
    for u, v, w in g.edges:
        if u in pos and v in pos:
            Wc[pos[u], pos[v]] = Wc[pos[v], pos[u]] = w
        elif u in pos:
            M[pos[u], opos[v]] = w
        else:
            M[pos[v], opos[u]] = w
    targets = sorted({g.n // 2, (g.n + 1) // 2})
    groups = []
    for s in range(k + 1):
        masks = np.array(sorted(sum(1 << i for i in c) for c in combinations(range(k), s)),
                         dtype=np.int64)
        groups.append((masks, s))

    Mf = M.astype(np.float64) if sum(abs(w) for *_, w in g.edges) < FLOAT_EXACT else None

    def run(group):
        masks, s = group
        return _group_best(masks, s, k, M, Wc, targets, len(outside), method, Mf)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, groups))
    else:
        results = [run(gr) for gr in groups]
    best = None
    for r in results:
        if r is not None and (best is None or _better(r, best)):
            best = r
    value, mask, a = best

    x = {C[i] for i in range(k) if (mask >> i) & 1}
    prof = side_profile(g, cover, x)
    pvals = [prof.p[v] for v in outside]
    chosen = [outside[i] for i in selection.top_indices(pvals, a - len(x),
                                                        "quickselect" if method == "numpy" else method)]
    side = [B] * g.n
    for v in list(x) + chosen:
        side[v] = A
    assert prof.completion_value(chosen) == value
    return value, Bisection(tuple(side), value)


def min_bisection_vc(g: Graph, cover: VertexCoverResult, **kw) -> tuple[int, Bisection]:
    value, bis = max_bisection_vc(g.negated(), cover, **kw)
    return -value, Bisection(bis.side, -value)
