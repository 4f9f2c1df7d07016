"""Max/Min Bisection by dynamic programming over a nice tree decomposition.

A table at node ``i`` stores, for every subset ``S`` of the bag (as a bit
mask over the sorted bag) and every ``d`` in ``[0, |V_i|]``, the best cut
weight inside ``G[V_i]`` over sets ``A_i`` with ``A_i & X_i == S`` and
``|A_i| == d``. States with no such ``A_i`` are unreachable; they are kept
in a separate boolean mask and their value slot is pinned to 0, so no
sentinel ever enters the arithmetic.

Join nodes combine the children by looping over the children's own
d-ranges (a (max,+) product of the two rows), which is what keeps the total
work quadratic in the number of bag labels instead of cubic in ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .decomposition import (NiceDecomposition, NodeKind, heuristic_td,
                            make_nice, subtree_counts)
from .graph import A, B, Bisection, Graph


class _Unreachable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __bool__(self):
        return False


UNREACHABLE = _Unreachable()


@lru_cache(maxsize=None)
def _bits(b: int) -> np.ndarray:
    bits = ((np.arange(1 << b)[:, None] >> np.arange(b)) & 1).astype(np.int64)
    bits.setflags(write=False)
    return bits


def _bag_matrix(g: Graph, bag: Sequence[int]) -> np.ndarray:
    W = np.zeros((len(bag), len(bag)), dtype=np.int64)
    for i, u in enumerate(bag):
        for j in range(i + 1, len(bag)):
            W[i, j] = W[j, i] = g.weight(u, bag[j])
    return W


def bag_cut_weights(g: Graph, bag: Sequence[int]) -> np.ndarray:
    """``w(S, X \\ S)`` for every mask ``S`` over ``bag``, via per-vertex marginals."""
    bits = _bits(len(bag))
    W = _bag_matrix(g, bag)
    into = bits @ W                      # into[S, j] = w(S, {j})
    return (bits * (W.sum(axis=0) - into)).sum(axis=1)


@dataclass
class DPTable:
    bag: tuple[int, ...]
    values: np.ndarray       # int64, shape (2**len(bag), |V_i| + 1)
    reachable: np.ndarray    # bool, same shape

    @property
    def size(self) -> int:
        """``|V_i|``, the largest admissible ``d``."""
        return self.values.shape[1] - 1

    def mask_of(self, subset) -> int:
        pos = {v: i for i, v in enumerate(self.bag)}
        mask = 0
        for v in subset:
            if v not in pos:
                raise KeyError(f"vertex {v} not in bag {self.bag}")
            mask |= 1 << pos[v]
        return mask

    def entry(self, subset, d: int):
        """Value of the state, or ``UNREACHABLE``."""
        mask = self.mask_of(subset)
        if not 0 <= d <= self.size or not self.reachable[mask, d]:
            return UNREACHABLE
        return int(self.values[mask, d])

    def _clean(self):
        self.values[~self.reachable] = 0
        return self


def leaf_table(bag: Sequence[int], g: Graph) -> DPTable:
    bag = tuple(sorted(bag))
    b = len(bag)
    pop = _bits(b).sum(axis=1)
    values = np.zeros((1 << b, b + 1), dtype=np.int64)
    reach = np.zeros_like(values, dtype=bool)
    rows = np.arange(1 << b)
    reach[rows, pop] = True
    values[rows, pop] = bag_cut_weights(g, bag)
    return DPTable(bag, values, reach)


def introduce_table(child: DPTable, v: int, g: Graph) -> DPTable:
    if v in child.bag:
        raise ValueError(f"vertex {v} already in child bag {child.bag}")
    bag = tuple(sorted(child.bag + (v,)))
    p = bag.index(v)
    b = len(bag)
    masks = np.arange(1 << b)
    child_mask = (masks & ((1 << p) - 1)) | ((masks >> (p + 1)) << p)
    has_v = ((masks >> p) & 1).astype(bool)
    wv = np.array([g.weight(v, u) for u in bag], dtype=np.int64)
    to_s = _bits(b) @ wv                 # w({v}, S); wv[p] == 0
    to_rest = wv.sum() - to_s            # w({v}, X \ S)

    cv, cr = child.values[child_mask], child.reachable[child_mask]
    size = child.size + 1
    values = np.zeros((1 << b, size + 1), dtype=np.int64)
    reach = np.zeros_like(values, dtype=bool)
    out = ~has_v
    values[out, :size] = cv[out] + to_s[out, None]
    reach[out, :size] = cr[out]
    values[has_v, 1:] = cv[has_v] + to_rest[has_v, None]
    reach[has_v, 1:] = cr[has_v]
    return DPTable(bag, values, reach)._clean()


def _forget(child: DPTable, v: int):
    if v not in child.bag:
        raise ValueError(f"vertex {v} not in child bag {child.bag}")
    p = child.bag.index(v)
    bag = child.bag[:p] + child.bag[p + 1:]
    masks = np.arange(1 << len(bag))
    lo = (masks & ((1 << p) - 1)) | ((masks >> p) << (p + 1))
    hi = lo | (1 << p)
    v0, r0 = child.values[lo], child.reachable[lo]
    v1, r1 = child.values[hi], child.reachable[hi]
    take_v = r1 & (~r0 | (v1 > v0))      # ties keep v out of A
    table = DPTable(bag, np.where(take_v, v1, v0), r0 | r1)._clean()
    return table, take_v


def forget_table(child: DPTable, v: int) -> DPTable:
    return _forget(child, v)[0]


class _Counter:
    def __init__(self):
        self.pairs = 0


def _join(left: DPTable, right: DPTable, g: Graph, counter: _Counter | None = None):
    if left.bag != right.bag:
        raise ValueError(f"join bag mismatch: {left.bag} vs {right.bag}")
    bag = left.bag
    b = len(bag)
    sj, sk = left.size, right.size
    rows = 1 << b
    conv = np.zeros((rows, sj + sk + 1), dtype=np.int64)
    creach = np.zeros(conv.shape, dtype=bool)
    arg = np.zeros(conv.shape, dtype=np.int32)
    if sj <= sk:
        for dl in range(sj + 1):
            cand = left.values[:, dl:dl + 1] + right.values
            cr = left.reachable[:, dl:dl + 1] & right.reachable
            cur, curr = conv[:, dl:dl + sk + 1], creach[:, dl:dl + sk + 1]
            better = cr & (~curr | (cand > cur))
            cur[better] = cand[better]
            curr |= cr
            arg[:, dl:dl + sk + 1][better] = dl
    else:
        dls = np.arange(sj + 1, dtype=np.int32)[None, :]
        for dr in range(sk + 1):
            cand = left.values + right.values[:, dr:dr + 1]
            cr = left.reachable & right.reachable[:, dr:dr + 1]
            cur, curr = conv[:, dr:dr + sj + 1], creach[:, dr:dr + sj + 1]
            cura = arg[:, dr:dr + sj + 1]
            better = cr & (~curr | (cand > cur) | ((cand == cur) & (dls < cura)))
            cur[better] = cand[better]
            curr |= cr
            cura[better] = np.broadcast_to(dls, better.shape)[better]
    if counter is not None:
        counter.pairs += rows * (sj + 1) * (sk + 1)

    size = sj + sk - b
    pop = _bits(b).sum(axis=1)
    idx = np.arange(size + 1)[None, :] + pop[:, None]   # d' + d'' = d + |S|
    values = np.take_along_axis(conv, idx, axis=1) - bag_cut_weights(g, bag)[:, None]
    reach = np.take_along_axis(creach, idx, axis=1)
    return DPTable(bag, values, reach)._clean(), np.take_along_axis(arg, idx, axis=1)


def join_table(left: DPTable, right: DPTable, g: Graph) -> DPTable:
    return _join(left, right, g)[0]


def join_table_cubic(left: DPTable, right: DPTable, g: Graph) -> DPTable:
    """Reference join: for each ``d`` scan ``d'`` in ``[|S|, d]`` independently.

    Cubic overall; kept only to cross-check :func:`join_table`.
    """
    if left.bag != right.bag:
        raise ValueError(f"join bag mismatch: {left.bag} vs {right.bag}")
    b = len(left.bag)
    sj, sk = left.size, right.size
    size = sj + sk - b
    cut = bag_cut_weights(g, left.bag)
    values = np.zeros((1 << b, size + 1), dtype=np.int64)
    reach = np.zeros(values.shape, dtype=bool)
    for S in range(1 << b):
        s = bin(S).count("1")
        for d in range(size + 1):
            best = None
            for dl in range(s, d + 1):
                dr = d - dl + s
                if dl > sj or dr > sk:
                    continue
                if left.reachable[S, dl] and right.reachable[S, dr]:
                    val = int(left.values[S, dl]) + int(right.values[S, dr]) - int(cut[S])
                    if best is None or val > best:
                        best = val
            if best is not None:
                values[S, d] = best
                reach[S, d] = True
    return DPTable(left.bag, values, reach)


# ---------------------------------------------------------------- driver

@dataclass
class DPStats:
    nodes: int = 0
    joins: int = 0
    width: int = -1
    join_pairs: int = 0          # (d', d'') candidate evaluations done by join loops


@dataclass
class DPRun:
    nd: NiceDecomposition
    root: DPTable
    stats: DPStats
    choices: list = field(default_factory=list)
    tables: list | None = None


def run_dp(g: Graph, nd: NiceDecomposition, *, keep_tables: bool = False,
           keep_choices: bool = True, cubic_join: bool = False) -> DPRun:
    """Evaluate every node bottom-up; children tables are dropped once used."""
    if nd.n != g.n:
        raise ValueError(f"decomposition is for {nd.n} vertices, graph has {g.n}")
    counter = _Counter()
    live: dict[int, DPTable] = {}
    choices = [None] * len(nd.nodes) if keep_choices else []
    tables = [] if keep_tables else None
    stats = DPStats(nodes=len(nd.nodes), width=nd.width)

    def take(c):
        return tables[c] if keep_tables else live.pop(c)

    for i, x in enumerate(nd.nodes):
        choice = None
        if x.kind is NodeKind.LEAF:
            t = leaf_table(x.bag, g)
        elif x.kind is NodeKind.INTRODUCE:
            t = introduce_table(take(x.children[0]), x.vertex, g)
        elif x.kind is NodeKind.FORGET:
            t, choice = _forget(take(x.children[0]), x.vertex)
        else:
            stats.joins += 1
            left, right = take(x.children[0]), take(x.children[1])
            if cubic_join:
                t = join_table_cubic(left, right, g)
            else:
                t, choice = _join(left, right, g, counter)
        if keep_choices:
            choices[i] = choice
        if keep_tables:
            tables.append(t)
        else:
            live[i] = t
    stats.join_pairs = counter.pairs
    root = tables[-1] if keep_tables else live.pop(len(nd.nodes) - 1)
    return DPRun(nd, root, stats, choices, tables)


def reconstruct(run: DPRun, d: int) -> tuple[int, ...]:
    """Walk the stored choices top-down from ``bs(root, {}, d)``."""
    nodes = run.nd.nodes
    side = [None] * run.nd.n
    stack = [(len(nodes) - 1, 0, d)]
    while stack:
        i, S, d = stack.pop()
        x = nodes[i]
        if x.kind is NodeKind.LEAF:
            for p, v in enumerate(x.bag):
                side[v] = A if (S >> p) & 1 else B
        elif x.kind is NodeKind.INTRODUCE:
            p = x.bag.index(x.vertex)
            bit = (S >> p) & 1
            side[x.vertex] = A if bit else B
            rest = (S & ((1 << p) - 1)) | ((S >> (p + 1)) << p)
            stack.append((x.children[0], rest, d - bit))
        elif x.kind is NodeKind.FORGET:
            p = nodes[x.children[0]].bag.index(x.vertex)
            bit = int(run.choices[i][S, d])
            side[x.vertex] = A if bit else B
            full = (S & ((1 << p) - 1)) | ((S >> p) << (p + 1)) | (bit << p)
            stack.append((x.children[0], full, d))
        else:
            dl = int(run.choices[i][S, d])
            s = bin(S).count("1")
            stack.append((x.children[0], S, dl))
            stack.append((x.children[1], S, d + s - dl))
    return tuple(side)


@dataclass(frozen=True)
class CutProfile:
    """``values[d]`` is the best cut with ``|A| == d`` (or ``UNREACHABLE``)."""

    values: tuple

    def __getitem__(self, d):
        return self.values[d]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def is_symmetric(self) -> bool:
        return all(self.values[d] == self.values[-1 - d] for d in range(len(self.values)))


def _profile_of(root: DPTable) -> CutProfile:
    return CutProfile(tuple(int(v) if r else UNREACHABLE
                            for v, r in zip(root.values[0], root.reachable[0])))


def _default_nice(g: Graph, nd):
    return nd if nd is not None else make_nice(heuristic_td(g), g)


@dataclass(frozen=True)
class TWResult:
    value: int
    bisection: Bisection | None
    stats: DPStats


def solve_max(g: Graph, nd: NiceDecomposition | None = None, *,
              reconstruct_solution: bool = True) -> TWResult:
    nd = _default_nice(g, nd)
    if g.n == 0:
        return TWResult(0, Bisection((), 0), DPStats(len(nd.nodes), 0, nd.width, 0))
    run = run_dp(g, nd, keep_choices=reconstruct_solution)
    best_d, best = None, None
    for d in sorted({g.n // 2, (g.n + 1) // 2}):
        if run.root.reachable[0, d] and (best is None or run.root.values[0, d] > best):
            best_d, best = d, int(run.root.values[0, d])
    if best is None:
        raise RuntimeError("no balanced state reachable; decomposition does not cover the graph")
    bis = Bisection(reconstruct(run, best_d), best) if reconstruct_solution else None
    return TWResult(best, bis, run.stats)


def solve_min(g: Graph, nd: NiceDecomposition | None = None, *,
              reconstruct_solution: bool = True) -> TWResult:
    res = solve_max(g.negated(), _default_nice(g, nd),
                    reconstruct_solution=reconstruct_solution)
    bis = Bisection(res.bisection.side, -res.value) if res.bisection is not None else None
    return TWResult(-res.value, bis, res.stats)


def max_bisection(g: Graph, nd: NiceDecomposition | None = None) -> tuple[int, Bisection]:
    res = solve_max(g, nd)
    return res.value, res.bisection


def min_bisection(g: Graph, nd: NiceDecomposition | None = None) -> tuple[int, Bisection]:
    res = solve_min(g, nd)
    return res.value, res.bisection


def cut_profile(g: Graph, nd: NiceDecomposition | None = None) -> CutProfile:
    nd = _default_nice(g, nd)
    if g.n == 0:
        return CutProfile((0,))
    return _profile_of(run_dp(g, nd, keep_choices=False).root)


class JoinCost(NamedTuple):
    total: int               # sum over joins of n_j * n_k
    bound: int               # (sum_i |X_i|)^2
    pair_evaluations: int    # what the join loops evaluate: sum 2^|X| (|V_j|+1)(|V_k|+1)


def join_cost_report(nd: NiceDecomposition) -> JoinCost:
    counts = subtree_counts(nd)
    total = pairs = 0
    for x in nd.nodes:
        if x.kind is NodeKind.JOIN:
            (vj, nj), (vk, nk) = counts[x.children[0]], counts[x.children[1]]
            total += nj * nk
            pairs += (1 << len(x.bag)) * (vj + 1) * (vk + 1)
    return JoinCost(total, nd.total_bag_size ** 2, pairs)
