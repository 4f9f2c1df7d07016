"""Empirical scaling runs of the treewidth DP."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass, fields

from .decomposition import make_nice
from .generators import path_decomposition, random_partial_ktree
from .graph import Graph
from .treewidth import join_cost_report, solve_max

FAMILIES = ("path", "ktree")


@dataclass
class BenchRow:
    family: str
    n: int
    k: int
    width: int
    nodes: int
    joins: int
    time_s: float        # best of `repeat` DP runs, value only
    join_cost: int       # sum over joins of n_j * n_k
    join_bound: int      # (sum of bag sizes)^2
    join_pairs: int      # candidate pairs evaluated by the join loops
    value: int


CSV_COLUMNS = tuple(f.name for f in fields(BenchRow))


def instance(family: str, n: int, k: int, seed: int):
    if family == "path":
        g = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
        return g, path_decomposition(n)
    if family == "ktree":
        return random_partial_ktree(n, k, 0.8, seed)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def run_bench(family: str, ns, ks=(1,), seed: int = 0, repeat: int = 1) -> list[BenchRow]:
    rows = []
    for k in ks:
        for n in ns:
            g, td = instance(family, n, k, seed)
            nd = make_nice(td, g)
            best = None
            for _ in range(repeat):
                t0 = time.perf_counter()
                res = solve_max(g, nd, reconstruct_solution=False)
                elapsed = time.perf_counter() - t0
                best = elapsed if best is None else min(best, elapsed)
            cost = join_cost_report(nd)
            rows.append(BenchRow(family, n, 1 if family == "path" else k, nd.width,
                                 len(nd.nodes), res.stats.joins, round(best, 6),
                                 cost.total, cost.bound, res.stats.join_pairs, res.value))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(asdict(r))
    return buf.getvalue()
