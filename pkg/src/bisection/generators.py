"""Instance generators built from the hardness constructions, plus test families."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .decomposition import TreeDecomposition
from .graph import Graph

MAX_BIPARTITE_GADGET_N = 12


@dataclass(frozen=True)
class SequenceTriple:
    """Inputs ``a`` (n), ``b`` (n), ``c`` (2n) of the 3SUM-style problem."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        if len(self.a) < 1 or len(self.b) != len(self.a) or len(self.c) != 2 * len(self.a):
            raise ValueError(
                f"need lengths n, n, 2n with n >= 1; got {len(self.a)}, {len(self.b)}, {len(self.c)}")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def M(self) -> int:
        return max(abs(x) for x in self.a + self.b + self.c)

    @classmethod
    def from_json(cls, text: str) -> SequenceTriple:
        data = json.loads(text)
        return cls(data["a"], data["b"], data["c"])

    def to_json(self) -> str:
        return json.dumps({"a": list(self.a), "b": list(self.b), "c": list(self.c)})


def three_sum_witness(seq: SequenceTriple) -> tuple[int, int] | None:
    """1-based ``(i, j)`` with ``a_i + b_j + c_{i+j} <= 0``, or None. Plain double loop."""
    for i in range(1, seq.n + 1):
        for j in range(1, seq.n + 1):
            if seq.a[i - 1] + seq.b[j - 1] + seq.c[i + j - 1] <= 0:
                return i, j
    return None


def three_sum_feasible(seq: SequenceTriple) -> bool:
    return three_sum_witness(seq) is not None


def minplus_convolution_naive(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """``c_i = min_{1<=j<=i} a_j + b_{i-j+1}``, evaluated directly."""
    if len(a) != len(b):
        raise ValueError("sequences must have equal length")
    return [min(a[j] + b[i - j] for j in range(i + 1)) for i in range(len(a))]


@dataclass(frozen=True)
class PathGadget:
    graph: Graph
    W: int
    names: dict = field(compare=False)       # "x1", "s2", ... -> vertex id
    q_paths: tuple[tuple[int, ...], ...] = ()  # vertex ids of Q_1..Q_4 in path order
    seq: SequenceTriple | None = None

    @property
    def threshold(self) -> int:
        return 3 * self.W

    def names_json(self) -> str:
        return json.dumps({"W": self.W, "vertices": {k: v + 1 for k, v in self.names.items()}},
                          sort_keys=True)


def build_path_gadget(seq: SequenceTriple) -> PathGadget:
    """Weighted path whose min bisection is at most ``3W`` iff the triple is feasible.

    Layout along the path: Q1, (edge) P_a forward ending at s2, Q2 ending at
    y_{n+1}, P_b backward to y1, (edge) Q3 ending at z_{2n+1}, P_c backward to
    z1, (edge) Q4.
    """
    n = seq.n
    W = 4 * n * seq.M + 1
    heavy = 3 * W + 1
    order = []                 # vertex ids in path order
    weights = []               # weights[i] joins order[i] and order[i+1]
    names = {}
    q_paths = []

    def new(name=None):
        v = len(order)
        order.append(v)
        if name:
            names[name] = v
        return v

    def q_path(idx, length, start=None):
        vs = [start if start is not None else new()]
        for _ in range(length):
            weights.append(heavy)
            vs.append(new())
        names[f"s{idx}"], names[f"t{idx}"] = vs[0], vs[-1]
        q_paths.append(tuple(vs))
        return vs

    q_path(1, 100 * n - 1)
    weights.append(heavy)                          # t1 - x1
    for i in range(1, n + 2):
        if i > 1:
            weights.append(seq.a[i - 2] + W)
        new(f"x{i}")
    q_path(2, 55 * n - 1, start=names[f"x{n + 1}"])
    names[f"y{n + 1}"] = names["t2"]
    for i in range(n, 0, -1):
        weights.append(seq.b[i - 1] + W)
        new(f"y{i}")
    weights.append(heavy)                          # y1 - s3
    q_path(3, 10 * n - 1)
    names[f"z{2 * n + 1}"] = names["t3"]
    for i in range(2 * n, 0, -1):
        weights.append(seq.c[i - 1] + W)
        new(f"z{i}")
    weights.append(heavy)                          # z1 - s4
    q_path(4, 55 * n - 1)
    assert len(weights) == len(order) - 1
    g = Graph(len(order), tuple((i, i + 1, w) for i, w in enumerate(weights)))
    return PathGadget(g, W, names, tuple(q_paths), seq)


def path_decomposition(n: int) -> TreeDecomposition:
    """Width-1 decomposition of the path ``0 - 1 - ... - (n-1)``."""
    if n <= 1:
        return TreeDecomposition((frozenset(range(n)),))
    bags = tuple(frozenset((i, i + 1)) for i in range(n - 1))
    return TreeDecomposition(bags, tuple((i, i + 1) for i in range(n - 2)), 0)


def gadget_min_bisection(gadget: PathGadget, *, reconstruct_solution: bool = False):
    from .decomposition import make_nice
    from .treewidth import solve_min

    nd = make_nice(path_decomposition(gadget.graph.n), gadget.graph)
    return solve_min(gadget.graph, nd, reconstruct_solution=reconstruct_solution)


def gadget_equivalence(seq: SequenceTriple) -> bool:
    """Whether the gadget's min bisection is at most ``3W`` (via the treewidth DP)."""
    gadget = build_path_gadget(seq)
    return gadget_min_bisection(gadget).value <= gadget.threshold


def maxcut_to_maxbisection(g: Graph) -> Graph:
    """``g`` plus ``n`` isolated vertices: its max bisection equals the max cut of ``g``."""
    return g.with_isolated(g.n)


def circulant(m: int, offsets: Sequence[int]) -> Graph:
    edges = {(min(i, (i + o) % m), max(i, (i + o) % m)) for i in range(m) for o in offsets}
    return Graph.from_edges(m, sorted(edges))


def bipartite_gadget(g: Graph) -> Graph:
    """Subdivide every edge, then hang ``n^3`` pendants on each original vertex.

    ``g`` must be 4-regular on ``2n`` vertices. Ids: originals ``0..2n-1``,
    subdivision vertices next (in edge order), then pendants grouped by owner.
    """
    if g.n % 2 or g.n == 0:
        raise ValueError(f"need an even, positive vertex count, got {g.n}")
    if any(g.degree(v) != 4 for v in range(g.n)):
        raise ValueError("input graph is not 4-regular")
    half = g.n // 2
    if half > MAX_BIPARTITE_GADGET_N:
        raise ValueError(f"n={half} exceeds the cap {MAX_BIPARTITE_GADGET_N} (n^3 pendants each)")
    edges = []
    nxt = g.n
    for u, v, _ in g.edges:
        edges += [(u, nxt, 1), (nxt, v, 1)]
        nxt += 1
    for v in range(g.n):
        for _ in range(half ** 3):
            edges.append((v, nxt, 1))
            nxt += 1
    return Graph(nxt, tuple(edges))


def random_partial_ktree(n: int, k: int, edge_keep_prob: float = 1.0,
                         seed: int | None = None) -> tuple[Graph, TreeDecomposition]:
    """Random k-tree on ``n`` vertices with edges dropped independently.

    Returns the graph and the width-``k`` decomposition from the construction:
    one bag per added vertex holding it and the k-clique it was attached to.
    """
    if k < 0 or n < k + 1:
        raise ValueError(f"need n >= k + 1, got n={n}, k={k}")
    rng = random.Random(seed)
    bags = [frozenset(range(k + 1))]
    tree = []
    cliques = [(frozenset(c), 0) for c in combinations(range(k + 1), k)]
    edges = {(u, v) for u in range(k + 1) for v in range(u + 1, k + 1)}
    for v in range(k + 1, n):
        base, owner = cliques[rng.randrange(len(cliques))]
        bag_id = len(bags)
        bags.append(base | {v})
        tree.append((owner, bag_id))
        edges |= {(u, v) for u in base}
        if k > 0:
            cliques += [(frozenset(c) | {v}, bag_id) for c in combinations(sorted(base), k - 1)]
    kept = [(u, v) for u, v in sorted(edges) if rng.random() < edge_keep_prob]
    return Graph.from_edges(n, kept), TreeDecomposition(tuple(bags), tuple(tree), 0)


def random_graph(n: int, density: float, weights: tuple[int, int] = (1, 1),
                 seed: int | None = None, rng: random.Random | None = None) -> Graph:
    rng = rng or random.Random(seed)
    lo, hi = weights
    edges = [(u, v, rng.randint(lo, hi))
             for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    return Graph(n, tuple(edges))
