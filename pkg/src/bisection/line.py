"""Max Bisection on (unweighted) line graphs via Euler tours of a root graph.

Root reconstruction searches for a Krausz partition: an edge-disjoint clique
cover of ``L`` with every vertex in at most two cliques. Fixing the clique
that contains one edge forces every other clique, and that clique has at
most ``|common neighbours| + 1`` candidates, so the search is a short loop
of deterministic propagations.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from .graph import A, B, Bisection, Graph


class NotLineGraphError(ValueError):
    pass


class WeightedLineGraphError(ValueError):
    pass


def line_graph(g: Graph) -> Graph:
    """``L(g)``; vertex ``i`` of the result is ``g.edges[i]``."""
    at = defaultdict(list)
    for i, (u, v, _) in enumerate(g.edges):
        at[u].append(i)
        at[v].append(i)
    pairs = {(min(e, f), max(e, f)) for inc in at.values() for e, f in combinations(inc, 2)}
    return Graph.from_edges(g.m, sorted(pairs))


@dataclass(frozen=True)
class RootGraph:
    graph: Graph
    vertex_to_edge: tuple[tuple[int, int], ...]   # L-vertex -> (u, v) in graph

    @property
    def edge_to_vertex(self) -> dict:
        return {e: i for i, e in enumerate(self.vertex_to_edge)}

    def clique_partition(self) -> list[frozenset]:
        """``C_v``: the L-vertices whose root edge touches ``v``, for each root vertex."""
        at = defaultdict(set)
        for i, (u, v) in enumerate(self.vertex_to_edge):
            at[u].add(i)
            at[v].add(i)
        return [frozenset(at[v]) for v in sorted(at)]

    def is_root_of(self, l: Graph) -> bool:
        if len(self.vertex_to_edge) != l.n:
            return False
        ends = [set(e) for e in self.vertex_to_edge]
        if len({frozenset(e) for e in ends}) != l.n:
            return False
        return all((bool(ends[i] & ends[j])) == l.has_edge(i, j)
                   for i in range(l.n) for j in range(i + 1, l.n))


def _components(n, adj):
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = len(out)
        members = [s]
        for x in members:
            for y in adj[x]:
                if comp[y] < 0:
                    comp[y] = comp[s]
                    members.append(y)
        out.append(sorted(members))
    return out


def _propagate(nbrs, first):
    """Extend ``first`` to a full clique partition of its component, or None."""
    owned = defaultdict(list)
    known = set()
    queue = []

    def add(clique):
        if clique in known:
            return True
        for a, b in combinations(clique, 2):
            if b not in nbrs[a]:
                return False
        for x in clique:
            owned[x].append(clique)
            if len(owned[x]) > 2:
                return False
        known.add(clique)
        queue.append(clique)
        return True

    if not add(first):
        return None
    while queue:
        clique = queue.pop()
        for x in clique:
            rest = nbrs[x] - clique
            other = [c for c in owned[x] if c != clique]
            if other:
                if rest != other[0] - {x}:
                    return None
            elif rest and not add(frozenset(rest | {x})):
                return None
    covered = set()
    for c in known:
        for a, b in combinations(sorted(c), 2):
            if (a, b) in covered:
                return None
            covered.add((a, b))
    return known


def _krausz(nbrs, members):
    if len(members) == 1:
        return []
    v0 = members[0]
    u = min(nbrs[v0])
    common = nbrs[v0] & nbrs[u]
    candidates = [frozenset({v0, u} | common)]
    candidates += [frozenset({v0, u} | (common - {w})) for w in sorted(common)]
    for first in candidates:
        found = _propagate(nbrs, first)
        if found is not None and set().union(*found) >= set(members):
            return sorted(found, key=lambda c: sorted(c))
    return None


def reconstruct_root(l: Graph) -> RootGraph:
    """Recover a root graph of ``l`` (any one, when several exist)."""
    nbrs = [frozenset(l.neighbors(v)) for v in range(l.n)]
    ends = [[] for _ in range(l.n)]
    next_vertex = 0
    for members in _components(l.n, nbrs):
        cliques = _krausz(nbrs, members)
        if cliques is None:
            raise NotLineGraphError(
                f"no Krausz partition for the component containing vertex {members[0]}")
        for c in cliques:
            for x in c:
                ends[x].append(next_vertex)
            next_vertex += 1
        for x in members:
            while len(ends[x]) < 2:
                ends[x].append(next_vertex)
                next_vertex += 1
    v2e = tuple((min(e), max(e)) for e in ends)
    root = Graph.from_edges(next_vertex, v2e)
    return RootGraph(root, v2e)


def root_from_graph(g: Graph) -> RootGraph:
    return RootGraph(g, tuple((u, v) for u, v, _ in g.edges))


def _euler_tour(adj, start, used):
    """Hierholzer with an explicit stack; returns edge ids in tour order."""
    ptr = defaultdict(int)
    stack = [(start, None)]
    tour = []
    while stack:
        x, via = stack[-1]
        nxt = adj[x]
        while ptr[x] < len(nxt) and used[nxt[ptr[x]][0]]:
            ptr[x] += 1
        if ptr[x] < len(nxt):
            eid, y = nxt[ptr[x]]
            used[eid] = True
            stack.append((y, eid))
        else:
            stack.pop()
            if via is not None:
                tour.append(via)
    tour.reverse()
    return tour


def euler_label(root: RootGraph) -> Bisection:
    """Bisection of ``L(root)`` from alternating labels along Euler tours.

    Each component of the root gets an extra vertex joined to its odd-degree
    vertices; the tour starts there (else at the smallest vertex) with label
    A. Components are normalized to imbalance 0 or +1, and half of the +1
    components (lowest ids first) are flipped.
    """
    edges = root.vertex_to_edge
    n_root = root.graph.n
    adj = defaultdict(list)
    for i, (u, v) in enumerate(edges):
        adj[u].append((i, v))
        adj[v].append((i, u))
    vadj = [[y for _, y in adj[x]] for x in range(n_root)]
    side = [None] * len(edges)
    positive = []
    for members in _components(n_root, vadj):
        if not adj[members[0]]:
            continue
        eid = len(edges)
        extra = ("r", members[0])
        start = members[0]
        for x in members:
            if len(adj[x]) % 2:
                adj[x].append((eid, extra))
                adj[extra].append((eid, x))
                eid += 1
                start = extra
        used = defaultdict(bool)
        tour = _euler_tour(adj, start, used)
        real = [e for e in tour if e < len(edges)]
        labels = {e: (A if k % 2 == 0 else B) for k, e in enumerate(tour)}
        imbalance = sum(1 if labels[e] == A else -1 for e in real)
        flip = imbalance < 0
        for e in real:
            side[e] = (1 - labels[e]) if flip else labels[e]
        if abs(imbalance) == 1:
            positive.append(real)
        for x in members:
            adj[x] = [(i, y) for i, y in adj[x] if i < len(edges)]
        adj.pop(extra, None)
    for real in positive[: len(positive) // 2]:
        for e in real:
            side[e] = 1 - side[e]
    return Bisection(tuple(side), _line_value(root.clique_partition(), side))


@dataclass(frozen=True)
class CliquePartitionCertificate:
    cliques: tuple[frozenset, ...]
    imbalances: tuple[int, ...]      # |A & C| - |B & C| per clique


def _certificate(cliques, side) -> CliquePartitionCertificate:
    imb = tuple(sum(1 if side[x] == A else -1 for x in c) for c in cliques)
    return CliquePartitionCertificate(tuple(cliques), imb)


def check_certificate(l: Graph, bisection, cert: CliquePartitionCertificate, *,
                      allow_parity_defect: bool = False) -> bool:
    """Edge-disjoint clique cover of ``l`` with every clique split within one.

    With ``allow_parity_defect``, a component of ``l`` whose cliques all have
    even size and whose vertex count is odd may carry one clique off by two:
    there the strict condition is unsatisfiable by parity, and one defect of
    size 2 still meets the per-clique upper bound minus the unavoidable 1.
    """
    side = bisection.side if hasattr(bisection, "side") else bisection
    covered = set()
    for c in cert.cliques:
        for a, b in combinations(sorted(c), 2):
            if not l.has_edge(a, b) or (a, b) in covered:
                return False
            covered.add((a, b))
    if len(covered) != l.m:
        return False
    imb = [sum(1 if side[x] == A else -1 for x in c) for c in cert.cliques]
    if all(abs(i) <= 1 for i in imb):
        return True
    if not allow_parity_defect:
        return False
    comp_of = {}
    for k, members in enumerate(_components(l.n, [l.neighbors(v) for v in range(l.n)])):
        for x in members:
            comp_of[x] = (k, len(members))
    defects = defaultdict(int)
    even_only = defaultdict(lambda: True)
    for c, i in zip(cert.cliques, imb):
        k, size = comp_of[next(iter(c))]
        even_only[k] &= len(c) % 2 == 0 and size % 2 == 1
        if abs(i) == 2:
            defects[k] += 1
        elif abs(i) > 2:
            return False
    return all(even_only[k] and count == 1 for k, count in defects.items())


def _line_value(cliques, side) -> int:
    # cliques partition E_L, so the cut splits into per-clique products
    total = 0
    for c in cliques:
        a = sum(1 for x in c if side[x] == A)
        total += a * (len(c) - a)
    return total


def solve_root(root: RootGraph) -> tuple[int, Bisection, CliquePartitionCertificate]:
    bis = euler_label(root)
    return bis.value, bis, _certificate(root.clique_partition(), bis.side)


def max_bisection_line(l: Graph) -> tuple[int, Bisection, CliquePartitionCertificate]:
    """Maximum bisection of an unweighted line graph."""
    if not l.is_unit_weight():
        raise WeightedLineGraphError(
            "line-graph solver is for unit weights; use the treewidth DP for weighted input")
    return solve_root(reconstruct_root(l))
