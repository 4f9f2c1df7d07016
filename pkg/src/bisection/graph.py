"""Weighted simple graphs, cuts, and the edge-list file format.

Vertices are ``0..n-1`` internally and 1-indexed in files. Sides of a cut
are encoded per vertex as ``A`` (0) or ``B`` (1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

A = 0
B = 1

# every DP sum stays exact in int64 below this bound
WEIGHT_CAPACITY = 1 << 62


class GraphFormatError(ValueError):
    """Base class for edge-list parse errors."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedHeaderError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with integer edge weights.

    ``edges`` holds canonical triples ``(u, v, w)`` with ``u < v``, sorted.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...] = ()
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(
        init=False, repr=False, compare=False)
    _weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = {}
        total = 0
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), int(w)
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise DuplicateEdgeError(f"parallel edge {key}")
            canon[key] = w
            total += abs(w)
        if total >= WEIGHT_CAPACITY:
            raise ValueError("sum of |weights| must stay below 2**62")
        edges = tuple(sorted((u, v, w) for (u, v), w in canon.items()))
        adj = [[] for _ in range(self.n)]
        for u, v, w in edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_weights", canon)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], weight: int = 1) -> Graph:
        """Build from ``(u, v)`` pairs or ``(u, v, w)`` triples."""
        triples = []
        for e in edges:
            if len(e) == 2:
                triples.append((e[0], e[1], weight))
            else:
                triples.append((e[0], e[1], e[2]))
        return cls(n, tuple(triples))

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> int:
        """Weight of edge ``{u, v}``, or 0 if absent."""
        return self._weights.get((u, v) if u < v else (v, u), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weights

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adjacency[v]]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def is_unit_weight(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def negated(self) -> Graph:
        return Graph(self.n, tuple((u, v, -w) for u, v, w in self.edges))

    def with_isolated(self, extra: int) -> Graph:
        return Graph(self.n + extra, self.edges)

    def to_networkx(self):
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_weighted_edges_from(self.edges)
        return G


@dataclass(frozen=True)
class Cut:
    """A bipartition with its exact crossing weight."""

    side: tuple[int, ...]
    value: int

    @property
    def count_a(self) -> int:
        return sum(1 for s in self.side if s == A)

    @property
    def count_b(self) -> int:
        return len(self.side) - self.count_a

    def part(self, which: int) -> list[int]:
        return [v for v, s in enumerate(self.side) if s == which]

    def flipped(self) -> Cut:
        return type(self)(tuple(1 - s for s in self.side), self.value)

    def verify(self, g: Graph) -> bool:
        return len(self.side) == g.n and cut_value(g, self.side) == self.value


@dataclass(frozen=True)
class Bisection(Cut):
    def __post_init__(self):
        if abs(self.count_a - self.count_b) > 1:
            raise ValueError(
                f"not a bisection: |A|={self.count_a}, |B|={self.count_b}")


def cut_value(g: Graph, side: Sequence[int]) -> int:
    """Total weight of edges whose endpoints lie on different sides."""
    if len(side) != g.n:
        raise ValueError(f"assignment covers {len(side)} vertices, graph has {g.n}")
    return sum(w for u, v, w in g.edges if side[u] != side[v])


def is_bisection(g: Graph, side: Sequence[int]) -> bool:
    if len(side) != g.n:
        raise ValueError(f"assignment covers {len(side)} vertices, graph has {g.n}")
    a = sum(1 for s in side if s == A)
    return abs(a - (g.n - a)) <= 1


def sides_from_set(n: int, part_a: Iterable[int]) -> tuple[int, ...]:
    side = [B] * n
    for v in part_a:
        side[v] = A
    return tuple(side)


def complement(g: Graph, default_weight: int = 1) -> Graph:
    """Complement graph; every new edge gets ``default_weight``."""
    edges = [(u, v, default_weight)
             for u in range(g.n) for v in range(u + 1, g.n)
             if not g.has_edge(u, v)]
    return Graph(g.n, tuple(edges))


def parse_graph(text: str) -> Graph:
    """Parse the ``p n m`` / ``e u v w`` edge-list format (1-indexed)."""
    n = m = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise MalformedHeaderError("duplicate header", lineno)
            if len(parts) != 3:
                raise MalformedHeaderError(f"expected 'p <n> <m>', got {raw.strip()!r}", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise MalformedHeaderError(f"non-integer header {raw.strip()!r}", lineno) from None
            if n < 0 or m < 0:
                raise MalformedHeaderError("negative counts in header", lineno)
        elif tag == "e":
            if len(parts) != 4:
                raise GraphFormatError(f"expected 'e <u> <v> <w>', got {raw.strip()!r}", lineno)
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"non-integer edge line {raw.strip()!r}", lineno) from None
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}", lineno)
            if n is None:
                raise MalformedHeaderError("edge line before 'p' header", lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexRangeError(f"vertex id out of range 1..{n} in {raw.strip()!r}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}", lineno)
            seen.add(key)
            edges.append((u - 1, v - 1, w))
        else:
            raise GraphFormatError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise MalformedHeaderError("missing 'p <n> <m>' header")
    if len(edges) != m:
        raise MalformedHeaderError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def emit_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as f:
        return parse_graph(f.read())


def write_graph(path, g: Graph, comments: Iterable[str] = ()) -> None:
    with open(path, "w") as f:
        f.write(emit_graph(g, comments))
