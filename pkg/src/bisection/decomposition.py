"""Tree decompositions: validation, heuristic construction, nice form.

A :class:`NiceDecomposition` stores its nodes in topological order (every
child id is smaller than its parent id) so bottom-up passes are plain loops.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph


class TDFormatError(ValueError):
    pass


class InvalidDecompositionError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    edges: tuple[tuple[int, int], ...] = ()
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "edges", tuple((int(i), int(j)) for i, j in self.edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def total_bag_size(self) -> int:
        return sum(len(b) for b in self.bags)

    def tree_adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.bags]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


@dataclass(frozen=True)
class Violation:
    kind: str        # vertex-uncovered | edge-uncovered | disconnected | not-a-tree | bad-bag
    witness: tuple
    message: str


def _tree_violations(td: TreeDecomposition) -> list[Violation]:
    k = len(td.bags)
    out = []
    if k == 0:
        return [Violation("not-a-tree", (), "decomposition has no bags")]
    for i, j in td.edges:
        if not (0 <= i < k and 0 <= j < k) or i == j:
            return [Violation("not-a-tree", (i, j), f"bad tree edge ({i}, {j})")]
    if len(set(frozenset(e) for e in td.edges)) != len(td.edges):
        out.append(Violation("not-a-tree", (), "duplicate tree edge"))
    if len(td.edges) != k - 1:
        out.append(Violation("not-a-tree", (len(td.edges),),
                             f"{len(td.edges)} tree edges for {k} bags (need {k - 1})"))
    if not 0 <= td.root < k:
        out.append(Violation("not-a-tree", (td.root,), f"root {td.root} out of range"))
        return out
    seen = _bfs(td.tree_adjacency(), td.root, lambda x: True)
    if len(seen) != k:
        missing = min(set(range(k)) - seen)
        out.append(Violation("not-a-tree", (missing,), f"bag {missing} unreachable from root"))
    return out


def _bfs(adj, start, allowed) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen and allowed(y):
                seen.add(y)
                queue.append(y)
    return seen


def validate_td(g: Graph, td: TreeDecomposition) -> list[Violation]:
    """Check the three decomposition conditions plus tree shape.

    Returns a list of violations, each with a witness; empty means valid.
    """
    out = _tree_violations(td)
    for i, bag in enumerate(td.bags):
        bad = [v for v in bag if not 0 <= v < g.n]
        if bad:
            out.append(Violation("bad-bag", (i, bad[0]), f"bag {i} holds unknown vertex {bad[0]}"))
    if out:
        return out
    where = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            where[v].append(i)
    for v in range(g.n):
        if not where[v]:
            out.append(Violation("vertex-uncovered", (v,), f"vertex {v} is in no bag"))
    for u, v, _ in g.edges:
        if not any(u in td.bags[i] for i in where[v]):
            out.append(Violation("edge-uncovered", (u, v), f"edge {{{u}, {v}}} is in no bag"))
    adj = td.tree_adjacency()
    for v in range(g.n):
        if len(where[v]) > 1:
            holders = set(where[v])
            reached = _bfs(adj, where[v][0], holders.__contains__)
            if len(reached) != len(holders):
                out.append(Violation(
                    "disconnected", (v,),
                    f"bags containing vertex {v} are disconnected: {sorted(holders)}"))
    return out


def heuristic_td(g: Graph) -> TreeDecomposition:
    """Decomposition from a min-degree elimination ordering (no width guarantee)."""
    from networkx.algorithms.approximation import treewidth_min_degree

    if g.n == 0:
        return TreeDecomposition((frozenset(),))
    _, tree = treewidth_min_degree(g.to_networkx())
    index = {bag: i for i, bag in enumerate(tree.nodes)}
    bags = tuple(tree.nodes)
    edges = tuple((index[a], index[b]) for a, b in tree.edges)
    return TreeDecomposition(bags, edges, 0)


# ---------------------------------------------------------------- nice form

class NodeKind(enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: tuple[int, ...]          # sorted; bit i of a subset mask is bag[i]
    children: tuple[int, ...] = ()
    vertex: int | None = None     # introduced / forgotten vertex


@dataclass(frozen=True)
class NiceDecomposition:
    nodes: tuple[NiceNode, ...]
    n: int
    _counts: list = field(default=None, init=False, repr=False, compare=False)

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    @property
    def total_bag_size(self) -> int:
        return sum(len(x.bag) for x in self.nodes)

    def counts(self) -> list[tuple[int, int]]:
        if self._counts is None:
            object.__setattr__(self, "_counts", subtree_counts(self))
        return self._counts

    def to_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i, x in enumerate(self.nodes) for c in x.children]
        return TreeDecomposition(tuple(frozenset(x.bag) for x in self.nodes),
                                 tuple(edges), self.root)


def subtree_counts(nd: NiceDecomposition) -> list[tuple[int, int]]:
    """Per node ``(|V_i|, n_i)``: vertices and bag labels in the subtree."""
    out = []
    for x in nd.nodes:
        b = len(x.bag)
        if x.kind is NodeKind.LEAF:
            out.append((b, b))
        elif x.kind is NodeKind.INTRODUCE:
            vs, ns = out[x.children[0]]
            out.append((vs + 1, ns + b))
        elif x.kind is NodeKind.FORGET:
            vs, ns = out[x.children[0]]
            out.append((vs, ns + b))
        else:
            (vj, nj), (vk, nk) = out[x.children[0]], out[x.children[1]]
            out.append((vj + vk - b, nj + nk + b))
    return out


def nice_node_bound(n: int, width: int) -> int:
    """Documented upper bound on the node count produced by :func:`make_nice`."""
    return (2 * max(width, 0) + 4) * (n + 1)


def _rooted(td: TreeDecomposition):
    adj = td.tree_adjacency()
    parent = [-1] * len(td.bags)
    order = [td.root]
    seen = {td.root}
    for x in order:
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
    return parent, order


def _contract(td: TreeDecomposition):
    """Merge every bag that is a subset of its (surviving) parent bag."""
    parent, order = _rooted(td)
    rep = list(range(len(td.bags)))
    children = {td.root: []}
    for x in order[1:]:
        p = rep[parent[x]]
        if td.bags[x] <= td.bags[p]:
            rep[x] = p
        else:
            children[x] = []
            children[p].append(x)
    return children


def make_nice(td: TreeDecomposition, g: Graph | None = None) -> NiceDecomposition:
    """Convert a valid tree decomposition into nice form with an empty root.

    Bags that are subsets of their parent are contracted first; between
    adjacent bags a forget chain runs before an introduce chain, so no
    intermediate bag exceeds the larger endpoint. Nodes with many children
    become balanced stacks of joins.
    """
    violations = validate_td(g, td) if g is not None else _tree_violations(td)
    if violations:
        raise InvalidDecompositionError(violations)
    n = g.n if g is not None else len(frozenset().union(*td.bags))
    children = _contract(td)
    nodes: list[NiceNode] = []

    def add(kind, bag, kids=(), vertex=None):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(kids), vertex))
        return len(nodes) - 1

    def chain(top, cur: set, target: frozenset):
        for v in sorted(cur - target):
            cur.discard(v)
            top = add(NodeKind.FORGET, cur, (top,), v)
        for v in sorted(target - cur):
            cur.add(v)
            top = add(NodeKind.INTRODUCE, cur, (top,), v)
        return top

    def joined(tops, bag):
        if len(tops) == 1:
            return tops[0]
        half = len(tops) // 2
        return add(NodeKind.JOIN, bag, (joined(tops[:half], bag), joined(tops[half:], bag)))

    top_of = {}
    stack = [(td.root, False)]
    while stack:
        x, done = stack.pop()
        if not done:
            stack.append((x, True))
            stack.extend((c, False) for c in reversed(children[x]))
            continue
        bag = td.bags[x]
        if children[x]:
            tops = [chain(top_of.pop(c), set(td.bags[c]), bag) for c in children[x]]
            top_of[x] = joined(tops, bag)
        else:
            verts = sorted(bag)
            first = verts[:1]
            top_of[x] = chain(add(NodeKind.LEAF, first), set(first), bag)
    chain(top_of[td.root], set(td.bags[td.root]), frozenset())
    return NiceDecomposition(tuple(nodes), n)


def nice_violations(nd: NiceDecomposition) -> list[str]:
    """Per-kind structural checks; empty list means the form is nice."""
    out = []
    parents = [0] * len(nd.nodes)
    for i, x in enumerate(nd.nodes):
        if list(x.bag) != sorted(set(x.bag)):
            out.append(f"node {i}: bag not sorted/unique")
        for c in x.children:
            if not 0 <= c < i:
                out.append(f"node {i}: child {c} not topologically earlier")
                continue
            parents[c] += 1
        kids = [nd.nodes[c] for c in x.children if 0 <= c < i]
        bag = set(x.bag)
        if x.kind is NodeKind.LEAF:
            if x.children:
                out.append(f"node {i}: leaf with children")
            if len(x.bag) > 1:
                out.append(f"node {i}: leaf bag not singleton")
        elif x.kind is NodeKind.INTRODUCE:
            if len(kids) != 1 or x.vertex in kids[0].bag or bag != set(kids[0].bag) | {x.vertex}:
                out.append(f"node {i}: bad introduce of {x.vertex}")
        elif x.kind is NodeKind.FORGET:
            if len(kids) != 1 or x.vertex in bag or set(kids[0].bag) != bag | {x.vertex}:
                out.append(f"node {i}: bad forget of {x.vertex}")
        elif len(kids) != 2 or any(k.bag != x.bag for k in kids):
            out.append(f"node {i}: bad join")
    if nd.nodes:
        if nd.nodes[-1].bag:
            out.append("root bag is not empty")
        if any(p != 1 for p in parents[:-1]) or parents[-1] != 0:
            out.append("nodes do not form a single rooted tree")
    else:
        out.append("no nodes")
    return out


# ---------------------------------------------------------------- file format

def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """Parse a PACE-style ``.td`` file. Returns the decomposition and ``n``."""
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise TDFormatError(f"line {lineno}: bad solution line {raw.strip()!r}")
                header = tuple(int(p) for p in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise TDFormatError(f"line {lineno}: bag before 's td' line")
                bid = int(parts[1])
                if not 1 <= bid <= header[0] or bid in bags:
                    raise TDFormatError(f"line {lineno}: bad bag id {bid}")
                verts = [int(p) - 1 for p in parts[2:]]
                if any(not 0 <= v < header[2] for v in verts):
                    raise TDFormatError(f"line {lineno}: vertex out of range")
                bags[bid] = frozenset(verts)
            else:
                if header is None or len(parts) != 2:
                    raise TDFormatError(f"line {lineno}: bad tree edge {raw.strip()!r}")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except ValueError as exc:
            if isinstance(exc, TDFormatError):
                raise
            raise TDFormatError(f"line {lineno}: non-integer token in {raw.strip()!r}") from None
    if header is None:
        raise TDFormatError("missing 's td' line")
    nbags, _, n = header
    if len(bags) != nbags:
        raise TDFormatError(f"header announces {nbags} bags, found {len(bags)}")
    return TreeDecomposition(tuple(bags[i + 1] for i in range(nbags)), tuple(edges), 0), n


def emit_td(td: TreeDecomposition, n: int, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"s td {len(td.bags)} {td.width + 1} {n}")
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    lines.extend(f"{i + 1} {j + 1}" for i, j in td.edges)
    return "\n".join(lines) + "\n"


def reroot(td: TreeDecomposition, root: int) -> TreeDecomposition:
    return TreeDecomposition(td.bags, td.edges, root)
