import random

import pytest
from hypothesis import given, settings

from bisection.decomposition import (
    InvalidDecompositionError,
    NodeKind,
    TDFormatError,
    TreeDecomposition,
    emit_td,
    heuristic_td,
    make_nice,
    nice_node_bound,
    nice_violations,
    parse_td,
    reroot,
    subtree_counts,
    validate_td,
)
from bisection.generators import random_partial_ktree
from bisection.graph import Graph

from conftest import graphs

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def td(bags, edges=(), root=0):
    return TreeDecomposition(tuple(frozenset(b) for b in bags), tuple(edges), root)


def test_valid_path_td():
    t = td([{0, 1}, {1, 2}], [(0, 1)])
    assert validate_td(P3, t) == [] and t.width == 1


def test_uncovered_edge_is_named():
    bad = validate_td(P3, td([{0}, {1, 2}], [(0, 1)]))
    assert [(v.kind, v.witness) for v in bad] == [("edge-uncovered", (0, 1))]


def test_disconnected_occurrences():
    bad = validate_td(P3, td([{0, 1}, {2}, {0, 2}], [(0, 1), (1, 2)]))
    assert ("disconnected", (0,)) in [(v.kind, v.witness) for v in bad]


def test_tree_shape_violations():
    kinds = {v.kind for v in validate_td(P3, td([{0, 1}, {1, 2}, {1}], [(0, 1), (1, 2), (0, 2)]))}
    assert "not-a-tree" in kinds
    kinds = {v.kind for v in validate_td(P3, td([{0, 1}, {1, 2}], []))}
    assert "not-a-tree" in kinds
    assert validate_td(P3, td([{0, 1}, {1, 2, 7}], [(0, 1)]))[0].kind == "bad-bag"
    assert validate_td(Graph(4), td([{0}, {1}, {2}], [(0, 1), (1, 2)]))[0].kind == "vertex-uncovered"


def test_make_nice_single_bag_shape():
    g = Graph.from_edges(2, [(0, 1)])
    nd = make_nice(td([{0, 1}]), g)
    kinds = [x.kind for x in nd.nodes]
    assert kinds == [NodeKind.LEAF, NodeKind.INTRODUCE, NodeKind.FORGET, NodeKind.FORGET]
    assert nd.nodes[0].bag == (0,) and nd.nodes[-1].bag == ()


def test_make_nice_star():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    nd = make_nice(td([{0, 1}, {0, 2}, {0, 3}], [(0, 1), (0, 2)]), star)
    assert nd.width == 1
    assert validate_td(star, nd.to_tree_decomposition()) == []
    assert nice_violations(nd) == []


def test_make_nice_rejects_invalid():
    with pytest.raises(InvalidDecompositionError) as info:
        make_nice(td([{0}, {1, 2}], [(0, 1)]), P3)
    assert info.value.violations[0].kind == "edge-uncovered"


@pytest.mark.parametrize("graph, width", [
    (Graph.from_edges(6, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]), 1),
    (Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)]), 3),
    (Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)]), 2),
])
def test_heuristic_widths(graph, width):
    t = heuristic_td(graph)
    assert t.width == width and validate_td(graph, t) == []


def test_heuristic_empty_graph():
    t = heuristic_td(Graph(0))
    assert validate_td(Graph(0), t) == []
    assert nice_violations(make_nice(t, Graph(0))) == []


def test_subtree_counts_examples():
    g, t = random_partial_ktree(30, 2, 0.7, seed=3)
    nd = make_nice(t, g)
    counts = subtree_counts(nd)
    assert counts[nd.root][0] == g.n
    for i, x in enumerate(nd.nodes):
        if x.kind is NodeKind.LEAF:
            assert counts[i] == (len(x.bag), len(x.bag))
        if x.kind is NodeKind.JOIN:
            (_, nj), (_, nk) = counts[x.children[0]], counts[x.children[1]]
            assert counts[i][1] == nj + nk + len(x.bag)


def _occurrences(nd):
    # brute force: vertices and label counts under each node
    out = []
    for i, x in enumerate(nd.nodes):
        verts, labels = set(x.bag), len(x.bag)
        for c in x.children:
            verts |= out[c][0]
            labels += out[c][1]
        out.append((verts, labels))
    return [(len(v), k) for v, k in out]


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10, min_n=1))
def test_make_nice_properties(g):
    t = heuristic_td(g)
    nd = make_nice(t, g)
    assert nice_violations(nd) == []
    assert validate_td(g, nd.to_tree_decomposition()) == []
    assert nd.width <= t.width
    assert len(nd.nodes) <= nice_node_bound(g.n, nd.width)
    assert subtree_counts(nd) == _occurrences(nd)


def test_make_nice_any_root():
    rng = random.Random(2)
    for k in range(4):
        g, t = random_partial_ktree(25, k, 0.8, seed=k)
        for root in rng.sample(range(len(t.bags)), 3):
            nd = make_nice(reroot(t, root), g)
            assert nice_violations(nd) == [] and nd.width <= k


def test_td_round_trip():
    g, t = random_partial_ktree(20, 3, 1.0, seed=1)
    back, n = parse_td(emit_td(t, g.n, ["hello"]))
    assert n == g.n and back.bags == t.bags and set(back.edges) == set(t.edges)


@pytest.mark.parametrize("text", [
    "b 1 1 2\n",
    "s td 1 2\n",
    "s td 2 2 2\nb 1 1 2\n",
    "s td 1 2 2\nb 1 1 5\n",
    "s td 1 2 2\nb 1 x\n",
    "s td 1 2 2\nb 1 1 2\n1 2 3\n",
])
def test_td_parse_errors(text):
    with pytest.raises(TDFormatError):
        parse_td(text)
