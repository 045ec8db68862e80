import itertools
import random

import networkx as nx
import numpy as np
import pytest

from subcrit.classes import make_class
from subcrit.errors import Disconnected, MissingWeights
from subcrit.graphs import (LabeledGraph, PlaneTree, bar_distance, block_decompose, class_membership,
                            complete_graph, contour_function, cycle_graph, diameter, dfs_queue, dfs_queues,
                            height, hop_distance, path_graph, to_enriched_tree, weighted_distance)
from subcrit.samplers import sample_uniform_cn


def two_triangles():
    return LabeledGraph(5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges())
    return h


def test_graph_is_simple_and_symmetric():
    with pytest.raises(ValueError):
        LabeledGraph(3, [(1, 1)])
    with pytest.raises(ValueError):
        LabeledGraph(3, [(1, 2), (2, 1)])
    g = LabeledGraph(3, [(2, 1), (2, 3)])
    assert g.m == 2 and g.neighbors(2) == (1, 3)
    assert all(u in g.neighbors(v) for v in range(1, 4) for u in g.neighbors(v))


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        LabeledGraph(2, [(1, 2)], weights={(1, 2): 0.0})


def test_serialization_round_trip():
    g = LabeledGraph(4, [(1, 2), (2, 3), (3, 4)], weights={(1, 2): 0.5, (2, 3): 1.5, (3, 4): 2.0})
    assert LabeledGraph.from_edgelist(g.to_edgelist()) == g
    assert LabeledGraph.from_json(g.to_json()) == g


def test_blocks_of_path():
    dec = block_decompose(path_graph(3))
    assert sorted(dec.blocks) == [(1, 2), (2, 3)]
    assert dec.cutvertices == {2}


def test_blocks_of_triangle_and_vertex():
    dec = block_decompose(cycle_graph(3))
    assert dec.blocks == ((1, 2, 3),) and not dec.cutvertices
    assert block_decompose(LabeledGraph(1)).blocks == ((1,),)


def test_two_triangles_share_cutvertex():
    dec = block_decompose(two_triangles())
    assert sorted(dec.blocks) == [(1, 2, 3), (3, 4, 5)]
    assert dec.cutvertices == {3}
    assert len(dec.block_tree) == 2


def test_disconnected_rejected():
    g = LabeledGraph(4, [(1, 2), (3, 4)])
    for f in (block_decompose, diameter, lambda g: to_enriched_tree(g, 1)):
        with pytest.raises(Disconnected):
            f(g)


def random_connected(rng, n, p):
    while True:
        edges = [(u, v) for u, v in itertools.combinations(range(1, n + 1), 2) if rng.random() < p]
        g = LabeledGraph(n, edges)
        if g.is_connected():
            return g


def test_blocks_match_networkx():
    rng = random.Random(3)
    for _ in range(300):
        g = random_connected(rng, rng.randint(2, 9), rng.choice((0.25, 0.4, 0.6)))
        ours = sorted(tuple(b) for b in block_decompose(g).blocks)
        ref = sorted(tuple(sorted(c)) for c in nx.biconnected_components(to_nx(g)))
        assert ours == ref
        assert block_decompose(g).cutvertices == set(nx.articulation_points(to_nx(g)))


def test_enriched_tree_small_cases():
    t = to_enriched_tree(path_graph(2), 1)
    assert t.children[1] == [2] and len(t.blocks[1]) == 1
    t = to_enriched_tree(cycle_graph(3), 1)
    assert sorted(t.children[1]) == [2, 3] and t.blocks[1][0].edges
    t = to_enriched_tree(two_triangles(), 1)
    assert t.height() == 2
    assert t.reassemble().edge_set() == two_triangles().edge_set()


@pytest.mark.parametrize("name", ["forb_c5", "cacti", "outerplanar"])
def test_reassembly_and_depths(name):
    spec = make_class(name)
    rng = np.random.default_rng(11)
    for _ in range(200):
        g = sample_uniform_cn(spec, int(rng.integers(2, 40)), rng)
        root = int(rng.integers(1, g.n + 1))
        t = to_enriched_tree(g, root)
        t.check()
        assert t.reassemble().edge_set() == g.edge_set()
        # tree depth = blocks on the block-tree path
        bt = nx.Graph()
        dec = block_decompose(g)
        for i, b in enumerate(dec.blocks):
            for v in b:
                bt.add_edge(("b", i), ("v", v))
        hops = nx.single_source_shortest_path_length(bt, ("v", root))
        depth = t.depth()
        for v in range(1, g.n + 1):
            assert depth[v] == hops[("v", v)] // 2


def test_hop_metrics():
    c5 = cycle_graph(5)
    assert hop_distance(c5, 1, 3) == 2 and diameter(c5) == 2
    p = path_graph(7)
    assert diameter(p) == 6 and height(p, 1) == 6


def test_weighted_triangle():
    g = LabeledGraph(3, [(1, 2), (2, 3), (1, 3)], weights={(1, 2): 0.5, (2, 3): 2.0, (1, 3): 2.0})
    assert weighted_distance(g, 1, 3) == 2.0
    assert weighted_distance(g, 2, 3) == 2.0
    with pytest.raises(MissingWeights):
        weighted_distance(cycle_graph(3), 1, 2)


def test_metrics_match_networkx():
    rng = random.Random(5)
    for _ in range(100):
        g = random_connected(rng, rng.randint(2, 12), 0.3)
        h = to_nx(g)
        assert diameter(g) == nx.diameter(h)
        assert height(g, 1) == max(nx.single_source_shortest_path_length(h, 1).values())
        w = {e: rng.uniform(0.1, 3) for e in g.edges()}
        gw = g.with_weights(w)
        for (u, v), x in w.items():
            h[u][v]["weight"] = x
        ref = dict(nx.all_pairs_dijkstra_path_length(h))
        assert diameter(gw, weighted=True) == pytest.approx(max(max(d.values()) for d in ref.values()))


def test_bar_distance_examples():
    assert bar_distance(complete_graph(4), 1, 3) == 1
    assert bar_distance(two_triangles(), 1, 5) == 2
    assert bar_distance(two_triangles(), 2, 2) == 0


def test_bar_distance_metric_properties():
    spec = make_class("cacti")
    rng = np.random.default_rng(7)
    for _ in range(200):
        g = sample_uniform_cn(spec, 50, rng)
        x, y, z = (int(v) for v in rng.integers(1, 51, 3))
        dxy = bar_distance(g, x, y)
        assert dxy == bar_distance(g, y, x)
        assert dxy <= bar_distance(g, x, z) + bar_distance(g, z, y)
        biggest = max(len(b) for b in block_decompose(g).blocks)
        assert dxy <= hop_distance(g, x, y) <= dxy * max(1, biggest - 1)


def test_contour_and_queues_examples():
    path = PlaneTree([[1], [2], []])
    assert contour_function(path) == [0, 1, 2, 1, 0]
    star = PlaneTree([[1, 2, 3], [], [], []])
    assert contour_function(star) == [0, 1, 0, 1, 0, 1, 0]
    assert dfs_queue(star) == [1, 3, 2, 1, 0]


def random_plane_tree(rng, n):
    # uniform-ish: random parent among earlier vertices, then relabel in preorder
    children = [[] for _ in range(n)]
    for v in range(1, n):
        children[int(rng.integers(0, v))].append(v)
    t = PlaneTree(children)
    return PlaneTree.from_degrees(t.degrees())


def test_contour_properties():
    rng = np.random.default_rng(2)
    for _ in range(20):
        t = random_plane_tree(rng, 1000)
        c = contour_function(t)
        steps = np.diff(c)
        assert len(c) == 2 * 999 + 1 and c[0] == c[-1] == 0
        assert set(steps.tolist()) <= {-1, 1} and steps.sum() == 0
        assert max(c) == t.height()
        qd, qr = dfs_queues(t)
        assert qd[0] == 1 and qd[-1] == 0 and qr == dfs_queue(t.mirror())


def test_membership_examples():
    c5 = cycle_graph(5)
    k4 = complete_graph(4)
    assert not class_membership(make_class("forb_c5"), c5)
    assert class_membership(make_class("cacti"), c5)
    assert class_membership(make_class("forb_c5"), k4)
    assert not class_membership(make_class("outerplanar"), k4)
    c4 = make_class("forb_c4")
    three = [LabeledGraph(3, e) for e in ([(1, 2), (2, 3)], [(1, 2), (1, 3)], [(1, 3), (2, 3)],
                                          [(1, 2), (2, 3), (1, 3)])]
    assert all(class_membership(c4, g) for g in three)


def outerplanar_block_brute(vertices, edges):
    """A 2-connected graph is outerplanar iff some Hamilton cycle leaves only non-crossing chords."""
    k = len(vertices)
    if k <= 2:
        return True
    first, rest = vertices[0], vertices[1:]
    es = {frozenset(e) for e in edges}
    for perm in itertools.permutations(rest):
        order = (first,) + perm
        pos = {v: i for i, v in enumerate(order)}
        cycle = {frozenset((order[i], order[(i + 1) % k])) for i in range(k)}
        if not cycle <= es:
            continue
        chords = [sorted((pos[u], pos[v])) for u, v in (tuple(e) for e in es - cycle)]
        if all(not (a < c < b < d or c < a < d < b) for (a, b), (c, d) in itertools.combinations(chords, 2)):
            return True
    return False


def test_outerplanar_membership_against_hamilton_search():
    spec = make_class("outerplanar")
    rng = random.Random(9)
    seen = {True: 0, False: 0}
    for _ in range(400):
        g = random_connected(rng, rng.randint(3, 8), 0.45)
        ref = True
        for b in block_decompose(g).blocks:
            inside = set(b)
            ref &= outerplanar_block_brute(b, [e for e in g.edges() if set(e) <= inside])
        assert class_membership(spec, g) == ref
        seen[ref] += 1
    assert min(seen.values()) > 50


def test_outerplanar_four_vertices():
    spec = make_class("outerplanar")
    pairs = list(itertools.combinations(range(1, 5), 2))
    graphs = [LabeledGraph(4, es) for r in range(3, 7) for es in itertools.combinations(pairs, r)]
    connected = [g for g in graphs if g.is_connected()]
    assert len(connected) == 38
    assert sum(class_membership(spec, g) for g in connected) == 37
