"""Labeled graphs, blocks and the enriched-tree view of a rooted graph.

Vertices are the integers ``1..n``.  A rooted connected graph corresponds
to a rooted tree on the same vertex set in which every vertex carries the
set of blocks hanging below it (the enriched tree).  Distances measured in
that tree count blocks; distances in the graph add up in-block distances
along the block-cut path.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import Disconnected, MissingWeights


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """Simple undirected graph on ``1..n`` with optional positive edge weights."""

    __slots__ = ("n", "adj", "weights", "root", "__dict__")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), weights=None, root: int | None = None):
        if n < 0:
            raise ValueError("n must be >= 0")
        nbrs: list[set] = [set() for _ in range(n + 1)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            if v in nbrs[u]:
                raise ValueError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        if weights is not None:
            w = {}
            for (u, v), x in dict(weights).items():
                k = _key(u, v)
                if v not in nbrs[u]:
                    raise ValueError(f"weight on non-edge {k}")
                if not x > 0:
                    raise ValueError(f"edge weight must be positive, got {x} on {k}")
                w[k] = float(x)
            if len(w) != self.m:
                raise ValueError("every edge needs exactly one weight")
            weights = w
        self.weights = weights
        self.root = root

    @classmethod
    def _from_adj(cls, adj, weights=None, root=None):
        g = cls.__new__(cls)
        g.n = len(adj) - 1
        g.adj = adj
        g.weights = weights
        g.root = root
        return g

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(1, self.n + 1) for v in self.adj[u] if u < v]

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        return v in a

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def weight(self, u: int, v: int) -> float:
        if self.weights is None:
            raise MissingWeights("graph has no edge weights")
        return self.weights[_key(u, v)]

    def with_weights(self, weights) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges(), weights, self.root)

    def with_root(self, root: int | None) -> "LabeledGraph":
        return LabeledGraph._from_adj(self.adj, self.weights, root)

    def relabel(self, perm: Sequence[int]) -> "LabeledGraph":
        """Rename vertex ``v`` to ``perm[v]`` (``perm[0]`` is ignored)."""
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        w = None
        if self.weights is not None:
            w = {_key(perm[u], perm[v]): x for (u, v), x in self.weights.items()}
        root = perm[self.root] if self.root is not None else None
        return LabeledGraph(self.n, edges, w, root)

    def induced(self, vertices: Sequence[int]) -> tuple["LabeledGraph", list[int]]:
        """Induced subgraph relabeled to ``1..k``; also returns local->global map."""
        loc = {v: i + 1 for i, v in enumerate(vertices)}
        edges = [(loc[u], loc[v]) for u in vertices for v in self.adj[u] if v in loc and u < v]
        w = None
        if self.weights is not None:
            w = {_key(loc[u], loc[v]): self.weights[_key(u, v)] for u in vertices
                 for v in self.adj[u] if v in loc and u < v}
        return LabeledGraph(len(vertices), edges, w), [0] + list(vertices)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return len(bfs_distances(self, 1)) == self.n

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.n, self.adj, self.weights, self.root) == (other.n, other.adj, other.weights, other.root)

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, m={self.m}{', weighted' if self.weights else ''})"

    # -- serialization -------------------------------------------------
    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.m}"]
        for u, v in self.edges():
            if self.weights is not None:
                lines.append(f"{u} {v} {self.weights[(u, v)]!r}")
            else:
                lines.append(f"{u} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "LabeledGraph":
        rows = [r.split() for r in text.strip().splitlines() if r.strip() and not r.startswith("#")]
        n, m = int(rows[0][0]), int(rows[0][1])
        edges, weights = [], {}
        for r in rows[1:1 + m]:
            u, v = int(r[0]), int(r[1])
            edges.append((u, v))
            if len(r) > 2:
                weights[_key(u, v)] = float(r[2])
        if len(edges) != m:
            raise ValueError(f"expected {m} edges, got {len(edges)}")
        return cls(n, edges, weights or None)

    def to_json(self) -> dict:
        edges = self.edges()
        d = {"n": self.n, "edges": [list(e) for e in edges]}
        if self.weights is not None:
            d["weights"] = [self.weights[e] for e in edges]
        if self.root is not None:
            d["root"] = self.root
        return d

    @classmethod
    def from_json(cls, d) -> "LabeledGraph":
        if isinstance(d, str):
            d = json.loads(d)
        edges = [tuple(e) for e in d["edges"]]
        w = None
        if d.get("weights") is not None:
            w = {_key(*e): x for e, x in zip(edges, d["weights"])}
        return cls(d["n"], edges, w, d.get("root"))


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> LabeledGraph:
    return LabeledGraph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


# -- blocks ----------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple            # tuple of sorted vertex tuples
    cutvertices: frozenset
    block_tree: tuple        # edges (block index, cutvertex)

    def blocks_of(self) -> dict:
        out: dict = {}
        for i, b in enumerate(self.blocks):
            for v in b:
                out.setdefault(v, []).append(i)
        return out


def block_decompose(g: LabeledGraph) -> BlockDecomposition:
    """Biconnected components by an iterative lowpoint depth-first search."""
    n = g.n
    if n == 0:
        raise Disconnected("empty graph")
    if n == 1:
        return BlockDecomposition(((1,),), frozenset(), ())
    adj = g.adj
    disc = [0] * (n + 1)
    low = [0] * (n + 1)
    timer = 1
    disc[1] = low[1] = timer
    edge_stack: list = []
    blocks: list = []
    stack = [(1, 0, iter(adj[1]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] == 0:
                timer += 1
                disc[w] = low[w] = timer
                edge_stack.append((v, w))
                stack.append((w, v, iter(adj[w])))
                advanced = True
                break
            if w != parent and disc[w] < disc[v]:
                edge_stack.append((v, w))
                if disc[w] < low[v]:
                    low[v] = disc[w]
        if advanced:
            continue
        stack.pop()
        if stack:
            u = stack[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] >= disc[u]:
                verts = set()
                while True:
                    a, b = edge_stack.pop()
                    verts.add(a)
                    verts.add(b)
                    if (a, b) == (u, v):
                        break
                blocks.append(tuple(sorted(verts)))
    if timer != n:
        raise Disconnected(f"graph has vertices unreachable from 1 ({timer} of {n})")
    count: dict = {}
    for b in blocks:
        for v in b:
            count[v] = count.get(v, 0) + 1
    cut = frozenset(v for v, c in count.items() if c > 1)
    tree = tuple((i, v) for i, b in enumerate(blocks) for v in b if v in cut)
    return BlockDecomposition(tuple(blocks), cut, tree)


# -- enriched trees ----------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """A block hanging below ``star``.

    ``vertices`` are the non-star vertices (the children of ``star`` that this
    block covers) and ``edges`` are given in the same labels as the tree.
    ``root`` is set for pointed blocks.
    """

    star: int
    vertices: tuple
    edges: tuple
    root: int | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def local(self) -> tuple[LabeledGraph, list[int]]:
        """Block as a graph on ``1..k+1`` with the star at label 1."""
        order = [self.star] + list(self.vertices)
        loc = {v: i + 1 for i, v in enumerate(order)}
        return LabeledGraph(len(order), [(loc[u], loc[v]) for u, v in self.edges]), [0] + order

    def distances_from(self, source: int, weights=None) -> dict:
        adj: dict = {}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if weights is None:
            dist = {source: 0}
            q = deque([source])
            while q:
                u = q.popleft()
                for v in adj.get(u, ()):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        q.append(v)
            return dist
        return _dijkstra_adj(adj, source, lambda a, b: weights[_key(a, b)])

    def shp(self, weights=None):
        """Distance from the star to the root inside the block."""
        if self.root is None:
            raise ValueError("block is not pointed")
        return self.distances_from(self.star, weights)[self.root]


@dataclass(frozen=True)
class PointedBlock:
    """A derived block with a star vertex and a distinct root vertex."""

    graph: LabeledGraph
    star_vertex: int
    root_vertex: int

    def __post_init__(self):
        if self.star_vertex == self.root_vertex:
            raise ValueError("star and root must differ")
        for v in (self.star_vertex, self.root_vertex):
            if not 1 <= v <= self.graph.n:
                raise ValueError("designated vertex outside the graph")

    @property
    def size(self) -> int:
        """Number of non-star vertices."""
        return self.graph.n - 1

    def shp(self, weighted: bool = False):
        if weighted:
            return weighted_distance(self.graph, self.star_vertex, self.root_vertex)
        return hop_distance(self.graph, self.star_vertex, self.root_vertex)

    def as_block(self) -> Block:
        s = self.star_vertex
        verts = tuple(v for v in range(1, self.graph.n + 1) if v != s)
        return Block(s, verts, tuple(self.graph.edges()), self.root_vertex)


@dataclass
class EnrichedTree:
    """Rooted tree on ``1..n`` whose offspring sets are partitioned into blocks."""

    n: int
    root: int
    parent: list                 # parent[v], 0 for the root; index 0 unused
    children: list               # ordered children lists
    blocks: list                 # blocks[v] = list of Block with star v
    weights: dict | None = field(default=None)

    def depth(self) -> list:
        d = [0] * (self.n + 1)
        for v in self.bfs_order():
            for c in self.children[v]:
                d[c] = d[v] + 1
        return d

    def bfs_order(self) -> list:
        order = [self.root]
        for v in order:
            order.extend(self.children[v])
        return order

    def height(self) -> int:
        return max(self.depth()[1:]) if self.n else 0

    def outdegrees(self) -> list:
        return [len(self.children[v]) for v in range(self.n + 1)]

    def reassemble(self) -> LabeledGraph:
        edges = [e for bl in self.blocks for b in bl for e in b.edges]
        return LabeledGraph(self.n, edges, self.weights, self.root)

    def check(self) -> None:
        for v in range(1, self.n + 1):
            covered = sorted(u for b in self.blocks[v] for u in b.vertices)
            if covered != sorted(self.children[v]):
                raise AssertionError(f"blocks of {v} do not partition its offspring")
            for b in self.blocks[v]:
                if b.star != v:
                    raise AssertionError("block star mismatch")


def to_enriched_tree(g: LabeledGraph, root: int) -> EnrichedTree:
    dec = block_decompose(g)
    by_vertex = dec.blocks_of()
    n = g.n
    parent = [0] * (n + 1)
    children: list = [[] for _ in range(n + 1)]
    blocks: list = [[] for _ in range(n + 1)]
    used = [False] * len(dec.blocks)
    seen = [False] * (n + 1)
    seen[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for bi in by_vertex.get(v, ()):
            if used[bi]:
                continue
            used[bi] = True
            verts = dec.blocks[bi]
            if len(verts) == 1:
                continue
            inside = set(verts)
            others = tuple(u for u in verts if u != v)
            edges = tuple((a, b) for a in verts for b in g.adj[a] if a < b and b in inside)
            blocks[v].append(Block(v, others, edges))
            for u in others:
                parent[u] = v
                children[v].append(u)
                seen[u] = True
                queue.append(u)
    return EnrichedTree(n, root, parent, children, blocks, g.weights)


# -- metrics ---------------------------------------------------------------

def bfs_distances(g: LabeledGraph, source: int) -> dict:
    dist = {source: 0}
    q = deque([source])
    adj = g.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = du
                q.append(v)
    return dist


def _bfs_list(g: LabeledGraph, source: int) -> list:
    dist = [-1] * (g.n + 1)
    dist[source] = 0
    q = [source]
    adj = g.adj
    for u in q:
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                q.append(v)
    if len(q) != g.n:
        raise Disconnected("graph is not connected")
    return dist


def _dijkstra_adj(adj, source, w):
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in adj[u] if not isinstance(adj, dict) else adj.get(u, ()):
            nd = d + w(u, v)
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def hop_distance(g: LabeledGraph, u: int, v: int) -> int:
    d = bfs_distances(g, u)
    if v not in d:
        raise Disconnected(f"{u} and {v} are in different components")
    return d[v]


def weighted_distances(g: LabeledGraph, source: int) -> dict:
    if g.weights is None:
        raise MissingWeights("weighted distance needs edge weights")
    wts = g.weights
    return _dijkstra_adj(g.adj, source, lambda a, b: wts[_key(a, b)])


def weighted_distance(g: LabeledGraph, u: int, v: int) -> float:
    d = weighted_distances(g, u)
    if v not in d:
        raise Disconnected(f"{u} and {v} are in different components")
    return d[v]


def height(g: LabeledGraph, root: int, weighted: bool = False):
    if weighted:
        d = weighted_distances(g, root)
        if len(d) != g.n:
            raise Disconnected("graph is not connected")
        return max(d.values())
    return max(_bfs_list(g, root)[1:])


def diameter(g: LabeledGraph, weighted: bool = False):
    """Exact diameter by a search from every vertex: O(n m) time."""
    if weighted:
        return max(height(g, v, weighted=True) for v in range(1, g.n + 1))
    return max(max(_bfs_list(g, v)[1:]) for v in range(1, g.n + 1))


def block_diameter(g: LabeledGraph, weighted: bool = False):
    """Exact diameter via the block-cut tree.

    Shortest paths between vertices of one block stay inside that block, so
    a dynamic program over the enriched tree rooted anywhere gives the exact
    value in time linear in the sum of squared block sizes.
    """
    if weighted and g.weights is None:
        raise MissingWeights("weighted diameter needs edge weights")
    t = to_enriched_tree(g, 1)
    return enriched_height_diameter(t, g.weights if weighted else None)[1]


def enriched_height_diameter(t: EnrichedTree, weights=None):
    """(height from ``t.root``, diameter) of the graph encoded by ``t``."""
    order = t.bfs_order()
    if len(order) != t.n:
        raise Disconnected("enriched tree does not span 1..n")
    dist_root = [0] * (t.n + 1)
    down = [0] * (t.n + 1)
    star_dist: dict = {}
    for v in order:
        for b in t.blocks[v]:
            if len(b.edges) == 1:
                (c,) = b.vertices
                d = weights[_key(v, c)] if weights is not None else 1
                star_dist[c] = d
                dist_root[c] = dist_root[v] + d
            else:
                dv = b.distances_from(v, weights)
                for c in b.vertices:
                    star_dist[c] = dv[c]
                    dist_root[c] = dist_root[v] + dv[c]
    diam = 0
    for v in reversed(order):
        top1 = top2 = 0
        for b in t.blocks[v]:
            if len(b.edges) == 1:
                c = b.vertices[0]
                best = star_dist[c] + down[c]
            else:
                best = max(star_dist[c] + down[c] for c in b.vertices)
                vs = b.vertices
                if len(vs) > 1:
                    for i, a in enumerate(vs):
                        da = b.distances_from(a, weights)
                        for c in vs[i + 1:]:
                            cand = da[c] + down[a] + down[c]
                            if cand > diam:
                                diam = cand
            if best > top1:
                top1, top2 = best, top1
            elif best > top2:
                top2 = best
        down[v] = top1
        if top1 + top2 > diam:
            diam = top1 + top2
    return max(dist_root[1:]) if t.n else 0, diam


def bar_distance(g: LabeledGraph, x: int, y: int) -> int:
    """Fewest blocks covering a shortest x-y path (depth of y when rooted at x)."""
    if x == y:
        return 0
    return to_enriched_tree(g, x).depth()[y]


# -- plane trees -------------------------------------------------------------

@dataclass
class PlaneTree:
    """Rooted ordered tree on ``0..n-1`` with root 0."""

    children: list

    @property
    def n(self) -> int:
        return len(self.children)

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "PlaneTree":
        """Build from a depth-first (preorder) outdegree sequence."""
        n = len(degrees)
        if sum(degrees) != n - 1:
            raise ValueError("degree sequence does not code a tree")
        children: list = [[] for _ in range(n)]
        stack: list = []
        for i in range(n):
            if i > 0:
                if not stack:
                    raise ValueError("degree sequence does not code a tree")
                p = stack[-1]
                children[p].append(i)
                if len(children[p]) == degrees[p]:
                    stack.pop()
            if degrees[i] > 0:
                stack.append(i)
        if stack:
            raise ValueError("degree sequence does not code a tree")
        return cls(children)

    def preorder(self) -> list:
        out, stack = [], [0]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def degrees(self) -> list:
        return [len(self.children[v]) for v in self.preorder()]

    def mirror(self) -> "PlaneTree":
        return PlaneTree([list(reversed(c)) for c in self.children])

    def height(self) -> int:
        depth = [0] * self.n
        best = 0
        for v in self.preorder():
            for c in self.children[v]:
                depth[c] = depth[v] + 1
                if depth[c] > best:
                    best = depth[c]
        return best

    def parent_array(self) -> list:
        par = [-1] * self.n
        for v, cs in enumerate(self.children):
            for c in cs:
                par[c] = v
        return par


def contour_function(t: PlaneTree) -> list:
    out = [0]
    stack = [(0, 0)]
    h = 0
    while stack:
        v, i = stack.pop()
        cs = t.children[v]
        if i < len(cs):
            stack.append((v, i + 1))
            stack.append((cs[i], 0))
            h += 1
            out.append(h)
        elif stack:
            h -= 1
            out.append(h)
    return out


def dfs_queue(t: PlaneTree) -> list:
    q = [1]
    for d in t.degrees():
        q.append(q[-1] - 1 + d)
    return q


def dfs_queues(t: PlaneTree) -> tuple[list, list]:
    """Queue lengths of the lexicographic search and of the mirrored one."""
    return dfs_queue(t), dfs_queue(t.mirror())


def class_membership(spec, g: LabeledGraph) -> bool:
    dec = block_decompose(g)
    for b in dec.blocks:
        if len(b) == 1:
            continue
        local, _ = g.induced(b)
        if not spec.block_member(local):
            return False
    return True
