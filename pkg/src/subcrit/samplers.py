"""Random generation of graphs from subcritical classes.

Connected rooted graphs are encoded by enriched trees: every vertex carries
a set of derived blocks whose non-star vertices are its children.  Under the
Boltzmann model at ``rho`` this tree is a Galton-Watson tree whose offspring
law ``xi`` has generating function ``exp(B'(yz) - lambda)``; conditioning on
the size gives the uniform distribution on rooted graphs with ``n`` vertices.

Internally samples are kept as :class:`FlatGraph` arrays so that heights
and diameters of large graphs can be computed by compiled loops.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .classes import ClassSpec, make_class, size_table
from .constants import ConstantSet, constant_set, offspring_table
from .errors import InfeasibleSize, NonPositiveWeight, SamplerRunaway
from .graphs import EnrichedTree, LabeledGraph, PlaneTree, to_enriched_tree

MAX_VERTICES = 10**6
HEAD_SIZES = 32


# -- random streams ----------------------------------------------------------

@dataclass(frozen=True)
class RngHandle:
    """``(seed, stream)`` names an independent, reproducible random stream."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, i: int) -> "RngHandle":
        # streams of substreams stay disjoint from plain integer streams
        return RngHandle(self.seed, (self.stream + 1) * (1 << 32) + i)


def make_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngHandle):
        return rng.generator()
    return RngHandle(int(rng)).generator()


# -- offspring and weight laws -----------------------------------------------

@dataclass(frozen=True, eq=False)
class OffspringDistribution:
    name: str
    pmf: np.ndarray
    lam: float
    y: float
    span: int
    cdf: np.ndarray = field(repr=False)

    @classmethod
    def from_class(cls, spec: ClassSpec | str) -> "OffspringDistribution":
        spec = make_class(spec) if isinstance(spec, str) else spec
        cs = constant_set(spec)
        pmf = offspring_table(spec.name)
        cdf = np.cumsum(pmf)
        cdf[-1] = 1.0
        return cls(spec.name, pmf, cs.lambda_, cs.y, cs.span, cdf)

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))

    @property
    def variance(self) -> float:
        k = np.arange(len(self.pmf))
        return float(np.dot(k * k, self.pmf)) - self.mean**2

    def sample(self, rng, size=None):
        return np.searchsorted(self.cdf, rng.random(size), side="right")


def sample_offspring_count(dist: OffspringDistribution, rng, method: str = "table", size=None):
    """Draw ``xi`` by table inversion or as a Poisson number of block sizes."""
    if method == "table":
        return dist.sample(rng, size)
    if method != "compound":
        raise ValueError(f"unknown method {method!r}")
    spec = make_class(dist.name)
    table = size_table(spec, dist.y)
    m = rng.poisson(dist.lam, size)
    flat = np.atleast_1d(m)
    sizes = table.sample(rng, int(flat.sum()))
    bounds = np.concatenate(([0], np.cumsum(flat)))
    sums = np.add.reduceat(np.append(sizes, 0), bounds[:-1]) * (flat > 0)
    return int(sums[0]) if size is None else sums.reshape(np.shape(m))


WEIGHT_KINDS = ("constant", "uniform", "exponential", "geometric")


@dataclass(frozen=True)
class WeightDistribution:
    """Edge weight law: constant(c), uniform(a, b), exponential(rate), geometric(p) on 1, 2, ..."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        k, p = self.kind, self.params
        if k not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {k!r}")
        if k == "constant" and not (len(p) == 1 and p[0] > 0):
            raise NonPositiveWeight("constant weight must be > 0")
        if k == "uniform" and not (len(p) == 2 and 0 <= p[0] < p[1]):
            raise NonPositiveWeight("uniform weights need 0 <= a < b")
        if k == "exponential" and not (len(p) == 1 and p[0] > 0):
            raise NonPositiveWeight("exponential rate must be > 0")
        if k == "geometric" and not (len(p) == 1 and 0 < p[0] <= 1):
            raise NonPositiveWeight("geometric parameter must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str) -> "WeightDistribution":
        """``const:1``, ``uniform:0.5,1.5``, ``exp:1`` or ``geom:0.5``."""
        name, _, args = text.partition(":")
        alias = {"const": "constant", "exp": "exponential", "geom": "geometric"}
        kind = alias.get(name, name)
        params = tuple(float(a) for a in args.split(",")) if args else ()
        return cls(kind, params)

    def __str__(self):
        short = {"constant": "const", "exponential": "exp", "geometric": "geom"}.get(self.kind, self.kind)
        return f"{short}:{','.join(repr(p) for p in self.params)}"

    @property
    def mean(self) -> float:
        p = self.params
        return {"constant": lambda: p[0], "uniform": lambda: (p[0] + p[1]) / 2,
                "exponential": lambda: 1 / p[0], "geometric": lambda: 1 / p[0]}[self.kind]()

    def sample(self, rng, size=None):
        p = self.params
        if self.kind == "constant":
            return np.full(size, p[0]) if size is not None else p[0]
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], size)
        if self.kind == "exponential":
            return rng.exponential(1 / p[0], size)
        return rng.geometric(p[0], size).astype(float)


def assign_weights(g: LabeledGraph, w: WeightDistribution, rng) -> LabeledGraph:
    edges = g.edges()
    vals = np.atleast_1d(w.sample(rng, len(edges)))
    if len(vals) and vals.min() <= 0:
        raise NonPositiveWeight("drawn weight is not positive")
    return g.with_weights({e: float(x) for e, x in zip(edges, vals)})


# -- flat block-tree graphs -------------------------------------------------------

@dataclass(eq=False)
class FlatGraph:
    """A rooted graph as a list of blocks hanging off stars; root is vertex 0.

    Block ``b`` has star ``bstar[b]`` and members ``mem[mem_off[b]:mem_off[b+1]]``
    (local labels ``1..k``; the star is local label 0).  Its edges in local
    labels are ``(eu[e], ev[e])`` for ``e`` in ``e_off[b]:e_off[b+1]``.
    """

    n: int
    bstar: np.ndarray
    mem_off: np.ndarray
    mem: np.ndarray
    e_off: np.ndarray
    eu: np.ndarray
    ev: np.ndarray
    w: np.ndarray | None = None

    @property
    def block_sizes(self) -> np.ndarray:
        return np.diff(self.mem_off)

    def largest_block(self) -> int:
        """Vertices in the largest block (1 for a single vertex)."""
        s = self.block_sizes
        return int(s.max()) + 1 if len(s) else 1

    def with_weights(self, wd: WeightDistribution, rng) -> "FlatGraph":
        w = np.asarray(wd.sample(rng, len(self.eu)), float)
        if len(w) and w.min() <= 0:
            raise NonPositiveWeight("drawn weight is not positive")
        return FlatGraph(self.n, self.bstar, self.mem_off, self.mem, self.e_off, self.eu, self.ev, w)

    def metrics(self, weighted: bool = False, diameter: bool = True) -> tuple:
        """``(height from the root, diameter)``; hop counts unless ``weighted``."""
        if self.n == 1:
            return 0, 0
        if weighted and self.w is None:
            raise ValueError("no weights attached")
        w = self.w if weighted else np.ones(0)
        h, d = K.flat_metrics(self.n, self.bstar, self.mem_off, self.mem, self.e_off,
                              self.eu, self.ev, w, weighted, diameter)
        if weighted:
            return h, d
        return int(round(h)), int(round(d))

    def global_edges(self) -> np.ndarray:
        counts = np.diff(self.e_off)
        owner = np.repeat(np.arange(len(self.bstar)), counts)
        base = self.mem_off[owner] - 1

        def glob(local):
            return np.where(local == 0, self.bstar[owner], self.mem[base + np.maximum(local, 1)])

        return np.stack([glob(self.eu), glob(self.ev)], axis=1)

    def to_graph(self, rng=None) -> LabeledGraph:
        """LabeledGraph on ``1..n`` rooted at the image of vertex 0.

        With ``rng`` the labels are a uniformly random permutation.
        """
        perm = rng.permutation(self.n) + 1 if rng is not None else np.arange(1, self.n + 1)
        ge = perm[self.global_edges()] if len(self.eu) else np.zeros((0, 2), int)
        edges = [(int(a), int(b)) for a, b in ge]
        weights = None
        if self.w is not None:
            weights = {(min(a, b), max(a, b)): float(x) for (a, b), x in zip(edges, self.w)}
        return LabeledGraph(self.n, edges, weights, root=int(perm[0]))


def _local_edges(spec: ClassSpec, sizes: np.ndarray, rng):
    """Edges of uniform derived blocks of the given sizes, in local labels."""
    sizes = np.asarray(sizes, np.int64)
    nb = len(sizes)
    if spec.name in ("trees", "forb_c4", "cacti"):
        if spec.name == "trees":
            ne = np.ones(nb, np.int64)
        elif spec.name == "forb_c4":
            ne = np.where(sizes == 1, 1, 3)
        else:
            ne = np.where(sizes == 1, 1, sizes + 1)
        e_off = np.concatenate(([0], np.cumsum(ne)))
        t = np.arange(e_off[-1]) - np.repeat(e_off[:-1], ne)
        if spec.name == "forb_c4":
            eu = np.array([0, 0, 1])[t]
            ev = np.array([1, 2, 2])[t]
        else:
            k = np.repeat(sizes, ne)
            # cycle 0 - 1 - ... - k - 0; members are exchangeable so no shuffle is needed
            eu = t
            ev = np.where((t == k) & (k >= 2), 0, t + 1)
        return e_off, eu.astype(np.int64), ev.astype(np.int64)
    eu, ev, ne = [], [], []
    for k in sizes:
        edges = spec.derived_block(int(k), rng)
        ne.append(len(edges))
        for a, b in edges:
            eu.append(a)
            ev.append(b)
    e_off = np.concatenate(([0], np.cumsum(ne))).astype(np.int64)
    return e_off, np.asarray(eu, np.int64), np.asarray(ev, np.int64)


def _flat(spec, n, bstar, bsize, mem, rng) -> FlatGraph:
    bstar = np.asarray(bstar, np.int64)
    bsize = np.asarray(bsize, np.int64)
    mem_off = np.concatenate(([0], np.cumsum(bsize))).astype(np.int64)
    e_off, eu, ev = _local_edges(spec, bsize, rng)
    return FlatGraph(n, bstar, mem_off, np.asarray(mem, np.int64), e_off, eu, ev)


def _single_vertex() -> FlatGraph:
    z = np.zeros(0, np.int64)
    return FlatGraph(1, z, np.zeros(1, np.int64), z, np.zeros(1, np.int64), z, z)


# -- Boltzmann sampler -----------------------------------------------------------

class _Stream:
    """Buffered draws from a fixed law, consumed in order."""

    def __init__(self, draw, chunk=16, max_chunk=1 << 14):
        self.draw, self.chunk, self.max_chunk = draw, chunk, max_chunk
        self.buf, self.pos = draw(chunk), 0

    def next(self):
        if self.pos >= len(self.buf):
            # most Boltzmann objects are tiny, so start small and grow
            self.chunk = min(2 * self.chunk, self.max_chunk)
            self.buf, self.pos = self.draw(self.chunk), 0
        v = self.buf[self.pos]
        self.pos += 1
        return int(v)


def _boltzmann_skeleton(spec, cs, rng, max_size):
    table = size_table(spec, cs.y)
    pois = _Stream(lambda m: rng.poisson(cs.lambda_, m))
    sizes = _Stream(lambda m: table.sample(rng, m))
    counts, bsize = [], []
    total, done = 1, 0
    while done < total:
        m = pois.next()
        counts.append(m)
        done += 1
        for _ in range(m):
            k = sizes.next()
            bsize.append(k)
            total += k
        if total > max_size:
            raise SamplerRunaway(f"Boltzmann object exceeded {max_size} vertices")
    return total, np.asarray(counts, np.int64), np.asarray(bsize, np.int64)


def _bfs_flat(spec, n, counts, bsize, rng) -> FlatGraph:
    # vertices are numbered in BFS order, so the children of the blocks are 1..n-1 in order
    if n == 1:
        return _single_vertex()
    bstar = np.repeat(np.arange(len(counts)), counts)
    return _flat(spec, n, bstar, bsize, np.arange(1, n), rng)


def boltzmann_flat(spec: ClassSpec, rng, max_size: int = MAX_VERTICES) -> FlatGraph:
    cs = constant_set(spec)
    n, counts, bsize = _boltzmann_skeleton(spec, cs, rng, max_size)
    return _bfs_flat(spec, n, counts, bsize, rng)


def sample_boltzmann_pointed(spec: ClassSpec, rng, max_size: int = MAX_VERTICES) -> LabeledGraph:
    """Boltzmann-distributed rooted connected graph at ``rho`` (root = ``g.root``)."""
    rng = make_rng(rng)
    return boltzmann_flat(spec, rng, max_size).to_graph(rng)


# -- conditioned Galton-Watson trees -------------------------------------------------

def cycle_lemma(xi: np.ndarray) -> int:
    """Rotation index making ``xi`` a valid preorder degree sequence.

    ``xi`` must sum to ``len(xi) - 1``; the rotation starts right after the
    first minimum of the partial sums of ``xi - 1``.
    """
    s = np.cumsum(np.asarray(xi) - 1)
    if s[-1] != -1:
        raise ValueError("sequence does not sum to n - 1")
    return (int(np.argmin(s)) + 1) % len(xi)


def _check_size(n: int, span: int):
    if n < 1:
        raise InfeasibleSize(f"n = {n} is not a positive size")
    if (n - 1) % span:
        raise InfeasibleSize(f"n = {n} is not 1 mod {span}")


def conditioned_degrees(dist: OffspringDistribution, n: int, rng) -> np.ndarray:
    """Preorder outdegrees of the ``xi``-GW tree conditioned on ``n`` vertices."""
    _check_size(n, dist.span)
    if n == 1:
        return np.zeros(1, np.int64)
    batch = max(1, min(4096, int(4 * math.sqrt(n)) + 1, (1 << 22) // n))
    while True:
        xi = dist.sample(rng, (batch, n))
        hit = np.nonzero(xi.sum(axis=1) == n - 1)[0]
        if len(hit):
            row = xi[hit[0]]
            return np.roll(row, -cycle_lemma(row)).astype(np.int64)


def sample_conditioned_gw(dist: OffspringDistribution, n: int, rng) -> PlaneTree:
    """Plane tree: iid ``xi`` values accepted when they sum to ``n - 1``, then rotated."""
    return PlaneTree.from_degrees(conditioned_degrees(dist, n, make_rng(rng)).tolist())


# -- uniform C_n ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _BlockLaw:
    """Poisson intensities of block sizes at ``y``; sizes past the head are pooled."""

    head: np.ndarray      # intensity of sizes 1..J
    tail_mass: float
    tail_cdf: np.ndarray  # conditional law of sizes J+1..K
    J: int


def _block_law(spec, cs) -> _BlockLaw:
    t = size_table(spec, cs.y)
    inten = t.pmf * cs.lambda_
    J = min(HEAD_SIZES, len(inten) - 1)
    tail = inten[J + 1:]
    mass = float(tail.sum())
    cdf = np.cumsum(tail) / mass if mass > 0 else np.ones(0)
    if len(cdf):
        cdf[-1] = 1.0
    return _BlockLaw(inten[1:J + 1], mass, cdf, J)


def _accept_block_sizes(spec, cs, n, rng) -> np.ndarray:
    """Block sizes of the whole tree: Poisson totals accepted when they sum to ``n - 1``."""
    law = _block_law(spec, cs)
    j = np.arange(1, law.J + 1)
    batch = max(1, min(1024, int(3 * math.sqrt(cs.sigma2 * n)) + 1))
    while True:
        heads = rng.poisson(n * law.head, size=(batch, law.J))
        need = n - 1 - heads @ j
        if law.tail_mass > 0:
            ntail = rng.poisson(n * law.tail_mass, size=batch)
        else:
            ntail = np.zeros(batch, np.int64)
        # rows that cannot succeed whatever their tail sizes are skipped
        ok = np.nonzero(np.where(ntail == 0, need == 0, need >= (law.J + 1) * ntail))[0]
        for a in ok:
            tail = np.searchsorted(law.tail_cdf, rng.random(int(ntail[a])), side="right") + law.J + 1
            if tail.sum() == need[a]:
                return np.concatenate((np.repeat(j, heads[a]), tail)).astype(np.int64)


def _tree_first_degrees(spec, cs, n, rng):
    """Block sizes, owners and the cycle-lemma rotation of the outdegrees."""
    sizes = _accept_block_sizes(spec, cs, n, rng)
    owner = rng.integers(0, n, len(sizes))
    deg = np.bincount(owner, weights=sizes, minlength=n).astype(np.int64)
    r = cycle_lemma(deg)
    return np.roll(deg, -r), (owner - r) % n, sizes


def _tree_first_skeleton(spec, cs, n, rng):
    """Preorder degrees plus blocks (owner, size) sorted by owner."""
    deg, owner, sizes = _tree_first_degrees(spec, cs, n, rng)
    order = np.argsort(owner, kind="stable")
    return deg, owner[order], sizes[order]


def _preorder_flat(spec, n, deg, owner, sizes, rng) -> FlatGraph:
    parent = K.preorder_parents(deg)
    # children grouped by parent; each parent's blocks take its children consecutively
    mem = np.argsort(parent[1:], kind="stable") + 1
    return _flat(spec, n, owner, sizes, mem, rng)


def _gw_enrich_skeleton(spec, cs, n, rng):
    """Conditioned GW tree, then each offspring set enriched by rejection."""
    deg = conditioned_degrees(OffspringDistribution.from_class(spec), n, rng)
    table = size_table(spec, cs.y)
    owner, sizes = [], []
    for v, k in enumerate(deg):
        if k == 0:
            continue
        while True:
            m = rng.poisson(cs.lambda_)
            s = table.sample(rng, m)
            if s.sum() == k:
                break
        owner.extend([v] * m)
        sizes.extend(s.tolist())
    return deg, np.asarray(owner, np.int64), np.asarray(sizes, np.int64)


def _rejection_skeleton(spec, cs, n, rng, chunk=1 << 14):
    table = size_table(spec, cs.y)
    pois = rng.poisson(cs.lambda_, chunk)
    sizes = table.sample(rng, chunk)
    while True:
        status, ip0, is0, ip1, is1 = K.gw_attempts(pois, sizes, n)
        if status == 1:
            return pois[ip0:ip1], sizes[is0:is1]
        # resume the unfinished attempt on an extended stream
        pois = np.concatenate((pois[ip0:], rng.poisson(cs.lambda_, chunk)))
        sizes = np.concatenate((sizes[is0:], table.sample(rng, chunk)))


METHODS = ("tree_first", "rejection", "gw_enrich")


def uniform_flat(spec: ClassSpec, n: int, rng, method: str = "tree_first") -> FlatGraph:
    """Uniform rooted graph with ``n`` vertices as a :class:`FlatGraph` (root = vertex 0)."""
    cs = constant_set(spec)
    _check_size(n, cs.span)
    if n == 1:
        return _single_vertex()
    if method == "tree_first":
        deg, owner, sizes = _tree_first_skeleton(spec, cs, n, rng)
        return _preorder_flat(spec, n, deg, owner, sizes, rng)
    if method == "gw_enrich":
        deg, owner, sizes = _gw_enrich_skeleton(spec, cs, n, rng)
        return _preorder_flat(spec, n, deg, owner, sizes, rng)
    if method == "rejection":
        counts, sizes = _rejection_skeleton(spec, cs, n, rng)
        return _bfs_flat(spec, n, counts, sizes, rng)
    raise ValueError(f"unknown method {method!r}")


def sample_uniform_cn(spec: ClassSpec, n: int, rng, method: str = "tree_first") -> LabeledGraph:
    """Uniform random graph of the class on ``1..n``.

    The result carries a root (``g.root``) which is uniform and independent
    of the unrooted graph; ignore it for the unrooted law.
    """
    rng = make_rng(rng)
    return uniform_flat(spec, n, rng, method).to_graph(rng)


def uniform_height(spec: ClassSpec, n: int, rng) -> int:
    """Height of a uniform rooted graph; skips block construction when blocks are cliques."""
    if spec.name in ("trees", "forb_c4"):
        cs = constant_set(spec)
        _check_size(n, cs.span)
        if n == 1:
            return 0
        deg, _, _ = _tree_first_degrees(spec, cs, n, rng)
        return int(K.plane_tree_height(deg))
    return uniform_flat(spec, n, rng).metrics(diameter=False)[0]


# -- size-biased enriched trees -------------------------------------------------------

def size_biased_flat(spec: ClassSpec, ell: int, rng, max_size: int = MAX_VERTICES, spine_only: bool = False):
    """Size-biased enriched tree with ``ell`` mutant vertices on the spine.

    Returns ``(FlatGraph, spine)`` where ``spine`` lists the flat ids of the
    spine vertices ``v_0 (root), ..., v_ell``.  With ``spine_only`` the
    ordinary blocks are left out, which keeps exactly the chain of pointed
    blocks (and hence all distances along the spine).
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    cs = constant_set(spec)
    table = size_table(spec, cs.y)
    ptable = size_table(spec, cs.y, pointed=True)
    pois = _Stream(lambda m: rng.poisson(cs.lambda_, m))
    sizes = _Stream(lambda m: table.sample(rng, m))
    bstar, bsize = [], []
    spine = [0]
    queue = [0]
    nxt = 1
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        mutant = len(spine) <= ell and v == spine[-1]
        blocks = [] if spine_only else [sizes.next() for _ in range(pois.next())]
        if mutant:
            blocks.append(int(ptable.sample(rng)))
        for i, k in enumerate(blocks):
            bstar.append(v)
            bsize.append(k)
            members = list(range(nxt, nxt + k))
            nxt += k
            if not spine_only:
                queue.extend(members)
            if mutant and i == len(blocks) - 1:
                spine.append(members[int(rng.integers(0, k))])
                if spine_only:
                    queue.append(spine[-1])
        if nxt > max_size:
            raise SamplerRunaway(f"size-biased tree exceeded {max_size} vertices")
    n = nxt
    if n == 1:
        return _single_vertex(), spine
    mem = np.arange(1, n)
    return _flat(spec, n, bstar, bsize, mem, rng), spine


def sample_size_biased(spec: ClassSpec, ell: int, rng, max_size: int = MAX_VERTICES):
    """``(EnrichedTree, spine)`` with spine vertex labels ``v_0, ..., v_ell``."""
    rng = make_rng(rng)
    flat, spine = size_biased_flat(spec, ell, rng, max_size)
    perm = rng.permutation(flat.n) + 1
    ge = perm[flat.global_edges()] if len(flat.eu) else np.zeros((0, 2), int)
    g = LabeledGraph(flat.n, [(int(a), int(b)) for a, b in ge], root=int(perm[0]))
    return to_enriched_tree(g, int(perm[0])), [int(perm[v]) for v in spine]


def _extend_until(fn, draw, chunk):
    """Call ``fn(stream)`` on growing prefixes of one stream until it completes."""
    stream = draw(chunk)
    while True:
        out = fn(stream)
        if out is not None:
            return out
        stream = np.concatenate((stream, draw(len(stream))))


def size_biased_size_counts(spec: ClassSpec, ell: int, n: int, runs: int, rng) -> int:
    """Number of ``runs`` size-biased trees with ``ell`` mutants having exactly ``n`` vertices.

    Only sizes are simulated: each mutant contributes its ``xi`` children plus
    the non-spine members of a pointed block, every such vertex and ``v_ell``
    roots an independent Galton-Watson tree.
    """
    if ell >= n:
        return 0
    cs = constant_set(spec)
    dist = OffspringDistribution.from_class(spec)
    ptable = size_table(spec, cs.y, pointed=True)
    if ell:
        xi = dist.sample(rng, (runs, ell)).sum(axis=1)
        kk = ptable.sample(rng, (runs, ell)).sum(axis=1)
        roots = 1 + xi + kk - ell
    else:
        roots = np.ones(runs, np.int64)
    roots = roots.astype(np.int64)
    cap = n - ell

    def run(stream):
        out, pos = K.forest_sizes_hit(stream, roots, cap)
        return None if pos < 0 else out

    sizes = _extend_until(run, lambda m: dist.sample(rng, m).astype(np.int64), 4 * runs + 1024)
    return int(np.count_nonzero(sizes == cap))


def boltzmann_size_counts(spec: ClassSpec, n: int, runs: int, rng) -> int:
    """Number of ``runs`` Boltzmann objects with exactly ``n`` vertices (block-by-block route)."""
    cs = constant_set(spec)
    table = size_table(spec, cs.y)
    pois = rng.poisson(cs.lambda_, 4 * runs + 1024)
    sizes = table.sample(rng, 4 * runs + 1024)
    while True:
        out, ip, _ = K.compound_sizes(pois, sizes, runs, n)
        if ip >= 0:
            return int(np.count_nonzero(out == n))
        pois = np.concatenate((pois, rng.poisson(cs.lambda_, len(pois))))
        sizes = np.concatenate((sizes, table.sample(rng, len(sizes))))


# -- FPP helpers -------------------------------------------------------------------

def weighted_shp_samples(spec: ClassSpec, wd: WeightDistribution, m: int, rng) -> np.ndarray:
    """Weighted star-to-root distances in ``m`` Boltzmann pointed blocks at ``y``."""
    cs = constant_set(spec)
    ptable = size_table(spec, cs.y, pointed=True)
    sizes = ptable.sample(rng, m)
    e_off, eu, ev = _local_edges(spec, sizes, rng)
    w = np.asarray(wd.sample(rng, len(eu)), float)
    roots = np.floor(rng.random(m) * sizes).astype(np.int64) + 1
    out = np.empty(m)
    single = np.diff(e_off) == 1
    out[single] = w[e_off[:-1][single]]
    for b in np.nonzero(~single)[0]:
        k = int(sizes[b])
        lo, hi = e_off[b], e_off[b + 1]
        out[b] = _star_distance(k, eu[lo:hi], ev[lo:hi], w[lo:hi], int(roots[b]))
    return out


def _star_distance(k, eu, ev, w, target):
    adj = [[] for _ in range(k + 1)]
    for a, b, x in zip(eu, ev, w):
        adj[a].append((b, x))
        adj[b].append((a, x))
    dist = [math.inf] * (k + 1)
    dist[0] = 0.0
    h = [(0.0, 0)]
    while h:
        d, u = heapq.heappop(h)
        if u == target:
            return d
        if d > dist[u]:
            continue
        for v, x in adj[u]:
            if d + x < dist[v]:
                dist[v] = d + x
                heapq.heappush(h, (d + x, v))
    return dist[target]
