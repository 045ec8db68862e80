"""The five block-stable graph classes.

Each class is described by its derived block series ``B'(z)`` (closed form,
first three derivatives, and exact coefficients), a way to draw uniformly
labeled derived blocks of a given size, a Boltzmann sampler for pointed
derived blocks, the analytic value of ``kappa = E[shp]`` and a membership
test for blocks.

Size of a derived block always means the number of non-star vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import networkx as nx
import numpy as np

from .errors import ParameterOutOfRange, SamplerRunaway, SingularSystem, UnknownClass
from .graphs import LabeledGraph, PointedBlock, block_decompose
from .series import TruncatedSeries
from ._kernels import bra_block

CLASS_NAMES = ("trees", "forb_c4", "forb_c5", "cacti", "outerplanar")

TAIL_TOL = 1e-13
MAX_TABLE = 1 << 17
MAX_FRAMES = 10**6
OUTER_RADIUS = 3.0 - 2.0 * math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ClassSpec:
    name: str
    b1: Callable[[float], float]
    b2: Callable[[float], float]
    b3: Callable[[float], float]
    radius: float                               # radius of convergence of B'
    coefficients: Callable[[int, bool], list]   # exact or float EGF coeffs of B'
    weights: Callable[[float, int], np.ndarray]  # b'_k x^k for k = 0..K
    derived_block: Callable                     # (k, rng) -> local edge list on 0..k, 0 = star
    block_member: Callable[[LabeledGraph], bool]
    kappa: Callable[[float], float]
    shp_given_size: Callable | None = None      # vectorized (sizes, rng) -> shp
    span: int = field(default=1)

    def b1_series(self, order: int = 64, exact: bool = False) -> TruncatedSeries:
        return TruncatedSeries(self.coefficients(order, exact), exact=exact)

    def block_sampler(self, x: float, rng) -> PointedBlock:
        return sample_pointed_block(self, x, rng)

    def kappa_analytic(self, y: float) -> float:
        return self.kappa(y)

    def __repr__(self):
        return f"ClassSpec({self.name!r})"


# -- size tables ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SizeTable:
    """Inverse-CDF table for a distribution on sizes ``1..K``."""

    pmf: np.ndarray          # pmf[k] for k = 0..K (pmf[0] == 0)
    total: float             # normalizing constant before truncation
    tail: float              # bound on the dropped mass (relative)

    @property
    def cdf(self) -> np.ndarray:
        return self._cdf

    def __post_init__(self):
        c = np.cumsum(self.pmf)
        c[-1] = 1.0
        object.__setattr__(self, "_cdf", c)

    def sample(self, rng, size=None):
        u = rng.random(size)
        return np.searchsorted(self._cdf, u, side="right")

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))


@lru_cache(maxsize=64)
def _size_table(name: str, x: float, pointed: bool) -> SizeTable:
    spec = make_class(name)
    if not 0 < x <= spec.radius:
        raise ParameterOutOfRange(f"x={x} outside (0, {spec.radius}]")
    K = 64
    while True:
        w = spec.weights(x, K)
        if pointed:
            w = w * np.arange(K + 1)
        total = float(w.sum())
        last = w[-1]
        if last == 0.0:
            tail = 0.0
        else:
            q = max(w[-1] / w[-2] if w[-2] > 0 else 1.0, x / spec.radius if math.isfinite(spec.radius) else 0.0)
            tail = math.inf if q >= 1 else last * q / (1 - q) / total
        if tail < TAIL_TOL:
            break
        K *= 2
        if K > MAX_TABLE:
            raise ParameterOutOfRange(f"{name}: block-size tail at x={x} does not vanish by size {MAX_TABLE}")
    # trim trailing zeros
    nz = np.nonzero(w)[0]
    w = w[: nz[-1] + 1]
    return SizeTable(w / total, total, tail)


def size_table(spec: ClassSpec, x: float, pointed: bool = False) -> SizeTable:
    """Sizes of Boltzmann derived blocks at ``x`` (pointed: size-biased)."""
    return _size_table(spec.name, float(x), pointed)


# -- per-class data -----------------------------------------------------------

def _poly_weights(coeffs):
    def weights(x, K):
        w = np.zeros(K + 1)
        for k, c in enumerate(coeffs):
            if k <= K:
                w[k] = c * x**k
        return w
    return weights


def _poly_coefficients(coeffs):
    def coefficients(order, exact):
        out = [Fraction(c) if exact else float(c) for c in coeffs[:order]]
        return out + [0] * (order - len(out))
    return coefficients


# trees: B'(z) = z
def _trees_block(k, rng):
    if k != 1:
        raise ValueError("trees have only single-edge blocks")
    return [(0, 1)]


def _trees_member(g):
    return g.n == 2 and g.m == 1


# Forb(C4): blocks K2 and K3, B(z) = z^2/2 + z^3/6
def _c4_block(k, rng):
    if k == 1:
        return [(0, 1)]
    if k == 2:
        return [(0, 1), (0, 2), (1, 2)]
    raise ValueError("Forb(C4) blocks have at most 2 non-star vertices")


def _c4_member(g):
    return (g.n == 2 and g.m == 1) or (g.n == 3 and g.m == 3)


# Forb(C5): B'(x) = x(x+2)e^x - x(15x + 2x^2 + 6)/6.
# Differentiating twice by hand:
#   B''(x)  = (x^2 + 4x + 2) e^x - 1 - 5x - x^2
#   B'''(x) = (x^2 + 6x + 6) e^x - 5 - 2x
def _c5_b1(x):
    return (x * x + 2 * x) * math.exp(x) - x - 2.5 * x * x - x**3 / 3


def _c5_b2(x):
    return (x * x + 4 * x + 2) * math.exp(x) - 1 - 5 * x - x * x


def _c5_b3(x):
    return (x * x + 6 * x + 6) * math.exp(x) - 5 - 2 * x


def _c5_coefficients(order, exact):
    # [x^k] B' = 1/(k-2)! + 2/(k-1)! for k >= 4; small k fixed by the S family.
    F = Fraction if exact else float
    out = []
    for k in range(order):
        if k == 0:
            c = F(0)
        elif k == 1:
            c = F(1)
        elif k == 2:
            c = F(1) / 2
        elif k == 3:
            c = F(5) / 3
        else:
            c = Fraction(k + 1, math.factorial(k - 1))
            c = c if exact else float(c)
        out.append(c)
    return out


def _c5_weights(x, K):
    w = np.zeros(K + 1)
    w[1] = x
    if K >= 2:
        w[2] = x * x / 2
    if K >= 3:
        w[3] = 5 * x**3 / 3
    # x^k/(k-2)! and 2 x^k/(k-1)!, built multiplicatively
    t = x**4 / 2.0    # x^k/(k-2)! at k = 4
    for k in range(4, K + 1):
        w[k] = t + 2.0 * t / (k - 1)
        t *= x / (k - 1)
    return w


def _c5_counts(k):
    """Labeled counts of derived blocks with k non-star vertices by family."""
    n = k + 1
    s = {1: 1, 2: 1, 3: 4}.get(k, 0)
    p = math.comb(n, 2) if n >= 4 else 0
    h = math.comb(n, 2) if n >= 5 else 0
    return s, h, p


def _c5_block(k, rng):
    s, h, p = _c5_counts(k)
    if s + h + p == 0:
        raise ValueError(f"no Forb(C5) block with {k} non-star vertices")
    u = rng.random() * (s + h + p)
    if u < s:
        if k == 1:
            return [(0, 1)]
        if k == 2:
            return [(0, 1), (0, 2), (1, 2)]
        if u < 1:
            return [(a, b) for a in range(4) for b in range(a + 1, 4)]
        # C4 through the star: choose the vertex opposite the star
        opp = int(rng.integers(1, 4))
        a, b = [v for v in (1, 2, 3) if v != opp]
        return [(0, a), (a, opp), (opp, b), (b, 0)]
    pair = rng.choice(k + 1, size=2, replace=False)
    l1, l2 = int(min(pair)), int(max(pair))
    edges = [(l, r) if l < r else (r, l) for r in range(k + 1) if r not in (l1, l2) for l in (l1, l2)]
    if u >= s + h:
        edges.append((l1, l2))
    return edges


def _c5_shp(sizes, rng):
    """shp of uniform pointed Forb(C5) blocks with the given sizes."""
    sizes = np.asarray(sizes)
    out = np.ones(len(sizes))
    m = len(sizes)
    u = rng.random(m)
    # k == 3 S-family: K4 (prob 1/10) -> 1, C4 (3/10) -> 2 w.p. 1/3, P (6/10)
    n = sizes + 1
    s = np.where(sizes == 3, 4, 0).astype(float)
    p = np.where(n >= 4, n * (n - 1) / 2, 0.0)
    h = np.where(n >= 5, n * (n - 1) / 2, 0.0)
    tot = np.where(sizes <= 2, 1.0, s + h + p)
    is_c4 = (sizes == 3) & (u * tot >= 1) & (u * tot < 4)
    is_h = (u * tot >= s) & (u * tot < s + h)
    is_p = (u * tot >= s + h) & (sizes >= 3)
    v = rng.random(m)
    out[is_c4 & (v < 1 / 3)] = 2
    # K_{2,m} / K+_{2,m}: star is left w.p. 2/n; root left w.p. 1/k given star
    # left, else 2/k.  Same side -> 2 (1 if both left and extra edge).
    fam = is_h | is_p
    star_left = rng.random(m) < 2.0 / n
    rl = rng.random(m)
    root_left = np.where(star_left, rl < 1.0 / sizes, rl < 2.0 / sizes)
    same = star_left == root_left
    d = np.where(same, 2.0, 1.0)
    d = np.where(same & star_left & is_p, 1.0, d)
    out[fam] = d[fam]
    return out


def _c5_member(g):
    n = g.n
    if n == 2:
        return g.m == 1
    if not _two_connected(g):
        return False
    if n <= 4:
        return True
    hubs = [v for v in range(1, n + 1) if g.degree(v) >= 3]
    if len(hubs) != 2:
        return False
    a, b = hubs
    return all(set(g.adj[v]) == {a, b} for v in range(1, n + 1) if v not in (a, b))


def _c5_kappa(y):
    return (2 * y * y + 4 * y + 3) * y * math.exp(y) - (3 * y * y + 12 * y + 4) * y / 2


# cacti: B'(z) = z + z^2/(2(1-z)) = z/2 - 1/2 + 1/(2(1-z))
#   B''(z) = 1/2 + 1/(2(1-z)^2),  B'''(z) = 1/(1-z)^3
def _cac_b1(z):
    return z + z * z / (2 * (1 - z))


def _cac_b2(z):
    return 0.5 + 0.5 / (1 - z) ** 2


def _cac_b3(z):
    return 1.0 / (1 - z) ** 3


def _cac_coefficients(order, exact):
    F = Fraction if exact else float
    return [F(0) if k == 0 else F(1) if k == 1 else F(1) / 2 for k in range(order)]


def _cac_weights(x, K):
    w = 0.5 * x ** np.arange(K + 1, dtype=float)
    w[0] = 0.0
    w[1] = x
    return w


def _cac_block(k, rng):
    if k == 1:
        return [(0, 1)]
    perm = rng.permutation(np.arange(1, k + 1))
    cyc = [0] + [int(v) for v in perm]
    return [(cyc[i], cyc[(i + 1) % (k + 1)]) for i in range(k + 1)]


def _cac_shp(sizes, rng):
    sizes = np.asarray(sizes)
    pos = np.floor(rng.random(len(sizes)) * sizes).astype(np.int64) + 1
    return np.minimum(pos, sizes + 1 - pos).astype(float)


def _cac_member(g):
    if g.n == 2:
        return g.m == 1
    return g.n >= 3 and g.m == g.n and all(g.degree(v) == 2 for v in range(1, g.n + 1)) and g.is_connected()


def _cac_kappa(y):
    return (y**4 - 2 * y**3 + 2 * y - 2) / ((y * y - 2 * y + 2) * (1 + y) * (y - 1))


# outerplanar: B'(z) = (z + Ba(z))/2 with Ba(z) = (1 + z - R)/4, R = sqrt(z^2 - 6z + 1).
#   Ba'   = (1 - (z - 3)/R)/4
#   Ba''  = 2/R^3
# so B''(z) = (1 + Ba'(z))/2 and B'''(z) = Ba''(z)/2 = 1/R^3.
def _sqrt_disc(z):
    d = z * z - 6 * z + 1
    if d < 0:
        raise ValueError(f"z={z} beyond the radius of convergence")
    return math.sqrt(d)


def ba(z: float) -> float:
    return (1 + z - _sqrt_disc(z)) / 4


def ba_prime(z: float) -> float:
    return (1 - (z - 3) / _sqrt_disc(z)) / 4


def bra(z: float) -> float:
    """Generating function of rooted oriented outerplanar blocks."""
    w = ba(z)
    return z * (w - 1) ** 2 / (2 * w * w - 4 * w + 1)


def _op_b1(z):
    return (z + ba(z)) / 2


def _op_b2(z):
    return (1 + ba_prime(z)) / 2


def _op_b3(z):
    return 1.0 / _sqrt_disc(z) ** 3


def _schroeder(order):
    """Exact coefficients of Ba: 0, 1, 1, 3, 11, 45, ..."""
    s = [0, 1, 1]
    for n in range(2, order):
        s.append((3 * (2 * n - 1) * s[n] - (n - 2) * s[n - 1]) // (n + 1))
    return s[:order]


def _op_coefficients(order, exact):
    F = Fraction if exact else float
    s = _schroeder(max(order, 3))
    out = [F(0)]
    for k in range(1, order):
        out.append(F(1) if k == 1 else F(s[k]) / 2)
    return out


def _scaled_schroeder(x, K):
    """``s_k x^k`` for k = 0..K via the three-term recurrence."""
    t = np.zeros(K + 1)
    t[1] = x
    if K >= 2:
        t[2] = x * x
    for n in range(2, K):
        t[n + 1] = (3 * (2 * n - 1) * x * t[n] - (n - 2) * x * x * t[n - 1]) / (n + 1)
    return t


def _op_weights(x, K):
    w = _scaled_schroeder(x, K) / 2
    w[1] = x
    return w


class _BaCounts:
    """Scaled Ba counts for drawing uniform oriented blocks of a given size."""

    def __init__(self):
        self.c = _scaled_schroeder(OUTER_RADIUS, 64)
        self._cdf: dict = {}

    def _ensure(self, k):
        if k >= len(self.c):
            K = len(self.c) - 1
            while K < k:
                K *= 2
            self.c = _scaled_schroeder(OUTER_RADIUS, K)
            self._cdf.clear()

    def first_part_cdf(self, k):
        # first part j (1..k-1) of a >= 2 part sequence: weight c_j * F_{k-j},
        # F_r = 2 c_r for r >= 2 and F_1 = c_1.
        cdf = self._cdf.get(k)
        if cdf is None:
            self._ensure(k)
            c = self.c
            rest = 2 * c[k - 1:0:-1].copy()
            rest[-1] = c[1]
            w = c[1:k] * rest
            cdf = np.cumsum(w)
            cdf /= cdf[-1]
            if k < 4096:
                self._cdf[k] = cdf
        return cdf

    def composition(self, k, rng):
        parts = []
        while True:
            j = int(np.searchsorted(self.first_part_cdf(k), rng.random(), side="right")) + 1
            parts.append(j)
            r = k - j
            if r == 1 or rng.random() < 0.5:
                parts.append(r)
                return parts
            k = r


_BA = _BaCounts()


def uniform_ba_block(k: int, rng) -> list:
    """Uniform rooted oriented outerplanar block with k non-star vertices.

    Returns local edges on ``0..k`` (0 = star); vertex ids are in creation
    order, the caller relabels.
    """
    edges = []
    nxt = 2
    tasks = [(0, 1, k)]
    while tasks:
        t, h, s = tasks.pop()
        edges.append((t, h))
        if s == 1:
            continue
        parts = _BA.composition(s, rng)
        face = [t] + list(range(nxt, nxt + len(parts) - 1)) + [h]
        nxt += len(parts) - 1
        for i, j in enumerate(parts):
            tasks.append((face[i], face[i + 1], j))
    return edges


def _op_block(k, rng):
    if k == 1:
        return [(0, 1)]
    edges = uniform_ba_block(k, rng)
    perm = np.concatenate(([0], rng.permutation(np.arange(1, k + 1))))
    return [(int(perm[a]), int(perm[b])) for a, b in edges]


def _op_member(g):
    if g.n == 2:
        return g.m == 1
    if not _two_connected(g):
        return False
    # outerplanar iff adding an apex joined to every vertex keeps it planar
    h = nx.Graph(g.edges())
    h.add_edges_from((0, v) for v in range(1, g.n + 1))
    return nx.check_planarity(h)[0]


def _op_matrix(w: float):
    d = 2 * w**4 - 4 * w**3 + 3 * w - 1
    off = -(w**3) + w * w
    col = w**3 - 2 * w * w + w
    A = np.array([
        [d, off, col],
        [off, d, col],
        [-w * w + w, -w * w + w, 2 * w**4 - 4 * w**3 + w * w + 2 * w - 1],
    ])
    b = np.array([2 * w**4 - 4 * w**3 - w * w + 3 * w - 1, -w, -w * w])
    return A, b


def outerplanar_shp_system(w: float):
    """Mean distances (S, S', M) for rooted oriented blocks at ``Ba(x) = w``.

    Returns the solution vector and the determinant of the 3x3 system.
    """
    A, b = _op_matrix(w)
    det = float(np.linalg.det(A))
    if abs(det) < 1e-9:
        raise SingularSystem(f"det(A) = {det}")
    return np.linalg.solve(A, b), det


def outerplanar_mean_s_closed(w: float) -> float:
    return (8 * w**4 - 16 * w**3 + 4 * w - 1) / ((4 * w**3 - 6 * w * w - 2 * w + 1) * (2 * w - 1))


def _op_kappa(y):
    mu, _ = outerplanar_shp_system(ba(y))
    return y / 2 + (1 - y / 2) * mu[0]


def _two_connected(g: LabeledGraph) -> bool:
    if g.n < 3 or not g.is_connected():
        return False
    return len(block_decompose(g).blocks) == 1


def _face_size_table(x):
    """Pr{s = i} for the root face of a rooted oriented block at x."""
    w = ba(x)
    if not w < 1 - 1 / math.sqrt(2):
        raise ParameterOutOfRange(f"Ba({x}) = {w} too large for the face-size law")
    p2 = x / bra(x)
    i = np.arange(3, 64)
    probs = [p2] + list((i - 1) * w ** (i - 2.0))
    while probs[-1] > 1e-18:
        j = len(probs) + 2
        probs.append((j - 1) * w ** (j - 2.0))
    probs = np.array(probs)
    total = probs.sum()
    if abs(total - 1) > 1e-9:
        raise ParameterOutOfRange(f"face-size law sums to {total}")
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return cdf  # index i -> face size i + 2


def _ba_factor_table(x):
    w = ba(x)
    if not w < 0.5:
        raise ParameterOutOfRange(f"Ba({x}) = {w} >= 1/2")
    pe = x / w
    probs = [pe]
    k = 2
    while True:
        probs.append(w ** (k - 1))
        if probs[-1] < 1e-18:
            break
        k += 1
    probs = np.array(probs)
    total = probs.sum()
    if abs(total - 1) > 1e-9:
        raise ParameterOutOfRange(f"Ba factor law sums to {total}")
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return cdf  # index 0 -> single edge, index i -> i + 1 factors


@lru_cache(maxsize=16)
def _outer_tables(x):
    return _face_size_table(x), _ba_factor_table(x)


class _BraRunner:
    """Drives the compiled outerplanar block sampler on a buffered uniform stream."""

    def __init__(self, x, rng, chunk=4096, cap=256):
        self.face_cdf, self.fac_cdf = _outer_tables(float(x))
        self.rng = rng
        self.chunk = chunk
        self.u = rng.random(chunk)
        self.pos = 0
        self._scratch(cap)

    def _scratch(self, cap):
        if cap > MAX_FRAMES:
            raise SamplerRunaway("outerplanar block sampler exceeded its frame budget")
        self.eu = np.empty(cap, np.int64)
        self.ev = np.empty(cap, np.int64)
        self.kind = np.empty(cap, np.int64)
        self.tail = np.empty(cap, np.int64)
        self.head = np.empty(cap, np.int64)

    def next(self):
        """``(edge count, vertex count, root)``; edges are left in ``eu``/``ev``."""
        while True:
            status, pos, ne, nv, root = bra_block(self.face_cdf, self.fac_cdf, self.u, self.pos, self.eu,
                                                  self.ev, self.kind, self.tail, self.head)
            if status == 1:
                self.pos = pos
                return ne, nv, root
            if status == 0:
                # restart this block on a longer stream with the same prefix
                self.u = np.concatenate((self.u[self.pos:], self.rng.random(self.chunk + len(self.u))))
                self.pos = 0
            else:
                self._scratch(2 * len(self.eu))


def sample_bra_block(x: float, rng):
    """Recursive Boltzmann sampler for rooted oriented outerplanar blocks.

    Returns ``(edges, n_vertices, root)`` on local labels with star 0.
    """
    run = _BraRunner(x, rng, chunk=256)
    ne, nv, root = run.next()
    return list(zip(run.eu[:ne].tolist(), run.ev[:ne].tolist())), nv, root


def pointed_block_sizes(spec: ClassSpec, x: float, m: int, rng, method: str | None = None) -> np.ndarray:
    """Non-star sizes of ``m`` Boltzmann pointed blocks, drawn as :func:`sample_pointed_block` draws them."""
    if method is None:
        method = "recursive" if spec.name == "outerplanar" else "table"
    if method == "table":
        return np.asarray(size_table(spec, x, pointed=True).sample(rng, m), np.int64)
    if spec.name != "outerplanar":
        raise ValueError("recursive sampler exists only for outerplanar blocks")
    edge = rng.random(m) < x / (x + bra(x))
    out = np.ones(m, np.int64)
    run = _BraRunner(x, rng)
    for i in np.nonzero(~edge)[0]:
        out[i] = run.next()[1] - 1
    return out


def _op_shp(x, m, rng):
    """shp of ``m`` Boltzmann pointed outerplanar blocks at x.

    Only the chain of root faces leading to the root matters: with the
    root face split into a path of length l before and k after the edge
    that leads on, the distances (S to the star, S' to the head) update by
    ``S <- min(l + S, k + 1 + S')`` and ``S' <- min(l + 1 + S, k + S')``.
    """
    face_cdf, _ = _outer_tables(float(x))
    edge = rng.random(m) < x / (x + bra(x))
    active = np.nonzero(~edge)[0]
    levels = []
    while len(active):
        s = np.searchsorted(face_cdf, rng.random(len(active)), side="right") + 2
        stop = s == 2
        go = active[~stop]
        sg = s[~stop]
        t = np.floor(rng.random(len(go)) * (sg - 1)).astype(np.int64)
        levels.append((go, t, sg - 2 - t))
        active = go
        if len(levels) > MAX_FRAMES:
            raise SamplerRunaway("outerplanar chain runaway")
    S = np.ones(m)
    Sp = np.zeros(m)
    for idx, l, k in reversed(levels):
        a, b = S[idx], Sp[idx]
        S[idx] = np.minimum(l + a, k + 1 + b)
        Sp[idx] = np.minimum(l + 1 + a, k + b)
    out = S
    out[edge] = 1.0
    return out


# -- construction ----------------------------------------------------------

def _span(spec_weights, K=64):
    w = spec_weights(0.5, K)
    g = 0
    for k in np.nonzero(w)[0]:
        g = math.gcd(g, int(k))
    return g


@lru_cache(maxsize=None)
def make_class(name: str) -> ClassSpec:
    if name == "trees":
        kw = dict(b1=lambda z: z, b2=lambda z: 1.0, b3=lambda z: 0.0, radius=math.inf,
                  coefficients=_poly_coefficients([0, 1]), weights=_poly_weights([0, 1]),
                  derived_block=_trees_block, block_member=_trees_member, kappa=lambda y: 1.0,
                  shp_given_size=lambda s, rng: np.ones(len(s)))
    elif name == "forb_c4":
        kw = dict(b1=lambda z: z + z * z / 2, b2=lambda z: 1 + z, b3=lambda z: 1.0, radius=math.inf,
                  coefficients=_poly_coefficients([0, 1, Fraction(1, 2)]),
                  weights=_poly_weights([0, 1, 0.5]), derived_block=_c4_block,
                  block_member=_c4_member, kappa=lambda y: 1.0,
                  shp_given_size=lambda s, rng: np.ones(len(s)))
    elif name == "forb_c5":
        kw = dict(b1=_c5_b1, b2=_c5_b2, b3=_c5_b3, radius=math.inf, coefficients=_c5_coefficients,
                  weights=_c5_weights, derived_block=_c5_block, block_member=_c5_member,
                  kappa=_c5_kappa, shp_given_size=_c5_shp)
    elif name == "cacti":
        kw = dict(b1=_cac_b1, b2=_cac_b2, b3=_cac_b3, radius=1.0, coefficients=_cac_coefficients,
                  weights=_cac_weights, derived_block=_cac_block, block_member=_cac_member,
                  kappa=_cac_kappa, shp_given_size=_cac_shp)
    elif name == "outerplanar":
        kw = dict(b1=_op_b1, b2=_op_b2, b3=_op_b3, radius=OUTER_RADIUS, coefficients=_op_coefficients,
                  weights=_op_weights, derived_block=_op_block, block_member=_op_member,
                  kappa=_op_kappa, shp_given_size=None)
    else:
        raise UnknownClass(name)
    return ClassSpec(name=name, span=_span(kw["weights"]), **kw)


def kappa_analytic(spec: ClassSpec, y: float) -> float:
    return spec.kappa(y)


# -- block sampling ------------------------------------------------------------

def _to_graph(edges, k):
    return LabeledGraph(k + 1, [(a + 1, b + 1) for a, b in edges])


def sample_derived_block(spec: ClassSpec, x: float, rng) -> tuple[list, int]:
    """Boltzmann derived block at x: ``(local edges on 0..k, k)``."""
    k = int(size_table(spec, x).sample(rng))
    return spec.derived_block(k, rng), k


def sample_pointed_block(spec: ClassSpec, x: float, rng, method: str | None = None) -> PointedBlock:
    """Boltzmann pointed derived block at x (star at label 1).

    ``method="table"`` draws the size from the tabulated size-biased law and
    then a uniform block of that size; ``method="recursive"`` (the default
    for outerplanar) runs the recursive face decomposition sampler.
    """
    if method is None:
        method = "recursive" if spec.name == "outerplanar" else "table"
    if method == "recursive":
        if spec.name != "outerplanar":
            raise ValueError("recursive sampler exists only for outerplanar blocks")
        if rng.random() < x / (x + bra(x)):
            return PointedBlock(LabeledGraph(2, [(1, 2)]), 1, 2)
        edges, nv, root = sample_bra_block(x, rng)
        perm = np.concatenate(([1], rng.permutation(np.arange(2, nv + 1))))
        g = LabeledGraph(nv, [(int(perm[a]), int(perm[b])) for a, b in edges])
        return PointedBlock(g, 1, int(perm[root]))
    k = int(size_table(spec, x, pointed=True).sample(rng))
    edges = spec.derived_block(k, rng)
    root = int(rng.integers(1, k + 1))
    return PointedBlock(_to_graph(edges, k), 1, root + 1)


def sample_shp(spec: ClassSpec, x: float, m: int, rng) -> np.ndarray:
    """Vectorized shp of ``m`` Boltzmann pointed blocks at x."""
    if spec.name == "outerplanar":
        return _op_shp(x, m, rng)
    sizes = size_table(spec, x, pointed=True).sample(rng, m)
    return spec.shp_given_size(sizes, rng)
