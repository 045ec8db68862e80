import itertools
import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from subcrit.classes import CLASS_NAMES, make_class
from subcrit.constants import constant_set, gw_size_probability
from subcrit.errors import InfeasibleSize, NonPositiveWeight, SamplerRunaway
from subcrit.graphs import (LabeledGraph, class_membership, diameter, height, hop_distance, to_enriched_tree,
                            weighted_distance)
from subcrit.samplers import (OffspringDistribution, RngHandle, WeightDistribution, assign_weights,
                              boltzmann_flat, boltzmann_size_counts, conditioned_degrees, cycle_lemma,
                              sample_boltzmann_pointed, sample_conditioned_gw, sample_offspring_count,
                              sample_size_biased, sample_uniform_cn, size_biased_flat, size_biased_size_counts,
                              uniform_flat, uniform_height, weighted_shp_samples)


def test_streams_reproduce():
    a = RngHandle(7, 3).generator().random(5)
    b = RngHandle(7, 3).generator().random(5)
    c = RngHandle(7, 4).generator().random(5)
    d = RngHandle(7, 3).substream(0).generator().random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c) and not np.array_equal(a, d)


def test_same_stream_same_graph():
    spec = make_class("outerplanar")
    g1 = sample_uniform_cn(spec, 60, RngHandle(1, 9))
    g2 = sample_uniform_cn(spec, 60, RngHandle(1, 9))
    assert g1 == g2 and g1.to_edgelist() == g2.to_edgelist()


# -- offspring law -----------------------------------------------------------------

def test_trees_offspring_is_poisson():
    d = OffspringDistribution.from_class("trees")
    assert d.pmf[0] == pytest.approx(math.exp(-1), rel=1e-12)
    assert d.pmf[:8] == pytest.approx(stats.poisson.pmf(np.arange(8), 1.0), rel=1e-12)


def test_forb_c4_empty_offspring():
    # y is the golden ratio conjugate and B'(y) = y + y^2/2
    y = (math.sqrt(5) - 1) / 2
    assert OffspringDistribution.from_class("forb_c4").pmf[0] == pytest.approx(math.exp(-y - y * y / 2), rel=1e-12)


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_offspring_moments(name):
    d = OffspringDistribution.from_class(name)
    assert abs(d.pmf.sum() - 1) < 1e-12
    assert abs(d.mean - 1) < 1e-9
    assert abs(d.variance - constant_set(name).sigma2) < 1e-8


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_offspring_two_routes_agree(name):
    d = OffspringDistribution.from_class(name)
    rng = np.random.default_rng(5)
    a = sample_offspring_count(d, rng, "table", size=10**6)
    b = sample_offspring_count(d, rng, "compound", size=10**6)
    sd = math.sqrt(d.variance)
    assert abs(a.mean() - 1) <= 3 * sd / 1e3
    assert abs(b.mean() - 1) <= 3 * sd / 1e3
    top = 12
    ca = np.bincount(np.minimum(a, top), minlength=top + 1)
    cb = np.bincount(np.minimum(b, top), minlength=top + 1)
    keep = (ca + cb) > 10
    assert stats.chi2_contingency(np.vstack([ca[keep], cb[keep]]))[1] > 1e-3


# -- Boltzmann sampler -------------------------------------------------------------

def boltzmann_size(spec, rng, max_size):
    """Size of a Boltzmann draw, or None once it passes ``max_size``."""
    try:
        return boltzmann_flat(spec, rng, max_size=max_size).n
    except SamplerRunaway:
        return None


def test_boltzmann_single_vertex_probability():
    spec = make_class("trees")
    rng = np.random.default_rng(2)
    m = 10**5
    ones = sum(boltzmann_size(spec, rng, 1) == 1 for _ in range(m))
    p = math.exp(-1)
    assert abs(ones / m - p) <= 3 * math.sqrt(p * (1 - p) / m)


@pytest.mark.parametrize("name", ["cacti", "outerplanar"])
def test_boltzmann_size_law(name):
    spec = make_class(name)
    rng = np.random.default_rng(3)
    m = 10**5
    sizes = np.empty(m, np.int64)
    for i in range(m):
        sizes[i] = boltzmann_size(spec, rng, 200) or 10**9
    for n in range(1, 11):
        p = gw_size_probability(spec, n)
        hits = np.count_nonzero(sizes == n)
        assert abs(hits / m - p) <= 3 * math.sqrt(p * (1 - p) / m) + 1e-12


def rooted_key(g):
    return g.edge_set(), g.root


def test_boltzmann_uniform_given_size():
    # forb_c4 on 3 vertices: 4 graphs, 12 rootings
    spec = make_class("forb_c4")
    rng = np.random.default_rng(4)
    counts = Counter()
    while sum(counts.values()) < 20000:
        try:
            f = boltzmann_flat(spec, rng, max_size=3)
        except SamplerRunaway:
            continue
        if f.n == 3:
            counts[rooted_key(f.to_graph(rng))] += 1
    assert len(counts) == 12
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


def test_boltzmann_root_degree_coupling():
    # root outdegree of the enriched tree is a xi draw
    spec = make_class("cacti")
    d = OffspringDistribution.from_class(spec)
    rng = np.random.default_rng(6)
    m = 8000
    deg = np.empty(m, np.int64)
    runaways = i = 0
    while i < m:
        # a draw past 10^5 vertices has probability below 2e-3; dropping it moves the law by less than that
        try:
            g = sample_boltzmann_pointed(spec, rng, max_size=10**5)
        except SamplerRunaway:
            runaways += 1
            continue
        t = to_enriched_tree(g, g.root)
        deg[i] = len(t.children[g.root])
        i += 1
    assert runaways < 0.005 * m
    top = 8
    obs = np.bincount(np.minimum(deg, top), minlength=top + 1)
    exp = np.append(d.pmf[:top], 1 - d.pmf[:top].sum()) * m
    assert stats.chisquare(obs, exp).pvalue > 1e-3


# -- conditioned GW --------------------------------------------------------------

def test_cycle_lemma_rotation_is_unique():
    rng = np.random.default_rng(8)
    d = OffspringDistribution.from_class("cacti")
    for _ in range(200):
        n = int(rng.integers(2, 30))
        while True:
            xi = d.sample(rng, n)
            if xi.sum() == n - 1:
                break
        valid = []
        for r in range(n):
            s = np.cumsum(np.roll(xi, -r) - 1)
            if np.all(s[:-1] >= 0):
                valid.append(r)
        assert valid == [cycle_lemma(xi)]
    with pytest.raises(ValueError):
        cycle_lemma(np.array([1, 1, 1]))


def test_conditioned_gw_small_cases():
    d = OffspringDistribution.from_class("trees")
    rng = np.random.default_rng(9)
    assert sample_conditioned_gw(d, 1, rng).n == 1
    with pytest.raises(InfeasibleSize):
        conditioned_degrees(d, 0, rng)


def test_conditioned_gw_three_vertices():
    d = OffspringDistribution.from_class("trees")
    rng = np.random.default_rng(10)
    m = 10**5
    paths = sum(sample_conditioned_gw(d, 3, rng).height() == 2 for _ in range(m))
    # path : cherry = p1^2 : p2 = 1 : 1/2
    p = 2 / 3
    assert stats.chisquare([paths, m - paths], [p * m, (1 - p) * m]).pvalue > 1e-3


# -- uniform C_n -----------------------------------------------------------------

@pytest.mark.parametrize("name", CLASS_NAMES)
def test_two_vertices_is_an_edge(name):
    g = sample_uniform_cn(make_class(name), 2, np.random.default_rng(0))
    assert g.edges() == [(1, 2)]


@pytest.mark.parametrize("name", CLASS_NAMES)
@pytest.mark.parametrize("method", ["tree_first", "rejection", "gw_enrich"])
def test_samples_are_members(name, method):
    spec = make_class(name)
    rng = np.random.default_rng(13)
    for n in (1, 3, 7, 25):
        g = sample_uniform_cn(spec, n, rng, method)
        assert g.n == n and g.is_connected() and class_membership(spec, g)


def test_infeasible_size():
    with pytest.raises(InfeasibleSize):
        sample_uniform_cn(make_class("cacti"), 0, np.random.default_rng(0))


def enumerate_connected(spec, n):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    out = []
    for r in range(n - 1, len(pairs) + 1):
        for es in itertools.combinations(pairs, r):
            g = LabeledGraph(n, es)
            if g.is_connected() and class_membership(spec, g):
                out.append(g.edge_set())
    return out


@pytest.mark.parametrize("method", ["tree_first", "gw_enrich", "rejection"])
def test_uniform_forb_c4_four_vertices(method):
    spec = make_class("forb_c4")
    universe = enumerate_connected(spec, 4)
    rng = np.random.default_rng(14)
    m = 30000
    counts = Counter(sample_uniform_cn(spec, 4, rng, method).edge_set() for _ in range(m))
    assert set(counts) <= set(universe)
    obs = [counts[k] for k in universe]
    assert stats.chisquare(obs).pvalue > 1e-3


def test_root_is_uniform():
    spec = make_class("cacti")
    rng = np.random.default_rng(15)
    roots = [sample_uniform_cn(spec, 6, rng).root for _ in range(30000)]
    assert stats.chisquare(np.bincount(roots, minlength=7)[1:]).pvalue > 1e-3


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_flat_metrics_match_graph_metrics(name):
    spec = make_class(name)
    rng = np.random.default_rng(16)
    wd = WeightDistribution.parse("exp:1")
    for n in (1, 2, 5, 12, 30, 80):
        f = uniform_flat(spec, n, rng)
        g = f.to_graph()
        assert f.metrics() == (height(g, 1), diameter(g))
        fw = f.with_weights(wd, rng)
        gw = fw.to_graph()
        h, d = fw.metrics(weighted=True)
        assert (h, d) == pytest.approx((height(gw, 1, weighted=True), diameter(gw, weighted=True)))


def test_uniform_height_fast_path_law():
    spec = make_class("forb_c4")
    a = [uniform_height(spec, 200, RngHandle(3, i).generator()) for i in range(3000)]
    b = [uniform_flat(spec, 200, RngHandle(4, i).generator()).metrics(diameter=False)[0] for i in range(3000)]
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_methods_agree_on_diameter():
    spec = make_class("forb_c5")
    rng = np.random.default_rng(17)
    a = [uniform_flat(spec, 20, rng, "tree_first").metrics()[1] for _ in range(4000)]
    b = [uniform_flat(spec, 20, rng, "rejection").metrics()[1] for _ in range(4000)]
    assert stats.ks_2samp(a, b).pvalue > 1e-3


# -- size-biased trees ----------------------------------------------------------

def test_size_biased_without_spine():
    t, spine = sample_size_biased(make_class("cacti"), 0, np.random.default_rng(1))
    assert spine == [t.root]


def spine_distance(f, spine):
    if f.n == 1:
        return 0
    e = f.global_edges()
    m = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(f.n, f.n))
    return shortest_path(m, directed=False, unweighted=True, indices=spine[0])[spine[-1]]


def test_size_biased_spine_structure():
    spec = make_class("cacti")
    rng = np.random.default_rng(19)
    done = 0
    while done < 300:
        try:
            t, spine = sample_size_biased(spec, 4, rng, max_size=400)
        except SamplerRunaway:
            continue
        done += 1
        t.check()
        depth = t.depth()
        assert [depth[v] for v in spine] == list(range(5))
        assert all(t.parent[spine[i + 1]] == spine[i] for i in range(4))


def block_shp(f, star, member):
    """Star-to-member distance inside the block of ``f`` hanging at ``star`` that contains ``member``."""
    for b in np.nonzero(f.bstar == star)[0]:
        mem = f.mem[f.mem_off[b]:f.mem_off[b + 1]].tolist()
        if member in mem:
            lo, hi = f.e_off[b], f.e_off[b + 1]
            local = LabeledGraph(len(mem) + 1, [(int(a) + 1, int(c) + 1) for a, c in zip(f.eu[lo:hi], f.ev[lo:hi])])
            return hop_distance(local, 1, mem.index(member) + 2)
    raise AssertionError("no spine block")


@pytest.mark.parametrize("spine_only", [False, True])
def test_spine_distance_is_sum_of_block_shp(spine_only):
    spec = make_class("outerplanar")
    rng = np.random.default_rng(26)
    checked = 0
    while checked < 200:
        try:
            f, sp = size_biased_flat(spec, 3, rng, max_size=3000, spine_only=spine_only)
        except SamplerRunaway:
            continue
        checked += 1
        parts = [block_shp(f, sp[i], sp[i + 1]) for i in range(3)]
        assert spine_distance(f, sp) == sum(parts)
        if spine_only:
            assert len(f.bstar) == 3


def test_spine_shp_sum():
    spec = make_class("cacti")
    cs = constant_set("cacti")
    rng = np.random.default_rng(20)
    ell = 20
    v = np.array([spine_distance(*size_biased_flat(spec, ell, rng, spine_only=True)) for _ in range(10**5)])
    se = v.std() / math.sqrt(len(v))
    assert abs(v.mean() - ell * cs.kappa) <= 3 * se


def test_size_counts_match_full_sampler():
    # the size-only simulation against the sampler itself, at a small size
    spec = make_class("cacti")
    n, ell, runs = 6, 2, 20000
    rng = np.random.default_rng(21)
    hits = 0
    for _ in range(runs):
        try:
            hits += size_biased_flat(spec, ell, rng, max_size=n)[0].n == n
        except SamplerRunaway:
            pass
    fast = size_biased_size_counts(spec, ell, n, 10**6, np.random.default_rng(22)) / 10**6
    se = math.sqrt(fast * (1 - fast) / runs)
    assert abs(hits / runs - fast) <= 3 * se + 3 * math.sqrt(fast / 10**6)


def test_size_biased_identity():
    spec = make_class("forb_c5")
    n, R = 9, 10**6
    left = sum(size_biased_size_counts(spec, ell, n, R, RngHandle(1, ell).generator()) for ell in range(n)) / R
    right = n * boltzmann_size_counts(spec, n, R, RngHandle(2).generator()) / R
    se = math.sqrt(left / R * n + n * right / R)
    assert abs(left - right) <= 3 * se


# -- weights -------------------------------------------------------------------------

def test_weight_parsing():
    assert WeightDistribution.parse("const:2") == WeightDistribution("constant", (2.0,))
    assert WeightDistribution.parse("uniform:0.5,1.5").mean == 1.0
    assert str(WeightDistribution.parse("exp:2")) == "exp:2.0"
    for bad in ("const:0", "const:-1", "exp:0", "geom:1.5"):
        with pytest.raises(NonPositiveWeight):
            WeightDistribution.parse(bad)
    with pytest.raises(NonPositiveWeight):
        WeightDistribution("uniform", (-1.0, 1.0))


def test_constant_one_weights_are_hops():
    g = sample_uniform_cn(make_class("outerplanar"), 40, np.random.default_rng(23))
    gw = assign_weights(g, WeightDistribution.parse("const:1"), np.random.default_rng(0))
    assert gw.edge_set() == g.edge_set()
    for v in range(2, 41, 7):
        assert weighted_distance(gw, 1, v) == hop_distance(g, 1, v)


def test_kappa_hat_trees_exponential():
    v = weighted_shp_samples(make_class("trees"), WeightDistribution.parse("exp:1"), 10**6,
                             np.random.default_rng(24))
    assert abs(v.mean() - 1) <= 3 * v.std() / 1e3


@pytest.mark.parametrize("name", ["cacti", "forb_c5"])
def test_kappa_hat_scales_linearly(name):
    cs = constant_set(name)
    v = weighted_shp_samples(make_class(name), WeightDistribution.parse("const:2"), 2 * 10**5,
                             np.random.default_rng(25))
    assert abs(v.mean() - 2 * cs.kappa) <= 3 * v.std() / math.sqrt(len(v))
