import math
from fractions import Fraction

import pytest

from subcrit.classes import CLASS_NAMES, make_class
from subcrit.errors import CompositionAtNonzeroConstant
from subcrit.series import (TruncatedSeries, exp_series, monomial, ps_add, ps_compose, ps_derive, ps_eval,
                            ps_exp, ps_fixed_point, ps_fixed_point_online, ps_mul, ps_point, ps_power)


def z(order=8, exact=True):
    return monomial(1, order, exact)


def test_exp_of_z():
    e = ps_exp(z())
    assert list(e.coeffs[:4]) == [1, 1, Fraction(1, 2), Fraction(1, 6)]


def test_point_of_exp():
    p = ps_point(exp_series(8, exact=True))
    assert all(p[k] == Fraction(k, math.factorial(k)) for k in range(8))


def test_geometric_substitution():
    geo = TruncatedSeries([1] * 6, exact=True)
    r = ps_compose(geo, monomial(2, 6, exact=True))
    assert list(r.coeffs) == [1, 0, 1, 0, 1, 0]


def test_compose_rejects_constant_term():
    with pytest.raises(CompositionAtNonzeroConstant):
        ps_compose(exp_series(4), TruncatedSeries([1, 1, 0, 0]))
    with pytest.raises(CompositionAtNonzeroConstant):
        ps_exp(TruncatedSeries([0.5, 1.0]))


def test_orders_merge_to_minimum():
    a = exp_series(5, exact=True)
    b = exp_series(9, exact=True)
    assert ps_add(a, b).order == 5
    assert ps_mul(a, b).order == 5
    assert ps_mul(a, b)[4] == Fraction(2**4, 24)


def test_derive_drops_one_order():
    d = ps_derive(exp_series(6, exact=True))
    assert d.coeffs == exp_series(5, exact=True).coeffs


def test_power_matches_repeated_product():
    s = TruncatedSeries([0, 1, 3, 0, 2, 1], exact=True)
    assert ps_power(s, 3) == ps_mul(s, ps_mul(s, s))


def test_exp_inverts_log_series():
    # exp(log(1/(1-z))) = 1/(1-z)
    log = TruncatedSeries([0] + [Fraction(1, k) for k in range(1, 10)], exact=True)
    assert list(ps_exp(log).coeffs) == [1] * 10


def rooted_trees_by_enumeration(n):
    """Rooted labeled trees on n vertices, counted by Pruefer-free brute force."""
    import itertools
    count = 0
    for parents in itertools.product(range(n), repeat=n - 1):
        # vertex i+1 gets parent parents[i]; acyclic iff every vertex reaches 0
        ok = True
        for v in range(1, n):
            seen, u = set(), v
            while u != 0 and u not in seen:
                seen.add(u)
                u = parents[u - 1]
            ok &= u == 0
        count += ok
    return count * n  # any of the n labels can be the root


@pytest.mark.parametrize("n", range(1, 7))
def test_fixed_point_trees(n):
    c = ps_fixed_point(z(8), 8)
    assert c[n] * math.factorial(n) == rooted_trees_by_enumeration(n)


def test_fixed_point_forb_c4_three_vertices():
    b = TruncatedSeries([0, 1, Fraction(1, 2)] + [0] * 5, exact=True)
    c = ps_fixed_point(b, 8)
    assert c[3] * math.factorial(3) / 3 == 4


def test_fixed_point_empty_block_class():
    c = ps_fixed_point(TruncatedSeries([0] * 6, exact=True), 6)
    assert list(c.coeffs) == [0, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_online_fixed_point_matches_iteration(name):
    b = make_class(name).b1_series(14, exact=True)
    assert ps_fixed_point_online(b) == ps_fixed_point(b, 14)


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_fixed_point_equation_holds(name):
    b = make_class(name).b1_series(20, exact=True)
    c = ps_fixed_point_online(b)
    rhs = ps_mul(z(20), ps_exp(ps_compose(b, c)))
    assert c == rhs


def test_eval_exp_at_one():
    v, tail = ps_eval(exp_series(64), 1.0, with_tail=True)
    assert abs(v - math.e) < 1e-15
    assert tail < 1e-80
    assert ps_eval(TruncatedSeries([0.0] * 5), 3.0) == 0


@pytest.mark.parametrize("name", CLASS_NAMES)
def test_series_nonnegative(name):
    b = make_class(name).b1_series(30, exact=True)
    c = ps_fixed_point_online(b)
    assert all(x >= 0 for x in b.coeffs) and all(x >= 0 for x in c.coeffs)
