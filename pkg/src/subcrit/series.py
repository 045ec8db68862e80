"""Truncated exponential generating series.

A :class:`TruncatedSeries` keeps the coefficients ``c[0..order-1]`` of
``F(z) = sum c[k] z^k``.  For an exponential generating series the
coefficient ``c[k]`` equals ``|F_k| / k!``.  Two numeric backends are
supported: floats (the default) and exact rationals (``exact=True``), the
latter being used to certify integer counts.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CompositionAtNonzeroConstant

DEFAULT_ORDER = 64


class TruncatedSeries:
    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs: Iterable, exact: bool = False, order: int | None = None):
        cs = list(coeffs)
        if order is not None:
            cs = cs[:order] + [0] * (order - len(cs))
        if exact:
            cs = [Fraction(c) for c in cs]
        else:
            cs = [float(c) for c in cs]
        if not cs:
            raise ValueError("a truncated series needs order >= 1")
        self.coeffs = tuple(cs)
        self.exact = exact

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def exact_mode(self) -> bool:
        return self.exact

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.exact == other.exact

    def __hash__(self):
        return hash((self.coeffs, self.exact))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 6 else ""
        return f"TruncatedSeries([{head}{more}], order={self.order}, exact={self.exact})"

    def __add__(self, other):
        return ps_add(self, other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return ps_mul(self, other)
        return _new([c * other for c in self.coeffs], self.exact)

    __rmul__ = __mul__

    def __sub__(self, other):
        return ps_add(self, -1 * other)

    def labeled_counts(self) -> list:
        """``k! * c[k]`` for every retained k (labeled object counts)."""
        return [c * math.factorial(k) for k, c in enumerate(self.coeffs)]

    def to_numpy(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])


def _new(coeffs, exact):
    out = TruncatedSeries.__new__(TruncatedSeries)
    out.coeffs = tuple(coeffs)
    out.exact = exact
    return out


def zero(order: int = DEFAULT_ORDER, exact: bool = False) -> TruncatedSeries:
    return TruncatedSeries([0] * order, exact=exact)


def monomial(k: int, order: int = DEFAULT_ORDER, exact: bool = False, coeff=1) -> TruncatedSeries:
    cs = [0] * order
    if k < order:
        cs[k] = coeff
    return TruncatedSeries(cs, exact=exact)


def exp_series(order: int = DEFAULT_ORDER, exact: bool = False) -> TruncatedSeries:
    if exact:
        return TruncatedSeries([Fraction(1, math.factorial(k)) for k in range(order)], exact=True)
    return TruncatedSeries([1.0 / math.factorial(k) for k in range(order)])


def _merge(a: TruncatedSeries, b: TruncatedSeries):
    exact = a.exact and b.exact
    order = min(a.order, b.order)
    ac, bc = a.coeffs[:order], b.coeffs[:order]
    if not exact and (a.exact or b.exact):
        ac = tuple(float(c) for c in ac)
        bc = tuple(float(c) for c in bc)
    return ac, bc, order, exact


def _conv(ac: Sequence, bc: Sequence, order: int, exact: bool) -> list:
    if not exact:
        return list(np.convolve(np.asarray(ac, float), np.asarray(bc, float))[:order])
    out = []
    for n in range(order):
        s = Fraction(0)
        for i in range(n + 1):
            if ac[i] and bc[n - i]:
                s += ac[i] * bc[n - i]
        out.append(s)
    return out


def ps_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ac, bc, _, exact = _merge(a, b)
    return _new([x + y for x, y in zip(ac, bc)], exact)


def ps_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ac, bc, order, exact = _merge(a, b)
    return _new(_conv(ac, bc, order, exact), exact)


def ps_compose(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``a(b(z))`` by Horner's rule on series; requires ``b[0] == 0``."""
    if b.coeffs[0] != 0:
        raise CompositionAtNonzeroConstant("inner series must have zero constant term")
    ac, bc, order, exact = _merge(a, b)
    acc = [ac[order - 1]] + [0] * (order - 1)
    for k in range(order - 2, -1, -1):
        acc = _conv(acc, bc, order, exact)
        acc[0] = acc[0] + ac[k]
    return _new(acc, exact)


def ps_derive(a: TruncatedSeries) -> TruncatedSeries:
    # The top coefficient of the derivative is not determined by the
    # truncation, so the result is one order shorter.
    if a.order == 1:
        return _new([a.coeffs[0] * 0], a.exact)
    return _new([k * a.coeffs[k] for k in range(1, a.order)], a.exact)


def ps_point(a: TruncatedSeries) -> TruncatedSeries:
    """``z * d/dz a``: marks one label as root."""
    return _new([k * c for k, c in enumerate(a.coeffs)], a.exact)


def ps_exp(a: TruncatedSeries) -> TruncatedSeries:
    """``exp(a(z))`` via ``n f_n = sum_k k a_k f_{n-k}``; requires ``a[0] == 0``."""
    if a.coeffs[0] != 0:
        raise CompositionAtNonzeroConstant("exp() of a series with nonzero constant term")
    order, exact = a.order, a.exact
    if not exact:
        ka = np.arange(order) * np.asarray(a.coeffs, float)
        f = np.zeros(order)
        f[0] = 1.0
        for n in range(1, order):
            f[n] = np.dot(ka[1:n + 1], f[n - 1::-1][:n]) / n
        return _new(list(f), False)
    f = [Fraction(1)] + [Fraction(0)] * (order - 1)
    for n in range(1, order):
        s = Fraction(0)
        for k in range(1, n + 1):
            if a.coeffs[k]:
                s += k * a.coeffs[k] * f[n - k]
        f[n] = s / n
    return _new(f, True)


def ps_scale(a: TruncatedSeries, x) -> TruncatedSeries:
    """``a(x z)``."""
    out, p = [], (Fraction(1) if a.exact else 1.0)
    for c in a.coeffs:
        out.append(c * p)
        p = p * x
    return _new(out, a.exact)


def ps_power(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """``a(z)**n`` by repeated squaring."""
    result = monomial(0, a.order, a.exact)
    base = a
    while n:
        if n & 1:
            result = ps_mul(result, base)
        n >>= 1
        if n:
            base = ps_mul(base, base)
    return result


def ps_fixed_point(bprime: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """Solve ``C(z) = z exp(B'(C(z)))`` coefficientwise.

    Starts from ``C = 0``; each pass fixes one more coefficient, so ``order``
    passes are enough.
    """
    if order is None:
        order = bprime.order
    if order < 1:
        raise ValueError("order must be >= 1")
    exact = bprime.exact
    bp = TruncatedSeries(bprime.coeffs, exact=exact, order=order)
    b0 = bp.coeffs[0]
    if b0 != 0 and exact:
        raise CompositionAtNonzeroConstant("exact mode needs B'(0) == 0")
    shift = math.exp(float(b0)) if b0 else 1.0
    bp0 = _new((0 * b0,) + bp.coeffs[1:], exact)
    z = monomial(1, order, exact)
    c = zero(order, exact)
    for _ in range(order):
        inner = ps_compose(bp0, c)
        e = ps_exp(inner)
        if shift != 1.0:
            e = e * shift
        c = ps_mul(z, e)
    return c


def ps_eval(a: TruncatedSeries, x: float, with_tail: bool = False):
    """Horner evaluation at ``x >= 0``.

    With ``with_tail=True`` returns ``(value, |last retained term|)``; the
    latter is a cheap proxy for the truncation error.
    """
    if x < 0:
        raise ValueError("evaluation point must be nonnegative")
    acc = 0.0
    for c in reversed(a.coeffs):
        acc = acc * x + float(c)
    if with_tail:
        return acc, abs(float(a.coeffs[-1])) * x ** (a.order - 1)
    return acc


def ps_fixed_point_online(bprime: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """Same series as :func:`ps_fixed_point`, one coefficient at a time.

    With ``c_1..c_n`` known, the powers ``C^j`` are known up to ``z^n``,
    hence ``A = B'(C)`` and ``E = exp(A)`` too, and ``c_{n+1} = E_n``.
    Cubic in ``order`` instead of quartic.
    """
    if order is None:
        order = bprime.order
    exact = bprime.exact
    b = list(TruncatedSeries(bprime.coeffs, exact=exact, order=order).coeffs)
    if b[0] != 0:
        return ps_fixed_point(bprime, order)
    zero_ = Fraction(0) if exact else 0.0
    c = [zero_] * order
    powers = [None, c]                 # powers[j][m] = [z^m] C^j
    A = [zero_] * order
    E = [zero_] * order
    E[0] = Fraction(1) if exact else 1.0
    if order > 1:
        c[1] = E[0]
    for n in range(1, order - 1):
        while len(powers) <= n:
            powers.append([zero_] * order)
        for j in range(2, n + 1):
            prev = powers[j - 1]
            powers[j][n] = sum((c[i] * prev[n - i] for i in range(1, n - j + 3) if c[i] and prev[n - i]), zero_)
        A[n] = sum((b[j] * powers[j][n] for j in range(1, n + 1) if b[j]), zero_)
        E[n] = sum((k * A[k] * E[n - k] for k in range(1, n + 1) if A[k]), zero_) / n
        c[n + 1] = E[n]
    return _new(c, exact)
