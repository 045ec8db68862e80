"""Height and diameter laws of the Brownian continuum random tree.

Both survival functions are theta-type series that converge fast for
moderate ``x`` but need many terms near 0, so they are only evaluated on
``x >= X_MIN``.  Below that point the laws carry no visible mass (the
survival function is 1 to within 1e-12 at ``X_MIN``), which is what the
goodness-of-fit helpers assume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special, stats

from .errors import DomainTooSmall, EmptySample

X_MIN = 0.1
X_MAX = 12.0
TERM_TOL = 1e-14
MAX_TERMS = 100_000


def _theta_sum(term, x: float, tol: float) -> float:
    # Both envelopes decrease once k^2 x^2 > 8; stop there when terms are tiny.
    total = 0.0
    for k in range(1, MAX_TERMS):
        t = term(k, x)
        total += t
        if k > 1 and abs(t) < tol and k * k * x * x > 8:
            break
    return min(1.0, max(0.0, total))


def _height_term(k, x):
    a = k * k * x * x
    return 2.0 * (4.0 * a - 1.0) * math.exp(-2.0 * a)


def _diameter_term(k, x):
    a = k * k * x * x
    return (k * k - 1.0) * (2.0 / 3.0 * a * a - 4.0 * a + 2.0) * math.exp(-a / 2.0)


def _check(x, x_min):
    if x < x_min:
        raise DomainTooSmall(f"x = {x} below {x_min}")


def height_sf(x: float, tol: float = TERM_TOL, x_min: float = X_MIN) -> float:
    """``Pr{H > x}`` for the height of the CRT."""
    _check(x, x_min)
    return _theta_sum(_height_term, float(x), tol)


def diameter_sf(x: float, tol: float = TERM_TOL, x_min: float = X_MIN) -> float:
    """``Pr{D > x}`` for the diameter of the CRT."""
    _check(x, x_min)
    return _theta_sum(_diameter_term, float(x), tol)


def height_moment(k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return math.sqrt(math.pi / 2)
    return 2.0 ** (-k / 2) * k * (k - 1) * math.gamma(k / 2) * float(special.zeta(k))


def diameter_moment(k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return 4.0 / 3.0 * math.sqrt(math.pi / 2)
    if k == 2:
        return 2.0 / 3.0 * (1 + math.pi**2 / 3)
    if k == 3:
        return 2.0 * math.sqrt(2 * math.pi)
    return (2.0 ** (k / 2) / 3.0 * k * (k - 1) * (k - 3) * math.gamma(k / 2)
            * (float(special.zeta(k - 2)) - float(special.zeta(k))))


@dataclass(frozen=True)
class LimitLaw:
    kind: str                 # "height" or "diameter"
    tol: float = TERM_TOL
    x_min: float = X_MIN

    def __post_init__(self):
        if self.kind not in ("height", "diameter"):
            raise ValueError(f"unknown law {self.kind!r}")

    def sf(self, x: float) -> float:
        f = height_sf if self.kind == "height" else diameter_sf
        return f(x, self.tol, self.x_min)

    def sf_extended(self, x: float) -> float:
        """Survival function taken as 1 below ``x_min``."""
        return 1.0 if x < self.x_min else self.sf(x)

    def cdf(self, x: float) -> float:
        return 1.0 - self.sf_extended(x)

    def moment(self, k: int) -> float:
        return height_moment(k) if self.kind == "height" else diameter_moment(k)

    def moment_numeric(self, k: int) -> float:
        """``k * int x^(k-1) sf(x) dx``; the head below ``x_min`` counts sf as 1."""
        val, _ = integrate.quad(lambda x: k * x ** (k - 1) * self.sf(x), self.x_min, X_MAX,
                                epsabs=1e-12, epsrel=1e-10, limit=200)
        return val + self.x_min**k

    def quantile(self, u: float) -> float:
        """The ``x`` with ``cdf(x) = u``."""
        if not 0 < u < 1:
            raise ValueError("u must lie in (0, 1)")
        lo = self.x_min
        if self.cdf(lo) >= u:
            return lo
        return optimize.brentq(lambda x: self.cdf(x) - u, lo, X_MAX, xtol=1e-13)

    def sample(self, rng, m: int) -> np.ndarray:
        """Inverse-transform samples, interpolated on a fine grid of the cdf."""
        xs, cs = _cdf_grid(self.kind)
        return np.interp(rng.random(m), cs, xs)


@lru_cache(maxsize=None)
def _cdf_grid(kind: str):
    law = LimitLaw(kind)
    xs = np.linspace(X_MIN, X_MAX, 40001)
    cs = np.array([law.cdf(x) for x in xs])
    cs = np.maximum.accumulate(cs)
    return xs, cs


HEIGHT = LimitLaw("height")
DIAMETER = LimitLaw("diameter")


def ks_statistic(samples, sf) -> float:
    """``sup |empirical sf - sf|`` over sorted ``samples``."""
    x = np.asarray(samples, float)
    m = len(x)
    if m == 0:
        raise EmptySample("no samples")
    if np.any(np.diff(x) < 0):
        x = np.sort(x)
    s = np.array([sf(v) for v in x])
    i = np.arange(1, m + 1)
    # the empirical sf is 1 - (i-1)/m just before x_(i) and 1 - i/m at it
    return float(max(np.max(np.abs((1 - (i - 1) / m) - s)), np.max(np.abs((1 - i / m) - s))))


def ks_pvalue(d: float, m: int) -> float:
    return float(stats.kstwo.sf(d, m))


def ks_test(samples, law: LimitLaw) -> tuple[float, float]:
    d = ks_statistic(samples, law.sf_extended)
    return d, ks_pvalue(d, len(samples))
