"""Scaling constants of a subcritical class.

Everything is driven by ``y``, the positive root of ``y B''(y) = 1``.
From it ``lambda = B'(y)``, ``rho = y exp(-lambda)``, the offspring
variance ``sigma2 = 1 + B'''(y) y^2``, ``kappa`` (from :mod:`classes`),
``H = kappa sqrt(2 pi / sigma2)`` and ``c = y d / sqrt(2 pi sigma2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .classes import ClassSpec, make_class
from .errors import NoBracket, OrderTooSmall, ParameterOutOfRange
from .series import TruncatedSeries, ps_exp

Y_TOL = 1e-13

# Published approximations, one row per class.
PUBLISHED = {
    "trees": dict(kappa=1.0, H=2.50662, c=0.39894, rho=0.36787, y=1.0, lambda_=1.0, sigma2=1.0),
    "forb_c4": dict(kappa=1.0, H=2.13226, c=0.20973, rho=0.23618, y=0.27520, lambda_=0.80901, sigma2=1.38196),
    "forb_c5": dict(kappa=1.10355, H=1.88657, c=0.10987, rho=0.06290, y=0.40384, lambda_=1.85945, sigma2=2.14989),
    "cacti": dict(kappa=1.20297, H=1.99021, c=0.12014, rho=0.23874, y=0.45631, lambda_=0.64779, sigma2=2.29559),
    "outerplanar": dict(kappa=5.08418, H=1.30501, c=0.00697, rho=0.13659, y=0.17076, lambda_=0.22327, sigma2=95.3658),
}

# Cells that contradict the defining equations; they are recomputed, not compared.
UNTRUSTED = frozenset({("forb_c4", "y"), ("forb_c4", "rho"), ("forb_c5", "lambda_"), ("forb_c5", "rho")})

CELLS = ("y", "lambda_", "rho", "sigma2", "kappa", "H", "c")


@dataclass(frozen=True)
class ConstantSet:
    name: str
    y: float
    rho: float
    lambda_: float
    sigma2: float
    kappa: float
    H: float
    c: float
    span: int

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        d["class"] = d.pop("name")
        return d


def solve_y(spec: ClassSpec) -> float:
    """Bisection for ``t B''(t) = 1`` on ``(0, hi]``."""
    def f(t):
        return t * spec.b2(t) - 1.0

    cap = spec.radius * (1 - 1e-15) if math.isfinite(spec.radius) else math.inf
    lo, hi = 0.0, min(0.5, cap)
    while f(hi) <= 0:
        lo = hi
        if hi >= cap:
            raise NoBracket(f"{spec.name}: t B''(t) - 1 has no sign change below the radius")
        hi = min(2 * hi, cap)
        if hi > 1e6:
            raise NoBracket(f"{spec.name}: no sign change up to {hi}")
    if f(hi) == 0:
        return hi
    while hi - lo > Y_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        if mid in (lo, hi) and hi - lo <= 2 * math.ulp(hi):
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def _constant_set(name: str) -> ConstantSet:
    spec = make_class(name)
    y = solve_y(spec)
    lam = spec.b1(y)
    sigma2 = 1.0 + spec.b3(y) * y * y
    kappa = float(spec.kappa(y))
    return ConstantSet(
        name=name, y=y, rho=y * math.exp(-lam), lambda_=lam, sigma2=sigma2, kappa=kappa,
        H=kappa * math.sqrt(2 * math.pi / sigma2), c=y * spec.span / math.sqrt(2 * math.pi * sigma2),
        span=spec.span,
    )


def constant_set(spec: ClassSpec | str) -> ConstantSet:
    return _constant_set(spec if isinstance(spec, str) else spec.name)


# -- offspring law ---------------------------------------------------------

def offspring_pmf(spec: ClassSpec, order: int, cs: ConstantSet | None = None) -> np.ndarray:
    """``Pr{xi = k}`` for k < order, from ``exp(B'(yz) - lambda)``."""
    cs = cs or constant_set(spec)
    w = spec.weights(cs.y, max(order, 2))[:order]
    e = ps_exp(TruncatedSeries(w))
    return e.to_numpy() * math.exp(-cs.lambda_)


@lru_cache(maxsize=None)
def offspring_table(name: str, tol: float = 1e-13) -> np.ndarray:
    """Offspring pmf truncated where the remaining mass is below ``tol``."""
    spec = make_class(name)
    cs = constant_set(name)
    K = 64
    while True:
        p = offspring_pmf(spec, K, cs)
        missing = 1.0 - p.sum()
        if missing < tol:
            break
        K *= 2
        if K > 1 << 15:
            raise ParameterOutOfRange(f"{name}: offspring tail too heavy")
    nz = np.nonzero(p > 0)[0]
    return p[: nz[-1] + 1]


def gw_size_probability(spec: ClassSpec, n: int, order: int | None = None) -> float:
    """``Pr{|T| = n}`` for the Galton-Watson tree with the class's offspring law.

    Equals ``[z^(n-1)] phi(z)^n / n``; the power is taken by repeated squaring
    on series truncated at ``order`` (default ``n``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    order = n if order is None else order
    if order < n:
        raise OrderTooSmall(f"order {order} < n = {n}")
    p = offspring_pmf(spec, order)
    result = np.zeros(order)
    result[0] = 1.0
    base = p
    k = n
    while k:
        if k & 1:
            result = np.convolve(result, base)[:order]
        k >>= 1
        if k:
            base = np.convolve(base, base)[:order]
    return float(result[n - 1] / n)


def asymptotic_size_probability(cs: ConstantSet, n: int) -> float:
    return cs.span / math.sqrt(2 * math.pi * cs.sigma2) * n ** -1.5


def compare_published(cs: ConstantSet, tol: float = 2e-4) -> list[dict]:
    """Cell-by-cell comparison with the published row."""
    rows = []
    pub = PUBLISHED[cs.name]
    for cell in CELLS:
        ours = getattr(cs, cell)
        trusted = (cs.name, cell) not in UNTRUSTED
        rows.append(dict(cell=cell.rstrip("_"), ours=ours, published=pub[cell], trusted=trusted,
                         ok=abs(ours - pub[cell]) <= tol if trusted else None))
    return rows
