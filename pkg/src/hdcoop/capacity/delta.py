"""Max-min optimization over the scheduling parameter δ ∈ [0, ∞]."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..ldm import INFINITY, Delta

__all__ = ["LinFrac", "DeltaOptResult", "maxmin_linfrac", "maxmin_numeric", "optimize_delta"]


@dataclass(frozen=True)
class LinFrac:
    """δ ↦ (slope·δ + offset) / (den_slope·δ + den_offset)."""

    slope: object
    offset: object
    den_slope: object = 1
    den_offset: object = 2

    def __call__(self, delta):
        if delta is INFINITY or (isinstance(delta, float) and math.isinf(delta)):
            if self.den_slope == 0:
                if self.slope != 0:
                    raise ValueError("unbounded bound at delta = inf")
                return self.offset / self.den_offset
            return self.slope / self.den_slope
        return (self.slope * delta + self.offset) / (self.den_slope * delta + self.den_offset)


@dataclass
class DeltaOptResult:
    delta_star: object
    value: object
    active: tuple = ()
    delta_any: bool = False  # optimum attained at every δ
    candidates: list = field(default_factory=list, repr=False)


def _crossing(f: LinFrac, g: LinFrac):
    if (f.den_slope, f.den_offset) == (g.den_slope, g.den_offset):
        ds = f.slope - g.slope
        if ds == 0:
            return []
        return [(g.offset - f.offset) / ds]
    # (a1 δ + b1)(c2 δ + d2) = (a2 δ + b2)(c1 δ + d1)
    a = f.slope * g.den_slope - g.slope * f.den_slope
    b = f.slope * g.den_offset + f.offset * g.den_slope - g.slope * f.den_offset - g.offset * f.den_slope
    c = f.offset * g.den_offset - g.offset * f.den_offset
    if a == 0:
        if b == 0:
            return []
        return [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = math.sqrt(disc)
    return [(-b - r) / (2 * a), (-b + r) / (2 * a)]


def maxmin_linfrac(bounds: Sequence[LinFrac], tol=0) -> DeltaOptResult:
    """Exact max over δ ∈ [0, ∞] of min of linear-fractional bounds.

    With a common positive denominator the min is quasi-concave, so the
    optimum sits at an endpoint or at a pairwise crossing.  Ties are broken
    toward the smallest δ, with ∞ last.
    """
    if not bounds:
        raise ValueError("no bounds")
    cands: list = [0]
    for i in range(len(bounds)):
        for j in range(i + 1, len(bounds)):
            for d in _crossing(bounds[i], bounds[j]):
                if d > 0:
                    cands.append(d)
    cands = sorted(set(cands))
    cands.append(INFINITY)
    evals = [(d, min(b(d) for b in bounds)) for d in cands]
    best = max(v for _, v in evals)
    winners = [d for d, v in evals if v >= best - tol]
    star = winners[0]
    active = tuple(i for i, b in enumerate(bounds) if abs(b(star) - best) <= tol)
    return DeltaOptResult(
        delta_star=star,
        value=best,
        active=active,
        delta_any=len(winners) == len(evals),
        candidates=evals,
    )


def default_grid(density: int = 512, lo: float = 2.0**-10, hi: float = 2.0**10) -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(lo, hi, density), [np.inf]])


def maxmin_numeric(
    objective: Callable[[float], float],
    density: int = 512,
    lo: float = 2.0**-10,
    hi: float = 2.0**10,
    refine_iters: int = 60,
    grid_values=None,
) -> DeltaOptResult:
    """Grid search over a log grid of δ plus the endpoints 0 and ∞, then golden-section refinement."""
    grid = default_grid(density, lo, hi)
    if grid_values is None:
        vals = np.array([objective(float(d)) for d in grid])
    else:
        vals = np.asarray(grid_values, dtype=float)
    k = int(np.argmax(vals))
    best_d, best_v = float(grid[k]), float(vals[k])
    if 0 < k < len(grid) - 1:
        a, b = math.log(grid[max(k - 1, 1)]), math.log(grid[min(k + 1, len(grid) - 2)])
        g = (math.sqrt(5) - 1) / 2
        c, d = b - g * (b - a), a + g * (b - a)
        fc, fd = objective(math.exp(c)), objective(math.exp(d))
        for _ in range(refine_iters):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - g * (b - a)
                fc = objective(math.exp(c))
            else:
                a, c, fc = c, d, fd
                d = a + g * (b - a)
                fd = objective(math.exp(d))
        for x, fx in ((c, fc), (d, fd)):
            if fx > best_v:
                best_d, best_v = math.exp(x), fx
    star = INFINITY if math.isinf(best_d) else best_d
    return DeltaOptResult(delta_star=star, value=best_v)


def optimize_delta(bounds, density: int = 512) -> DeltaOptResult:
    """Dispatch: LinFrac families are solved exactly, callables numerically.

    A callable family is a sequence of functions of a float δ (with δ = inf
    passed as ``math.inf``); the objective is their pointwise minimum.
    """
    bounds = list(bounds)
    if all(isinstance(b, LinFrac) for b in bounds):
        return maxmin_linfrac(bounds)
    res = maxmin_numeric(lambda d: min(f(d) for f in bounds), density=density)
    d = math.inf if res.delta_star is INFINITY else res.delta_star
    vals = [f(d) for f in bounds]
    res.active = tuple(i for i, v in enumerate(vals) if v - res.value <= 1e-9)
    return res


def as_delta(value) -> Delta:
    """Parse 'p/q', 'inf' or a number into an exact δ."""
    if value is INFINITY:
        return value
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    if isinstance(value, float) and math.isinf(value):
        return INFINITY
    return Fraction(value)
