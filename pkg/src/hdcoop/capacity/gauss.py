"""Gaussian symmetric channel: the sum-capacity sandwich.

``x``, ``y``, ``z`` stand for the direct, cross and cooperation SNRs and
``theta`` for the phase mismatch of the four links.  Every logarithm is base 2.

Four quantities are computed for a parameter point:

* ``c_bar``: the max-min over δ of the four closed-form sum bounds;
* ``c_bar_ldm``: the same with the first three bounds replaced by their
  deterministic-model counterparts (bit counts from floored logs);
* ``achievable``: the sum rate of the region-specific half-duplex scheme,
  evaluated with the scheme's own power splits (mode-A rates come from the
  virtual-channel inequalities with Gaussian mutual informations);
* ``outer``: the four-way converse with every power set to its largest
  admissible value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from ..ldm import INFINITY
from .delta import DeltaOptResult, LinFrac, default_grid, maxmin_linfrac, maxmin_numeric

__all__ = [
    "GaussSymParams",
    "PowerSplit",
    "GaussSumBounds",
    "sum_u_bounds",
    "ldm_link_bounds",
    "c_bar",
    "c_bar_ldm",
    "outer_terms",
    "outer_at",
    "outer_bound",
    "outer_power_sweep",
    "beta_factors",
    "region_of",
    "scheme_rate",
    "achievable_rate",
    "gaussian_sum_inner_outer",
    "VirtualPowers",
]

LOG2 = math.log2


def _lg(v):
    return np.log2(v)


@dataclass(frozen=True)
class GaussSymParams:
    """Linear-scale link SNRs and the phase mismatch in radians."""

    snr: float
    inr: float
    cnr: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("snr", "inr", "cnr"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    @property
    def n_d(self) -> int:
        return _bits(self.snr)

    @property
    def n_i(self) -> int:
        return _bits(self.inr)

    @property
    def n_c(self) -> int:
        return _bits(self.cnr)

    @property
    def mismatch(self) -> float:
        """x² + y² − 2xy·cosθ, the determinant-like term of the mode-A channel."""
        x, y = self.snr, self.inr
        return max(x * x + y * y - 2 * x * y * math.cos(self.theta), 0.0)


def _bits(v: float) -> int:
    return max(math.floor(math.log2(v)), 0) if v > 0 else 0


# ---------------------------------------------------------------------------
# closed-form bounds (linear-fractional in δ over 2 + δ)


def sum_u_bounds(p: GaussSymParams) -> list[LinFrac]:
    """The four sum-rate bounds whose max-min defines ``c_bar``.

    The third bound is read as 2/(2+δ)·[δ·max{…} + log(1+x+y+z)].
    """
    x, y, z = p.snr, p.inr, p.cnr
    u1 = LinFrac(2 * LOG2(1 + x), 2 * LOG2(1 + x + z))
    u2 = LinFrac(
        LOG2(1 + 2 * x + 2 * y) + LOG2(1 + x / (1 + y)),
        LOG2(1 + x) + LOG2(1 + x + y + z),
    )
    cross = max(LOG2(1 + y + (2 * x + y) / (1 + y)), LOG2(1 + 2 * y))
    u3 = LinFrac(2 * cross, 2 * LOG2(1 + x + y + z))
    u4 = LinFrac(LOG2(1 + 4 * x + 4 * y + p.mismatch), 2 * LOG2(1 + x + y))
    return [u1, u2, u3, u4]


def _shift(b: LinFrac, c: float) -> LinFrac:
    # (aδ + b)/(δ + 2) + c
    return LinFrac(b.slope + c * b.den_slope, b.offset + c * b.den_offset, b.den_slope, b.den_offset)


def ldm_link_bounds(p: GaussSymParams) -> list[LinFrac]:
    """Bit-count bounds with their offsets, plus the phase-aware fourth bound less 10."""
    nd, ni, nc = p.n_d, p.n_i, p.n_c
    top = max(nd, ni, nc)
    u1p = LinFrac(2 * nd, 2 * max(nd, nc))
    u2p = LinFrac(max(2 * nd - ni, ni), nd + top)
    u3p = LinFrac(2 * max(ni, nd - ni), 2 * top)
    u4p = LinFrac(2 * max(nd, ni), 2 * max(nd, ni))
    u4 = sum_u_bounds(p)[3]
    return [_shift(u1p, -6), _shift(u2p, -4), u3p, _shift(u4p, -4), _shift(u4, -10)]


def c_bar(p: GaussSymParams) -> DeltaOptResult:
    return maxmin_linfrac(sum_u_bounds(p), tol=1e-12)


def c_bar_ldm(p: GaussSymParams) -> DeltaOptResult:
    return maxmin_linfrac(ldm_link_bounds(p), tol=1e-12)


# ---------------------------------------------------------------------------
# converse


@dataclass(frozen=True)
class PowerSplit:
    """Per-mode average powers; source 1 is silent in mode C and source 2 in mode B."""

    p1a: float
    p1b: float
    p2a: float
    p2c: float

    def admissible(self, delta: float, tol: float = 1e-12) -> bool:
        if min(self.p1a, self.p1b, self.p2a, self.p2c) < 0:
            return False
        if math.isinf(delta):
            return self.p1a <= 1 + tol and self.p2a <= 1 + tol
        return (
            (delta * self.p1a + self.p1b) / (2 + delta) <= 1 + tol
            and (delta * self.p2a + self.p2c) / (2 + delta) <= 1 + tol
        )

    @staticmethod
    def maximal(delta: float) -> "PowerSplit":
        """Every power at its own ceiling (not jointly admissible, but dominating)."""
        if delta == 0:
            return PowerSplit(math.inf, 2.0, math.inf, 2.0)
        if math.isinf(delta):
            return PowerSplit(1.0, math.inf, 1.0, math.inf)
        return PowerSplit((2 + delta) / delta, 2 + delta, (2 + delta) / delta, 2 + delta)


def outer_at(p: GaussSymParams, delta: float, s: PowerSplit) -> tuple[float, float, float, float]:
    """(Cut, Z, V, Cut') at a given δ and power split, with the mode-indicator constants."""
    x, y, z = p.snr, p.inr, p.cnr
    m = p.mismatch
    a1, a2 = s.p1a, s.p2a

    def mode_a(fn):
        if delta == 0:
            return 0.0
        w = 1.0 if math.isinf(delta) else delta / (2 + delta)
        return w * fn

    def mode_bc(val_fn, power):
        if math.isinf(delta):
            return 0.0
        return val_fn(power) / (2 + delta)

    def v_term(pa, pb):
        return LOG2(1 + y * pb + (2 * x * pa + y * pb) / (1 + y * pa))

    if delta == 0:
        cut = 2 + (LOG2(1 + (x + z) * s.p1b) + LOG2(1 + (x + z) * s.p2c)) / 2
        zz = 3 + (LOG2(1 + x * s.p1b) + LOG2(1 + (x + y + z) * s.p2c)) / 2
        vv = 4 + (LOG2(1 + (x + y + z) * s.p1b) + LOG2(1 + (x + y + z) * s.p2c)) / 2
        cp = 2 + (LOG2(1 + (x + y) * s.p1b) + LOG2(1 + (x + y) * s.p2c)) / 2
        return cut, zz, vv, cp
    cut = 2 + mode_a(LOG2(1 + x * a1) + LOG2(1 + x * a2))
    cut += mode_bc(lambda q: LOG2(1 + (x + z) * q), s.p1b) + mode_bc(lambda q: LOG2(1 + (x + z) * q), s.p2c)
    zz = 3 + mode_a(LOG2(1 + 2 * x * a1 + 2 * y * a2) + LOG2(1 + x * a2 / (1 + y * a2)))
    zz += mode_bc(lambda q: LOG2(1 + x * q), s.p1b) + mode_bc(lambda q: LOG2(1 + (x + y + z) * q), s.p2c)
    vv = 4 + mode_a(v_term(a1, a2) + v_term(a2, a1))
    vv += mode_bc(lambda q: LOG2(1 + (x + y + z) * q), s.p1b) + mode_bc(lambda q: LOG2(1 + (x + y + z) * q), s.p2c)
    cp = 2 + mode_a(LOG2(1 + 2 * (x + y) * (a1 + a2) + a1 * a2 * m))
    cp += mode_bc(lambda q: LOG2(1 + (x + y) * q), s.p1b) + mode_bc(lambda q: LOG2(1 + (x + y) * q), s.p2c)
    return cut, zz, vv, cp


def outer_terms(p: GaussSymParams, delta) -> np.ndarray:
    """The four converse terms at maximal powers, vectorized over δ (0 and inf allowed).

    Returns an array of shape (4, len(delta)).  The V term uses the two-way
    maximum that removes its dependence on the unknown power of the other
    source.
    """
    x, y, z = p.snr, p.inr, p.cnr
    m = p.mismatch
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    out = np.empty((4, d.size))
    fin = np.isfinite(d) & (d > 0)
    zero = d == 0
    inf = np.isinf(d)

    def a_part(pa):
        cut = 2 * _lg(1 + x * pa)
        zz = _lg(1 + 2 * (x + y) * pa) + _lg(1 + x * pa / (1 + y * pa))
        ve = np.maximum(1 + y * pa + (2 * x + y) * pa / (1 + y * pa), 1 + 2 * y * pa)
        vv = 2 * _lg(ve)
        cp = _lg(1 + 4 * (x + y) * pa + pa * pa * m)
        return np.stack([cut, zz, vv, cp])

    def bc_part(pb):
        cut = 2 * _lg(1 + (x + z) * pb)
        zz = _lg(1 + x * pb) + _lg(1 + (x + y + z) * pb)
        vv = 2 * _lg(1 + (x + y + z) * pb)
        cp = 2 * _lg(1 + (x + y) * pb)
        return np.stack([cut, zz, vv, cp])

    consts = np.array([2.0, 3.0, 4.0, 2.0])[:, None]
    if fin.any():
        df = d[fin]
        out[:, fin] = (df * a_part((2 + df) / df) + bc_part(2 + df)) / (2 + df)
    if zero.any():
        out[:, zero] = (bc_part(np.full(zero.sum(), 2.0)) / 2)
    if inf.any():
        out[:, inf] = a_part(np.ones(inf.sum()))
    return out + consts


def outer_bound(p: GaussSymParams, density: int = 512) -> DeltaOptResult:
    """Max over δ of the smallest converse term at maximal powers."""
    grid = default_grid(density)
    vals = outer_terms(p, grid).min(axis=0)

    def f(d):
        return float(outer_terms(p, [d]).min())

    return maxmin_numeric(f, density=density, grid_values=vals)


def outer_power_sweep(p: GaussSymParams, deltas, fractions=(0.0, 0.25, 0.5, 0.75, 1.0)) -> float:
    """Best converse value over admissible power splits on a coarse sweep (cross-check only)."""
    best = -math.inf
    for d in deltas:
        for f1 in fractions:
            for f2 in fractions:
                if math.isinf(d):
                    split = PowerSplit(1.0, 0.0, 1.0, 0.0)
                elif d == 0:
                    split = PowerSplit(0.0, 2.0, 0.0, 2.0)
                else:
                    budget = 2 + d
                    split = PowerSplit(f1 * budget / d, (1 - f1) * budget, f2 * budget / d, (1 - f2) * budget)
                best = max(best, min(outer_at(p, d, split)))
    return best


# ---------------------------------------------------------------------------
# achievability


def beta_factors(p: GaussSymParams) -> tuple[float, float]:
    """Received-power factors of the zero-forced cooperative signal at the two kinds of link."""
    x, y = p.snr, p.inr
    return p.mismatch / (x * (x + y)), p.mismatch / (y * (x + y))


def region_of(p: GaussSymParams) -> int:
    """Scheme region, first match in the order 1..5."""
    x, y, z = p.snr, p.inr, p.cnr
    if z <= x or z <= 1 or y <= 1:
        return 1
    if 2 * y < x < z:
        return 2
    if 2 * x < y <= z:
        return 3
    if x < z < y and 2 * x < y:
        return 4
    if 0.5 <= x / y <= 2:
        return 5
    raise AssertionError("regions 1-5 cover every positive point")  # pragma: no cover


@dataclass(frozen=True)
class VirtualPowers:
    """Mode-A power split of one source: public, private, pre-shared public, cooperative private."""

    w: float
    u: float = 0.0
    vp: float = 0.0
    v: float = 0.0

    def __post_init__(self) -> None:
        if self.w + self.u + self.vp + self.v > 1 + 1e-12:
            raise ValueError("mode-A power split exceeds the unit budget")


def _hk_powers(y: float) -> VirtualPowers:
    priv = min(1.0, 1.0 / y)
    return VirtualPowers(w=1.0 - priv, u=priv)


# variable order of the tied virtual-channel LP
_TIED = {"W": 0, "oW": 0, "U": 1, "V": 2, "Vp": 3}
_AUX = {
    "X_Vp": ("Vp",),
    "X_W": ("Vp", "W"),
    "X_U": ("Vp", "W", "U"),
    "V": ("V",),
    "oX_W": ("oVp", "oW"),
    "oX_Vp": ("oVp",),
}


def _virtual_rows(x: float, y: float, beta1: float, pw: VirtualPowers) -> tuple[np.ndarray, np.ndarray]:
    """Tied destination constraints: coefficient rows over (w, u, v, vp) and right-hand sides."""
    from ..rate_region import _DEST_TERMS

    power = {
        "Vp": x * pw.vp,
        "W": x * pw.w,
        "U": x * pw.u,
        "V": beta1 * x * pw.v,
        "oVp": y * pw.vp,
        "oW": y * pw.w,
        "oU": y * pw.u,
    }
    total = sum(power.values())

    def known(names):
        out = set()
        for n in names:
            out.update(_AUX[n])
        return out

    rows, rhs = [], []
    for rates, targets, cond in _DEST_TERMS:
        kc = known(cond)
        kt = kc | known(targets)
        num = 1 + total - sum(power[c] for c in kc)
        den = 1 + total - sum(power[c] for c in kt)
        row = np.zeros(4)
        for r in rates:
            row[_TIED[r]] += 1
        rows.append(row)
        rhs.append(LOG2(num / den))
    return np.array(rows), np.array(rhs)


class _VirtualLP:
    """Symmetric virtual-channel sum rate 2(w+u+v+vp) with caps v <= s, vp <= t."""

    def __init__(self, x: float, y: float, beta1: float, pw: VirtualPowers):
        self.rows, self.rhs = _virtual_rows(x, y, beta1, pw)
        self.bounds = [
            (0, None if pw.w > 0 else 0),
            (0, None if pw.u > 0 else 0),
            (0, None if pw.v > 0 and beta1 > 0 else 0),
            (0, None if pw.vp > 0 else 0),
        ]

    def solve(self, s: float, t: float) -> tuple[float, float, float]:
        """(value, d value/ds, d value/dt) at caps (s, t)."""
        a = np.vstack([self.rows, [[0, 0, 1, 0], [0, 0, 0, 1]]])
        b = np.concatenate([self.rhs, [s, t]])
        res = linprog(-np.ones(4), A_ub=a, b_ub=np.maximum(b, 0), bounds=self.bounds, method="highs")
        if res.status != 0:
            raise RuntimeError(f"virtual-channel LP failed: {res.message}")
        marg = res.ineqlin.marginals
        return -2 * res.fun, -2 * marg[-2], -2 * marg[-1]

    @cached_property
    def uncapped(self) -> float:
        return self.solve(1e9, 1e9)[0]


def _ray_profile(lp: _VirtualLP, e1: float, e2: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact breakpoints of r -> value(r·e1, r·e2), a concave piecewise-linear map.

    Tangent lines from the LP duals are intersected recursively; a tangent
    that touches the function at the intersection closes the interval.
    """
    scale = max(e1, e2)
    if scale <= 0:
        v = lp.solve(0.0, 0.0)[0]
        return np.array([0.0]), np.array([v])
    r_end = (lp.uncapped + 1.0) / scale

    def ev(r):
        v, ds, dt = lp.solve(r * e1, r * e2)
        return v, ds * e1 + dt * e2

    pts = {}
    fa, ga = ev(0.0)
    fb, gb = ev(r_end)
    pts[0.0] = fa
    pts[r_end] = fb
    stack = [(0.0, fa, ga, r_end, fb, gb, 0)]
    while stack:
        a, fa, ga, b, fb, gb, depth = stack.pop()
        if ga - gb <= 1e-12 or depth > 40:
            continue
        r = (fb - fa + ga * a - gb * b) / (ga - gb)
        if not (a < r < b):
            continue
        tangent = fa + ga * (r - a)
        fr, gr = ev(r)
        pts[r] = fr
        if fr >= tangent - 1e-9 * max(1.0, abs(tangent)):
            continue
        stack.append((a, fa, ga, r, fr, gr, depth + 1))
        stack.append((r, fr, gr, b, fb, gb, depth + 1))
    rs = np.array(sorted(pts))
    return rs, np.array([pts[r] for r in rs])


def _interp(rs: np.ndarray, vals: np.ndarray, r) -> np.ndarray:
    return np.interp(np.asarray(r, dtype=float), rs, vals, right=vals[-1])


def _hk_rate(p: GaussSymParams) -> float:
    x, y = p.snr, p.inr
    b1, _ = beta_factors(p)
    return _VirtualLP(x, y, b1, _hk_powers(y)).solve(0.0, 0.0)[0]


def _cross_relay(x: float, y: float, d: np.ndarray, b: np.ndarray) -> np.ndarray:
    # no usable direct link: each source forwards the other's shared bits over its cross link
    return 2 * np.minimum(d * _lg(1 + y / (1 + x)), b)


def scheme_rate(p: GaussSymParams, delta, *, coarse: int = 16) -> np.ndarray:
    """Sum rate of the region's scheme at each δ in ``delta`` (0 and inf allowed).

    Every value is an achievable rate on its own; δ = inf is plain
    superposition coding without cooperation in every region.
    """
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        return _scheme_rate(p, delta, coarse)


def _scheme_rate(p: GaussSymParams, delta, coarse: int) -> np.ndarray:
    x, y, z = p.snr, p.inr, p.cnr
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    out = np.full(d.size, -np.inf)
    inf = np.isinf(d)
    if inf.any():
        out[inf] = _hk_rate(p)
    reg = region_of(p)
    if reg == 1 or (reg == 5 and x < 1):
        # no cooperation: the finite-δ schedules only waste listening slots
        out[~inf] = _hk_rate(p) * np.where(d[~inf] > 0, d[~inf] / (2 + d[~inf]), 0.0)
        return out
    fin = ~inf
    df = d[fin]
    b1, _ = beta_factors(p)
    res = np.zeros(df.size)
    if reg in (2, 5):
        pw = VirtualPowers(w=1 / 3, u=1 / (3 * y), v=1 / 3) if reg == 2 else VirtualPowers(w=0.5, v=0.5)
        rb = LOG2(1 + (x - 1) / 2)
        share = LOG2(1 + z / x)
        lp = _VirtualLP(x, y, b1, pw)
        rs, vals = _ray_profile(lp, 1.0, 0.0)
        ra = _interp(rs, vals, _safe_div(share, df))
        res = (df * ra + 2 * rb) / (2 + df)
    elif reg == 3:
        res = _region3(p, df, b1)
    else:
        res = _region4(p, df, b1, coarse)
    out[fin] = res
    return out


def _safe_div(num, den):
    den = np.asarray(den, dtype=float)
    num = np.broadcast_to(np.asarray(num, dtype=float), den.shape)
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)


def _region3(p: GaussSymParams, d: np.ndarray, b1: float) -> np.ndarray:
    x, y, z = p.snr, p.inr, p.cnr
    yd = y**d
    if x > 1:
        lp = _VirtualLP(x, y, b1, VirtualPowers(w=0.5, v=0.5))
        rs, vals = _ray_profile(lp, 1.0, 0.0)
        low = yd * x >= z  # little to relay: share only
        rb = np.where(low, LOG2(1 + (x - 1) / 2), _lg(1 + (x / 3) / (4 / 3 + np.sqrt(x * yd / z) / 3)))
        e_dr = _lg(1 + (y / (3 * x)) / (1 + np.sqrt(y ** (d + 2) / (x * z)) / 3))
        e_sum = _lg(1 + np.sqrt(z * yd / x) / 3)
        dr = np.where(low, 0.0, np.minimum(e_dr, e_sum))
        share = np.where(low, LOG2(1 + z / x), e_sum - dr)
        ra = _interp(rs, vals, _safe_div(share, d))
        return (d * ra + 2 * rb + 2 * dr) / (2 + d)
    low = yd >= z
    e_dr = _lg(1 + (y / 2) / (1 + 0.5 * np.sqrt(y ** (d + 2) / z)))
    e_sum = _lg(1 + 0.5 * np.sqrt(yd * z))
    dr = np.where(low, 0.0, np.minimum(e_dr, e_sum))
    share = np.where(low, LOG2(1 + z), e_sum - dr)
    return (_cross_relay(x, y, d, share) + 2 * dr) / (2 + d)


def _region4(p: GaussSymParams, d: np.ndarray, b1: float, coarse: int) -> np.ndarray:
    x, y, z = p.snr, p.inr, p.cnr
    yd = y**d
    if x <= 1:
        low = yd >= z
        e_sum = _lg(1 + (z / 2) / (1 + z / (2 * np.sqrt(y ** (1 + d)))))
        e_dr = _lg(1 + 0.5 * np.sqrt(y ** (1 - d)))
        dr = np.where(low, 0.0, np.minimum(e_dr, e_sum))
        share = np.where(low, LOG2(1 + z), e_sum - dr)
        return (_cross_relay(x, y, d, share) + 2 * dr) / (2 + d)
    pw = VirtualPowers(w=1 / 3, vp=1 / 3, v=1 / 3)
    lp = _VirtualLP(x, y, b1, pw)
    # pre-sharing only: fixed pipe loads, so the caps move along one ray as δ varies
    e_ss = max(LOG2(1 + z / x) - 1, 0.0)
    e_sd = LOG2(1 + y / z)
    rs, vals = _ray_profile(lp, e_ss, e_sd)
    rb = LOG2(1 + x) - 1
    ra = _interp(rs, vals, _safe_div(1.0, d))
    out = (d * ra + 2 * rb) / (2 + d)
    # relaying (valid where y > x·y^δ) is a joint LP per δ, so only a coarse subset is tried
    idx = np.flatnonzero((y > x * yd) & (d > 0))
    if idx.size:
        for i in idx[np.unique(np.linspace(0, idx.size - 1, min(coarse, idx.size)).astype(int))]:
            out[i] = max(out[i], _region4_relay(lp, x, y, z, float(d[i])))
    return out


def _region4_relay(lp: _VirtualLP, x: float, y: float, z: float, d: float) -> float:
    if d <= 0:
        s_pow = math.sqrt(y * x)
        rb = LOG2(1 + (x / 3) / (4 / 3 + x / (3 * s_pow)))
        e1 = LOG2(1 + (z / (3 * x)) / (1 + z / (3 * s_pow)))
        e2 = LOG2(1 + math.sqrt(y / x) / 3)
        return rb + min(e1, e2)
    s_pow = math.sqrt(y ** (1 + d) * x ** (1 - 2 * d))
    rb = LOG2(1 + (x / 3) / (4 / 3 + x / (3 * s_pow)))
    e1 = LOG2(1 + (z / (3 * x)) / (1 + z / (3 * s_pow)))
    e2 = LOG2(1 + math.sqrt(y ** (1 - d) / x ** (1 - 2 * d)) / 3)
    # variables: w, u, v, vp, dr;  δv + dr <= e1, δvp + dr <= e2
    rows = np.hstack([lp.rows, np.zeros((lp.rows.shape[0], 1))])
    a = np.vstack([rows, [[0, 0, d, 0, 1], [0, 0, 0, d, 1]]])
    b = np.concatenate([lp.rhs, [e1, e2]])
    c = -np.array([d, d, d, d, 1.0])  # numerator / 2
    res = linprog(c, A_ub=a, b_ub=np.maximum(b, 0), bounds=lp.bounds + [(0, None)], method="highs")
    if res.status != 0:
        raise RuntimeError(f"relay LP failed: {res.message}")
    return (2 * -res.fun + 2 * rb) / (2 + d)


def achievable_rate(p: GaussSymParams, density: int = 512) -> DeltaOptResult:
    """Best scheme rate over a δ grid (each grid value is itself achievable)."""
    grid = default_grid(density)
    vals = scheme_rate(p, grid)
    k = int(np.argmax(vals))
    star = INFINITY if math.isinf(grid[k]) else float(grid[k])
    return DeltaOptResult(delta_star=star, value=float(vals[k]))


# ---------------------------------------------------------------------------


@dataclass
class GaussSumBounds:
    params: GaussSymParams
    c_bar: float
    c_bar_ldm: float
    achievable: float
    outer: float
    region: int
    delta_c_bar: object = None
    delta_achievable: object = None
    delta_outer: object = None
    extras: dict = field(default_factory=dict)

    @property
    def cooperation(self) -> bool:
        return self.region != 1 and self.delta_achievable is not INFINITY

    def margins(self, gaps=None) -> dict:
        """Slack of each sandwich inequality (nonnegative means satisfied)."""
        from ..analysis import GapConstants

        g = gaps or GapConstants()
        return {
            "achievable_le_outer": self.outer - self.achievable,
            "c_bar_minus_gap_le_achievable": self.achievable - (self.c_bar - g.sum_lower),
            "outer_le_c_bar_plus_gap": self.c_bar + g.sum_upper - self.outer,
            "c_bar_le_ldm_plus_gap": self.c_bar_ldm + g.sum_ldm_link - self.c_bar,
            "achievable_ge_ldm_minus_gap": self.achievable - (self.c_bar_ldm - g.sum_ldm_achievable),
        }


def gaussian_sum_inner_outer(p: GaussSymParams, density: int = 512) -> GaussSumBounds:
    cb = c_bar(p)
    cl = c_bar_ldm(p)
    ach = achievable_rate(p, density)
    ob = outer_bound(p, density)
    return GaussSumBounds(
        params=p,
        c_bar=float(cb.value),
        c_bar_ldm=float(cl.value),
        achievable=float(ach.value),
        outer=float(ob.value),
        region=region_of(p),
        delta_c_bar=cb.delta_star,
        delta_achievable=ach.delta_star,
        delta_outer=ob.delta_star,
    )
