"""Gaussian cognitive channel: bounds on the secondary rate while the primary backs off by ``r0``.

Every bound here is linear-fractional over ``1 + δ`` (δ = listening time of
the secondary per transmit slot), so the max-min over δ is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .delta import DeltaOptResult, LinFrac, maxmin_linfrac
from .ldm import cog_v_values, pos

__all__ = [
    "GaussCogParams",
    "GaussCogBounds",
    "R0_THRESHOLD",
    "cog_u_bounds",
    "cog_ldm_link_bounds",
    "cog_outer_bounds",
    "c_bar_r0",
    "cog_ldm_link",
    "cog_outer",
    "cog_beta_factors",
    "k_tilde",
    "receive_power_ok",
    "z_channel_bound",
    "ifc_candidate",
    "cooperative_candidate",
    "cooperation_applies",
    "cog_lower",
    "gaussian_cog_bounds",
]

LOG2 = math.log2
R0_THRESHOLD = 7.0


@dataclass(frozen=True)
class GaussCogParams:
    """Primary link ``snr1``, secondary link ``snr2``, cross links ``inr1`` (2→3) and ``inr2`` (1→4)."""

    snr1: float
    snr2: float
    inr1: float
    inr2: float
    cnr: float
    theta: float = 0.0
    r0: float = R0_THRESHOLD

    def __post_init__(self) -> None:
        for name in ("snr1", "snr2", "inr1", "inr2", "cnr"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        if not (math.isfinite(self.theta) and math.isfinite(self.r0)):
            raise ValueError("theta and r0 must be finite")
        if self.r0 < 0:
            raise ValueError("r0 must be nonnegative")

    def exponents(self) -> tuple[int, int, int, int, int]:
        """Floored bit counts (n1, n2, a1, a2, beta)."""
        f = lambda v: max(math.floor(math.log2(v)), 0)  # noqa: E731
        return f(self.snr1), f(self.snr2), f(self.inr1), f(self.inr2), f(self.cnr)


def _over(listen: float, base: float, const: float = 0.0) -> LinFrac:
    # (δ·listen + base)/(1 + δ) + const
    return LinFrac(listen + const, base + const, 1, 1)


def cog_u_bounds(p: GaussCogParams) -> list[LinFrac]:
    x1, x2, y1, y2, z, r0 = p.snr1, p.snr2, p.inr1, p.inr2, p.cnr, p.r0
    relay = LOG2(1 + (y2 + z) / (1 + x1))
    c1 = LOG2(1 + x1)
    u1 = _over(0.0, LOG2(1 + x2), 1)
    u2 = _over(relay, LOG2(1 + 2 * x2 + 2 * y2) - c1 + LOG2(1 + x1 / (1 + y2)), 2 + r0)
    u3 = _over(0.0, LOG2(1 + 2 * x1 + 2 * y1) - c1 + LOG2(1 + x2 / (1 + y1)), 2 + r0)
    cross = max(LOG2(1 + y2 + (2 * x2 + y2) / (1 + y1)), LOG2(1 + 2 * y2))
    u4 = _over(relay, LOG2(1 + 2 * x1 + 2 * y1) - 2 * c1 + LOG2(1 + x1 / (1 + y2)) + cross, 3 + 2 * r0)
    return [u1, u2, u3, u4]


def cog_outer_bounds(p: GaussCogParams) -> list[LinFrac]:
    """Power-maximized converse on the secondary rate with the primary pinned at C0 − r0."""
    x1, x2, y1, y2, z, r0 = p.snr1, p.snr2, p.inr1, p.inr2, p.cnr, p.r0
    r1 = LOG2(1 + x1) - r0
    c1 = LOG2(1 + x1)
    big = LOG2(1 + x1 + y2 + z)
    cross = max(LOG2(1 + y2 + (2 * x2 + y2) / (1 + y1)), LOG2(1 + 2 * y2))
    return [
        _over(0.0, LOG2(1 + x2), 2),
        _over(big, LOG2(1 + 2 * x2 + 2 * y2) + LOG2(1 + x1 / (1 + y2)), 3 - r1),
        _over(c1, LOG2(1 + 2 * x1 + 2 * y1) + LOG2(1 + x2 / (1 + y1)), 4 - r1),
        _over(c1 + big, LOG2(1 + 2 * x1 + 2 * y1) + LOG2(1 + x1 / (1 + y2)) + cross, 6 - 2 * r1),
    ]


def cog_ldm_link_bounds(p: GaussCogParams) -> list[LinFrac]:
    n1, n2, a1, a2, beta = p.exponents()
    r0 = p.r0
    gain = max(beta, a2, n1) - n1
    v1, v2, v3, v4 = cog_v_values(n1, n2, a1, a2)
    return [
        _over(0.0, v1, -10 - 2 * r0),
        _over(gain, v2, -5 - r0),
        _over(0.0, v3, -5 - r0),
        _over(gain, v4),
    ]


def c_bar_r0(p: GaussCogParams) -> DeltaOptResult:
    return maxmin_linfrac(cog_u_bounds(p), tol=1e-12)


def cog_ldm_link(p: GaussCogParams) -> DeltaOptResult:
    return maxmin_linfrac(cog_ldm_link_bounds(p), tol=1e-12)


def cog_outer(p: GaussCogParams) -> DeltaOptResult:
    return maxmin_linfrac(cog_outer_bounds(p), tol=1e-12)


# ---------------------------------------------------------------------------
# achievability


def cog_beta_factors(p: GaussCogParams) -> tuple[float, float]:
    """Received-power factors of the zero-forced cooperative signal, normalized two ways."""
    x1, x2, y1, y2 = p.snr1, p.snr2, p.inr1, p.inr2
    det = x1 * x2 + y1 * y2 - 2 * math.sqrt(x1 * x2 * y1 * y2) * math.cos(p.theta)
    det = max(det, 0.0)
    return det / (x1 * x2), det / (y1 * y2)


def k_tilde(p: GaussCogParams) -> float:
    x1, x2, y1, y2 = p.snr1, p.snr2, p.inr1, p.inr2
    return max(x1 * min(1.0, x2 / y2), y1 * min(1.0, y2 / x2))


def receive_power_ok(p: GaussCogParams, rtol: float = 1e-12) -> bool:
    """Whether the cooperative signal reaches the primary destination with at least k̃/4."""
    b1, _ = cog_beta_factors(p)
    lhs = b1 * p.snr1 * min(1.0, p.snr2 / p.inr2)
    return lhs >= k_tilde(p) / 4 * (1 - rtol)


def z_channel_bound(snr: float) -> float:
    """Secondary rate left when the primary sits at full link rate and only one cross link exists."""
    return LOG2(1 + snr / (1 + snr))


def ifc_candidate(p: GaussCogParams) -> float:
    """Rate without any cooperation, one bit below the deterministic interference-channel value."""
    n1, n2, a1, a2, _ = p.exponents()
    return float(pos(min(cog_v_values(n1, n2, a1, a2)) - 1))


def cooperation_applies(p: GaussCogParams) -> bool:
    """Cooperation is only used for strong conferencing, nontrivial links, and misaligned gains."""
    x1, x2, y1, y2, z = p.snr1, p.snr2, p.inr1, p.inr2, p.cnr
    if z <= max(x1, y2) or min(x1, x2, y2) <= 1 or y1 <= 1:
        return False
    ratio = x1 * x2 / (y1 * y2)
    return ratio >= 4 or ratio <= 0.25


def cooperative_candidate(p: GaussCogParams) -> DeltaOptResult:
    """Best cooperative secondary rate over δ, with the pipe load δ·(β − n1 − 1)⁺."""
    n1, n2, a1, a2, beta = p.exponents()
    v1, v2, v3, v4 = cog_v_values(n1, n2, a1, a2)
    g = pos(beta - n1 - 1)
    r0 = p.r0
    res = maxmin_linfrac(
        [
            _over(0.0, v1 - 9),
            _over(g, v2 - 7 + r0),
            _over(0.0, v3 - 19),
            _over(g, v4 - 16 + r0),
        ],
        tol=1e-12,
    )
    if res.value < 0:
        return DeltaOptResult(delta_star=0, value=0.0)
    return res


@dataclass
class CogLower:
    value: float | None
    asserted: bool
    delta_star: object
    cooperative: bool


def cog_lower(p: GaussCogParams) -> CogLower:
    """Secondary rate achievable with the primary within r0 of its link capacity.

    Below the back-off threshold the scheme's primary rate is not
    guaranteed, so no value is asserted.
    """
    if p.r0 < R0_THRESHOLD:
        return CogLower(None, False, None, False)
    # without cooperation the secondary never listens: δ = 0
    best, star, coop = ifc_candidate(p), 0, False
    if cooperation_applies(p):
        c = cooperative_candidate(p)
        if c.value > best:
            best, star, coop = float(c.value), c.delta_star, True
    return CogLower(best, True, star, coop)


@dataclass
class GaussCogBounds:
    params: GaussCogParams
    c_bar_r0: float
    ldm_link: float
    outer: float
    lower: float | None
    lower_asserted: bool
    delta_c_bar: object = None
    delta_lower: object = None
    cooperative: bool = False

    def margins(self, gaps=None) -> dict:
        """Slack of the three sandwich inequalities; empty when no lower bound is asserted."""
        from ..analysis import GapConstants

        g = gaps or GapConstants()
        r0 = self.params.r0
        out = {"c_bar_lt_ldm_plus_gap": self.ldm_link + g.cog_ldm_link + 2 * r0 - self.c_bar_r0}
        if self.lower_asserted:
            out["lower_le_c_bar"] = self.c_bar_r0 - self.lower
            out["c_bar_minus_gap_le_lower"] = self.lower - (self.c_bar_r0 - g.cog_lower - 2 * r0)
        return out


def gaussian_cog_bounds(p: GaussCogParams) -> GaussCogBounds:
    cb = c_bar_r0(p)
    low = cog_lower(p)
    return GaussCogBounds(
        params=p,
        c_bar_r0=float(cb.value),
        ldm_link=float(cog_ldm_link(p).value),
        outer=float(cog_outer(p).value),
        lower=low.value,
        lower_asserted=low.asserted,
        delta_c_bar=cb.delta_star,
        delta_lower=low.delta_star,
        cooperative=low.cooperative,
    )
