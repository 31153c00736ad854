"""Exact capacity formulas for the linear deterministic models."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..ldm import INFINITY, LdmCogParams, LdmSymParams
from .delta import DeltaOptResult, LinFrac, maxmin_linfrac

__all__ = [
    "sum_bounds",
    "ldm_sum_capacity",
    "sum_rate_at",
    "cog_v_values",
    "ifc_cog_capacity",
    "cog_bounds",
    "ldm_cog_capacity",
    "CogCapacity",
    "InconsistentResult",
]


def pos(x):
    return x if x > 0 else 0 * x


def sum_bounds(p: LdmSymParams) -> list[LinFrac]:
    """The four sum-rate bounds as linear-fractional functions of δ over (2 + δ)."""
    nd, ni, nc = p.n_d, p.n_i, p.n_c
    top = max(nd, ni, nc)
    l1 = LinFrac(2 * nd, 2 * max(nd, nc))
    l2 = LinFrac(max(2 * nd - ni, ni), nd + top)
    l3 = LinFrac(2 * max(ni, nd - ni), 2 * top)
    if nd != ni:
        l4 = LinFrac(2 * max(nd, ni), 2 * max(nd, ni))
    else:
        l4 = LinFrac(nd, 2 * nd)
    return [_exact(l) for l in (l1, l2, l3, l4)]


def _exact(l: LinFrac) -> LinFrac:
    return LinFrac(Fraction(l.slope), Fraction(l.offset), Fraction(l.den_slope), Fraction(l.den_offset))


def ldm_sum_capacity(p: LdmSymParams) -> DeltaOptResult:
    """Sum capacity of the symmetric LDM with its optimal δ (INFINITY allowed)."""
    return maxmin_linfrac(sum_bounds(p))


def sum_rate_at(p: LdmSymParams, delta) -> Fraction:
    return min(b(delta) for b in sum_bounds(p))


def cog_v_values(n1: int, n2: int, a1: int, a2: int) -> tuple[int, int, int, int]:
    """Sum-rate corner terms of the plain interference channel with R1 pinned at n1."""
    v1 = n2
    v2 = max(n2, a2) - min(a2, n1)
    v3 = pos(a1 - n1) + pos(n2 - a1)
    v4 = pos(a1 - n1) - min(a2, n1) + max(n2 - a1, a2)
    return v1, v2, v3, v4


def ifc_cog_capacity(n1: int, n2: int, a1: int, a2: int) -> int:
    """Best secondary rate without cooperation while the primary keeps n1."""
    return min(cog_v_values(n1, n2, a1, a2))


def cog_bounds(p: LdmCogParams) -> list[LinFrac]:
    """The four bounds over (1 + δ), δ = (mode B time) / (mode A time)."""
    v1, v2, v3, v4 = cog_v_values(p.n1, p.n2, p.a1, p.a2)
    gain = max(p.beta, p.a2, p.n1) - p.n1
    return [
        LinFrac(Fraction(0), Fraction(v1), Fraction(1), Fraction(1)),
        LinFrac(Fraction(gain), Fraction(v2), Fraction(1), Fraction(1)),
        LinFrac(Fraction(0), Fraction(v3), Fraction(1), Fraction(1)),
        LinFrac(Fraction(gain), Fraction(v4), Fraction(1), Fraction(1)),
    ]


class InconsistentResult(RuntimeError):
    """Two computations that must agree did not."""


@dataclass
class CogCapacity(DeltaOptResult):
    c_ifc: Fraction = Fraction(0)
    c_z: Fraction = Fraction(0)
    delta0: object = None
    interesting: bool = False


def ldm_cog_capacity(p: LdmCogParams) -> CogCapacity:
    """Cognitive capacity by direct max-min over δ, checked against listen-then-cancel.

    In the interesting region (β > max(a2, n1) and n1 + n2 != a1 + a2) the
    optimum is either the no-cooperation value or the Z-channel value spread
    over 1 + δ0 slots, δ0 being the listening time needed to clear the
    cross link.
    """
    direct = maxmin_linfrac(cog_bounds(p))
    v = cog_v_values(p.n1, p.n2, p.a1, p.a2)
    c_ifc = Fraction(min(v))
    c_z = Fraction(min(v[0], v[2]))
    interesting = p.beta > max(p.a2, p.n1) and p.n1 + p.n2 != p.a1 + p.a2
    delta0 = None
    if interesting:
        delta0 = (c_z - c_ifc) / (p.beta - p.n1)
        interp = max(c_ifc, c_z / (1 + delta0))
        if interp != direct.value:
            raise InconsistentResult(f"{p}: max-min {direct.value} != interpretation {interp}")
        star = Fraction(0) if c_ifc >= interp else delta0
    else:
        if p.beta <= max(p.a2, p.n1) and direct.value != c_ifc:
            raise InconsistentResult(f"{p}: cooperation should be useless")
        star = direct.delta_star
    return CogCapacity(
        delta_star=star,
        value=direct.value,
        active=tuple(i for i, b in enumerate(cog_bounds(p)) if b(star) == direct.value),
        delta_any=direct.delta_any,
        candidates=direct.candidates,
        c_ifc=c_ifc,
        c_z=c_z,
        delta0=delta0,
        interesting=interesting,
    )
