"""Rate allocations for the half-duplex schemes on the deterministic models."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..capacity.delta import as_delta
from ..capacity.ldm import ldm_cog_capacity, ldm_sum_capacity, pos
from ..ldm import INFINITY, LdmCogParams, LdmSymParams, Schedule
from ..rate_region import (
    LinIneq,
    argmax_weighted_rate,
    tie_symmetric,
    virtual_constraints_cog,
    virtual_constraints_sym,
)
from .geometry import realizable_k

__all__ = [
    "SourceRates",
    "MessageAllocation",
    "AllocationError",
    "region_allocation",
    "virtual_sum_rate",
    "optimal_virtual_rates",
    "optimal_cog_virtual_rates",
    "optimal_allocation",
    "optimal_cog_allocation",
    "schedule_for",
    "nominal_rates",
    "check_allocation",
]

F = Fraction


class AllocationError(ValueError):
    """An allocation violates the scheme's constraints or cannot be scheduled."""


@dataclass(frozen=True)
class SourceRates:
    """Bits per mode-A slot: public, private, cooperative private, pre-shared public."""

    w: Fraction = F(0)
    u: Fraction = F(0)
    v: Fraction = F(0)
    vp: Fraction = F(0)

    def __post_init__(self) -> None:
        for name in ("w", "u", "v", "vp"):
            val = Fraction(getattr(self, name))
            if val < 0:
                raise AllocationError(f"{name} must be nonnegative")
            object.__setattr__(self, name, val)

    @property
    def total(self) -> Fraction:
        return self.w + self.u + self.v + self.vp

    def as_dict(self) -> dict:
        return {"w": self.w, "u": self.u, "v": self.v, "vp": self.vp}


@dataclass(frozen=True)
class MessageAllocation:
    """Everything a block of the scheme needs besides the schedule.

    ``bp_ss`` is the pipe rate between the sources and ``bp_sd`` the pipe
    rate from a source to the other destination, both per mode-A slot.
    ``delta_r`` is the relay rate and ``r_1b``/``r_2c`` the direct rates, per
    listening slot.  For the cognitive channel ``bp_ss`` is the pipe from the
    primary to the secondary source and the others are zero apart from
    ``r_1b``.
    """

    source1: SourceRates = field(default_factory=SourceRates)
    source2: SourceRates = field(default_factory=SourceRates)
    bp_ss: Fraction = F(0)
    bp_sd: Fraction = F(0)
    delta_r: Fraction = F(0)
    r_1b: Fraction = F(0)
    r_2c: Fraction = F(0)

    def __post_init__(self) -> None:
        for name in ("bp_ss", "bp_sd", "delta_r", "r_1b", "r_2c"):
            val = Fraction(getattr(self, name))
            if val < 0:
                raise AllocationError(f"{name} must be nonnegative")
            object.__setattr__(self, name, val)

    @property
    def bp_12(self) -> Fraction:
        return self.bp_ss

    def sources(self) -> dict:
        return {1: self.source1, 2: self.source2}

    def mode_a_denominator(self) -> int:
        dens = [r.denominator for s in (self.source1, self.source2) for r in s.as_dict().values()]
        return math.lcm(*dens) if dens else 1


def region_allocation(params: LdmSymParams, delta) -> tuple[Fraction, Fraction, Fraction]:
    """(bp_ss, bp_sd, delta_r) chosen per parameter region at scheduling ratio ``delta``.

    Weak cooperation (n_c <= n_d) and equal gains need no pipes or relays.
    At delta = 0 there is no mode A, so only the relay rate matters; it is the
    limit of the relay branch.
    """
    nd, ni, nc = params.n_d, params.n_i, params.n_c
    d = as_delta(delta)
    zero = (F(0), F(0), F(0))
    if d is INFINITY or nc <= nd or ni == nd:
        return zero
    if d < 0:
        raise AllocationError("delta must be nonnegative")
    if ni < nd:
        return (F(nc - nd) / d, F(0), F(0)) if d > 0 else zero
    if ni <= nc:
        if d > 0 and nc - nd <= d * ni:
            return F(nc - nd) / d, F(0), F(0)
        bp = F(ni) if d > 0 else F(0)
        return bp, F(0), min(F(nc - nd - d * ni, 2), F(ni - nd))
    if d > 0 and (ni - nd <= d * ni or nc - nd <= d * (ni - nd)):
        return F(nc - nd) / d, F(ni - nc) / d, F(0)
    ss, sd = (F(ni - nd), F(nd)) if d > 0 else (F(0), F(0))
    return ss, sd, min(F(nc - nd) - d * (ni - nd), F(ni - nd - d * ni, 2))


def virtual_sum_rate(params: LdmSymParams, bp_ss, bp_sd) -> Fraction:
    """Best symmetric sum rate of the virtual channel (exact LP on the tied region)."""
    return 2 * optimal_virtual_rates(params, bp_ss, bp_sd)[1]


def optimal_virtual_rates(params: LdmSymParams, bp_ss, bp_sd) -> tuple[SourceRates, Fraction]:
    """A per-source rate split maximizing the symmetric virtual sum rate, and that rate."""
    region = tie_symmetric(virtual_constraints_sym(params, bp_ss, bp_sd))
    weights = {v: 1 for v in region.variables}
    value, x = argmax_weighted_rate(region, weights)
    rates = SourceRates(w=x.get("R_W", 0), u=x.get("R_U", 0), v=x.get("R_V", 0), vp=x.get("R_Vp", 0))
    return rates, value


def optimal_cog_virtual_rates(params: LdmCogParams, bp_12) -> tuple[SourceRates, SourceRates, Fraction]:
    """Primary pinned at n1 in mode A; maximize the secondary rate."""
    n1 = params.n1
    region = virtual_constraints_cog(params, bp_12)
    pin = {"R_W1": 1, "R_U1": 1, "R_V1": 1}
    region = region.with_ineqs([LinIneq.make(pin, n1), LinIneq.make({k: -1 for k in pin}, -n1)])
    value, x = argmax_weighted_rate(region, {"R_W2": 1, "R_U2": 1})
    s1 = SourceRates(w=x["R_W1"], u=x["R_U1"], v=x["R_V1"])
    s2 = SourceRates(w=x["R_W2"], u=x["R_U2"])
    return s1, s2, value


def nominal_rates(params, schedule: Schedule, alloc: MessageAllocation) -> tuple[Fraction, Fraction]:
    """Per-slot rates of the scheme in steady state (no first-block deficit)."""
    la, lb, lc = schedule.l_a, schedule.l_b, schedule.l_c
    total = schedule.slots
    if isinstance(params, LdmCogParams):
        r1 = la * alloc.source1.total + lb * alloc.r_1b
        r2 = la * alloc.source2.total
        return F(r1, 1) / total, F(r2, 1) / total
    r1 = la * alloc.source1.total + lb * alloc.r_1b + lb * alloc.delta_r
    r2 = la * alloc.source2.total + lc * alloc.r_2c + lc * alloc.delta_r
    return F(r1, 1) / total, F(r2, 1) / total


def check_allocation(params, schedule: Schedule, alloc: MessageAllocation) -> None:
    """Raise :class:`AllocationError` unless the listening modes can carry the loads.

    The messages themselves may exceed the virtual region; that shows up as a
    decoding ambiguity, not here.
    """
    if isinstance(params, LdmCogParams):
        _check_cog(params, schedule, alloc)
        return
    nd, ni, nc = params.n_d, params.n_i, params.n_c
    la, lb = schedule.l_a, schedule.l_b
    s1, s2 = alloc.source1, alloc.source2
    for s in (s1, s2):
        if s.v > alloc.bp_ss or s.vp > alloc.bp_sd:
            raise AllocationError("cooperative messages exceed their bit-pipes")
        if s.u > pos(nd - ni):
            raise AllocationError("private rate exceeds the levels below the interference floor")
        if s.v and nd == ni:
            raise AllocationError("cooperative private messages need n_d != n_i")
    if alloc.r_1b > nd or alloc.r_2c > nd:
        raise AllocationError("direct listening-mode rate exceeds n_d")
    if lb == 0:
        if alloc.delta_r or any(s.v or s.vp for s in (s1, s2)):
            raise AllocationError("pipes and relays need listening slots")
        return
    d = F(la, lb)
    c_ss, c_sd, c_both = pos(nc - nd), pos(ni - nd), pos(max(ni, nc) - nd)
    checks = [
        (d * alloc.bp_ss + alloc.delta_r, c_ss),
        (d * alloc.bp_sd + alloc.delta_r, c_sd),
        (d * alloc.bp_ss + d * alloc.bp_sd + 2 * alloc.delta_r, c_both),
    ]
    for lhs, cap in checks:
        if lhs > cap:
            raise AllocationError(f"listening-mode load {lhs} exceeds {cap}")


def _check_cog(params: LdmCogParams, schedule: Schedule, alloc: MessageAllocation) -> None:
    if not schedule.cognitive:
        raise AllocationError("cognitive channels need a cognitive schedule")
    s1, s2 = alloc.source1, alloc.source2
    if s1.vp or s2.vp or s2.v or alloc.bp_sd or alloc.delta_r or alloc.r_2c:
        raise AllocationError("the cognitive scheme uses only the primary-to-secondary pipe")
    if s1.v > alloc.bp_ss:
        raise AllocationError("cooperative message exceeds the bit-pipe")
    if s1.v > realizable_k(params):
        raise AllocationError("cooperative message exceeds the realizable dimension")
    if alloc.r_1b > params.n1:
        raise AllocationError("direct rate exceeds n1")
    if schedule.l_b == 0:
        if s1.v:
            raise AllocationError("the bit-pipe needs listening slots")
        return
    d = F(schedule.l_b, schedule.l_a) if schedule.l_a else None
    if d is not None and alloc.bp_ss > d * pos(params.beta - params.n1):
        raise AllocationError("bit-pipe rate exceeds the listening-link capacity")


def schedule_for(params, delta, alloc: MessageAllocation, max_scale: int = 4096) -> Schedule:
    """Smallest block realizing ``delta`` with integral loads in every stream."""
    cognitive = isinstance(params, LdmCogParams)
    d = as_delta(delta)
    q = alloc.mode_a_denominator()
    for scale in range(1, max_scale + 1):
        sch = Schedule.for_delta(d, scale, cognitive)
        if sch.l_a % q:
            continue
        loads = [sch.l_b * alloc.delta_r, sch.l_b * alloc.r_1b, sch.l_c * alloc.r_2c]
        if all(Fraction(x).denominator == 1 for x in loads):
            return sch
    raise AllocationError("no block length up to the limit clears every denominator")


def optimal_allocation(params: LdmSymParams, delta=None) -> tuple[Schedule, MessageAllocation, Fraction]:
    """Schedule, allocation and nominal sum rate of the symmetric scheme.

    ``delta`` defaults to the optimal ratio from the capacity formula.
    """
    if delta is None:
        delta = ldm_sum_capacity(params).delta_star
    d = as_delta(delta)
    bp_ss, bp_sd, dr = region_allocation(params, d)
    if d == 0:
        rates = SourceRates()
    else:
        rates, _ = optimal_virtual_rates(params, bp_ss, bp_sd)
    nd = params.n_d
    alloc = MessageAllocation(rates, rates, bp_ss, bp_sd, dr, F(nd), F(nd))
    sch = schedule_for(params, d, alloc)
    r1, r2 = nominal_rates(params, sch, alloc)
    return sch, alloc, r1 + r2


def optimal_cog_allocation(params: LdmCogParams) -> tuple[Schedule, MessageAllocation, Fraction]:
    """Schedule, allocation and secondary rate of the listen-then-cancel scheme."""
    cap = ldm_cog_capacity(params)
    d = cap.delta_star
    if d is INFINITY:
        raise AllocationError("pure listening schedule carries no secondary data")
    bp = F(d) * pos(params.beta - params.n1) if d else F(0)
    s1, s2, _ = optimal_cog_virtual_rates(params, bp)
    alloc = MessageAllocation(s1, s2, bp_ss=bp, r_1b=F(params.n1))
    sch = schedule_for(params, d, alloc)
    _, r2 = nominal_rates(params, sch, alloc)
    return sch, alloc, r2
