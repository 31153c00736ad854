"""Linear deterministic models of the half-duplex cooperative channels.

Nodes 1 and 2 are the sources, 3 and 4 the destinations.  Source 1 talks to
destination 3 and source 2 to destination 4.  In the symmetric channel the
direct, cross and cooperation links carry ``n_d``, ``n_i`` and ``n_c`` levels.
In the cognitive channel source 1 is primary (direct ``n1``, cross ``a2`` into
node 4), source 2 is secondary (direct ``n2``, cross ``a1`` into node 3) and
the source link 1 -> 2 carries ``beta`` levels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import gf2

__all__ = [
    "LdmSymParams",
    "LdmCogParams",
    "Mode",
    "INFINITY",
    "Infinity",
    "Delta",
    "Schedule",
    "TransferMap",
    "transfer",
    "apply_channel",
    "width",
]


def _check_nonneg(name: str, value) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class LdmSymParams:
    n_d: int
    n_i: int
    n_c: int

    def __post_init__(self) -> None:
        for name in ("n_d", "n_i", "n_c"):
            _check_nonneg(name, getattr(self, name))


@dataclass(frozen=True)
class LdmCogParams:
    n1: int
    n2: int
    a1: int
    a2: int
    beta: int = 0

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "a1", "a2", "beta"):
            _check_nonneg(name, getattr(self, name))


class Mode(enum.Enum):
    A = "A"  # both sources transmit
    B = "B"  # source 1 transmits, source 2 listens
    C = "C"  # source 2 transmits, source 1 listens


class Infinity:
    """The δ = ∞ limit (pure mode A in the symmetric channel)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self or (isinstance(other, float) and other == float("inf"))

    def __hash__(self) -> int:
        return hash(float("inf"))

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return not (other is self or other == float("inf"))

    def __float__(self) -> float:
        return float("inf")


INFINITY = Infinity()

Delta = Union[Fraction, Infinity]


@dataclass(frozen=True)
class Schedule:
    """Block layout: ``l_a``, ``l_b``, ``l_c`` slots of modes A, B, C per block.

    Symmetric channels use ``l_b == l_c`` and δ = l_a / l_b.  Cognitive channels
    use ``l_c == 0`` and δ = l_b / l_a.
    """

    l_a: int
    l_b: int
    l_c: int
    cognitive: bool = False
    delta: Delta = field(init=False)

    def __post_init__(self) -> None:
        for name in ("l_a", "l_b", "l_c"):
            _check_nonneg(name, getattr(self, name))
        if self.cognitive:
            if self.l_c != 0:
                raise ValueError("cognitive schedules have no mode-C slots")
            d = INFINITY if self.l_a == 0 else Fraction(self.l_b, self.l_a)
        else:
            if self.l_b != self.l_c:
                raise ValueError("symmetric schedules need l_b == l_c")
            d = INFINITY if self.l_b == 0 else Fraction(self.l_a, self.l_b)
        if self.l_a + self.l_b + self.l_c == 0:
            raise ValueError("empty block")
        object.__setattr__(self, "delta", d)

    @property
    def slots(self) -> int:
        return self.l_a + self.l_b + self.l_c

    @classmethod
    def for_delta(cls, delta: Delta, scale: int = 1, cognitive: bool = False) -> "Schedule":
        """Smallest block realizing ``delta``, with slot counts multiplied by ``scale``."""
        if delta is INFINITY:
            return cls(scale, 0, 0, cognitive) if not cognitive else cls(0, scale, 0, True)
        delta = Fraction(delta)
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        p, q = delta.numerator, delta.denominator
        if cognitive:
            return cls(q * scale, p * scale, 0, True)
        return cls(p * scale, q * scale, q * scale)


@dataclass(frozen=True)
class TransferMap:
    """Per-receiver factor pairs: ``factors[node] = (F1, F2)`` gives F1 x1 + F2 x2.

    Receivers missing from ``factors`` see nothing in this mode.
    """

    mode: Mode
    width: int
    factors: dict

    def receivers(self) -> list[int]:
        return sorted(self.factors)


def width(params: LdmSymParams | LdmCogParams, mode: Mode) -> int:
    """Input width of both sources in ``mode``."""
    if isinstance(params, LdmSymParams):
        if mode is Mode.A:
            return max(params.n_d, params.n_i)
        return max(params.n_d, params.n_i, params.n_c)
    if mode is Mode.C:
        raise ValueError("mode C is invalid for the cognitive channel")
    base = max(params.n1, params.a1, params.n2, params.a2)
    return base if mode is Mode.A else max(base, params.beta)


def transfer(params: LdmSymParams | LdmCogParams, mode: Mode) -> TransferMap:
    m = width(params, mode)
    S = lambda level: gf2.shift_matrix(m, m - level)  # noqa: E731
    Z = gf2.zeros(m, m)
    if isinstance(params, LdmSymParams):
        nd, ni, nc = params.n_d, params.n_i, params.n_c
        if mode is Mode.A:
            f = {3: (S(nd), S(ni)), 4: (S(ni), S(nd))}
        elif mode is Mode.B:
            f = {1: (Z, Z), 2: (S(nc), Z), 3: (S(nd), Z), 4: (S(ni), Z)}
        else:
            f = {1: (Z, S(nc)), 2: (Z, Z), 3: (Z, S(ni)), 4: (Z, S(nd))}
        return TransferMap(mode, m, f)
    n1, n2, a1, a2, beta = params.n1, params.n2, params.a1, params.a2, params.beta
    if mode is Mode.A:
        f = {3: (S(n1), S(a1)), 4: (S(a2), S(n2))}
    else:
        f = {2: (S(beta), Z), 3: (S(n1), Z), 4: (S(a2), Z)}
    return TransferMap(mode, m, f)


def apply_channel(tmap: TransferMap, x1, x2) -> dict:
    """Noiseless outputs ``{node: y}`` for every receiver of the map."""
    x1 = np.asarray(x1, dtype=np.uint8)
    x2 = np.asarray(x2, dtype=np.uint8)
    if x1.shape[0] != tmap.width or x2.shape[0] != tmap.width:
        raise ValueError(f"input widths {x1.shape[0]},{x2.shape[0]} != {tmap.width}")
    return {
        node: gf2.matmul(f1, x1) ^ gf2.matmul(f2, x2)
        for node, (f1, f2) in tmap.factors.items()
    }
