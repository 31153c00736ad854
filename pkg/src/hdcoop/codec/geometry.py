"""Mode-A geometry of the virtual channel and zero-forcing precoders.

A geometry records, per slot, the four receive gains, which levels each
message kind may occupy, and a precoder that turns target signals at the two
destinations into a pair of channel inputs.  Sub-blocks of ``q`` slots are
handled by stacking ``q`` copies of everything along the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import gf2
from ..ldm import LdmCogParams, LdmSymParams

__all__ = [
    "SingularChannel",
    "InfeasiblePrecode",
    "Geometry",
    "KINDS",
    "OWN_DEST",
    "sym_geometry",
    "cog_geometry",
    "zero_forcing_precode_sym",
    "zero_forcing_precode_cog",
    "realizable_k",
    "realizable_k_formula",
]

KINDS = ("w", "u", "vp", "v")
OWN_DEST = {1: 3, 2: 4}
OTHER = {1: 2, 2: 1}


class SingularChannel(ValueError):
    """The cross-coupled mode-A channel matrix is not invertible."""


class InfeasiblePrecode(ValueError):
    """No input pair produces the requested targets."""


def _s(width: int, level: int) -> np.ndarray:
    return gf2.shift_matrix(width, width - level)


def _stacked(gains: dict, width: int) -> np.ndarray:
    m = np.zeros((2 * width, 2 * width), dtype=np.uint8)
    for (dest, src), g in gains.items():
        r = (dest - 3) * width
        c = (src - 1) * width
        m[r:r + width, c:c + width] = g
    return m


def _solution_table(stacked: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Particular solutions for every unit target, plus a solvable-row mask."""
    size = stacked.shape[0]
    table = np.zeros((size, size), dtype=np.uint8)
    ok = np.zeros(size, dtype=bool)
    for j in range(size):
        e = np.zeros(size, dtype=np.uint8)
        e[j] = 1
        x = gf2.solve(stacked, e)
        if x is not None:
            table[:, j] = x
            ok[j] = True
    return table, ok


@dataclass(frozen=True)
class Geometry:
    """Per-slot layout, optionally repeated over ``q`` slots.

    ``gains[(dest, src)]`` maps source inputs to destination outputs.
    ``supports[(src, kind)]`` is a boolean row mask: input levels for w, u and
    vp, own-destination output rows for the cooperative private kind v.
    ``precoder`` maps stacked targets (t3; t4) to stacked inputs (x1; x2) and
    is only meaningful on rows flagged in ``target_ok``.
    """

    width: int
    slots: int
    gains: dict
    supports: dict
    precoder: np.ndarray
    target_ok: np.ndarray

    @property
    def slot_width(self) -> int:
        return self.width // self.slots if self.slots else 0

    def extend(self, q: int) -> "Geometry":
        """The same channel over ``q`` consecutive slots."""
        if self.slots != 1:
            raise ValueError("extend a single-slot geometry")
        if q == 1:
            return self
        n = self.width
        pre = np.zeros((2 * n * q, 2 * n * q), dtype=np.uint8)
        # stacked layout is (dest 3 rows of all slots; dest 4 rows of all slots)
        for k in range(q):
            for a in range(2):
                for b in range(2):
                    blk = self.precoder[a * n:(a + 1) * n, b * n:(b + 1) * n]
                    pre[a * n * q + k * n:a * n * q + (k + 1) * n, b * n * q + k * n:b * n * q + (k + 1) * n] = blk
        ok = np.concatenate([np.tile(self.target_ok[:n], q), np.tile(self.target_ok[n:], q)])
        return Geometry(
            width=n * q,
            slots=q,
            gains={key: gf2.blockdiag(g, q) for key, g in self.gains.items()},
            supports={key: np.tile(m, q) for key, m in self.supports.items()},
            precoder=pre,
            target_ok=ok,
        )

    def precode(self, t3: np.ndarray, t4: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Inputs (x1, x2) whose combined image is t3 at node 3 and t4 at node 4."""
        t = np.concatenate([np.asarray(t3, np.uint8), np.asarray(t4, np.uint8)], axis=0)
        vec = t.ndim == 1
        t2 = t[:, None] if vec else t
        if t2[~self.target_ok].any():
            raise InfeasiblePrecode("target uses rows outside the realizable set")
        x = gf2.matmul(self.precoder, t2)
        n = self.width
        x1, x2 = x[:n], x[n:]
        return (x1[:, 0], x2[:, 0]) if vec else (x1, x2)

    def received(self, dest: int, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        return gf2.matmul(self.gains[(dest, 1)], x1) ^ gf2.matmul(self.gains[(dest, 2)], x2)


def _mask(width: int, lo: int, hi: int) -> np.ndarray:
    m = np.zeros(width, dtype=bool)
    m[max(lo, 0):max(min(hi, width), 0)] = True
    return m


def sym_geometry(params: LdmSymParams) -> Geometry:
    nd, ni = params.n_d, params.n_i
    n = max(nd, ni)
    gains = {(3, 1): _s(n, nd), (3, 2): _s(n, ni), (4, 1): _s(n, ni), (4, 2): _s(n, nd)}
    stacked = _stacked(gains, n)
    if nd != ni:
        pre = gf2.solve(stacked, gf2.identity(2 * n))
        ok = np.ones(2 * n, dtype=bool)
    else:
        pre = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        ok = np.zeros(2 * n, dtype=bool)
    supports = {}
    for src in (1, 2):
        supports[(src, "w")] = _mask(n, 0, nd)
        supports[(src, "vp")] = _mask(n, 0, nd)
        supports[(src, "u")] = _mask(n, ni, nd)
        supports[(src, "v")] = ok[(src - 1) * n:src * n].copy()
    return Geometry(n, 1, gains, supports, pre, ok)


def _cog_gains(p: LdmCogParams) -> tuple[int, dict]:
    n = max(p.n1, p.n2, p.a1, p.a2)
    gains = {(3, 1): _s(n, p.n1), (3, 2): _s(n, p.a1), (4, 1): _s(n, p.a2), (4, 2): _s(n, p.n2)}
    return n, gains


def realizable_k(params: LdmCogParams) -> int:
    """Largest k such that every node-3 target on the bottom k rows cancels at node 4.

    Computed from ranks.  Off the aligned set (n1 + n2 != a1 + a2) it equals
    :func:`realizable_k_formula`; on the aligned set the cross-coupled matrix
    loses rank and the true value can be smaller.
    """
    n, gains = _cog_gains(params)
    stacked = _stacked(gains, n)
    k = 0
    for row in range(n - 1, -1, -1):
        e = np.zeros(2 * n, dtype=np.uint8)
        e[row] = 1
        if gf2.solve(stacked, e) is None:
            break
        k += 1
    return k


def realizable_k_formula(n1: int, n2: int, a1: int, a2: int) -> int:
    return max(n1 - max(a2 - n2, 0), a1 - max(n2 - a2, 0), 0)


def cog_geometry(params: LdmCogParams) -> Geometry:
    p = params
    n, gains = _cog_gains(p)
    stacked = _stacked(gains, n)
    table, solvable = _solution_table(stacked)
    k = realizable_k(p)
    ok = np.zeros(2 * n, dtype=bool)
    ok[n - k:n] = True
    ok &= solvable
    pre = table * ok[None, :].astype(np.uint8)
    supports = {
        (1, "w"): _mask(n, 0, p.n1),
        (1, "u"): _mask(n, p.a2, p.n1),
        (1, "vp"): _mask(n, 0, 0),
        (1, "v"): ok[:n].copy(),
        (2, "w"): _mask(n, 0, p.n2),
        (2, "u"): _mask(n, p.a1, p.n2),
        (2, "vp"): _mask(n, 0, 0),
        (2, "v"): _mask(n, 0, 0),
    }
    return Geometry(n, 1, gains, supports, pre, ok)


def zero_forcing_precode_sym(params: LdmSymParams, v1, v2) -> tuple[np.ndarray, np.ndarray]:
    """Inputs delivering v1 to node 3 and v2 to node 4 with no cross leakage."""
    if params.n_d == params.n_i:
        raise SingularChannel("n_d == n_i: the mode-A channel matrix is singular")
    g = sym_geometry(params)
    return g.precode(gf2.as_bits(v1), gf2.as_bits(v2))


def zero_forcing_precode_cog(params: LdmCogParams, v1) -> tuple[np.ndarray, np.ndarray]:
    """Inputs delivering v1 to the primary destination and nothing to node 4."""
    g = cog_geometry(params)
    v1 = gf2.as_bits(v1)
    return g.precode(v1, np.zeros_like(v1))
