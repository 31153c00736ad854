"""Linear superposition codes for the mode-A virtual channel.

Every message kind of every source gets a generator matrix.  For w, u and vp
the generator maps message bits onto input levels; for the cooperative
private kind v it maps onto rows of the own destination's output, and the
precoder of the geometry turns those targets into inputs for both sources.

A destination decodes by one joint linear solve against the stacked
columns [D | I]: D spans the own messages (plus the own cooperative part), I
spans the other source's public message.  The own messages are unique iff
rank[D | I] = cols(D) + rank(I).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .. import gf2
from .geometry import KINDS, OTHER, OWN_DEST, Geometry

__all__ = [
    "VirtualCode",
    "DecodeResult",
    "Ambiguity",
    "find_code",
    "unit_code",
    "random_code",
    "greedy_code",
    "encode",
    "decode",
    "ambiguity_witness",
]


@dataclass(frozen=True)
class VirtualCode:
    """Generators keyed by (source, kind); ``how`` records which search produced them."""

    geometry: Geometry
    gens: dict
    how: str = "unit"

    def rates(self, src: int) -> dict:
        return {k: self.gens[(src, k)].shape[1] for k in KINDS}

    def stacks(self, dest: int) -> tuple[np.ndarray, np.ndarray, list]:
        """(D, I, column labels of D) seen at ``dest``."""
        g = self.geometry
        own = 1 if dest == 3 else 2
        oth = OTHER[own]
        parts, labels = [], []
        for kind in ("w", "u", "vp"):
            parts.append(gf2.matmul(g.gains[(dest, own)], self.gens[(own, kind)]))
            labels.append(kind)
        parts.append(self.gens[(own, "v")])
        labels.append("v")
        d = np.concatenate(parts, axis=1)
        i = gf2.matmul(g.gains[(dest, oth)], self.gens[(oth, "w")])
        return d, i, labels

    def leakage_free(self) -> bool:
        """Private levels of each source vanish at the other destination."""
        g = self.geometry
        for src in (1, 2):
            other_dest = OWN_DEST[OTHER[src]]
            if gf2.matmul(g.gains[(other_dest, src)], self.gens[(src, "u")]).any():
                return False
        return True

    def decodable_at(self, dest: int) -> bool:
        d, i, _ = self.stacks(dest)
        return gf2.rank(np.concatenate([d, i], axis=1)) == d.shape[1] + gf2.rank(i)

    def decodable(self) -> bool:
        return self.leakage_free() and self.decodable_at(3) and self.decodable_at(4)


def _empty_gens(width: int, rates: dict) -> dict:
    return {(s, k): np.zeros((width, rates[s][k]), dtype=np.uint8) for s in (1, 2) for k in KINDS}


def _check_rates(rates: dict) -> None:
    for s in (1, 2):
        for k in KINDS:
            r = rates[s].get(k, 0)
            if not isinstance(r, (int, np.integer)) or r < 0:
                raise ValueError(f"rate of ({s},{k}) must be a nonnegative integer, got {r!r}")


def _norm(rates: dict) -> dict:
    return {s: {k: int(rates[s].get(k, 0)) for k in KINDS} for s in (1, 2)}


# -------------------------------------------------------------- unit layouts


def _image_row(gain: np.ndarray, level: int) -> int | None:
    col = np.nonzero(gain[:, level])[0]
    return int(col[0]) if col.size else None


def _unit_states(g: Geometry, src: int, r: dict):
    """Yield (D mask at own dest, I mask at other dest, level choice) per placement."""
    own_dest, oth_dest = OWN_DEST[src], OWN_DEST[OTHER[src]]
    sw = [l for l in range(g.width) if g.supports[(src, "w")][l]]
    seen = set()
    for wl in itertools.combinations(sw, r["w"]):
        rest = [l for l in sw if l not in wl]
        sp = [l for l in rest if g.supports[(src, "vp")][l]]
        for pl in itertools.combinations(sp, r["vp"]):
            su = [l for l in rest if l not in pl and g.supports[(src, "u")][l]]
            for ul in itertools.combinations(su, r["u"]):
                dmask = 0
                for l in wl + pl + ul:
                    row = _image_row(g.gains[(own_dest, src)], l)
                    dmask |= 1 << row
                imask = 0
                for l in wl:
                    row = _image_row(g.gains[(oth_dest, src)], l)
                    if row is not None:
                        imask |= 1 << row
                key = (dmask, imask)
                if key in seen:
                    continue
                seen.add(key)
                yield dmask, imask, (wl, pl, ul)


def unit_code(g: Geometry, rates: dict) -> VirtualCode | None:
    """Search placements where every message bit owns one level."""
    _check_rates(rates)
    r = _norm(rates)
    vmask = {s: sum(1 << l for l in range(g.width) if g.supports[(s, "v")][l]) for s in (1, 2)}
    s1 = list(_unit_states(g, 1, r[1]))
    s2 = list(_unit_states(g, 2, r[2]))
    for d1, i1, c1 in s1:
        free1_base = vmask[1] & ~d1
        for d2, i2, c2 in s2:
            if d1 & i2 or d2 & i1:
                continue
            free1 = free1_base & ~i2
            free2 = vmask[2] & ~(d2 | i1)
            if bin(free1).count("1") < r[1]["v"] or bin(free2).count("1") < r[2]["v"]:
                continue
            gens = _empty_gens(g.width, r)
            for s, choice, free in ((1, c1, free1), (2, c2, free2)):
                for kind, levels in zip(("w", "vp", "u"), choice):
                    for j, l in enumerate(levels):
                        gens[(s, kind)][l, j] = 1
                # cooperative private bits take the lowest free rows
                rows = [l for l in range(g.width - 1, -1, -1) if free >> l & 1][: r[s]["v"]]
                for j, l in enumerate(sorted(rows)):
                    gens[(s, "v")][l, j] = 1
            code = VirtualCode(g, gens, "unit")
            if code.decodable():
                return code
    return None


# ------------------------------------------------------------- random codes


def random_code(g: Geometry, rates: dict, tries: int = 500, seed: int = 0) -> VirtualCode | None:
    """Seeded search over random generators confined to the allowed supports."""
    _check_rates(rates)
    r = _norm(rates)
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        gens = {}
        for s in (1, 2):
            for k in KINDS:
                mask = g.supports[(s, k)].astype(np.uint8)[:, None]
                gens[(s, k)] = rng.integers(0, 2, (g.width, r[s][k]), dtype=np.uint8) * mask
        code = VirtualCode(g, gens, "random")
        if code.decodable():
            return code
    return None


def greedy_code(g: Geometry, rates: dict) -> VirtualCode:
    """Top-down placement that ignores decodability; used when nothing better exists.

    Bits beyond the support size wrap around onto already used levels, so the
    resulting code is always well formed but usually ambiguous.
    """
    _check_rates(rates)
    r = _norm(rates)
    gens = _empty_gens(g.width, r)
    for s in (1, 2):
        used: set = set()
        for kind in ("w", "vp", "u", "v"):
            allowed = [l for l in range(g.width) if g.supports[(s, kind)][l]]
            if kind == "v":
                allowed = allowed[::-1]
            fresh = [l for l in allowed if l not in used] + allowed
            for j in range(r[s][kind]):
                if not fresh:
                    break
                l = fresh[j % len(fresh)]
                gens[(s, kind)][l, j] = 1
                used.add(l)
    return VirtualCode(g, gens, "greedy")


def find_code(g: Geometry, rates: dict, tries: int = 500, seed: int = 0) -> VirtualCode:
    """Unit layout first (single slot), then random search, then the greedy fallback.

    The returned code may be undecodable only in the fallback case; callers
    check :meth:`VirtualCode.decodable`.
    """
    _check_rates(rates)
    r = _norm(rates)
    for s in (1, 2):
        for k in KINDS:
            if r[s][k] > int(g.supports[(s, k)].sum()):
                return greedy_code(g, r)
    if g.slots == 1:
        code = unit_code(g, r)
        if code is not None:
            return code
    code = random_code(g, r, tries=tries, seed=seed)
    if code is not None:
        return code
    return greedy_code(g, r)


# --------------------------------------------------------- encode and decode


def encode(code: VirtualCode, messages: dict, knowledge: dict | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Channel inputs (x1, x2), one column per trial.

    ``messages[(src, kind)]`` has shape (rate, trials).  The cooperative
    private part needs both v messages at both sources; ``knowledge`` can
    supply source-specific copies ``{src: (v1, v2)}`` (for instance as
    received over the bit-pipes), otherwise the true messages are used.
    """
    g = code.geometry
    trials = _trials(messages)
    xs = {}
    for s in (1, 2):
        x = np.zeros((g.width, trials), dtype=np.uint8)
        for kind in ("w", "u", "vp"):
            x ^= gf2.matmul(code.gens[(s, kind)], _msg(messages, s, kind, code, trials))
        xs[s] = x
    for s in (1, 2):
        if knowledge is not None and s in knowledge:
            v1, v2 = knowledge[s]
        else:
            v1 = _msg(messages, 1, "v", code, trials)
            v2 = _msg(messages, 2, "v", code, trials)
        t3 = gf2.matmul(code.gens[(1, "v")], v1)
        t4 = gf2.matmul(code.gens[(2, "v")], v2)
        if t3.any() or t4.any():
            pair = g.precode(t3, t4)
            xs[s] ^= pair[s - 1]
    return xs[1], xs[2]


def _trials(messages: dict) -> int:
    for m in messages.values():
        return np.asarray(m).shape[1]
    return 1


def _msg(messages: dict, s: int, kind: str, code: VirtualCode, trials: int) -> np.ndarray:
    rate = code.gens[(s, kind)].shape[1]
    m = messages.get((s, kind))
    if m is None:
        if rate:
            raise KeyError(f"missing message ({s},{kind})")
        return np.zeros((0, trials), dtype=np.uint8)
    m = np.asarray(m, dtype=np.uint8)
    if m.shape != (rate, trials):
        raise ValueError(f"message ({s},{kind}) has shape {m.shape}, expected {(rate, trials)}")
    return m


@dataclass
class Ambiguity:
    """A nonzero change of the own messages invisible at the destination."""

    dest: int
    own_delta: dict
    other_public_delta: np.ndarray


@dataclass
class DecodeResult:
    ok: bool
    messages: dict = field(default_factory=dict)
    other_public: np.ndarray | None = None
    witness: Ambiguity | None = None


def ambiguity_witness(code: VirtualCode, dest: int) -> Ambiguity | None:
    d, i, labels = code.stacks(dest)
    full = np.concatenate([d, i], axis=1)
    kern = gf2.nullspace(full)
    nd = d.shape[1]
    for j in range(kern.shape[1]):
        z = kern[:, j]
        if z[:nd].any():
            own = 1 if dest == 3 else 2
            out, pos = {}, 0
            for kind in labels:
                r = code.gens[(own, kind)].shape[1]
                out[kind] = z[pos:pos + r].copy()
                pos += r
            return Ambiguity(dest, out, z[nd:].copy())
    return None


def decode(code: VirtualCode, dest: int, received: np.ndarray, pre_shared_other: np.ndarray | None = None) -> DecodeResult:
    """Recover the own messages at ``dest`` from its output.

    ``pre_shared_other`` is the other source's vp message as known to this
    destination in advance; its contribution is removed before solving.
    """
    g = code.geometry
    own = 1 if dest == 3 else 2
    oth = OTHER[own]
    y = np.asarray(received, dtype=np.uint8)
    vec = y.ndim == 1
    if vec:
        y = y[:, None]
    trials = y.shape[1]
    rvp = code.gens[(oth, "vp")].shape[1]
    if rvp:
        if pre_shared_other is None:
            raise ValueError("pre-shared message of the other source is required")
        known = np.asarray(pre_shared_other, dtype=np.uint8)
        if known.ndim == 1:
            known = known[:, None]
        y = y ^ gf2.matmul(gf2.matmul(g.gains[(dest, oth)], code.gens[(oth, "vp")]), known)
    d, i, labels = code.stacks(dest)
    witness = ambiguity_witness(code, dest)
    full = np.concatenate([d, i], axis=1)
    sol = gf2.solve(full, y) if full.shape[1] else np.zeros((0, trials), dtype=np.uint8)
    if sol is None:
        return DecodeResult(False, witness=witness)
    msgs, pos = {}, 0
    for kind in labels:
        r = code.gens[(own, kind)].shape[1]
        part = sol[pos:pos + r]
        msgs[kind] = part[:, 0] if vec else part
        pos += r
    other = None
    if gf2.rank(i) == i.shape[1]:
        other = sol[pos:]
        other = other[:, 0] if vec else other
    return DecodeResult(witness is None, msgs if witness is None else {}, other, witness)
