"""Block simulation of the half-duplex schemes on the deterministic models.

Every block runs its listening slots first (mode B, then mode C) and its
mode-A slots last, so the bit-pipes of the virtual channel are filled before
they are used.  Relay bits handed to the other source in block b reach their
destination in block b + 1, which leaves one block of relay data undelivered
at the end of the run.

All trials run side by side: every signal is a matrix with one column per
trial.

Trace format (optional, first trial only), one line per transmitted or
received vector::

    <block> <slot> <mode> <node> <tx|rx> <hex levels, top level first>
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np

from .. import gf2
from ..capacity.ldm import pos
from ..ldm import LdmCogParams, LdmSymParams, Mode, Schedule, apply_channel, transfer, width
from .alloc import AllocationError, MessageAllocation, check_allocation, nominal_rates
from .code import VirtualCode, decode, encode, find_code
from .geometry import cog_geometry, sym_geometry

__all__ = ["SimResult", "run_halfduplex_sim", "mode_a_code", "even_split"]

F = Fraction


@dataclass
class SimResult:
    blocks: int
    slots: int
    trials: int
    errors: int
    rate1: Fraction
    rate2: Fraction
    expected1: Fraction
    expected2: Fraction
    deficit_bits: tuple
    code_kind: str
    decodable: bool

    @property
    def sum_rate(self) -> Fraction:
        return self.rate1 + self.rate2

    @property
    def expected_sum(self) -> Fraction:
        return self.expected1 + self.expected2

    @property
    def steady_sum(self) -> Fraction:
        """Sum rate with the end-of-run relay deficit added back."""
        return self.sum_rate + F(sum(self.deficit_bits), self.slots)


def even_split(total: int, slots: int, front: bool = True) -> list[int]:
    """Spread ``total`` bits over ``slots`` with counts differing by at most one."""
    if slots == 0:
        if total:
            raise AllocationError("bits to send but no slots")
        return []
    base, extra = divmod(total, slots)
    counts = [base] * slots
    idx = range(extra) if front else range(slots - extra, slots)
    for i in idx:
        counts[i] += 1
    return counts


def _int(x: Fraction, what: str) -> int:
    x = F(x)
    if x.denominator != 1:
        raise AllocationError(f"{what} is not an integral number of bits per block ({x})")
    return int(x)


def mode_a_code(params, alloc: MessageAllocation, seed: int = 0, tries: int = 500) -> VirtualCode:
    """The code used in every mode-A sub-block of the run."""
    q = alloc.mode_a_denominator()
    geo = sym_geometry(params) if isinstance(params, LdmSymParams) else cog_geometry(params)
    geo = geo.extend(q)
    rates = {s: {k: _int(q * r, f"rate ({s},{k})") for k, r in src.as_dict().items()} for s, src in alloc.sources().items()}
    return find_code(geo, rates, tries=tries, seed=seed)


class _Tracer:
    def __init__(self, sink: TextIO | None):
        self.sink = sink

    def emit(self, block: int, slot: int, mode: str, node: int, direction: str, vec: np.ndarray) -> None:
        if self.sink is not None:
            self.sink.write(f"{block} {slot} {mode} {node} {direction} {gf2.to_hex(vec[:, 0] if vec.ndim == 2 else vec)}\n")


class _Tally:
    """Counts correctly delivered bits per source, one message group at a time."""

    def __init__(self, trials: int):
        self.trials = trials
        self.bits = {1: 0, 2: 0}
        self.errors = 0

    def add(self, src: int, sent: np.ndarray, got: np.ndarray | None, groups: int = 1) -> None:
        """``sent`` has shape (bits, groups * trials); each column block is one group per trial."""
        if sent.size == 0:
            return
        if got is None:
            self.errors += sent.shape[1]
            return
        ok = ~np.any(sent != got, axis=0)
        self.errors += int((~ok).sum())
        self.bits[src] += int(ok.sum()) * sent.shape[0]


def _pack(m: np.ndarray, groups: int, trials: int) -> np.ndarray:
    """(r, groups*trials) -> (r*groups, trials), group-major."""
    r = m.shape[0]
    return m.reshape(r, groups, trials).transpose(1, 0, 2).reshape(r * groups, trials)


def _unpack(m: np.ndarray, r: int, groups: int, trials: int) -> np.ndarray:
    return m.reshape(groups, r, trials).transpose(1, 0, 2).reshape(r, groups * trials)


def _listen_slots(
    params: LdmSymParams,
    mode: Mode,
    tx: int,
    fresh: np.ndarray,
    to_source: np.ndarray,
    to_dest: np.ndarray,
    slots: int,
    block: int,
    first_slot: int,
    tracer: _Tracer,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Superpose three streams on disjoint levels of one source's input.

    Fresh bits take the top levels seen by the own destination.  The listener
    with fewer levels gets the next levels, the other one the levels after.
    Returns the three streams as decoded by their receivers.
    """
    nd, ni, nc = params.n_d, params.n_i, params.n_c
    tm = transfer(params, mode)
    m = tm.width
    trials = fresh.shape[1]
    own_dest, other_src, other_dest = (3, 2, 4) if tx == 1 else (4, 1, 3)
    f_counts = even_split(fresh.shape[0], slots)
    a_counts = even_split(to_source.shape[0], slots, front=True)
    b_counts = even_split(to_dest.shape[0], slots, front=False)
    source_first = nc <= ni
    got = {"f": [], "a": [], "b": []}
    fp = ap = bp = 0
    for t in range(slots):
        x = np.zeros((m, trials), dtype=np.uint8)
        fa, aa, ba = f_counts[t], a_counts[t], b_counts[t]
        if fa > nd or aa > pos(nc - nd) or ba > pos(ni - nd) or aa + ba > pos(max(ni, nc) - nd):
            raise AllocationError("per-slot listening load exceeds the link")
        f_lv = list(range(fa))
        if source_first:
            a_lv = list(range(nd, nd + aa))
            b_lv = list(range(nd + aa, nd + aa + ba))
        else:
            b_lv = list(range(nd, nd + ba))
            a_lv = list(range(nd + ba, nd + ba + aa))
        x[f_lv] = fresh[fp:fp + fa]
        x[a_lv] = to_source[ap:ap + aa]
        x[b_lv] = to_dest[bp:bp + ba]
        fp, ap, bp = fp + fa, ap + aa, bp + ba
        x1, x2 = (x, np.zeros_like(x)) if tx == 1 else (np.zeros_like(x), x)
        ys = apply_channel(tm, x1, x2)
        slot = first_slot + t
        tracer.emit(block, slot, mode.value, tx, "tx", x)
        for node in sorted(ys):
            tracer.emit(block, slot, mode.value, node, "rx", ys[node])
        gains = {own_dest: nd, other_src: nc, other_dest: ni}
        for key, node, lv in (("f", own_dest, f_lv), ("a", other_src, a_lv), ("b", other_dest, b_lv)):
            rows = [l + m - gains[node] for l in lv]
            got[key].append(ys[node][rows])
    cat = lambda parts, like: np.concatenate(parts, axis=0) if parts else like[:0]  # noqa: E731
    return cat(got["f"], fresh), cat(got["a"], to_source), cat(got["b"], to_dest)


def _mode_a(params, code: VirtualCode, msgs: dict, knowledge: dict, pre_shared: dict, q: int, subs: int, trials: int, block: int, first_slot: int, tracer: _Tracer) -> dict:
    """Run all mode-A sub-blocks of one block; returns decoded messages per destination."""
    x1, x2 = encode(code, msgs, knowledge)
    tm = transfer(params, Mode.A)
    n = tm.width
    y = {3: np.zeros_like(x1), 4: np.zeros_like(x1)}
    for j in range(q):
        rows = slice(j * n, (j + 1) * n)
        ys = apply_channel(tm, x1[rows], x2[rows])
        for node in (3, 4):
            y[node][rows] = ys[node]
        if tracer.sink is not None:
            for k in range(subs):
                cols = slice(k * trials, (k + 1) * trials)
                slot = first_slot + k * q + j
                tracer.emit(block, slot, "A", 1, "tx", x1[rows, cols])
                tracer.emit(block, slot, "A", 2, "tx", x2[rows, cols])
                for node in (3, 4):
                    tracer.emit(block, slot, "A", node, "rx", ys[node][:, cols])
    return {node: decode(code, node, y[node], pre_shared.get(node)) for node in (3, 4)}


def run_halfduplex_sim(
    params,
    schedule: Schedule,
    alloc: MessageAllocation,
    num_blocks: int,
    trials: int = 100,
    seed: int = 0,
    code: VirtualCode | None = None,
    trace: TextIO | None = None,
) -> SimResult:
    """Simulate ``num_blocks`` blocks of the scheme and measure delivered rates.

    Rates count only bits in message groups decoded without error, divided by
    trials and by the total number of slots.
    """
    if num_blocks < 1:
        raise ValueError("num_blocks must be positive")
    if isinstance(params, LdmCogParams):
        return _run_cog(params, schedule, alloc, num_blocks, trials, seed, code, trace)
    check_allocation(params, schedule, alloc)
    la, lb, lc = schedule.l_a, schedule.l_b, schedule.l_c
    q = alloc.mode_a_denominator()
    if la % q:
        raise AllocationError(f"{la} mode-A slots do not split into sub-blocks of {q}")
    subs = la // q
    if code is None:
        code = mode_a_code(params, alloc, seed=seed) if la else None
    rates = {s: code.rates(s) for s in (1, 2)} if code is not None else {s: dict.fromkeys(("w", "u", "vp", "v"), 0) for s in (1, 2)}
    n_fresh = {1: _int(lb * alloc.r_1b, "direct mode-B load"), 2: _int(lc * alloc.r_2c, "direct mode-C load")}
    n_relay = {1: _int(lb * alloc.delta_r, "relay load"), 2: _int(lc * alloc.delta_r, "relay load")}
    rng = np.random.default_rng(seed)
    tracer = _Tracer(trace)
    tally = _Tally(trials)
    cols = subs * trials
    bits = lambda r, c=trials: rng.integers(0, 2, (r, c), dtype=np.uint8)  # noqa: E731
    empty = np.zeros((0, trials), dtype=np.uint8)
    # relay bits in flight: held[s] is source s's relay data as decoded by the other source
    held = {1: (empty, empty), 2: (empty, empty)}  # (sent by origin, copy at the relaying source)
    for b in range(num_blocks):
        msgs = {(s, k): bits(rates[s][k], cols) for s in (1, 2) for k in ("w", "u", "vp", "v")}
        fresh = {s: bits(n_fresh[s]) for s in (1, 2)}
        relay = {s: bits(n_relay[s]) for s in (1, 2)}
        got_v, got_vp, got_fwd, got_relay = {}, {}, {}, {}
        slot = 0
        for tx, mode, nslots in ((1, Mode.B, lb), (2, Mode.C, lc)):
            rx = 2 if tx == 1 else 1
            to_source = np.concatenate([_pack(msgs[(tx, "v")], subs, trials), relay[tx]], axis=0)
            # forward what this source holds for the other one, received last block
            fwd_sent, fwd_copy = held[rx]
            to_dest = np.concatenate([_pack(msgs[(tx, "vp")], subs, trials), fwd_copy], axis=0)
            f_got, a_got, b_got = _listen_slots(params, mode, tx, fresh[tx], to_source, to_dest, nslots, b, slot, tracer)
            slot += nslots
            own_dest = 3 if tx == 1 else 4
            tally.add(tx, fresh[tx], f_got)
            nv = rates[tx]["v"] * subs
            nvp = rates[tx]["vp"] * subs
            got_v[tx] = _unpack(a_got[:nv], rates[tx]["v"], subs, trials)
            got_relay[tx] = a_got[nv:]
            got_vp[tx] = _unpack(b_got[:nvp], rates[tx]["vp"], subs, trials)
            tally.add(rx, fwd_sent, b_got[nvp:])
            got_fwd[own_dest] = b_got[nvp:]
        for s in (1, 2):
            held[s] = (relay[s], got_relay[s])
        if la:
            knowledge = {1: (msgs[(1, "v")], got_v[2]), 2: (got_v[1], msgs[(2, "v")])}
            pre = {3: got_vp[2], 4: got_vp[1]}
            res = _mode_a(params, code, msgs, knowledge, pre, q, subs, trials, b, slot, tracer)
            for node, src in ((3, 1), (4, 2)):
                r = res[node]
                for kind in ("w", "u", "vp", "v"):
                    sent = msgs[(src, kind)]
                    if sent.shape[0] == 0:
                        continue
                    tally.add(src, sent, r.messages.get(kind) if r.ok else None)
    total_slots = num_blocks * schedule.slots
    denom = trials * total_slots
    e1, e2 = nominal_rates(params, schedule, alloc)
    deficit = (n_relay[1], n_relay[2])
    return SimResult(
        blocks=num_blocks,
        slots=total_slots,
        trials=trials,
        errors=tally.errors,
        rate1=F(tally.bits[1], denom),
        rate2=F(tally.bits[2], denom),
        expected1=e1 - F(deficit[0], total_slots),
        expected2=e2 - F(deficit[1], total_slots),
        deficit_bits=deficit,
        code_kind=code.how if code is not None else "none",
        decodable=code.decodable() if code is not None else True,
    )


def _run_cog(params: LdmCogParams, schedule: Schedule, alloc: MessageAllocation, num_blocks: int, trials: int, seed: int, code, trace) -> SimResult:
    check_allocation(params, schedule, alloc)
    la, lb = schedule.l_a, schedule.l_b
    q = alloc.mode_a_denominator()
    if la % q:
        raise AllocationError(f"{la} mode-A slots do not split into sub-blocks of {q}")
    subs = la // q
    if code is None:
        code = mode_a_code(params, alloc, seed=seed) if la else None
    rates = {s: code.rates(s) for s in (1, 2)} if code is not None else {s: dict.fromkeys(("w", "u", "vp", "v"), 0) for s in (1, 2)}
    n_fresh = _int(lb * alloc.r_1b, "direct mode-B load")
    n1, beta = params.n1, params.beta
    tm_b = transfer(params, Mode.B)
    mb = width(params, Mode.B)
    rng = np.random.default_rng(seed)
    tracer = _Tracer(trace)
    tally = _Tally(trials)
    cols = subs * trials
    bits = lambda r, c=trials: rng.integers(0, 2, (r, c), dtype=np.uint8)  # noqa: E731
    for b in range(num_blocks):
        msgs = {(s, k): bits(rates[s][k], cols) for s in (1, 2) for k in ("w", "u", "vp", "v")}
        fresh = bits(n_fresh)
        pipe = _pack(msgs[(1, "v")], subs, trials)
        f_counts = even_split(fresh.shape[0], lb)
        p_counts = even_split(pipe.shape[0], lb)
        f_got, p_got = [], []
        fp = pp = 0
        for t in range(lb):
            fa, pa = f_counts[t], p_counts[t]
            if fa > n1 or pa > pos(beta - n1):
                raise AllocationError("per-slot listening load exceeds the link")
            x = np.zeros((mb, trials), dtype=np.uint8)
            f_lv, p_lv = list(range(fa)), list(range(n1, n1 + pa))
            x[f_lv] = fresh[fp:fp + fa]
            x[p_lv] = pipe[pp:pp + pa]
            fp, pp = fp + fa, pp + pa
            ys = apply_channel(tm_b, x, np.zeros_like(x))
            tracer.emit(b, t, "B", 1, "tx", x)
            for node in sorted(ys):
                tracer.emit(b, t, "B", node, "rx", ys[node])
            f_got.append(ys[3][[l + mb - n1 for l in f_lv]])
            p_got.append(ys[2][[l + mb - beta for l in p_lv]])
        f_all = np.concatenate(f_got, axis=0) if f_got else fresh[:0]
        p_all = np.concatenate(p_got, axis=0) if p_got else pipe[:0]
        tally.add(1, fresh, f_all)
        if la:
            v1_hat = _unpack(p_all, rates[1]["v"], subs, trials)
            zero = msgs[(2, "v")]
            knowledge = {1: (msgs[(1, "v")], zero), 2: (v1_hat, zero)}
            res = _mode_a(params, code, msgs, knowledge, {}, q, subs, trials, b, lb, tracer)
            for node, src in ((3, 1), (4, 2)):
                r = res[node]
                for kind in ("w", "u", "v"):
                    sent = msgs[(src, kind)]
                    if sent.shape[0] == 0:
                        continue
                    tally.add(src, sent, r.messages.get(kind) if r.ok else None)
    total_slots = num_blocks * schedule.slots
    denom = trials * total_slots
    e1, e2 = nominal_rates(params, schedule, alloc)
    return SimResult(
        blocks=num_blocks,
        slots=total_slots,
        trials=trials,
        errors=tally.errors,
        rate1=F(tally.bits[1], denom),
        rate2=F(tally.bits[2], denom),
        expected1=e1,
        expected2=e2,
        deficit_bits=(0, 0),
        code_kind=code.how if code is not None else "none",
        decodable=code.decodable() if code is not None else True,
    )
