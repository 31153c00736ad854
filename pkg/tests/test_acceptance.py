"""Release acceptance checks, one test per criterion.

Each test is named ``test_criterion_<k>``; the terminal summary (see
conftest.py) prints one PASS/FAIL line per criterion.  Running this file
directly does the same without pytest's per-test output.
"""

import itertools
import math
import time
from dataclasses import replace
from fractions import Fraction as F

import numpy as np

from hdcoop.analysis import CogGrid, GapConstants, SymGrid, gap_arithmetic_maxima, gdof_cog, gdof_sum, verify_gaps
from hdcoop.capacity.delta import maxmin_linfrac
from hdcoop.capacity.ldm import cog_bounds, cog_v_values, ldm_cog_capacity, ldm_sum_capacity
from hdcoop.codec import (
    AllocationError,
    MessageAllocation,
    SourceRates,
    ambiguity_witness,
    check_allocation,
    encode,
    find_code,
    optimal_allocation,
    run_halfduplex_sim,
    sym_geometry,
)
from hdcoop.ldm import INFINITY, LdmCogParams, LdmSymParams
from hdcoop.rate_region import (
    LinIneq,
    closed_form_cog_virtual,
    closed_form_sum_virtual,
    fm_max_weighted_rate,
    max_weighted_rate,
    tie_symmetric,
    virtual_constraints_cog,
    virtual_constraints_sym,
)

KINDS = ("w", "u", "vp", "v")
HALVES = [F(k, 2) for k in range(13)]


def _elapsed(t0, limit, label):
    dt = time.perf_counter() - t0
    print(f"{label}: {dt:.1f} s (budget {limit} s)")
    assert dt < limit


# 1 ---------------------------------------------------------------------------


def test_criterion_1_ldm_codec_exact():
    t0 = time.perf_counter()
    bad = []
    for tup in itertools.product(range(7), repeat=3):
        p = LdmSymParams(*tup)
        cap = ldm_sum_capacity(p)
        sch, alloc, nominal = optimal_allocation(p)
        assert sch.delta == cap.delta_star or cap.delta_any
        res = run_halfduplex_sim(p, sch, alloc, 2, trials=100, seed=sum(tup))
        if res.errors or res.steady_sum != cap.value or nominal != cap.value:
            bad.append((tup, cap.value, res.steady_sum, res.errors))
    assert not bad, bad[:5]
    _elapsed(t0, 120, "criterion 1")


# 2 ---------------------------------------------------------------------------


def _cog_poly(p, bp):
    primary = {"R_W1": 1, "R_U1": 1, "R_V1": 1}
    return virtual_constraints_cog(p, bp).with_ineqs(
        [LinIneq.make(primary, p.n1), LinIneq.make({k: -c for k, c in primary.items()}, -p.n1)]
    )


def test_criterion_2_polytope_matches_closed_form():
    t0 = time.perf_counter()
    bad = []
    ones = None
    pairs = [(nd, ni) for nd, ni in itertools.product(range(7), repeat=2) if nd != ni]
    for nd, ni in pairs:
        for ss, sd in itertools.product(HALVES, HALVES):
            poly = virtual_constraints_sym(LdmSymParams(nd, ni, 0), ss, sd)
            ones = ones or {v: 1 for v in poly.variables}
            want = closed_form_sum_virtual(nd, ni, ss, sd)
            if max_weighted_rate(poly, ones) != want:
                bad.append(("lp", nd, ni, ss, sd))
            if ss.denominator == sd.denominator == 1:
                # projection oracle on the swap-symmetric slice; the optimum is symmetric
                tied = tie_symmetric(poly)
                if 2 * fm_max_weighted_rate(tied, {v: 1 for v in tied.variables}) != want:
                    bad.append(("fm", nd, ni, ss, sd))
    for n1, n2, a1, a2 in itertools.product(range(6), repeat=4):
        p = LdmCogParams(n1, n2, a1, a2)
        v1, v2, v3, v4 = cog_v_values(n1, n2, a1, a2)
        for bp in HALVES:
            want = min(v1, v2 + bp, v3, v4 + bp)
            got = max_weighted_rate(_cog_poly(p, bp), {"R_W2": 1, "R_U2": 1})
            if got != want or closed_form_cog_virtual(p, bp) != want:
                bad.append(("cog", n1, n2, a1, a2, bp))
    assert not bad, bad[:5]
    _elapsed(t0, 300, "criterion 2")


# 3, 4 ------------------------------------------------------------------------


def test_criterion_3_symmetric_gap_sandwich():
    t0 = time.perf_counter()
    rep = verify_gaps(SymGrid())
    assert len(rep.records) == 9 * 9 * 9 * 4
    assert rep.violations == []
    names = ("achievable_le_outer", "c_bar_minus_gap_le_achievable", "outer_le_c_bar_plus_gap",
             "c_bar_le_ldm_plus_gap", "achievable_ge_ldm_minus_gap")
    worst = min(r[k] for r in rep.records for k in names)
    assert worst >= -1e-6
    _elapsed(t0, 180, "criterion 3")


def test_criterion_4_cognitive_gap_sandwich():
    t0 = time.perf_counter()
    rep = verify_gaps(CogGrid())
    assert {r["r0"] for r in rep.records} == {7.0, 10.0}
    assert all(r["lower_asserted"] for r in rep.records)
    assert rep.violations == []
    _elapsed(t0, 180, "criterion 4")


# 5 ---------------------------------------------------------------------------


def test_criterion_5_interpretation_identity():
    t0 = time.perf_counter()
    checked = 0
    for n1, n2, a1, a2, beta in itertools.product(range(7), repeat=5):
        if not (beta > max(a2, n1) and n1 + n2 != a1 + a2):
            continue
        p = LdmCogParams(n1, n2, a1, a2, beta)
        direct = maxmin_linfrac(cog_bounds(p)).value
        v = cog_v_values(n1, n2, a1, a2)
        c_ifc, c_z = F(min(v)), F(min(v[0], v[2]))
        delta0 = (c_z - c_ifc) / (beta - n1)
        assert direct == max(c_ifc, c_z / (1 + delta0)), p
        assert ldm_cog_capacity(p).value == direct
        checked += 1
    assert checked > 1000
    _elapsed(t0, 60, "criterion 5")


# 6 ---------------------------------------------------------------------------


def test_criterion_6_gdof():
    t0 = time.perf_counter()
    alphas = [F(k, 100) for k in range(301)]
    for a in alphas:
        flag = False if a == 1 else None
        base = gdof_sum(a, 0, flag)
        for b in (F(1, 4), F(1, 2), F(9, 10), F(1)):
            assert gdof_sum(a, b, flag) == base, (a, b)
    assert gdof_sum(1, 0, aligned=True) == 1
    gain = max(gdof_sum(a, F(16, 5), False if a == 1 else None) - gdof_sum(a, 0, False if a == 1 else None) for a in alphas)
    assert gain >= F(1, 20)
    fr = [F(k, 10) for k in range(11)]
    for n2, a1 in itertools.product(fr, fr):
        if n2 <= a1 <= 1:
            for a2 in (F(0), F(3, 10), F(1), F(2)):
                for b in (F(0), F(2), F(5), INFINITY):
                    assert gdof_cog(n2, a1, a2, b) == 0
    _elapsed(t0, 60, "criterion 6")


# 7 ---------------------------------------------------------------------------


def test_criterion_7_gap_arithmetic():
    t0 = time.perf_counter()
    bound = 1 / (math.e * math.log(2))
    share, spread = gap_arithmetic_maxima(1e-6, 1e6)
    assert share <= bound + 1e-9
    assert spread <= bound + 1e-9
    _elapsed(t0, 1, "criterion 7")


# 8 ---------------------------------------------------------------------------


def _shows_ambiguity(code, dest):
    """Two distinct own-message tuples that give ``dest`` the same output."""
    wit = ambiguity_witness(code, dest)
    if wit is None:
        return False
    own = 1 if dest == 3 else 2
    zero = {(s, k): np.zeros((code.gens[(s, k)].shape[1], 1), dtype=np.uint8) for s in (1, 2) for k in KINDS}
    alt = dict(zero)
    for kind, bits in wit.own_delta.items():
        alt[(own, kind)] = bits[:, None]
    alt[(3 - own, "w")] = wit.other_public_delta[:, None]
    g = code.geometry
    same = np.array_equal(g.received(dest, *encode(code, zero)), g.received(dest, *encode(code, alt)))
    return same and any(b.any() for b in wit.own_delta.values())


def _leaks(code):
    return not code.leakage_free()


def test_criterion_8_negative_controls():
    t0 = time.perf_counter()
    tally = {"ambiguity": 0, "leak": 0, "pipe": 0}
    for nd, ni, nc in itertools.product(range(7), repeat=3):
        if nd == ni:
            continue
        p = LdmSymParams(nd, ni, nc)
        sch, alloc, _ = optimal_allocation(p)
        if sch.l_a == 0:
            continue
        q = alloc.mode_a_denominator()
        base = {k: int(v * q) for k, v in alloc.source1.as_dict().items()}
        g = sym_geometry(p).extend(q)
        for kind in KINDS:
            r = dict(base)
            r[kind] += 1
            code = find_code(g, {1: r, 2: r}, tries=100)
            if not code.decodable():
                if any(_shows_ambiguity(code, d) for d in (3, 4) if not code.decodable_at(d)):
                    tally["ambiguity"] += 1
                    continue
                assert _leaks(code), (nd, ni, nc, kind)
                tally["leak"] += 1
                continue
            # still decodable: the extra bit must not fit through its pipe
            bumped = SourceRates(**{k: F(r[k], q) for k in KINDS})
            bad = replace(alloc, source1=bumped, source2=bumped)
            try:
                check_allocation(p, sch, bad)
            except AllocationError:
                tally["pipe"] += 1
                continue
            raise AssertionError(f"one-bit overload accepted at {(nd, ni, nc)} kind {kind}")
    print(f"overload outcomes: {tally}")
    assert tally["ambiguity"] > 0

    sym_grid = SymGrid(snr=(1.0, 1e4, 1e8), inr=(1.0, 1e4, 1e8), cnr=(1.0, 1e4, 1e8), theta=(0.0, math.pi))
    cog_grid = CogGrid(snr1=(1.0, 1e6), snr2=(1.0, 1e6), inr1=(1.0, 1e6), inr2=(1.0, 1e6), cnr=(1.0, 1e6), r0=(7.0,))
    # cognitive margins also carry a 2·r0 allowance, so their corruption cancels it
    corrupt = {"sum_lower": 1.0, "sum_upper": 0.0, "sum_ldm_link": 0.0, "sum_ldm_achievable": -1.0,
               "cog_lower": -14.0, "cog_ldm_link": -14.0}
    for name, value in corrupt.items():
        broken = replace(GapConstants(), **{name: value})
        grid = cog_grid if name.startswith("cog") else sym_grid
        assert verify_gaps(grid, gaps=broken, density=64).violations, name
    _elapsed(t0, 120, "criterion 8")


if __name__ == "__main__":
    import sys

    status = 0
    for k in range(1, 9):
        fn = next(v for n, v in globals().items() if n.startswith(f"test_criterion_{k}_"))
        try:
            fn()
            print(f"criterion {k}: PASS")
        except AssertionError as exc:
            status = 1
            print(f"criterion {k}: FAIL {exc}")
    sys.exit(status)
