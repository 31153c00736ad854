import io
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hdcoop import gf2
from hdcoop.capacity.ldm import ldm_cog_capacity, ldm_sum_capacity
from hdcoop.codec import (
    AllocationError,
    MessageAllocation,
    SingularChannel,
    SourceRates,
    ambiguity_witness,
    check_allocation,
    cog_geometry,
    decode,
    encode,
    find_code,
    optimal_allocation,
    optimal_cog_allocation,
    realizable_k,
    realizable_k_formula,
    run_halfduplex_sim,
    sym_geometry,
    zero_forcing_precode_sym,
)
from hdcoop.ldm import LdmCogParams, LdmSymParams, Schedule

levels = st.integers(0, 5)


@given(levels, levels, st.data())
def test_zero_forcing_delivers_each_target_only_where_intended(nd, ni, data):
    assume(nd != ni)
    p = LdmSymParams(nd, ni, 0)
    n = max(nd, ni)
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    v1, v2 = data.draw(bits), data.draw(bits)
    x1, x2 = zero_forcing_precode_sym(p, v1, v2)
    g = sym_geometry(p)
    assert g.received(3, x1[:, None], x2[:, None])[:, 0].tolist() == v1
    assert g.received(4, x1[:, None], x2[:, None])[:, 0].tolist() == v2


def test_zero_forcing_needs_distinct_gains():
    with pytest.raises(SingularChannel):
        zero_forcing_precode_sym(LdmSymParams(2, 2, 0), [0, 1], [1, 0])


@given(levels, levels, levels, levels)
def test_realizable_dimension_matches_formula_off_the_aligned_set(n1, n2, a1, a2):
    assume(n1 + n2 != a1 + a2)
    assert realizable_k(LdmCogParams(n1, n2, a1, a2)) == realizable_k_formula(n1, n2, a1, a2)


def test_cognitive_precoder_cancels_at_the_secondary_destination():
    p = LdmCogParams(2, 3, 5, 2, 6)
    g = cog_geometry(p)
    k = realizable_k(p)
    t3 = np.zeros(g.width, dtype=np.uint8)
    t3[g.width - k:] = 1
    x1, x2 = g.precode(t3, np.zeros_like(t3))
    assert g.received(3, x1[:, None], x2[:, None])[:, 0].tolist() == t3.tolist()
    assert not g.received(4, x1[:, None], x2[:, None]).any()


def _random_messages(code, trials, rng):
    return {
        (s, k): rng.integers(0, 2, size=(code.gens[(s, k)].shape[1], trials), dtype=np.uint8)
        for s in (1, 2)
        for k in ("w", "u", "vp", "v")
    }


@pytest.mark.parametrize("args", [(4, 1, 6), (2, 4, 8), (5, 3, 0)])
def test_optimal_code_round_trip(args):
    p = LdmSymParams(*args)
    _, alloc, _ = optimal_allocation(p)
    q = alloc.mode_a_denominator()
    rates = {s: {k: int(v * q) for k, v in alloc.sources()[s].as_dict().items()} for s in (1, 2)}
    code = find_code(sym_geometry(p).extend(q), rates)
    assert code.decodable()
    rng = np.random.default_rng(3)
    msgs = _random_messages(code, 32, rng)
    x1, x2 = encode(code, msgs)
    g = code.geometry
    for dest, own, oth in ((3, 1, 2), (4, 2, 1)):
        res = decode(code, dest, g.received(dest, x1, x2), pre_shared_other=msgs[(oth, "vp")])
        assert res.ok
        for kind in ("w", "u", "vp", "v"):
            assert np.array_equal(res.messages[kind], msgs[(own, kind)])


def test_overloaded_code_has_a_witness_with_identical_outputs():
    p = LdmSymParams(3, 1, 0)
    rates = {s: {"w": 1, "u": 3, "vp": 0, "v": 0} for s in (1, 2)}
    code = find_code(sym_geometry(p), rates)
    assert not code.decodable()
    dest = 3 if not code.decodable_at(3) else 4
    assert not code.decodable_at(dest)
    wit = ambiguity_witness(code, dest)
    assert wit is not None
    own = 1 if dest == 3 else 2
    oth = 3 - own
    zero = {(s, k): np.zeros((code.gens[(s, k)].shape[1], 1), dtype=np.uint8) for s in (1, 2) for k in ("w", "u", "vp", "v")}
    alt = dict(zero)
    for kind, bits in wit.own_delta.items():
        alt[(own, kind)] = bits[:, None]
    alt[(oth, "w")] = wit.other_public_delta[:, None]
    g = code.geometry
    y0 = g.received(dest, *encode(code, zero))
    y1 = g.received(dest, *encode(code, alt))
    assert np.array_equal(y0, y1)
    assert any(b.any() for b in wit.own_delta.values())


@pytest.mark.parametrize("args", [(2, 4, 8), (4, 1, 6), (3, 1, 0), (2, 2, 5), (1, 3, 6)])
def test_simulation_reaches_capacity(args):
    p = LdmSymParams(*args)
    sch, alloc, nominal = optimal_allocation(p)
    res = run_halfduplex_sim(p, sch, alloc, 3, trials=40, seed=1)
    cap = ldm_sum_capacity(p).value
    assert res.errors == 0
    assert nominal == res.steady_sum == cap
    assert res.sum_rate <= cap


def test_simulation_with_many_blocks_approaches_capacity():
    p = LdmSymParams(2, 4, 8)
    sch, alloc, _ = optimal_allocation(p, F(1, 2))
    res = run_halfduplex_sim(p, sch, alloc, 64, trials=8)
    gap = F(24, 5) - res.sum_rate
    # only the final block's relay bits are missing
    assert 0 <= gap <= F(sum(res.deficit_bits), res.slots)
    assert gap * res.blocks * sch.slots <= 64


def test_cognitive_simulation_keeps_primary_rate():
    p = LdmCogParams(2, 3, 5, 2, 6)
    sch, alloc, val = optimal_cog_allocation(p)
    res = run_halfduplex_sim(p, sch, alloc, 2, trials=20)
    assert res.errors == 0
    assert res.rate1 == p.n1
    assert res.rate2 == val == ldm_cog_capacity(p).value == 2


def test_trace_is_deterministic():
    p = LdmSymParams(2, 4, 8)
    sch, alloc, _ = optimal_allocation(p)
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run_halfduplex_sim(p, sch, alloc, 1, trials=4, seed=9, trace=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
    first = outs[0].splitlines()[0].split()
    assert len(first) == 6 and first[4] in ("tx", "rx")


def test_pipe_overflow_is_rejected():
    p = LdmSymParams(4, 1, 6)
    rates = SourceRates(w=F(1), u=F(3), v=F(1), vp=F(0))
    alloc = MessageAllocation(rates, rates, bp_ss=F(0), r_1b=F(4), r_2c=F(4))
    with pytest.raises(AllocationError):
        check_allocation(p, Schedule(1, 1, 1), alloc)


def test_listening_load_limit():
    p = LdmSymParams(4, 1, 5)
    alloc = MessageAllocation(bp_ss=F(2), r_1b=F(4), r_2c=F(4))
    with pytest.raises(AllocationError):
        check_allocation(p, Schedule(1, 1, 1), alloc)
    check_allocation(p, Schedule(1, 2, 2), alloc)


def test_bit_helpers_stay_consistent():
    assert gf2.rank(sym_geometry(LdmSymParams(3, 1, 0)).precoder) == 6
