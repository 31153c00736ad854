from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdcoop import gf2
from hdcoop.ldm import (
    INFINITY,
    LdmCogParams,
    LdmSymParams,
    Mode,
    Schedule,
    apply_channel,
    transfer,
    width,
)

small = st.integers(0, 6)


def top_bits(x, k, m):
    # oracle: receiver sees the top k levels of x, pushed to the bottom of an m-vector
    y = np.zeros(m, dtype=np.uint8)
    if k:
        y[m - k:] = x[:k]
    return y


@given(small, small, small, st.data())
def test_mode_a_outputs_are_shifted_sums(nd, ni, nc, data):
    p = LdmSymParams(nd, ni, nc)
    t = transfer(p, Mode.A)
    m = t.width
    bits = st.lists(st.integers(0, 1), min_size=m, max_size=m)
    x1 = np.array(data.draw(bits), dtype=np.uint8)
    x2 = np.array(data.draw(bits), dtype=np.uint8)
    out = apply_channel(t, x1, x2)
    assert out[3].tolist() == (top_bits(x1, nd, m) ^ top_bits(x2, ni, m)).tolist()
    assert out[4].tolist() == (top_bits(x1, ni, m) ^ top_bits(x2, nd, m)).tolist()


def test_listening_modes_silence_the_listener():
    p = LdmSymParams(2, 1, 3)
    tb = transfer(p, Mode.B)
    x1 = np.array([1, 0, 1], dtype=np.uint8)
    out = apply_channel(tb, x1, np.zeros(3, dtype=np.uint8))
    assert not out[1].any()
    assert out[2].tolist() == x1.tolist()
    tc = transfer(p, Mode.C)
    assert not apply_channel(tc, np.ones(3, dtype=np.uint8), x1)[2].any()


def test_cognitive_widths_and_modes():
    p = LdmCogParams(2, 3, 1, 4, 6)
    assert width(p, Mode.A) == 4
    assert width(p, Mode.B) == 6
    assert sorted(transfer(p, Mode.B).factors) == [2, 3, 4]
    with pytest.raises(ValueError):
        width(p, Mode.C)


def test_schedule_from_delta():
    s = Schedule.for_delta(Fraction(3, 2))
    assert (s.l_a, s.l_b, s.l_c, s.slots) == (3, 2, 2, 7)
    assert s.delta == Fraction(3, 2)
    assert Schedule.for_delta(INFINITY).l_b == 0
    c = Schedule.for_delta(Fraction(1, 3), scale=2, cognitive=True)
    assert (c.l_a, c.l_b, c.l_c) == (6, 2, 0)
    assert c.delta == Fraction(1, 3)


def test_schedule_rejects_bad_layouts():
    with pytest.raises(ValueError):
        Schedule(1, 1, 2)
    with pytest.raises(ValueError):
        Schedule(0, 0, 0)
    with pytest.raises(ValueError):
        Schedule(1, 1, 1, cognitive=True)
    with pytest.raises(ValueError):
        LdmSymParams(-1, 0, 0)


def test_infinity_orders_above_numbers():
    assert INFINITY > Fraction(10**9)
    assert not INFINITY < 5
    assert INFINITY == float("inf")
    assert str(INFINITY) == "inf"


def test_apply_channel_checks_width():
    t = transfer(LdmSymParams(2, 1, 0), Mode.A)
    with pytest.raises(ValueError):
        apply_channel(t, gf2.zeros(3, 1)[:, 0], gf2.zeros(2, 1)[:, 0])
