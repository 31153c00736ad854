import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hdcoop.capacity.gauss_cog import (
    R0_THRESHOLD,
    GaussCogParams,
    c_bar_r0,
    cog_lower,
    cog_outer,
    cooperation_applies,
    gaussian_cog_bounds,
    ifc_candidate,
    receive_power_ok,
    z_channel_bound,
)

TOL = 1e-6
expo = st.floats(0.0, 30.0)


def point(e, theta=0.0, r0=R0_THRESHOLD):
    return GaussCogParams(*[2.0**x for x in e], theta=theta, r0=r0)


def test_small_backoff_is_not_asserted():
    b = gaussian_cog_bounds(GaussCogParams(1e4, 1e4, 1e2, 1e2, 1e6, r0=5))
    assert not b.lower_asserted and b.lower is None
    assert list(b.margins()) == ["c_bar_lt_ldm_plus_gap"]


@given(st.tuples(expo, expo, expo, expo, expo), st.floats(0.0, 2 * math.pi), st.sampled_from([7.0, 8.0, 10.0]))
def test_sandwich_margins_hold(e, theta, r0):
    b = gaussian_cog_bounds(point(e, theta, r0))
    m = b.margins()
    assert len(m) == 3
    assert min(m.values()) >= -TOL, m


@given(st.floats(1e-6, 1e12))
def test_z_channel_bound_stays_below_one_bit(snr):
    assert 0 < z_channel_bound(snr) < 1


def test_z_channel_bound_limit():
    assert z_channel_bound(1e15) == pytest.approx(1.0, abs=1e-9)


link = st.floats(0.1, 30.0)


@given(st.tuples(link, link, link, link), st.floats(0.01, 10.0), st.floats(0.0, 2 * math.pi))
def test_cooperative_signal_reaches_primary_with_enough_power(e, extra, theta):
    # conferencing link stronger than both links into the primary destination
    p = point(e + (max(e[0], e[3]) + extra,), theta)
    assume(abs(e[0] + e[1] - e[2] - e[3]) >= 2)
    assert cooperation_applies(p)
    assert receive_power_ok(p)


@pytest.mark.parametrize("snr2", [1e2, 1e6, 1e9])
def test_interference_free_secondary_gets_its_link(snr2):
    b = gaussian_cog_bounds(GaussCogParams(1e6, snr2, 1.0, 1.0, 1.0))
    assert abs(b.lower - math.log2(1 + snr2)) <= 2
    assert b.c_bar_r0 >= math.log2(1 + snr2)


def test_cooperation_helps_with_strong_conferencing():
    p = GaussCogParams(2.0**40, 2.0**60, 2.0**10, 2.0**50, 2.0**120)
    low = cog_lower(p)
    assert low.cooperative and low.value > ifc_candidate(p)
    assert 0 < low.delta_star < 1
    assert low.value <= c_bar_r0(p).value


def test_weak_conferencing_disables_cooperation():
    p = GaussCogParams(1e6, 1e6, 1e2, 1e2, 1e3)
    assert not cooperation_applies(p)
    assert cog_lower(p).delta_star == 0


@given(st.tuples(expo, expo, expo, expo, expo))
def test_outer_constants_dominate_displayed_ones(e):
    p = point(e, r0=10.0)
    assert cog_outer(p).value >= c_bar_r0(p).value - 1e-9


def test_parameter_validation():
    with pytest.raises(ValueError):
        GaussCogParams(1.0, 1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        GaussCogParams(1.0, 1.0, 1.0, 1.0, 1.0, r0=-1)
    assert GaussCogParams(8.0, 3.0, 1.0, 0.5, 1024.0).exponents() == (3, 1, 0, 0, 10)
