from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdcoop.capacity.ldm import cog_v_values
from hdcoop.ldm import LdmCogParams, LdmSymParams
from hdcoop.rate_region import (
    COG_VARS,
    SYM_VARS,
    FMBlowup,
    LinIneq,
    Polytope,
    UnboundedRate,
    closed_form_cog_virtual,
    closed_form_sum_virtual,
    enumerate_vertices,
    fm_max_weighted_rate,
    fourier_motzkin,
    implies,
    ldm_mutual_info,
    max_weighted_rate,
    same_polytope,
    sym_aux_spec,
    tie_symmetric,
    virtual_constraints_cog,
    virtual_constraints_sym,
)

halves = st.integers(0, 12).map(lambda k: F(k, 2))
pairs = st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda t: t[0] != t[1])
ALL_ONES = {v: 1 for v in SYM_VARS}


def vertex_max(p, weights):
    # oracle: the maximum of a linear form over a bounded polytope sits at a vertex
    return max(sum(F(weights.get(v, 0)) * pt[v] for v in p.variables) for pt in enumerate_vertices(p))


def test_linineq_text_round_trip():
    p = Polytope(("x", "y"), (LinIneq.make({"x": 2, "y": F(-1, 3)}, 5), LinIneq.make({"y": 1}, F(7, 2))))
    assert Polytope.from_text(p.to_text()) == p


def test_unknown_variable_rejected():
    with pytest.raises(ValueError):
        Polytope(("x",), (LinIneq.make({"z": 1}, 1),))


def test_projection_of_a_triangle():
    p = Polytope(("x", "y"), (LinIneq.make({"x": 1, "y": 1}, 3), LinIneq.make({"x": 1, "y": -1}, 1)))
    q = fourier_motzkin(p, ["y"])
    assert same_polytope(q, Polytope(("x",), (LinIneq.make({"x": 1}, 2),)))


def test_fm_guard_trips():
    p = virtual_constraints_sym(LdmSymParams(6, 4, 0), 3, 1)
    with pytest.raises(FMBlowup):
        fourier_motzkin(p, list(SYM_VARS[:6]), guard=5)


def test_unbounded_and_empty_are_reported():
    free = Polytope(("x", "y"), (LinIneq.make({"x": 1}, 1),))
    with pytest.raises(UnboundedRate):
        fm_max_weighted_rate(free, {"y": 1})
    empty = Polytope(("x",), (LinIneq.make({"x": -1}, -2), LinIneq.make({"x": 1}, 1)))
    with pytest.raises(UnboundedRate):
        fm_max_weighted_rate(empty, {"x": 1})


def test_mutual_information_of_the_own_signal():
    # with everything else known, the private layer of a 6-over-4 channel carries 2 bits
    s = sym_aux_spec(6, 4)
    assert ldm_mutual_info(s, ["X_U1"], ["X_W1", "V1", "X_V1p", "X_W2", "X_V2p"], output="Y3") == 2


@given(pairs, halves, halves)
def test_lp_sum_rate_matches_closed_form(nd_ni, ss, sd):
    nd, ni = nd_ni
    p = virtual_constraints_sym(LdmSymParams(nd, ni, 0), ss, sd)
    assert max_weighted_rate(p, ALL_ONES) == closed_form_sum_virtual(nd, ni, ss, sd)


@given(pairs, st.integers(0, 4))
def test_fm_projection_matches_lp_on_tied_polytope(nd_ni, ss):
    nd, ni = nd_ni
    p = tie_symmetric(virtual_constraints_sym(LdmSymParams(nd, ni, 0), ss, 0))
    w = {v: 1 for v in p.variables}
    assert fm_max_weighted_rate(p, w) == max_weighted_rate(p, w)


coef = st.integers(-3, 3)


@given(st.lists(st.tuples(coef, coef, coef, st.integers(0, 6)), max_size=4), st.tuples(coef, coef, coef))
def test_lp_and_projection_match_vertex_enumeration(rows, obj):
    box = [LinIneq.make({v: 1}, 5) for v in "xyz"]
    extra = [LinIneq.make(dict(zip("xyz", r[:3])), r[3]) for r in rows]
    p = Polytope(tuple("xyz"), tuple(box + extra))
    w = {v: abs(c) for v, c in zip("xyz", obj)}
    best = vertex_max(p, w)
    assert max_weighted_rate(p, w) == best
    assert fm_max_weighted_rate(p, w) == best


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_cognitive_secondary_rate_matches_closed_form(n1, n2, a1, a2, bp):
    params = LdmCogParams(n1, n2, a1, a2)
    p = virtual_constraints_cog(params, bp)
    primary = {"R_W1": 1, "R_U1": 1, "R_V1": 1}
    p = p.with_ineqs([LinIneq.make(primary, n1), LinIneq.make({k: -1 for k in primary}, -n1)])
    got = max_weighted_rate(p, {"R_W2": 1, "R_U2": 1})
    v1, v2, v3, v4 = cog_v_values(n1, n2, a1, a2)
    assert got == closed_form_cog_virtual(params, bp) == min(v1, v2 + bp, v3, v4 + bp)
    assert set(p.variables) == set(COG_VARS)


def test_closed_form_rejects_equal_gains():
    with pytest.raises(ValueError):
        closed_form_sum_virtual(3, 3, 0)


def test_implies():
    p = Polytope(("x",), (LinIneq.make({"x": 1}, 1),))
    assert implies(p, LinIneq.make({"x": 1}, 2))
    assert not implies(p, LinIneq.make({"x": 1}, F(1, 2)))
