from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdcoop.exactlp import Infeasible, Unbounded, _sympy_max, lp_max

small = st.integers(-4, 4)


@given(st.lists(st.tuples(small, small, st.integers(1, 9)), min_size=1, max_size=4), st.tuples(small, small))
def test_certified_float_solution_matches_exact_simplex(rows, obj):
    a = [[r[0], r[1]] for r in rows] + [[1, 0], [0, 1]]
    b = [r[2] for r in rows] + [7, 7]
    c = [abs(obj[0]), abs(obj[1])]
    val, x = lp_max(c, a, b)
    ref, _ = _sympy_max([F(v) for v in c], [[F(v) for v in r] for r in a], [F(v) for v in b], [], [])
    assert val == ref
    assert all(sum(F(ai) * xi for ai, xi in zip(r, x)) <= bi for r, bi in zip(a, b))


def test_rational_that_defeats_float_rounding():
    # the optimum 1/3000017 has a denominator beyond the rounding limit, so the exact path decides
    val, x = lp_max([1], [[3000017]], [1])
    assert val == F(1, 3000017)
    assert x == [F(1, 3000017)]


def test_equality_constraints():
    val, x = lp_max([1, 2], a_eq=[[1, 1]], b_eq=[3])
    assert val == 6 and x == [0, 3]


def test_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        lp_max([1], [[-1]], [-2], [[1]], [1])
    with pytest.raises(Unbounded):
        lp_max([1, 1], [[1, -1]], [1])
    assert lp_max([], [], []) == (0, [])
