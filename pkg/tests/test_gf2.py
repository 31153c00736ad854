import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hdcoop import gf2


def bit_matrices(max_rows=6, max_cols=6):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
    )


def image_size(a):
    # brute-force oracle: count distinct products over every input vector
    cols = a.shape[1]
    seen = set()
    for bits in itertools.product((0, 1), repeat=cols):
        seen.add(gf2.matmul(a, np.array(bits, dtype=np.uint8)[:, None]).tobytes())
    return len(seen)


@given(bit_matrices())
def test_rank_matches_image_count(a):
    assert 2 ** gf2.rank(a) == image_size(a)


@given(bit_matrices())
def test_rank_invariant_under_transpose(a):
    assert gf2.rank(a) == gf2.rank(a.T)


@given(bit_matrices(), st.data())
def test_solve_recovers_a_preimage(a, data):
    x = data.draw(arrays(np.uint8, a.shape[1], elements=st.integers(0, 1)))
    b = gf2.matmul(a, x[:, None])[:, 0]
    sol = gf2.solve(a, b)
    assert sol is not None
    assert np.array_equal(gf2.matmul(a, sol[:, None])[:, 0], b)


@given(bit_matrices())
def test_nullspace_is_kernel_with_full_dimension(a):
    k = gf2.nullspace(a)
    assert k.shape == (a.shape[1], a.shape[1] - gf2.rank(a))
    if k.size:
        assert not gf2.matmul(a, k).any()
        assert gf2.rank(k) == k.shape[1]


def test_solve_reports_inconsistency():
    a = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    assert gf2.solve(a, np.array([1, 0], dtype=np.uint8)) is None


def test_solve_handles_several_right_hand_sides():
    a = gf2.identity(3)
    b = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    assert np.array_equal(gf2.solve(a, b), b)


def test_shift_matrix_drops_bottom_levels():
    s = gf2.shift_matrix(4, 1)
    x = np.array([1, 0, 1, 1], dtype=np.uint8)
    assert gf2.matmul(s, x[:, None])[:, 0].tolist() == [0, 1, 0, 1]
    assert not gf2.shift_matrix(3, 3).any()


def test_blockdiag_and_hex():
    m = np.array([[1, 1]], dtype=np.uint8)
    assert gf2.blockdiag(m, 2).tolist() == [[1, 1, 0, 0], [0, 0, 1, 1]]
    assert gf2.to_hex(np.array([1, 0, 1, 1, 1])) == "17"
    assert gf2.to_hex(np.array([], dtype=np.uint8)) == "-"


def test_bad_inputs_are_rejected():
    with pytest.raises(ValueError):
        gf2.as_bits([0, 2])
    with pytest.raises(ValueError):
        gf2.matmul(gf2.identity(2), gf2.identity(3))
    with pytest.raises(ValueError):
        gf2.shift_matrix(-1, 0)
