import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ehbvm import linalg


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(arrays(float, (n, n), elements=st.floats(-10, 10)),
                        arrays(float, (n,), elements=st.floats(-10, 10)))))
def test_solve_matches_numpy(args):
    a, b = args
    if np.linalg.cond(a) > 1e8:
        return
    x = linalg.lu_solve(linalg.lu_factor(a), b)
    np.testing.assert_allclose(a @ x, b, atol=1e-8 * (1 + np.abs(b).max()))


def test_pivoting_needed():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(linalg.lu_solve(linalg.lu_factor(a), [2.0, 3.0]), [3.0, 2.0])


def test_rcond_exact_for_small_matrices():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.standard_normal((3, 3))
        expected = 1.0 / np.linalg.cond(a, 1)
        assert linalg.rcond(a, linalg.lu_factor(a)) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("a", [np.zeros((2, 2)), np.array([[1.0, 2.0], [2.0, 4.0]])])
def test_rcond_singular(a):
    assert linalg.rcond(a, linalg.lu_factor(a)) < 1e-15


def test_non_square():
    with pytest.raises(ValueError):
        linalg.lu_factor(np.ones((2, 3)))
