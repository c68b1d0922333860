import numpy as np
import pytest

from ehbvm import UnsupportedOrderError, eval_basis, gauss_rule

from oracles import christoffel_weights, legendre_roots_bisection


def test_midpoint():
    r = gauss_rule(1)
    np.testing.assert_array_equal(r.nodes, [0.5])
    np.testing.assert_array_equal(r.weights, [1.0])


def test_two_point():
    r = gauss_rule(2)
    d = np.sqrt(3) / 6
    np.testing.assert_allclose(r.nodes, [0.5 - d, 0.5 + d], atol=1e-16)
    np.testing.assert_allclose(r.weights, [0.5, 0.5], atol=1e-16)


@pytest.mark.parametrize("k", [4, 7, 11])
def test_against_bisection_oracle(k):
    r = gauss_rule(k)
    roots = legendre_roots_bisection(k, eval_basis)
    np.testing.assert_allclose(r.nodes, roots, atol=1e-14)
    np.testing.assert_allclose(r.weights, christoffel_weights(roots, eval_basis), atol=1e-14)


@pytest.mark.parametrize("k", range(1, 17))
def test_rule_invariants(k):
    r = gauss_rule(k)
    assert r.k == len(r.nodes) == len(r.weights) == k
    assert np.all(np.diff(r.nodes) > 0)
    assert 0 < r.nodes[0] and r.nodes[-1] < 1
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 1.0) <= 1e-14
    np.testing.assert_allclose(r.nodes + r.nodes[::-1], 1.0, rtol=0, atol=1e-14)
    np.testing.assert_allclose(r.weights, r.weights[::-1], rtol=0, atol=1e-14)
    d = np.arange(2 * k)
    moments = (r.weights[:, None] * r.nodes[:, None] ** d).sum(axis=0)
    np.testing.assert_allclose(moments, 1.0 / (d + 1), rtol=0, atol=1e-12)


@pytest.mark.parametrize("k", range(1, 16))
def test_nodes_interlace(k):
    a, b = gauss_rule(k).nodes, gauss_rule(k + 1).nodes
    assert np.all(b[:-1] < a) and np.all(a < b[1:])


def test_against_numpy_high_order():
    for k in (32, 64):
        x, w = np.polynomial.legendre.leggauss(k)
        r = gauss_rule(k)
        np.testing.assert_allclose(r.nodes, (x + 1) / 2, atol=1e-15)
        np.testing.assert_allclose(r.weights, w / 2, atol=1e-14)


@pytest.mark.parametrize("k", [0, 65, -1, 2.5])
def test_unsupported(k):
    with pytest.raises(UnsupportedOrderError):
        gauss_rule(k)


def test_rule_is_immutable():
    with pytest.raises(ValueError):
        gauss_rule(3).nodes[0] = 0.0
