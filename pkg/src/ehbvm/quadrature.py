"""Gauss-Legendre rules on [0, 1]."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import UnsupportedOrderError

MAX_NODES = 64
_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


@dataclass(frozen=True)
class GaussRule:
    """k-point Gauss-Legendre rule on [0, 1]: increasing nodes, positive weights."""

    k: int
    nodes: np.ndarray
    weights: np.ndarray


def _legendre_and_derivative(k, t):
    # classical L_k(t) and L_k'(t) on [-1, 1]
    p0 = np.ones_like(t)
    p1 = t.copy()
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1) * t * p1 - j * p0) / (j + 1)
    if k == 0:
        return p0, np.zeros_like(t)
    return p1, k * (t * p1 - p0) / (t * t - 1.0)


def _bisect_roots(k):
    grid = np.cos(np.linspace(np.pi, 0.0, 40 * k + 1))
    vals, _ = _legendre_and_derivative(k, grid)
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    lo, hi = grid[idx].copy(), grid[idx + 1].copy()
    flo, _ = _legendre_and_derivative(k, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm, _ = _legendre_and_derivative(k, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _negative_roots(k):
    # roots of L_k in [-1, 0], increasing
    n = (k + 1) // 2
    i = np.arange(1, n + 1)
    t = -np.cos(np.pi * (i - 0.25) / (k + 0.5))
    for _ in range(_NEWTON_MAXITER):
        p, dp = _legendre_and_derivative(k, t)
        dt = p / dp
        t = t - dt
        if np.max(np.abs(dt)) <= _NEWTON_TOL:
            break
    else:
        t = _bisect_roots(k)[:n]
    if len(np.unique(np.round(t, 12))) != n or np.any(np.diff(t) <= 0):
        t = _bisect_roots(k)[:n]
    if k % 2:
        t[-1] = 0.0
    return t


def gauss_rule(k):
    """Return the k-point Gauss-Legendre rule shifted to [0, 1].

    Nodes are the zeros of the degree-k shifted Legendre polynomial, found by
    Newton iteration from Chebyshev-type initial guesses. The rule is built
    exactly symmetric and its weights are renormalised to sum to one.
    """
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_NODES:
        raise UnsupportedOrderError(f"k must be an integer in [1, {MAX_NODES}], got {k!r}")
    return _gauss_rule(int(k))


@lru_cache(maxsize=None)
def _gauss_rule(k):
    neg = _negative_roots(k)
    half = k // 2
    t = np.concatenate([neg, -neg[:half][::-1]])
    _, dp = _legendre_and_derivative(k, t)
    w = 1.0 / ((1.0 - t * t) * dp * dp)  # = (2 / ((1-t^2) L_k'^2)) / 2
    w = 0.5 * (w + w[::-1])
    nodes = 0.5 * (1.0 + t)
    nodes[k - 1 - np.arange(half)] = 1.0 - nodes[:half]
    weights = w / w.sum()
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return GaussRule(k, nodes, weights)
