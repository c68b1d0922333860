"""Orthonormal shifted Legendre polynomials on [0, 1].

The basis is ``P_j(x) = sqrt(2j+1) * L_j(2x - 1)`` where ``L_j`` is the
classical Legendre polynomial, so that ``int_0^1 P_i P_j dx = delta_ij``.

With ``t = 2x - 1`` the classical recurrence
``(j+1) L_{j+1} = (2j+1) t L_j - j L_{j-1}`` becomes, after normalisation,

    P_{j+1} = a_j * t * P_j - c_j * P_{j-1}
    a_j = sqrt((2j+1)(2j+3)) / (j+1)
    c_j = j/(j+1) * sqrt((2j+3)/(2j-1))

and the antiderivatives follow from ``(2j+1) L_j = L'_{j+1} - L'_{j-1}``:

    int_0^x P_j = (P_{j+1}/sqrt(2j+3) - P_{j-1}/sqrt(2j-1)) / (2 sqrt(2j+1)),  j >= 1
    int_0^x P_0 = x
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError

_DOMAIN_TOL = 1e-14


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < -_DOMAIN_TOL) or np.any(x > 1.0 + _DOMAIN_TOL) or np.any(np.isnan(x)):
        raise DomainError("Legendre basis is defined on [0, 1]")
    return np.clip(x, 0.0, 1.0)


def _recurrence(j_max, x):
    # columns P_0..P_{j_max}; x already validated
    out = np.empty(x.shape + (j_max + 1,))
    out[..., 0] = 1.0
    if j_max == 0:
        return out
    t = 2.0 * x - 1.0
    out[..., 1] = np.sqrt(3.0) * t
    for j in range(1, j_max):
        a = np.sqrt((2 * j + 1) * (2 * j + 3)) / (j + 1)
        c = j / (j + 1) * np.sqrt((2 * j + 3) / (2 * j - 1))
        out[..., j + 1] = a * t * out[..., j] - c * out[..., j - 1]
    return out


def eval_basis(j_max, x):
    """Return ``(P_0(x), ..., P_{j_max}(x))``.

    ``x`` may be a scalar or an array; the basis index is the trailing axis.
    """
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    return _recurrence(j_max, _check_domain(x))


def eval_antiderivatives(j_max, x):
    """Return ``(int_0^x P_0, ..., int_0^x P_{j_max})`` in closed form."""
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    x = _check_domain(x)
    p = _recurrence(j_max + 1, x)
    out = np.empty(x.shape + (j_max + 1,))
    out[..., 0] = x
    for j in range(1, j_max + 1):
        out[..., j] = (p[..., j + 1] / np.sqrt(2 * j + 3)
                       - p[..., j - 1] / np.sqrt(2 * j - 1)) / (2.0 * np.sqrt(2 * j + 1))
    return out


@dataclass(frozen=True)
class LegendreTables:
    """Basis values and antiderivatives at the nodes of a quadrature rule.

    ``values[l, j] = P_j(c_l)`` and ``integrals[l, j] = int_0^{c_l} P_j``,
    both of shape ``(k, s)``.
    """

    degree_count: int
    nodes: np.ndarray
    values: np.ndarray
    integrals: np.ndarray


def build_tables(s, rule):
    """Tabulate ``P_0..P_{s-1}`` and their antiderivatives at ``rule.nodes``."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return _build_tables(s, rule.k, rule.nodes.tobytes())


@lru_cache(maxsize=None)
def _build_tables(s, k, node_bytes):
    nodes = np.frombuffer(node_bytes, dtype=float).copy()
    values = eval_basis(s - 1, nodes)
    integrals = eval_antiderivatives(s - 1, nodes)
    for a in (nodes, values, integrals):
        a.flags.writeable = False
    return LegendreTables(s, nodes, values, integrals)
