"""Dense LU with partial pivoting for the tiny conservation systems.

The systems solved per step are nu x nu with nu the number of extra
invariants (usually 1 or 2), so plain loops are cheaper than a LAPACK call.
"""
import numpy as np


def lu_factor(a):
    """Factor ``a`` in place-copy as ``P a = L U``.

    Returns ``(lu, piv)`` with the unit-lower ``L`` and ``U`` packed in ``lu``
    and ``piv[i]`` the row swapped into position ``i``. A zero pivot is left
    in place; callers detect it through :func:`rcond`.
    """
    lu = np.array(a, dtype=float, copy=True)
    n = lu.shape[0]
    if lu.shape != (n, n):
        raise ValueError("matrix must be square")
    piv = np.arange(n)
    for c in range(n):
        p = c + int(np.argmax(np.abs(lu[c:, c])))
        if p != c:
            lu[[c, p]] = lu[[p, c]]
            piv[[c, p]] = piv[[p, c]]
        if lu[c, c] == 0.0:
            continue
        lu[c + 1:, c] /= lu[c, c]
        lu[c + 1:, c + 1:] -= np.outer(lu[c + 1:, c], lu[c, c + 1:])
    return lu, piv


def lu_solve(factors, b):
    lu, piv = factors
    n = lu.shape[0]
    x = np.array(b, dtype=float)[piv]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def rcond(a, factors):
    """Reciprocal 1-norm condition number of ``a`` from its LU factors.

    Exact rather than estimated: the inverse is formed column by column,
    which is affordable at these sizes. Returns 0 for a singular matrix.
    """
    lu, _ = factors
    n = lu.shape[0]
    if n == 0:
        return 1.0
    if not np.all(np.isfinite(lu)) or np.any(np.diag(lu) == 0.0):
        return 0.0
    norm_a = np.abs(a).sum(axis=0).max()
    if norm_a == 0.0:
        return 0.0
    inv = np.column_stack([lu_solve(factors, e) for e in np.eye(n)])
    norm_inv = np.abs(inv).sum(axis=0).max()
    if not np.isfinite(norm_inv) or norm_inv == 0.0:
        return 0.0
    return 1.0 / (norm_a * norm_inv)
