"""Independent reference computations used by the tests.

Nothing here goes through the Legendre tables or the coefficient iteration
of the package, so agreement is a genuine cross-check.
"""
import numpy as np


def collocation_tableau(c):
    """Butcher matrix and weights of the collocation method at nodes ``c``,
    from integrals of the Lagrange basis (monomial form)."""
    c = np.asarray(c, dtype=float)
    s = len(c)
    powers = np.arange(s)
    vinv = np.linalg.inv(c[:, None] ** powers)  # column j: coefficients of l_j
    integ = c[:, None] ** (powers + 1) / (powers + 1)
    a = integ @ vinv
    b = (1.0 / (powers + 1)) @ vinv
    return a, b


def gauss_irk_step(f, y0, h, s, max_iter=200):
    """One step of the s-stage Gauss method in stage-derivative form,
    ``K_i = f(y0 + h sum_j a_ij K_j)``, solved by fixed-point iteration to
    roundoff."""
    x, _ = np.polynomial.legendre.leggauss(s)
    a, b = collocation_tableau((x + 1) / 2)
    y0 = np.asarray(y0, dtype=float)
    k = np.tile(f(y0), (s, 1))
    best = np.inf
    stall = 0
    for _ in range(max_iter):
        new = f(y0 + h * (a @ k))
        diff = np.max(np.abs(new - k))
        k = new
        if diff == 0.0:
            break
        if diff < best:
            best, stall = diff, 0
        else:
            stall += 1
            if stall >= 5:
                break
    return y0 + h * (b @ k)


def legendre_roots_bisection(k, eval_basis):
    """Zeros of the degree-k shifted Legendre polynomial on (0, 1) by sign
    changes on a fine grid refined by bisection."""
    # irregular spacing keeps grid points off the symmetric roots (e.g. 1/2)
    grid = np.linspace(0.0, 1.0, 200 * k + 1) ** 1.01
    vals = eval_basis(k, grid)[:, k]
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            fm = eval_basis(k, mid)[k]
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return np.array(roots)


def christoffel_weights(nodes, eval_basis):
    """Gauss weights as ``1 / sum_{j<k} P_j(c)^2`` for an orthonormal basis."""
    k = len(nodes)
    return 1.0 / np.sum(eval_basis(k - 1, nodes) ** 2, axis=-1)


def composite_gauss(fun, n_panels=200, order=10):
    """Integral of ``fun`` over [0, 1] with a composite Gauss rule from numpy."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = (mid[:, None] + half[:, None] * x).ravel()
    wts = (half[:, None] * w).ravel()
    return np.tensordot(wts, fun(pts), axes=(0, 0))
