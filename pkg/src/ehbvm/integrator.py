"""Gauss, HBVM(k, s) and Enhanced HBVM(k, s) one-step methods.

All three share one code path. The numerical solution on ``[0, h]`` is the
degree-s polynomial

    u(ch) = y0 + h * sum_j (int_0^c P_j) * eta_j * gamma_tilde_j

where ``gamma_tilde_j = sum_l b_l P_j(c_l) J grad H(u(c_l h))`` are discrete
Legendre coefficients of the vector field over the k Gauss points. HBVM uses
``eta == 1``; Gauss is HBVM with ``k == s``. The enhanced method keeps
``eta_j = 1`` except for the top ``nu`` coefficients, where
``eta_j = 1 - beta_j`` and ``beta`` solves, at every sweep, the nu x nu system

    sum_{j >= s-nu} beta_j phi_j^T gamma_tilde_j = sum_j phi_j^T gamma_tilde_j

with ``phi_j = sum_l b_l P_j(c_l) grad L(u(c_l h))``. That makes the
quadrature of ``d/dt L(u)`` vanish, so polynomial invariants of low enough
degree are conserved exactly. ``beta_j = h^(2(s-1-j)) alpha_j``; solving for
``beta`` directly avoids the O(h^(2s-2)) matrix entries of the ``alpha`` form.
"""
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .exceptions import AlphaOverflowWarning, ConfigurationError
from .legendre import build_tables
from .quadrature import gauss_rule
from .systems import apply_J
from .trajectory import Trajectory

METHODS = ("gauss", "hbvm", "ehbvm")
ALPHA_OVERFLOW = 1e12
_EPS = np.finfo(float).eps
_ROUNDOFF_FACTOR = 1024.0
_STALL_SWEEPS = 3


@dataclass(frozen=True)
class MethodConfig:
    method: str
    k: int
    s: int
    fp_tolerance: float = 1e-14
    max_iterations: int = 100
    singular_gamma_threshold: float = 1e-12

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (isinstance(self.k, (int, np.integer)) and isinstance(self.s, (int, np.integer))):
            raise ConfigurationError("k and s must be integers")
        if not self.k >= self.s >= 1:
            raise ConfigurationError(f"need k >= s >= 1, got k={self.k}, s={self.s}")
        if self.method == "gauss" and self.k != self.s:
            raise ConfigurationError("the Gauss method requires k == s")
        if not self.fp_tolerance > 0 or self.max_iterations < 1:
            raise ConfigurationError("fp_tolerance must be positive and max_iterations >= 1")

    @classmethod
    def gauss(cls, s, **kw):
        return cls("gauss", s, s, **kw)

    @classmethod
    def hbvm(cls, k, s, **kw):
        return cls("hbvm", k, s, **kw)

    @classmethod
    def ehbvm(cls, k, s, **kw):
        return cls("ehbvm", k, s, **kw)

    @property
    def label(self):
        if self.method == "gauss":
            return f"Gauss({self.s})"
        return f"{self.method.upper()}({self.k},{self.s})"

    def active_invariants(self, problem):
        """Number of invariants the conservation solve acts on (0 unless ehbvm)."""
        return problem.invariant_count if self.method == "ehbvm" else 0

    def check_problem(self, problem):
        nu = self.active_invariants(problem)
        if nu and not self.s > nu:
            raise ConfigurationError(
                f"{self.label} needs s > nu; problem {problem.name!r} has nu={nu}")

    def conservation_warnings(self, problem):
        """Reasons exact conservation of H (and L, for ehbvm) is not guaranteed."""
        if self.method == "gauss":
            return []
        mu = 2 * self.k // self.s
        degrees = problem.polynomial_degrees
        if degrees is None:
            return [f"polynomial degrees of {problem.name!r} not declared; "
                    f"conservation is only O(h^{2 * self.k + 1}) per step"]
        out = []
        if degrees[0] > mu:
            out.append(f"H has degree {degrees[0]} > {mu}; energy conserved only to O(h^{2 * self.k + 1})")
        if self.active_invariants(problem) and degrees[1] > mu:
            out.append(f"invariants have degree {degrees[1]} > {mu}; conserved only to O(h^{2 * self.k + 1})")
        return out


@dataclass
class StageState:
    gamma: np.ndarray        # (s, 2m), eta_j * gamma_tilde_j
    gamma_tilde: np.ndarray  # (s, 2m)
    beta: np.ndarray         # (nu,)
    eta: np.ndarray          # (s,)
    stages: np.ndarray       # (k, 2m), u(c_l h)
    phi: np.ndarray          # (s, 2m, nu)


@dataclass
class StepResult:
    y1: np.ndarray
    iterations: int
    converged: bool
    gamma_fallback: bool
    alpha: np.ndarray
    residual: float
    tolerance: float  # threshold the residual was tested against
    state: StageState


@lru_cache(maxsize=None)
def _scheme(k, s):
    rule = gauss_rule(k)
    tables = build_tables(s, rule)
    return rule, tables


def build_tableau(config, eta, rule, tables):
    """Butcher matrix ``I_s diag(eta) P_s^T Omega`` and weights of the method."""
    eta = np.asarray(eta, dtype=float)
    k, s = config.k, config.s
    if rule.k != k or tables.values.shape != (k, s) or eta.shape != (s,):
        raise ValueError("rule, tables and eta do not match the configuration")
    if eta[0] != 1.0:
        raise ValueError("eta[0] must be 1")
    a = tables.integrals @ (eta[:, None] * tables.values.T) * rule.weights
    return a, rule.weights.copy()


def recover_alpha(beta, h, s):
    """``alpha_j = beta_j / h^(2(s-1-j))`` for ``j = s-nu .. s-1``.

    Emits :class:`AlphaOverflowWarning` when an entry exceeds 1e12 in size,
    which points at a nearly singular conservation matrix.
    """
    beta = np.asarray(beta, dtype=float)
    nu = len(beta)
    if nu == 0:
        return beta
    powers = 2 * (nu - 1 - np.arange(nu))  # 2(s-1-j) with j = s-nu+i
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        alpha = beta / float(h) ** powers
    if np.any(~np.isfinite(alpha) | (np.abs(alpha) > ALPHA_OVERFLOW)):
        warnings.warn(f"recovered alpha {alpha} exceeds {ALPHA_OVERFLOW:g}", AlphaOverflowWarning,
                      stacklevel=2)
    return alpha


def _conservation_system(phi_all, gamma_all, s, nu):
    """Matrix, right-hand side and entry scales of the beta system.

    Column ``i`` of the matrix is ``phi_j^T gamma_tilde_j`` with ``j = s-nu+i``.
    The right-hand side ``sum_{j<s} phi_j^T gamma_tilde_j`` is O(h^(2s)) and
    summing it directly cancels O(1) terms. Over the k Gauss points the
    discrete Legendre transform is orthogonal, so the full sum over j < k
    equals ``sum_l b_l grad L(u_l)^T J grad H(u_l)``, which is zero for a true
    invariant. The tail ``-sum_{j>=s}`` is used instead and keeps full
    relative precision.
    """
    phi_top = phi_all[s - nu:]
    gamma_top = gamma_all[s - nu:]
    proj = np.einsum("jan,ja->jn", phi_top, gamma_top)
    scale = np.linalg.norm(phi_top[:nu], axis=1) * np.linalg.norm(gamma_top[:nu], axis=1)[:, None]
    return proj[:nu].T, -proj[nu:].sum(axis=0), scale.T


def _solve_conservation(mat, rhs, scale, threshold):
    """Solve for beta, or return None when the matrix is numerically singular.

    Conditioning is judged on the matrix with each entry divided by
    ``|phi_j[:, n]| |gamma_tilde_j|``, so it measures how close the columns
    are to degenerate independently of their O(h^(2s-2)) size.
    """
    if np.any(scale == 0.0) or not np.all(np.isfinite(mat)):
        return None
    normalized = mat / scale
    if mat.shape == (1, 1):
        if abs(normalized[0, 0]) < threshold:
            return None
        return rhs / mat[0, 0]
    if linalg.rcond(normalized, linalg.lu_factor(normalized)) < threshold:
        return None
    return linalg.lu_solve(linalg.lu_factor(mat), rhs)


def _iterate(problem, y0, h, config, rule, tables, nu):
    m, s = problem.m, config.s
    weighted = rule.weights[:, None] * tables.values  # (k, s)
    integrals = tables.integrals
    if nu:
        full = _scheme(config.k, config.k)[1]
        weighted_full = rule.weights[:, None] * full.values  # all k modes

    gamma = np.zeros((s, 2 * m))
    gamma[0] = apply_J(m, problem.energy_gradient(y0))
    gamma_tilde = gamma.copy()
    eta = np.ones(s)
    beta = np.zeros(nu)
    phi = np.zeros((s, 2 * m, nu))
    base_tol = config.fp_tolerance * (1.0 + np.abs(y0).max())
    tol = base_tol
    converged = singular = False
    residual = best = np.inf
    best_it = 0
    h_integrals = h * integrals

    for it in range(1, config.max_iterations + 1):
        stages = y0 + h_integrals @ gamma
        f = apply_J(m, problem.energy_gradient(stages))
        if nu:
            gamma_all = weighted_full.T @ f
            gamma_tilde = gamma_all[:s]
            phi_all = np.tensordot(weighted_full, problem.invariant_jacobian(stages), axes=(0, 0))
            phi = phi_all[:s]
            mat, rhs, scale = _conservation_system(phi_all, gamma_all, s, nu)
            beta = _solve_conservation(mat, rhs, scale, config.singular_gamma_threshold)
            if beta is None:
                singular = True
                break
            eta[s - nu:] = 1.0 - beta
        else:
            gamma_tilde = weighted.T @ f
        new_gamma = eta[:, None] * gamma_tilde
        residual = float(np.abs(new_gamma - gamma).max())
        gamma = new_gamma
        if residual <= base_tol:
            converged = True
            break
        if residual < best:
            best, best_it = residual, it
        if it - best_it < _STALL_SWEEPS:
            continue
        # at the rounding level of the coefficients updates only jitter; stop
        # once they have not improved for a few sweeps
        floor = _ROUNDOFF_FACTOR * _EPS * float(np.abs(gamma).max())
        if best <= floor:
            tol = max(floor, residual)
            converged = residual <= floor
            if converged:
                break

    state = StageState(gamma, gamma_tilde, beta, eta, stages, phi)
    return state, it, converged, singular, residual, tol


def step(problem, y0, h, config, rule=None, tables=None):
    """Advance ``y0`` by one step of size ``h``.

    The stage equations are solved by fixed-point iteration on the scaled
    coefficients ``gamma_j``, starting from ``gamma_0 = J grad H(y0)`` and
    ``gamma_j = 0`` otherwise; in ehbvm mode the conservation system for
    ``beta`` is re-solved inside every sweep. Iteration stops once the largest
    coefficient update falls below ``fp_tolerance * (1 + |y0|_inf)``, or below
    the rounding level of the coefficients when that is larger.

    If the conservation matrix becomes numerically singular, or the enhanced
    iteration fails to converge, the step is redone as a plain HBVM step and
    ``gamma_fallback`` is set; energy is still conserved. Negative ``h``
    steps backwards in time.
    """
    y0 = np.asarray(y0, dtype=float)
    m = problem.m
    if y0.shape != (2 * m,):
        raise ValueError(f"y0 must have shape ({2 * m},), got {y0.shape}")
    if not (np.isfinite(h) and h != 0):
        raise ValueError("h must be finite and non-zero")
    config.check_problem(problem)
    if rule is None or tables is None:
        rule, tables = _scheme(config.k, config.s)
    elif rule.k != config.k or tables.values.shape != (config.k, config.s):
        raise ValueError("rule/tables do not match the configuration")

    nu = config.active_invariants(problem)
    state, its, converged, singular, residual, tol = _iterate(problem, y0, h, config, rule, tables, nu)
    fallback = bool(nu) and (singular or not converged)
    if fallback:
        state, more, converged, _, residual, tol = _iterate(problem, y0, h, config, rule, tables, 0)
        its += more
        state.beta = np.zeros(nu)
        state.phi = np.zeros((config.s, 2 * m, nu))

    y1 = y0 + h * state.gamma[0]
    return StepResult(y1, its, converged, fallback, recover_alpha(state.beta, h, config.s),
                      residual, tol, state)


def integrate(problem, y0, h, n_steps, config):
    """Take ``n_steps`` fixed steps of size ``h`` from ``y0``.

    Non-converged steps are recorded and the integration carries on; errors
    raised by the problem callbacks abort it.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    config.check_problem(problem)
    rule, tables = _scheme(config.k, config.s)
    y = np.asarray(y0, dtype=float)
    states = np.empty((n_steps + 1, y.size))
    states[0] = y
    converged = np.empty(n_steps, dtype=bool)
    fallback = np.empty(n_steps, dtype=bool)
    iterations = np.empty(n_steps, dtype=int)
    alpha_max = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AlphaOverflowWarning)
        for n in range(n_steps):
            res = step(problem, y, h, config, rule, tables)
            y = res.y1
            states[n + 1] = y
            converged[n] = res.converged
            fallback[n] = res.gamma_fallback
            iterations[n] = res.iterations
            if res.alpha.size:
                alpha_max = max(alpha_max, float(np.max(np.abs(res.alpha))))
    overflow = sum(issubclass(w.category, AlphaOverflowWarning) for w in caught)

    meta = {
        "problem": problem.name,
        "method": config.method,
        "label": config.label,
        "k": config.k,
        "s": config.s,
        "h": float(h),
        "n_steps": n_steps,
        "iterations_total": int(iterations.sum()),
        "iterations_max": int(iterations.max()),
        "nonconverged": int(np.count_nonzero(~converged)),
        "fallbacks": int(np.count_nonzero(fallback)),
        "alpha_overflows": overflow,
        "alpha_max": alpha_max,
        "warnings": config.conservation_warnings(problem),
    }
    return Trajectory(
        times=np.arange(n_steps + 1) * float(h),
        states=states,
        energy_series=np.asarray(problem.energy(states), dtype=float),
        invariant_series=problem.eval_invariants(states),
        converged=converged,
        fallback=fallback,
        iterations=iterations,
        meta=meta,
    )
