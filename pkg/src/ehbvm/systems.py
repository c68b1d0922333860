"""Hamiltonian problems ``y' = J grad H(y)`` with optional extra invariants.

States are laid out as ``y = (q_1..q_m, p_1..p_m)``. All callbacks are
vectorised over leading axes: ``energy_gradient`` maps ``(..., 2m)`` to
``(..., 2m)``, ``invariants`` maps to ``(..., nu)`` and ``invariant_jacobian``
to ``(..., 2m, nu)`` whose columns are the gradients of the invariants.
Callbacks must be pure; the integrator may call them from several threads.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import DomainError, ProblemValidationError, SingularityError


def apply_J(m, v):
    """Apply the canonical symplectic matrix ``[[0, I], [-I, 0]]`` to ``v``."""
    v = np.asarray(v)
    if v.shape[-1] != 2 * m:
        raise ValueError(f"expected trailing dimension {2 * m}, got {v.shape[-1]}")
    return np.concatenate((v[..., m:], -v[..., :m]), axis=-1)


def _default_sampler(m):
    def sample(rng, n):
        return rng.standard_normal((n, 2 * m))
    return sample


@dataclass(frozen=True)
class HamiltonianProblem:
    name: str
    m: int
    energy: Callable
    energy_gradient: Callable
    invariant_count: int = 0
    invariants: Optional[Callable] = None
    invariant_jacobian: Optional[Callable] = None
    # (degree of H, max degree of the invariants), declared by the author
    polynomial_degrees: Optional[tuple] = None
    # reference_solution(t, y0) -> states at the times t, shape t.shape + (2m,)
    reference_solution: Optional[Callable] = None
    initial_state: Optional[np.ndarray] = None
    sample_states: Optional[Callable] = None

    def __post_init__(self):
        if self.invariant_count < 0:
            raise ValueError("invariant_count must be non-negative")
        if self.invariant_count and (self.invariants is None or self.invariant_jacobian is None):
            raise ValueError("invariants and invariant_jacobian are required when invariant_count > 0")

    @property
    def dimension(self):
        return 2 * self.m

    def vector_field(self, y):
        return apply_J(self.m, self.energy_gradient(y))

    def eval_invariants(self, y):
        y = np.asarray(y, dtype=float)
        if self.invariant_count == 0:
            return np.zeros(y.shape[:-1] + (0,))
        return np.asarray(self.invariants(y))

    def eval_invariant_jacobian(self, y):
        y = np.asarray(y, dtype=float)
        if self.invariant_count == 0:
            return np.zeros(y.shape + (0,))
        return np.asarray(self.invariant_jacobian(y))

    def samples(self, n, seed=0):
        rng = np.random.default_rng(seed)
        sampler = self.sample_states or _default_sampler(self.m)
        return np.asarray(sampler(rng, n), dtype=float)


def validate_problem(problem, n_samples=100, seed=0, fd_tol=1e-6, structure_tol=1e-10):
    """Check gradients against central differences and that each invariant
    Poisson-commutes with H (``grad L^T J grad H = 0``) at sampled states.

    Raises :class:`ProblemValidationError` describing every failed check.
    """
    ys = problem.samples(n_samples, seed)
    dim = problem.dimension
    failures = []
    grad = np.asarray(problem.energy_gradient(ys))
    jac = problem.eval_invariant_jacobian(ys)
    fd_grad = np.empty_like(grad)
    fd_jac = np.empty_like(jac)
    for i in range(dim):
        step = 1e-6 * (1.0 + np.max(np.abs(ys), axis=-1))
        e = np.zeros(dim)
        e[i] = 1.0
        yp = ys + step[:, None] * e
        ym = ys - step[:, None] * e
        fd_grad[:, i] = (problem.energy(yp) - problem.energy(ym)) / (2 * step)
        if problem.invariant_count:
            fd_jac[:, i, :] = (problem.eval_invariants(yp) - problem.eval_invariants(ym)) / (2 * step[:, None])

    err = np.max(np.abs(fd_grad - grad) / np.maximum(1.0, np.abs(grad)))
    if err > fd_tol:
        failures.append(f"energy_gradient disagrees with finite differences ({err:.2e})")
    if problem.invariant_count:
        err = np.max(np.abs(fd_jac - jac) / np.maximum(1.0, np.abs(jac)))
        if err > fd_tol:
            failures.append(f"invariant_jacobian disagrees with finite differences ({err:.2e})")
        comm = np.einsum("nav,na->nv", jac, problem.vector_field(ys))
        scale = 1.0 + np.linalg.norm(grad, axis=-1) * np.linalg.norm(jac, axis=-2).max(axis=-1)
        err = np.max(np.abs(comm) / scale[:, None])
        if err > structure_tol:
            failures.append(f"grad L^T J grad H is not zero ({err:.2e})")
    if failures:
        raise ProblemValidationError(f"{problem.name}: " + "; ".join(failures))


def _angular_momentum(y):
    return (y[..., 0] * y[..., 3] - y[..., 1] * y[..., 2])[..., None]


def _angular_momentum_jacobian(y):
    return np.stack((y[..., 3], -y[..., 2], -y[..., 1], y[..., 0]), axis=-1)[..., None]


def quartic_oscillator():
    """``H = p.p/2 + (q.q)^2`` in the plane, with angular momentum as invariant."""

    def energy(y):
        q, p = y[..., :2], y[..., 2:]
        qq = (q * q).sum(axis=-1)
        return 0.5 * (p * p).sum(axis=-1) + qq * qq

    def gradient(y):
        q = y[..., :2]
        qq = (q * q).sum(axis=-1, keepdims=True)
        return np.concatenate((4.0 * qq * q, y[..., 2:]), axis=-1)

    return HamiltonianProblem(
        name="quartic", m=2, energy=energy, energy_gradient=gradient,
        invariant_count=1, invariants=_angular_momentum,
        invariant_jacobian=_angular_momentum_jacobian,
        polynomial_degrees=(4, 2),
        initial_state=np.array([1.0, 1.0, 0.1, 0.0]),
    )


def harmonic_oscillator(omega=1.0):
    """``H = (p^2 + omega^2 q^2) / 2`` with its exact rotation flow."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    w2 = omega * omega

    def energy(y):
        return 0.5 * (y[..., 1] ** 2 + w2 * y[..., 0] ** 2)

    def gradient(y):
        return np.stack((w2 * y[..., 0], y[..., 1]), axis=-1)

    def exact(t, y0):
        t = np.asarray(t, dtype=float)
        c, s = np.cos(omega * t), np.sin(omega * t)
        q0, p0 = y0
        return np.stack((q0 * c + p0 / omega * s, p0 * c - q0 * omega * s), axis=-1)

    return HamiltonianProblem(
        name="harmonic", m=1, energy=energy, energy_gradient=gradient,
        polynomial_degrees=(2, 0), reference_solution=exact,
        initial_state=np.array([1.0, 0.0]),
    )


_KEPLER_MIN_RADIUS = 1e-12


def kepler_problem(eccentricity=0.6):
    """Planar two-body problem ``H = p.p/2 - 1/|q|`` started at pericentre."""
    e = eccentricity
    if not 0.0 <= e < 1.0:
        raise DomainError("eccentricity must lie in [0, 1)")

    def radius(y):
        r = np.hypot(y[..., 0], y[..., 1])
        if np.any(r < _KEPLER_MIN_RADIUS):
            raise SingularityError("Kepler problem evaluated at the origin")
        return r

    def energy(y):
        return 0.5 * np.sum(y[..., 2:] ** 2, axis=-1) - 1.0 / radius(y)

    def gradient(y):
        r3 = radius(y)[..., None] ** 3
        return np.concatenate((y[..., :2] / r3, y[..., 2:]), axis=-1)

    def sample(rng, n):
        r = rng.uniform(0.5, 2.0, n)
        th = rng.uniform(0.0, 2 * np.pi, n)
        p = rng.standard_normal((n, 2))
        return np.column_stack((r * np.cos(th), r * np.sin(th), p))

    return HamiltonianProblem(
        name="kepler", m=2, energy=energy, energy_gradient=gradient,
        invariant_count=1, invariants=_angular_momentum,
        invariant_jacobian=_angular_momentum_jacobian,
        initial_state=np.array([1.0 - e, 0.0, 0.0, np.sqrt((1.0 + e) / (1.0 - e))]),
        sample_states=sample,
    )


PROBLEMS = {
    "quartic": quartic_oscillator,
    "harmonic": harmonic_oscillator,
    "kepler": kepler_problem,
}


def register_problem(name, factory, validate=True):
    """Add a problem factory to the registry used by the command line."""
    if validate:
        validate_problem(factory())
    PROBLEMS[name] = factory


def get_problem(name, **kwargs):
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(PROBLEMS)}") from None
    return factory(**kwargs)
