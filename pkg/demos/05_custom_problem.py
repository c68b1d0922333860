"""
Adding a problem of your own
============================

Two coupled oscillators, H = (p1^2 + p2^2 + q1^2 + q2^2)/2 + (q1 - q2)^4 / 4,
with the invariant M = (p1 + p2)^2 + (q1 + q2)^2 of the centre-of-mass mode.
"""
import numpy as np

from ehbvm import HamiltonianProblem, MethodConfig, get_problem, integrate, register_problem, summarize


def energy(y):
    q, p = y[..., :2], y[..., 2:]
    d = q[..., 0] - q[..., 1]
    return 0.5 * (p * p + q * q).sum(axis=-1) + 0.25 * d ** 4


def gradient(y):
    q = y[..., :2]
    d3 = (q[..., 0] - q[..., 1]) ** 3
    return np.concatenate((q + np.stack((d3, -d3), axis=-1), y[..., 2:]), axis=-1)


def com(y):
    return ((y[..., 2] + y[..., 3]) ** 2 + (y[..., 0] + y[..., 1]) ** 2)[..., None]


def com_jacobian(y):
    a, b = y[..., 0] + y[..., 1], y[..., 2] + y[..., 3]
    return (2 * np.stack((a, a, b, b), axis=-1))[..., None]


def coupled():
    return HamiltonianProblem(
        name="coupled", m=2, energy=energy, energy_gradient=gradient,
        invariant_count=1, invariants=com, invariant_jacobian=com_jacobian,
        polynomial_degrees=(4, 2), initial_state=np.array([1.0, -0.3, 0.0, 0.5]))


# registration checks gradients and the commutation with H at random states
register_problem("coupled", coupled)
problem = get_problem("coupled")

for config in (MethodConfig.hbvm(4, 2), MethodConfig.ehbvm(4, 2)):
    s = summarize(integrate(problem, problem.initial_state, 0.05, 400, config))
    print(f"{config.label:<10} e_H={s.e_H:.1e} e_M={s.e_L_max:.1e}")
