"""Drift and error measurement, a high-accuracy reference oracle, and
empirical convergence orders.

``e_sol`` is the maximum over the time grid of the Euclidean norm of the
state error. ``e_H`` and ``e_L`` are maximum absolute deviations from the
initial values.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import GridMismatchError, ReferenceConsistencyError
from .integrator import MethodConfig, _scheme, integrate, step
from .trajectory import Trajectory

__all__ = [
    "Trajectory", "RunSummary", "summarize", "reference_solution", "estimate_order",
    "fit_order", "error_against_reference", "max_step_drift",
]

REFERENCE_CONFIG = MethodConfig.hbvm(12, 6)
REFERENCE_STEP = 1e-3
REFERENCE_TOL = 1e-10


@dataclass(frozen=True)
class RunSummary:
    e_H: float
    e_L: np.ndarray
    e_sol: Optional[float] = None
    order_estimate: Optional[float] = None

    @property
    def e_L_max(self):
        return float(self.e_L.max()) if self.e_L.size else 0.0


def _reference_states(traj, reference):
    if isinstance(reference, Trajectory):
        if len(reference.times) != len(traj.times) or not np.allclose(
                reference.times, traj.times, rtol=0, atol=1e-12 * max(1.0, abs(traj.times[-1]))):
            raise GridMismatchError("reference trajectory is on a different time grid")
        return reference.states
    if callable(reference):
        return np.asarray(reference(traj.times), dtype=float)
    ref = np.asarray(reference, dtype=float)
    if ref.shape != traj.states.shape:
        raise GridMismatchError(f"reference states have shape {ref.shape}, expected {traj.states.shape}")
    return ref


def summarize(traj, reference=None):
    """Reduce a trajectory to ``e_H``, ``e_L`` and, given a reference, ``e_sol``.

    ``reference`` may be a :class:`Trajectory` on the same grid, an array of
    states on the grid, or a callable mapping the grid times to states.
    """
    e_H = float(np.max(np.abs(traj.energy_series - traj.energy_series[0])))
    inv = traj.invariant_series
    e_L = np.max(np.abs(inv - inv[0]), axis=0) if inv.shape[1] else np.zeros(0)
    e_sol = None
    if reference is not None:
        ref = _reference_states(traj, reference)
        e_sol = float(np.max(np.linalg.norm(traj.states - ref, axis=-1)))
    return RunSummary(e_H, e_L, e_sol)


def _integrate_through(problem, y0, checkpoints, h_max, config):
    # exact landing on every checkpoint: each gap is split into equal substeps
    rule, tables = _scheme(config.k, config.s)
    out = np.empty((len(checkpoints), len(y0)))
    y, t = np.asarray(y0, dtype=float), 0.0
    for i, target in enumerate(checkpoints):
        gap = target - t
        if gap > 0:
            n = max(1, math.ceil(gap / h_max - 1e-9))
            sub = gap / n
            for _ in range(n):
                y = step(problem, y, sub, config, rule, tables).y1
        out[i] = y
        t = target
    return out


def reference_solution(problem, y0, t_end, grid, h_ref=REFERENCE_STEP, check=True):
    """States of the exact flow (or a high-accuracy substitute) at ``grid``.

    Problems with a closed-form solution use it. Otherwise HBVM(12,6) is run
    with steps no longer than ``h_ref`` and the run is repeated with
    ``h_ref / 2``; if the two disagree at ``t_end`` by more than 1e-10 a
    :class:`ReferenceConsistencyError` is raised.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    grid = np.asarray(grid, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if grid.size == 0:
        return np.zeros((0, y0.size))
    if np.any(np.diff(grid) < 0) or grid[0] < 0 or grid[-1] > t_end * (1 + 1e-12):
        raise ValueError("grid must be sorted and lie in [0, t_end]")
    if problem.reference_solution is not None:
        return np.asarray(problem.reference_solution(grid, y0), dtype=float)

    checkpoints = np.append(grid, t_end) if grid[-1] < t_end else grid
    coarse = _integrate_through(problem, y0, checkpoints, h_ref, REFERENCE_CONFIG)
    if check:
        fine = _integrate_through(problem, y0, checkpoints[-1:], h_ref / 2, REFERENCE_CONFIG)
        diff = float(np.linalg.norm(coarse[-1] - fine[-1]))
        if not diff < REFERENCE_TOL:
            raise ReferenceConsistencyError(
                f"reference runs with h={h_ref:g} and h={h_ref / 2:g} differ by {diff:.2e} at t={t_end:g}")
    return coarse[:grid.size]


def fit_order(hs, errors):
    """Least-squares slope of ``log(error)`` against ``log(h)``."""
    hs = np.asarray(hs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if hs.size < 2 or hs.size != errors.size:
        raise ValueError("need at least two (h, error) pairs")
    if np.any(errors <= 0):
        raise ValueError("errors must be positive to fit a slope")
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def _steps_for(t_end, h):
    n = round(t_end / h)
    if n < 1 or abs(n * h - t_end) > 1e-9 * t_end:
        raise ValueError(f"h={h!r} does not divide t_end={t_end!r}")
    return n


def error_against_reference(problem, config, y0, t_end, h, reference):
    """``e_sol`` of a run with step ``h``; ``reference`` maps times to states."""
    traj = integrate(problem, y0, h, _steps_for(t_end, h), config)
    return summarize(traj, reference).e_sol


def estimate_order(problem, config, y0, t_end, h_list, reference=None):
    """Empirical order of ``config`` on ``problem`` over the steps ``h_list``.

    ``reference`` is a callable ``times -> states``; by default the oracle of
    :func:`reference_solution` is evaluated on the union of all grids.
    """
    h_list = [float(h) for h in h_list]
    if len(h_list) < 3:
        raise ValueError("at least three step sizes are needed")
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise ValueError("h_list must be strictly decreasing")
    for h in h_list:
        _steps_for(t_end, h)
    if reference is None:
        reference = _grid_reference(problem, y0, t_end, h_list)
    errors = [error_against_reference(problem, config, y0, t_end, h, reference) for h in h_list]
    return fit_order(h_list, errors)


def _grid_reference(problem, y0, t_end, h_list):
    times = np.sort(np.concatenate([np.arange(_steps_for(t_end, h) + 1) * h for h in h_list]))
    times = times[np.concatenate(([True], np.diff(times) > 1e-9 * t_end))]
    states = reference_solution(problem, y0, t_end, times)

    def lookup(t):
        idx = np.searchsorted(times, t)
        idx = np.clip(idx, 0, len(times) - 1)
        left = np.clip(idx - 1, 0, len(times) - 1)
        idx = np.where(np.abs(times[left] - t) < np.abs(times[idx] - t), left, idx)
        if np.any(np.abs(times[idx] - t) > 1e-9 * max(1.0, t_end)):
            raise GridMismatchError("time not on the reference grid")
        return states[idx]

    return lookup


def max_step_drift(traj, which="energy"):
    """Largest change of H (``which="energy"``) or of any invariant over one step."""
    series = traj.energy_series[:, None] if which == "energy" else traj.invariant_series
    return float(np.max(np.abs(np.diff(series, axis=0))))
