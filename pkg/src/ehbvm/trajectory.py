from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Trajectory:
    """States of a fixed-step integration together with per-step bookkeeping.

    ``converged``, ``fallback`` and ``iterations`` have one entry per step,
    the state-like series one entry per grid point (``n_steps + 1``).
    """

    times: np.ndarray
    states: np.ndarray
    energy_series: np.ndarray
    invariant_series: np.ndarray
    converged: np.ndarray
    fallback: np.ndarray
    iterations: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in ("states", "energy_series", "invariant_series"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has {len(getattr(self, name))} rows, expected {n}")
        for name in ("converged", "fallback", "iterations"):
            if len(getattr(self, name)) != n - 1:
                raise ValueError(f"{name} must have one entry per step")
        for a in (self.times, self.states, self.energy_series, self.invariant_series,
                  self.converged, self.fallback, self.iterations):
            a.flags.writeable = False

    @property
    def n_steps(self):
        return len(self.times) - 1

    @property
    def fallback_count(self):
        return int(np.count_nonzero(self.fallback))

    @property
    def nonconverged_count(self):
        return int(np.count_nonzero(~self.converged))
