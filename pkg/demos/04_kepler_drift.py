"""
Kepler problem: a non-polynomial energy
=======================================

H = |p|^2/2 - 1/|q| is not a polynomial, so no finite HBVM conserves it
exactly. The per-step drift decreases like h^(2k+1) instead, while the
quadratic angular momentum is still kept by the enhanced method.
"""
import math

import numpy as np

from ehbvm import MethodConfig, get_problem, integrate
from ehbvm.diagnostics import max_step_drift

kepler = get_problem("kepler", eccentricity=0.6)
config = MethodConfig.ehbvm(4, 2)
print(config.conservation_warnings(kepler))

hs = [0.2, 0.1, 0.05]
drift = []
for h in hs:
    traj = integrate(kepler, kepler.initial_state, h, math.ceil(2 * math.pi / h), config)
    drift.append(max_step_drift(traj, "energy"))
    print(f"h={h:<5} H drift/step {drift[-1]:.2e}  L drift/step {max_step_drift(traj, 'invariants'):.1e}")

print("slope", np.polyfit(np.log(hs), np.log(drift), 1)[0], "expected", 2 * config.k + 1)
