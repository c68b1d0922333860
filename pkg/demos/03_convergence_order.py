"""
Measuring the order of convergence
==================================

All of Gauss(s), HBVM(k,s) and EHBVM(k,s) have order 2s. On the harmonic
oscillator the exact flow is known, so the error is measured directly.
"""
import numpy as np

from ehbvm import MethodConfig, estimate_order, get_problem, integrate, summarize

problem = get_problem("harmonic")
y0 = problem.initial_state
hs = [0.4, 0.2, 0.1, 0.05]

for config in (MethodConfig.gauss(1), MethodConfig.gauss(2), MethodConfig.hbvm(6, 3)):
    slope = estimate_order(problem, config, y0, 20.0, hs)
    print(f"{config.label:<10} slope {slope:.2f}")

# the same by hand, with the error table
config = MethodConfig.gauss(2)
errors = []
for h in hs:
    traj = integrate(problem, y0, h, int(round(20 / h)), config)
    errors.append(summarize(traj, lambda t: problem.reference_solution(t, y0)).e_sol)
    print(f"h={h:<5} e_sol={errors[-1]:.3e}")
print("ratios", np.array(errors[:-1]) / np.array(errors[1:]))
