"""
Energy and angular momentum on the quartic oscillator
=====================================================

H = |p|^2/2 + |q|^4 in the plane also conserves L = q1 p2 - q2 p1. Gauss
methods keep L (it is quadratic), HBVM keeps H, and the enhanced method
keeps both.
"""
from ehbvm import MethodConfig, get_problem, integrate, summarize

problem = get_problem("quartic")
y0 = problem.initial_state
print("H(y0) =", problem.energy(y0), " L(y0) =", problem.eval_invariants(y0)[0])

for config in (MethodConfig.gauss(2), MethodConfig.hbvm(4, 2), MethodConfig.ehbvm(4, 2)):
    traj = integrate(problem, y0, 0.1, 1000, config)
    s = summarize(traj)
    print(f"{config.label:<11} e_H={s.e_H:.2e}  e_L={s.e_L_max:.2e}  "
          f"mean iterations {traj.iterations.mean():.1f}  fallbacks {traj.fallback_count}")

# HBVM(2,2) cannot integrate a quartic H exactly; the config says so
print(MethodConfig.hbvm(2, 2).conservation_warnings(problem))
