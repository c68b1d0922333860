"""
Gauss-Legendre rules and the shifted Legendre basis
===================================================

The building blocks of every method in the package: a k-point Gauss rule on
[0, 1] and the orthonormal polynomials P_j evaluated at its nodes.
"""
import numpy as np

from ehbvm import build_tables, eval_antiderivatives, eval_basis, gauss_rule

rule = gauss_rule(4)
print("nodes  ", rule.nodes)
print("weights", rule.weights)

# a k-point rule integrates polynomials up to degree 2k-1 exactly
for d in range(9):
    approx = rule.weights @ rule.nodes ** d
    print(f"degree {d}: error {abs(approx - 1 / (d + 1)):.1e}")

# the basis is orthonormal, also in the discrete inner product of the rule
vals = eval_basis(3, rule.nodes)
print(np.round(vals.T @ (rule.weights[:, None] * vals), 14))

# antiderivatives vanish at 1 for j >= 1
print(eval_antiderivatives(4, 1.0))

# the tables an HBVM(4,2) step uses: P_j(c_i) and int_0^{c_i} P_j
tables = build_tables(2, rule)
print(tables.values)
print(tables.integrals)
