"""
Zeros of classical polynomials from the Bethe equations
=======================================================

The Hermite and Legendre equations are reduced equations with k = 2.  Their
polynomial solutions' zeros are equilibrium points of Bethe's system, and the
Newton solver finds them from seeded random starts.
"""

import numpy as np

from qes.fba import BetheProblem, SolverConfig, solve_bethe
from qes.poly import Poly

# Hermite: y'' - 2 z y' + 2n y = 0
X, Y = Poly([1.0]), Poly([0.0, -2.0])
for n in range(1, 7):
    (sol,) = solve_bethe(BetheProblem(X, Y, n, 2))
    print(f"Hermite n={n}: c0={sol.c[0]:.12g}  roots={np.round(sol.roots.roots, 6)}")

# Legendre: (1 - z^2) y'' - 2 z y' + n(n+1) y = 0
X = Poly([1.0, 0.0, -1.0])
sols = solve_bethe(BetheProblem(X, Y, 5, 2), SolverConfig(starts=40, seed=1))
exact = np.sort(np.polynomial.legendre.legroots([0] * 5 + [1]))
for s in sols:
    err = np.max(np.abs(np.array(s.roots.roots) - exact))
    print(f"Legendre n=5: c0={s.c[0]:.12g} residual={s.residual_norm:.1e} error vs legroots={err:.1e}")

# a k = 4 frame: X even, Y odd, so roots come in +- pairs
X, Y = Poly([1.0, 0.0, 0.5]), Poly([0.0, -1.0, 0.0, -2.0])
for s in solve_bethe(BetheProblem(X, Y, 4, 4)):
    print("k=4 n=4 roots", np.round(s.roots.roots, 8), "c =", np.round(s.c, 8))
