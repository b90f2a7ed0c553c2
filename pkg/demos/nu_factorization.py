"""
Finding g(z) and pi(z) for a Nikiforov-Uvarov reduction
========================================================

Plant a radicand that is a perfect square, then let find_g recover g and both
branches of pi.  Each branch gives a reduced equation sigma y'' + tau y' + h y = 0.
"""

import random
from fractions import Fraction

from qes.enu import NUInput, assemble, find_g, pi_candidates
from qes.poly import Poly

z = Poly([0, 1])

# harmonic oscillator in the form psi'' + (E - z^2) psi = 0
osc = NUInput(Poly([]), Poly([1]), Poly([Fraction(7), 0, -1]), 2)
for g, pi in find_g(osc):
    f = assemble(osc, g, pi)
    print(f"oscillator: g={g}  pi={pi}  tau={f.tau}  h={f.h}")

# a k = 3 problem built so that g = z + 2 makes the radicand (z^2 - 1)^2
sigma = z**3 - z
half = sigma.derivative().scale(Fraction(1, 2))
sigma_tilde = half * half + (z + 2) * sigma - (z * z - 1) * (z * z - 1)
inp = NUInput(Poly([]), sigma, sigma_tilde, 3)
for g, pi in find_g(inp):
    f = assemble(inp, g, pi)
    assert sigma * f.h == f.sigma_bar
    print(f"k=3: g={g}  pi={pi}  h={f.h}")

# random g almost never works
rng = random.Random(0)
g = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)])
print("random g", g, "->", pi_candidates(inp, g))
