"""
Two routes to the same integration constants
============================================

For a reduced equation of order k with a degree-n polynomial solution, the
integration constants follow from a triangular linear system in elementary
symmetric polynomials or from a closed form in monomial ones.  The Bethe
route gives Z directly.  All three agree exactly over the rationals.
"""

import random

from qes.consistency import appendix_suite, cross_check_constants, random_instance
from qes.enu import build_Zn, constants_closed_form, constants_linear_system

rng = random.Random(42)
inst = random_instance(rng, k=5, n=3, bound=9)
print("roots:", [str(r) for r in inst.roots])
print("X =", inst.X)
print("Y =", inst.Y)

lin = constants_linear_system(inst.roots, inst.X, inst.Y, inst.n, inst.k)
closed = constants_closed_form(inst.roots, inst.X, inst.Y, inst.n, inst.k)
print("linear system:", [str(c) for c in lin])
print("closed form:  ", [str(c) for c in closed])
print("Z_n =", build_Zn(inst.X, inst.Y, inst.n, lin), " (instance Z =", inst.Z, ")")

rep = cross_check_constants(inst.roots, inst.X, inst.Y, inst.n, inst.k)
print("ENU vs FBA:", "pass" if rep.passed else "FAIL")

# the explicit low-order constants and the symmetric-function identities
for r in appendix_suite(inst.roots, inst.X, inst.Y, inst.n, inst.k):
    print(f"  {r.name:38s} {'pass' if r.passed else 'FAIL'}")
