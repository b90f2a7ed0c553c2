"""Polynomial solutions of second-order ODEs with at most k+1 singular points.

Two routes to the same data: the extended Nikiforov-Uvarov reduction
(:mod:`qes.enu`) and the functional Bethe ansatz (:mod:`qes.fba`), with
:mod:`qes.consistency` checking their agreement in exact arithmetic.
"""

from .poly import Poly, TowerMismatchError, exact_divide, poly_sqrt
from .symfunc import Partition2, RepeatedRootError, RootSet

__all__ = [
    "Partition2",
    "Poly",
    "RepeatedRootError",
    "RootSet",
    "TowerMismatchError",
    "exact_divide",
    "poly_sqrt",
]
