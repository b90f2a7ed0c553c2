"""Symmetric functions of a root set.

Elementary symmetric polynomials ``e_l``, monomial symmetric polynomials for
partitions with at most two nonzero parts, power sums ``T_m`` and the
pairwise sums ``S_m = sum_{i != j} z_i**m / (z_i - z_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .poly import EXACT, FLOAT, Poly, infer_mode, to_scalar

#: minimal relative gap between float roots
FLOAT_GAP = 1e-10


class RepeatedRootError(ValueError):
    """Raised when a root set has coinciding (or numerically coalesced) roots."""


class ConsistencyError(ArithmeticError):
    """Two independent evaluation routes of the same quantity disagree."""


@dataclass(frozen=True)
class RootSet:
    """Distinct real roots, stored sorted ascending.

    The constructor sorts its input, so ``RootSet([3, 1, 2]).roots == (1, 2, 3)``.
    An empty root set stands for the constant solution ``y_0 = 1``.
    """

    roots: tuple
    mode: str = EXACT

    def __init__(self, roots: Iterable = (), mode: str | None = None):
        roots = list(roots)
        if mode is None:
            mode = infer_mode(roots)
        vals = sorted(to_scalar(r, mode) for r in roots)
        for lo, hi in zip(vals, vals[1:]):
            if hi == lo:
                raise RepeatedRootError(f"repeated root {lo}")
        if mode == FLOAT and len(vals) > 1:
            scale = 1.0 + max(abs(v) for v in vals)
            gap = min(hi - lo for lo, hi in zip(vals, vals[1:]))
            if gap <= FLOAT_GAP * scale:
                raise RepeatedRootError(f"roots closer than {FLOAT_GAP * scale:g}")
        object.__setattr__(self, "roots", tuple(vals))
        object.__setattr__(self, "mode", mode)

    @property
    def n(self) -> int:
        return len(self.roots)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def _zero(self):
        return Fraction(0) if self.mode == EXACT else 0.0

    def _one(self):
        return Fraction(1) if self.mode == EXACT else 1.0

    def polynomial(self) -> Poly:
        """The monic polynomial with these roots."""
        return Poly.from_roots(self.roots, self.mode)


@dataclass(frozen=True)
class Partition2:
    """Partition ``(p, q)`` with ``p >= q >= 0``; ``(0, 0)`` is the empty partition."""

    p: int
    q: int = 0

    def __post_init__(self):
        if not (self.p >= self.q >= 0):
            raise ValueError(f"invalid partition ({self.p}, {self.q})")


def elementary(rs: RootSet, l: int):
    """e_l of the roots; e_0 = 1 and e_l = 0 for l > n."""
    if l < 0:
        raise ValueError("negative index")
    if l > rs.n:
        return rs._zero()
    # coefficients of prod (1 + z_i t)
    e = [rs._one()] + [rs._zero()] * rs.n
    for i, z in enumerate(rs.roots):
        for j in range(i + 1, 0, -1):
            e[j] += z * e[j - 1]
    return e[l]


def monomial(rs: RootSet, lam: Partition2 | tuple):
    """m_lambda for a partition with at most two nonzero parts.

    For ``p == q`` each unordered pair contributes once.  A two-part partition
    on fewer than two roots is an empty sum.
    """
    if not isinstance(lam, Partition2):
        lam = Partition2(*lam)
    p, q = lam.p, lam.q
    zs = rs.roots
    if p == 0:
        return rs._one()
    if q == 0:
        return sum((z**p for z in zs), rs._zero())
    if p == q:
        return sum((a**p * b**p for a, b in combinations(zs, 2)), rs._zero())
    return sum(
        (zs[i] ** p * zs[j] ** q for i in range(len(zs)) for j in range(len(zs)) if i != j),
        rs._zero(),
    )


def power_sum_T(rs: RootSet, m: int):
    """T_m = sum_i z_i**m, so T_0 = n."""
    return sum((z**m for z in rs.roots), rs._zero())


def _double_sum(rs: RootSet, m: int):
    zs = rs.roots
    total = rs._zero()
    magnitude = rs._zero()
    for i, zi in enumerate(zs):
        for j, zj in enumerate(zs):
            if i != j:
                term = zi**m / (zi - zj)
                total += term
                magnitude += abs(term)
    return total, magnitude


def bethe_sum_S_direct(rs: RootSet, m: int):
    return _double_sum(rs, m)[0]


def bethe_sum_S_closed(rs: RootSet, m: int):
    """S_m through monomial symmetric polynomials.

    S_0 = 0, S_1 = n(n-1)/2, and for m >= 2
    S_m = (n-1) m_(m-1) + sum_{p=1}^{(m-1)//2} m_(m-1-p, p).
    """
    n = rs.n
    if m == 0:
        return rs._zero()
    if m == 1:
        return rs._one() * n * (n - 1) / 2
    total = (n - 1) * monomial(rs, Partition2(m - 1))
    for p in range(1, (m - 1) // 2 + 1):
        total += monomial(rs, Partition2(m - 1 - p, p))
    return total


def bethe_sum_S(rs: RootSet, m: int):
    """S_m, cross-checked between the double sum and the closed form.

    Raises :class:`ConsistencyError` if the two routes disagree (exactly in
    exact mode, beyond ``1e-9`` of the summed term magnitudes in float mode).
    """
    closed = bethe_sum_S_closed(rs, m)
    direct, magnitude = _double_sum(rs, m)
    if rs.mode == EXACT:
        ok = closed == direct
    else:
        ok = abs(closed - direct) <= 1e-9 * max(1.0, magnitude)
    if not ok:
        raise ConsistencyError(f"S_{m}: closed form {closed} != double sum {direct}")
    return closed
