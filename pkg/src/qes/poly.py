"""Dense univariate polynomials over exact rationals or binary floats.

A :class:`Poly` lives in one scalar tower for its whole life: ``"exact"``
(coefficients are :class:`fractions.Fraction`) or ``"float"``.  Arithmetic
between towers raises :class:`TowerMismatchError`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

EXACT = "exact"
FLOAT = "float"

#: relative remainder tolerance for divisibility / square tests in float mode
FLOAT_RTOL = 1e-9


class TowerMismatchError(TypeError):
    """Raised when exact and float polynomials are combined."""


def to_scalar(value, mode: str):
    """Coerce ``value`` into the scalar type of ``mode``."""
    if mode == EXACT:
        if isinstance(value, float):
            raise TowerMismatchError(f"float {value!r} in exact tower")
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, Rational):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} to an exact rational")
    if mode == FLOAT:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)
    raise ValueError(f"unknown scalar mode {mode!r}")


def infer_mode(values: Iterable) -> str:
    return FLOAT if any(isinstance(v, float) for v in values) else EXACT


class Poly:
    """Immutable dense polynomial, coefficients in ascending powers.

    >>> Poly([-1, 0, 1]) * Poly([1, 1])
    Poly([-1, -1, 1, 1])
    """

    __slots__ = ("_coeffs", "_mode")

    def __init__(self, coeffs: Iterable = (), mode: str | None = None):
        coeffs = list(coeffs)
        if mode is None:
            mode = infer_mode(coeffs)
        cs = [to_scalar(c, mode) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)
        self._mode = mode

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, mode: str = EXACT) -> Poly:
        return cls((), mode)

    @classmethod
    def constant(cls, c, mode: str | None = None) -> Poly:
        return cls([c], mode)

    @classmethod
    def monomial(cls, c, power: int, mode: str | None = None) -> Poly:
        return cls([0] * power + [c], mode if mode is not None else infer_mode([c]))

    @classmethod
    def from_roots(cls, roots: Sequence, mode: str | None = None) -> Poly:
        """Monic polynomial prod (z - r)."""
        if mode is None:
            mode = infer_mode(roots)
        p = cls([1], mode)
        for r in roots:
            p = p * cls([-to_scalar(r, mode), 1], mode)
        return p

    # -- basic accessors --------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def mode(self) -> str:
        return self._mode

    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def __getitem__(self, power: int):
        if power < 0:
            raise IndexError("negative power")
        if power < len(self._coeffs):
            return self._coeffs[power]
        return Fraction(0) if self._mode == EXACT else 0.0

    def leading(self):
        return self._coeffs[-1] if self._coeffs else self[0]

    def max_abs(self):
        return max((abs(c) for c in self._coeffs), default=0)

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __hash__(self):
        return hash((self._coeffs, self._mode))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._mode == other._mode and self._coeffs == other._coeffs
        if isinstance(other, (int, float, Fraction)):
            return self._coeffs == Poly([other], self._mode)._coeffs
        return NotImplemented

    def __repr__(self):
        body = ", ".join(str(c) for c in self._coeffs)
        if self._mode == FLOAT:
            return f"Poly([{body}], mode='float')"
        return f"Poly([{body}])"

    def __str__(self):
        if not self._coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z**{i}")
        return " + ".join(reversed(terms))

    def to_mode(self, mode: str) -> Poly:
        if mode == self._mode:
            return self
        if mode == FLOAT:
            return Poly([float(c) for c in self._coeffs], FLOAT)
        return Poly([Fraction(c) for c in self._coeffs], EXACT)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other._mode != self._mode:
                raise TowerMismatchError(f"{self._mode} vs {other._mode}")
            return other
        if isinstance(other, (int, Fraction, float)):
            return Poly([other], self._mode)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self), len(other))
        return Poly([self[i] + other[i] for i in range(n)], self._mode)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self._coeffs], self._mode)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Poly.zero(self._mode)
        out = [self[0] * 0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return Poly(out, self._mode)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly([1], self._mode)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> Poly:
        c = to_scalar(c, self._mode)
        return Poly([c * a for a in self._coeffs], self._mode)

    def derivative(self, order: int = 1) -> Poly:
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        cs = list(self._coeffs)
        for _ in range(order):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return Poly(cs, self._mode)

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Horner evaluation; ``z`` may be any scalar supporting ``*`` and ``+``."""
        if self._mode == EXACT and not isinstance(z, float):
            acc = Fraction(0)
        else:
            acc = 0.0
        for c in reversed(self._coeffs):
            acc = acc * z + c
        return acc

    def divmod(self, den: Poly) -> tuple[Poly, Poly]:
        den = self._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self._coeffs)
        dd = den.degree()
        lead = den.leading()
        if len(rem) - 1 < dd:
            return Poly.zero(self._mode), self
        quot = [rem[0] * 0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i] / lead
            quot[i - dd] = q
            if q == 0:
                continue
            for j, b in enumerate(den._coeffs):
                rem[i - dd + j] -= q * b
            rem[i] = rem[i] * 0
        return Poly(quot, self._mode), Poly(rem[:dd], self._mode)


def arith(p: Poly, q, op: str) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scale`` (``q`` a scalar for scale)."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def derivative(p: Poly, order: int = 1) -> Poly:
    return p.derivative(order)


def evaluate(p: Poly, z):
    return p.evaluate(z)


def _negligible(r: Poly, reference: Poly) -> bool:
    if r.mode == EXACT:
        return r.is_zero()
    return r.max_abs() <= FLOAT_RTOL * max(reference.max_abs(), 1e-300)


def exact_divide(num: Poly, den: Poly) -> Poly | None:
    """Quotient ``h`` with ``num == den * h``, or ``None`` if ``den`` does not divide.

    In float mode a remainder whose largest coefficient is below ``1e-9`` of
    ``num``'s largest coefficient is treated as zero.
    """
    q, r = num.divmod(den)
    return q if _negligible(r, num) else None


def _exact_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    p, q = c.numerator, c.denominator
    sp, sq = math.isqrt(p), math.isqrt(q)
    if sp * sp == p and sq * sq == q:
        return Fraction(sp, sq)
    return None


def poly_sqrt(p: Poly) -> Poly | None:
    """Polynomial ``s`` with ``s*s == p`` and positive leading coefficient.

    Returns ``None`` when no such polynomial exists in the tower of ``p``;
    odd degree or a negative leading coefficient fail immediately.
    """
    if p.is_zero():
        return p
    deg = p.degree()
    if deg % 2 or p.leading() < 0:
        return None
    d = deg // 2
    if p.mode == EXACT:
        lead = _exact_sqrt(p.leading())
        if lead is None:
            return None
    else:
        lead = math.sqrt(p.leading())
    s = [lead * 0] * (d + 1)
    s[d] = lead
    # match the coefficient of z^(d+j) in s*s, from the top down
    for j in range(d - 1, -1, -1):
        acc = p[d + j]
        for i in range(j + 1, d):
            acc -= s[i] * s[d + j - i]
        s[j] = acc / (2 * lead)
    root = Poly(s, p.mode)
    return root if _negligible(root * root - p, p) else None
