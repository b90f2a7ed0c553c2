"""Extended Nikiforov-Uvarov reduction.

The original equation

    psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma**2) psi = 0

with ``deg tau_tilde <= k-1``, ``deg sigma <= k``, ``deg sigma_tilde <= 2k-2`` is
turned, via ``psi = phi * y`` with ``phi'/phi = pi/sigma``, into the reduced
equation ``sigma y'' + tau y' + h y = 0``.  A degree-``n`` polynomial solution
exists when ``h`` takes the form ``h_n`` built from ``sigma``, ``tau`` and
``k - 2`` integration constants; those constants are fixed by the roots of
the solution, either through a lower-triangular linear system in elementary
symmetric polynomials or through a closed form in monomial symmetric
polynomials.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import sympy

from .poly import EXACT, FLOAT, Poly, TowerMismatchError, exact_divide, poly_sqrt
from .symfunc import Partition2, RootSet, elementary, monomial

log = logging.getLogger(__name__)


class DivisibilityError(ArithmeticError):
    """``sigma_bar`` is not divisible by ``sigma`` for the supplied (g, pi)."""


class ContinuumError(ValueError):
    """The perfect-square condition holds on a continuum of ``g``."""


def _check_degree(p: Poly, bound: int, name: str) -> None:
    if p.degree() > bound:
        raise ValueError(f"deg {name} = {p.degree()} exceeds {bound}")


def _same_mode(*polys: Poly) -> str:
    modes = {p.mode for p in polys}
    if len(modes) != 1:
        raise TowerMismatchError(f"mixed scalar towers {sorted(modes)}")
    return modes.pop()


def _ratio(num: int, den: int, mode: str):
    return Fraction(num, den) if mode == EXACT else num / den


@dataclass(frozen=True)
class NUInput:
    tau_tilde: Poly
    sigma: Poly
    sigma_tilde: Poly
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.sigma.is_zero():
            raise ValueError("sigma must not vanish identically")
        _same_mode(self.tau_tilde, self.sigma, self.sigma_tilde)
        _check_degree(self.tau_tilde, self.k - 1, "tau_tilde")
        _check_degree(self.sigma, self.k, "sigma")
        _check_degree(self.sigma_tilde, 2 * self.k - 2, "sigma_tilde")

    @property
    def mode(self) -> str:
        return self.sigma.mode


@dataclass(frozen=True)
class ReducedEq:
    """``X y'' + Y y' + Z y = 0`` with ``deg X <= k``, ``deg Y <= k-1``, ``deg Z <= k-2``."""

    X: Poly
    Y: Poly
    Z: Poly
    k: int

    def __post_init__(self):
        _same_mode(self.X, self.Y, self.Z)
        _check_degree(self.X, self.k, "X")
        _check_degree(self.Y, self.k - 1, "Y")
        _check_degree(self.Z, self.k - 2, "Z")

    def a(self, l: int):
        return self.X[l]

    def b(self, l: int):
        return self.Y[l]

    def c(self, l: int):
        return self.Z[l]


@dataclass(frozen=True)
class NUFactorization:
    g: Poly
    pi: Poly
    tau: Poly
    h: Poly
    sigma_bar: Poly
    phi_logderiv: tuple[Poly, Poly]
    k: int

    def reduced(self) -> ReducedEq:
        return ReducedEq(self.phi_logderiv[1], self.tau, self.h, self.k)


@dataclass(frozen=True)
class IntegrationConstants:
    """``(C_1, ..., C_{k-2})`` for a degree-``n`` solution; empty when ``k == 2``."""

    values: tuple
    n: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.k - 2:
            raise ValueError(f"expected {self.k - 2} constants, got {len(self.values)}")

    def C(self, q: int):
        """C_q, 1-based."""
        if not 1 <= q <= self.k - 2:
            raise IndexError(q)
        return self.values[q - 1]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


# -- factorization ----------------------------------------------------------


def _half_gap(inp: NUInput) -> Poly:
    return (inp.sigma.derivative() - inp.tau_tilde).scale(_ratio(1, 2, inp.mode))


def radicand(inp: NUInput, g: Poly) -> Poly:
    """(sigma' - tau_tilde)**2 / 4 - sigma_tilde + g sigma."""
    d = _half_gap(inp)
    return d * d - inp.sigma_tilde + g * inp.sigma


def pi_candidates(inp: NUInput, g: Poly) -> list[Poly]:
    """Both branches of pi for the given g, or ``[]`` if the radicand is not a square."""
    _check_degree(g, inp.k - 2, "g")
    s = poly_sqrt(radicand(inp, g))
    if s is None:
        return []
    d = _half_gap(inp)
    return [d + s, d - s]


def _to_sympy_rational(c) -> sympy.Rational:
    f = Fraction(c)
    return sympy.Rational(f.numerator, f.denominator)


def _rational_roots(p: sympy.Poly) -> list[Fraction]:
    out = []
    for factor, _ in p.factor_list()[1]:
        if factor.degree() == 1:
            c1, c0 = factor.all_coeffs()
            r = -c0 / c1
            out.append(Fraction(int(r.p), int(r.q)))
    return sorted(out)


def _real_roots(p: sympy.Poly) -> list[float]:
    if p.degree() < 1:
        return []
    return sorted(float(r.evalf(30)) for r in p.sqf_part().real_roots())


def _univariate_gcd(polys: list[sympy.Poly]) -> sympy.Poly | None:
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        return None
    h = polys[0]
    for p in polys[1:]:
        h = h.gcd(p)
    return h


def _eliminate(eqs: list[sympy.Poly], var, keep) -> sympy.Poly | None:
    """Univariate polynomial in ``keep`` vanishing on every common zero of ``eqs``."""
    free = [sympy.Poly(e.as_expr(), keep, domain="QQ") for e in eqs if e.degree(var) == 0]
    involved = [e for e in eqs if e.degree(var) > 0]
    res = [
        sympy.Poly(sympy.resultant(a, b, var), keep, domain="QQ")
        for a, b in combinations(involved, 2)
    ]
    return _univariate_gcd(free + res)


def _solve_system(eqs: list[sympy.Poly], gens: tuple, mode: str) -> list[tuple]:
    """Finitely many real (exact: rational) common zeros of ``eqs`` in one or two unknowns."""
    eqs = [e for e in eqs if not e.is_zero]
    if any(e.is_ground for e in eqs):
        return []
    if not eqs:
        raise ContinuumError("no condition constrains g")
    if len(gens) == 1:
        (v,) = gens
        h = _univariate_gcd([sympy.Poly(e.as_expr(), v, domain="QQ") for e in eqs])
        roots = _rational_roots(h) if mode == EXACT else _real_roots(h)
        return [(r,) for r in roots]
    v0, v1 = gens
    u1 = _eliminate(eqs, v0, v1)
    if u1 is None:
        raise ContinuumError("perfect-square conditions do not isolate g")
    if mode == EXACT:
        out = []
        for r1 in _rational_roots(u1):
            sub = [
                sympy.Poly(e.as_expr().subs(v1, _to_sympy_rational(r1)), v0, domain="QQ")
                for e in eqs
            ]
            out.extend((r0, r1) for (r0,) in _solve_system(sub, (v0,), mode))
        return out
    u0 = _eliminate(eqs, v1, v0)
    if u0 is None:
        raise ContinuumError("perfect-square conditions do not isolate g")
    out = []
    for r0 in _real_roots(u0):
        for r1 in _real_roots(u1):
            if all(_nearly_zero(e, (r0, r1)) for e in eqs):
                out.append((r0, r1))
    return out


def _nearly_zero(e: sympy.Poly, point: tuple[float, float]) -> bool:
    value = 0.0
    scale = 0.0
    for monom, coeff in e.terms():
        term = float(coeff)
        for x, power in zip(point, monom):
            term *= x**power
        value += term
        scale += abs(term)
    return abs(value) <= 1e-8 * max(scale, 1.0)


def _square_conditions(r: list) -> list[list]:
    """Alternative equation sets under which ``sum r[i] z**i`` is a square."""
    if len(r) == 3:
        r0, r1, r2 = r
        return [[r1**2 - 4 * r2 * r0], [r2, r1]]
    r0, r1, r2, r3, r4 = r
    cases = []
    if not r4.is_zero:
        w = 4 * r4 * r2 - r3**2
        f1 = r3 * w - 8 * r4**2 * r1
        f2 = w**2 - 64 * r4**3 * r0
        # r4 != 0 on this branch; strip its powers so f1, f2 share no spurious factor
        for _ in range(4):
            q1, m1 = f1.div(r4)
            q2, m2 = f2.div(r4)
            if not (m1.is_zero and m2.is_zero) or r4.is_ground:
                break
            f1, f2 = q1, q2
        cases.append([f1, f2])
    cases.append([r4, r3, r1**2 - 4 * r2 * r0])
    cases.append([r4, r3, r2, r1])
    return cases


def find_g(inp: NUInput) -> list[tuple[Poly, Poly]]:
    """All ``(g, pi)`` making the radicand a perfect square, for ``k`` in {2, 3}.

    The unknown coefficients of ``g`` enter the radicand linearly; the
    conditions for a quadratic (``k=2``) or quartic (``k=3``) to be a square
    are solved by resultant elimination over the rationals.  In exact mode
    only rational ``g`` are representable and irrational branches are
    dropped; in float mode every real branch is returned.
    """
    k = inp.k
    if k not in (2, 3):
        raise NotImplementedError("automatic search for g is limited to k in {2, 3}")
    gens = sympy.symbols(f"g0:{k - 1}")
    z = sympy.Symbol("z")
    q = radicand(inp, Poly.zero(inp.mode))
    expr = sum(_to_sympy_rational(c) * z**i for i, c in enumerate(q))
    expr += sum(gens[j] * z**j for j in range(k - 1)) * sum(
        _to_sympy_rational(c) * z**i for i, c in enumerate(inp.sigma)
    )
    rz = sympy.Poly(sympy.expand(expr), z)
    r = [sympy.Poly(rz.coeff_monomial(z**i), *gens, domain="QQ") for i in range(2 * k - 1)]

    found: dict[tuple, Poly] = {}
    for eqs in _square_conditions(r):
        for sol in _solve_system(eqs, gens, inp.mode):
            g = Poly(sol, inp.mode)
            found.setdefault(g.coeffs, g)

    out = []
    for key in sorted(found, key=lambda cs: [float(c) for c in cs]):
        g = found[key]
        for pi in pi_candidates(inp, g):
            out.append((g, pi))
    if not out:
        log.debug("find_g: no real g admits a perfect-square radicand")
    return out


def assemble(inp: NUInput, g: Poly, pi: Poly) -> NUFactorization:
    """Fill in tau, sigma_bar and h for an admissible (g, pi)."""
    sigma, tt = inp.sigma, inp.tau_tilde
    tau = tt + pi.scale(2)
    sigma_bar = inp.sigma_tilde + pi * pi + pi * (tt - sigma.derivative()) + pi.derivative() * sigma
    h = exact_divide(sigma_bar, sigma)
    if h is None:
        raise DivisibilityError("sigma does not divide sigma_bar; (g, pi) inconsistent")
    if not _negligible_diff(h, g + pi.derivative()):
        raise DivisibilityError("h differs from g + pi'")
    return NUFactorization(g=g, pi=pi, tau=tau, h=h, sigma_bar=sigma_bar,
                           phi_logderiv=(pi, sigma), k=inp.k)


def _negligible_diff(p: Poly, q: Poly) -> bool:
    d = p - q
    if d.mode == EXACT:
        return d.is_zero()
    return d.max_abs() <= 1e-9 * max(p.max_abs(), q.max_abs(), 1.0)


# -- degree-n condition and integration constants ---------------------------


def hypergeometric_eigenvalue(X: Poly, Y: Poly, n: int):
    """lambda_n = -n(n-1)/2 X'' - n Y' for k = 2 (both derivatives are constants)."""
    _check_degree(X, 2, "X")
    _check_degree(Y, 1, "Y")
    return build_Zn(X, Y, n, IntegrationConstants((), n, 2))[0]


def build_Zn(X: Poly, Y: Poly, n: int, C: IntegrationConstants) -> Poly:
    """Z_n = -n(n-1)/(k(k-1)) X'' - n/(k-1) Y' + sum_l C_{k-l-2} z**l / l!."""
    k = C.k
    mode = _same_mode(X, Y)
    _check_degree(X, k, "X")
    _check_degree(Y, k - 1, "Y")
    Z = X.derivative(2).scale(-_ratio(n * (n - 1), k * (k - 1), mode)) - Y.derivative().scale(
        _ratio(n, k - 1, mode)
    )
    tail = [C.C(k - l - 2) / factorial(l) for l in range(k - 2)]
    return Z + Poly(tail, mode)


def coefficient_relations(X: Poly, Y: Poly, n: int, C: IntegrationConstants) -> tuple:
    """Coefficients ``(c_0, ..., c_{k-2})`` of Z_n, written out term by term."""
    k = C.k
    mode = _same_mode(X, Y)
    _check_degree(X, k, "X")
    _check_degree(Y, k - 1, "Y")
    c = []
    for l in range(k - 2):
        c.append(
            -_ratio(n * (n - 1), k * (k - 1), mode) * (l + 2) * (l + 1) * X[l + 2]
            - _ratio(n, k - 1, mode) * (l + 1) * Y[l + 1]
            + C.C(k - l - 2) / factorial(l)
        )
    c.append(-n * (n - 1) * X[k] - n * Y[k - 1])
    return tuple(c)


def degree_condition_check(sigma: Poly, tau: Poly, h: Poly, n: int, k: int) -> bool:
    """Whether the coefficient of ``y^(n)`` in the n-times differentiated equation vanishes."""
    mode = _same_mode(sigma, tau, h)
    value = (
        comb(n + k - 2, k) * sigma.derivative(k)
        + comb(n + k - 2, k - 1) * tau.derivative(k - 1)
        + comb(n + k - 2, k - 2) * h.derivative(k - 2)
    )
    if mode == EXACT:
        return value.is_zero()
    scale = max(sigma.max_abs(), tau.max_abs(), h.max_abs(), 1.0) * comb(n + k, k) * factorial(k)
    return value.max_abs() <= 1e-9 * scale


def _coerce_roots(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> str:
    mode = _same_mode(X, Y)
    if rs.mode != mode:
        raise TowerMismatchError(f"roots are {rs.mode}, coefficients {mode}")
    if rs.n != n:
        raise ValueError(f"root set has {rs.n} roots, expected n = {n}")
    _check_degree(X, k, "X")
    _check_degree(Y, k - 1, "Y")
    return mode


def linear_system(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> tuple[list[list], list]:
    """Lower-triangular system ``M C = rhs`` for the integration constants.

    Row ``r - 3`` (``r = 3..k``) comes from the coefficient of ``z**(k+n-r)``
    after substituting the roots' elementary symmetric polynomials; column
    ``q - 1`` multiplies ``C_q``.
    """
    mode = _coerce_roots(rs, X, Y, n, k)
    e = [elementary(rs, p) for p in range(k + 1)]
    a, b = X.__getitem__, Y.__getitem__
    size = k - 2
    zero = Fraction(0) if mode == EXACT else 0.0
    M = [[zero] * size for _ in range(size)]
    rhs = []
    for r in range(3, k + 1):
        for q in range(1, r - 1):
            p = r - 2 - q
            M[r - 3][q - 1] = (-1) ** p * e[p] / factorial(k - 2 - q)
        total = zero
        for p in range(r - 2):
            A = (
                (r - p - 2) * (2 * k - r + p + 1) * n * n
                - (2 * p * k * k + 2 * k * (r - 2 * p - 2) - (r - p - 2) * (r - p - 1)) * n
                + k * (k - 1) * p * (p + 1)
            )
            B = (r - p - 2) * n - (k - 1) * p
            term = _ratio(A, k * (k - 1), mode) * a(k - r + 2 + p) + _ratio(B, k - 1, mode) * b(k - r + 1 + p)
            total -= (-1) ** p * term * e[p]
        total -= (-1) ** (r - 1) * (r - 2) * ((2 * n - r + 1) * a(k) + b(k - 1)) * e[r - 2]
        rhs.append(total)
    return M, rhs


def constants_linear_system(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> IntegrationConstants:
    """Integration constants by forward substitution through :func:`linear_system`."""
    M, rhs = linear_system(rs, X, Y, n, k)
    C = []
    for i, row in enumerate(M):
        acc = rhs[i] - sum(row[j] * C[j] for j in range(i))
        C.append(acc / row[i])
    return IntegrationConstants(tuple(C), n, k)


def constants_closed_form(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> IntegrationConstants:
    """Integration constants as combinations of one- and two-part monomial symmetric polynomials."""
    mode = _coerce_roots(rs, X, Y, n, k)
    a, b = X.__getitem__, Y.__getitem__
    C = []
    for q in range(1, k - 1):
        val = Fraction(0) if mode == EXACT else 0.0
        for t in range(q):
            val -= (2 * (n - 1) * a(k - t) + b(k - t - 1)) * monomial(rs, Partition2(q - t))
        for s in range(1, q // 2 + 1):
            for t in range(q - 2 * s + 1):
                val -= 2 * a(k - t) * monomial(rs, Partition2(q - t - s, s))
        val -= _ratio(n * (n - 1), k * (k - 1), mode) * q * (2 * k - q - 1) * a(k - q)
        val -= _ratio(n, k - 1, mode) * q * b(k - q - 1)
        C.append(val * factorial(k - 2 - q))
    return IntegrationConstants(tuple(C), n, k)
