"""Executable checks tying the two pipelines together.

Every check returns a :class:`CheckReport`.  In the exact tower ``passed``
means exact equality; float checks use the tolerance recorded in ``detail``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

from . import enu, fba
from .poly import EXACT, FLOAT, Poly, exact_divide
from .symfunc import RootSet, elementary, monomial

FLOAT_TOL = 1e-9


@dataclass
class CheckReport:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    tower: str = EXACT
    skipped: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "skipped": self.skipped,
            "tower": self.tower,
            "detail": self.detail,
        }


def _skip(name: str, reason: str, tower: str) -> CheckReport:
    return CheckReport(name, True, {"reason": reason}, tower, skipped=True)


def _compare(name: str, lhs, rhs, tower: str, **extra) -> CheckReport:
    lhs_t = tuple(lhs) if isinstance(lhs, (list, tuple)) else (lhs,)
    rhs_t = tuple(rhs) if isinstance(rhs, (list, tuple)) else (rhs,)
    if len(lhs_t) != len(rhs_t):
        return CheckReport(name, False, {"lhs": list(lhs_t), "rhs": list(rhs_t), **extra}, tower)
    dev = max((abs(u - v) for u, v in zip(lhs_t, rhs_t)), default=0)
    if tower == EXACT:
        passed = dev == 0
    else:
        scale = max([1.0] + [abs(float(x)) for x in lhs_t + rhs_t])
        passed = dev <= FLOAT_TOL * scale
        extra = {**extra, "tolerance": FLOAT_TOL * scale}
    detail = {"lhs": list(lhs_t) if len(lhs_t) != 1 else lhs_t[0],
              "rhs": list(rhs_t) if len(rhs_t) != 1 else rhs_t[0],
              "deviation": dev, **extra}
    return CheckReport(name, passed, detail, tower)


def ode_residual(X: Poly, Y: Poly, Z: Poly, y: Poly) -> Poly:
    return X * y.derivative(2) + Y * y.derivative() + Z * y


def verify_polynomial_solution(X: Poly, Y: Poly, Z: Poly, y: Poly) -> CheckReport:
    """Substitute ``y`` into ``X y'' + Y y' + Z y`` and test for the zero polynomial."""
    parts = [X * y.derivative(2), Y * y.derivative(), Z * y]
    res = parts[0] + parts[1] + parts[2]
    tower = res.mode
    dev = res.max_abs()
    if tower == EXACT:
        passed = res.is_zero()
        detail = {"max_abs_coeff": dev}
    else:
        scale = max([1.0] + [p.max_abs() for p in parts])
        passed = dev <= FLOAT_TOL * scale
        detail = {"max_abs_coeff": dev, "tolerance": FLOAT_TOL * scale}
    detail["residual"] = list(res.coeffs)
    return CheckReport("polynomial_solution", passed, detail, tower)


def cross_check_constants(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> CheckReport:
    """ENU constants (linear system vs closed form) and Z coefficients (FBA vs ENU)."""
    tower = X.mode
    lin = enu.constants_linear_system(rs, X, Y, n, k)
    closed = enu.constants_closed_form(rs, X, Y, n, k)
    c_fba = fba.coefficients_from_roots(rs, X, Y, k)
    c_enu = enu.coefficient_relations(X, Y, n, lin)
    a = _compare("constants", lin.values, closed.values, tower)
    b = _compare("c_vector", c_fba, c_enu, tower)
    detail = {
        "constants_linear_system": list(lin.values),
        "constants_closed_form": list(closed.values),
        "c_fba": list(c_fba),
        "c_enu": list(c_enu),
        "constants_agree": a.passed,
        "c_agree": b.passed,
    }
    if k == 2:
        detail["note"] = "k=2: no integration constants"
    return CheckReport("enu_fba_equivalence", a.passed and b.passed, detail, tower)


# -- explicit low-order constants and identities ----------------------------


def _q(num, den, tower):
    return Fraction(num, den) if tower == EXACT else num / den


def appendix_C1(rs: RootSet, X: Poly, Y: Poly, n: int, k: int):
    """Right-hand side for C_1/(k-3)!."""
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    return (-(2 * (n - 1) * a(k) + b(k - 1)) * elementary(rs, 1)
            - _q(2 * n * (n - 1), k, t) * a(k - 1) - _q(n, k - 1, t) * b(k - 2))


def appendix_C2(rs: RootSet, X: Poly, Y: Poly, n: int, k: int):
    """Right-hand side for C_2/(k-4)!."""
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    return (-(2 * (n - 1) * a(k) + b(k - 1)) * monomial(rs, (2, 0))
            - (2 * (n - 1) * a(k - 1) + b(k - 2)) * monomial(rs, (1, 0))
            - 2 * a(k) * monomial(rs, (1, 1))
            - _q(2 * n * (n - 1) * (2 * k - 3), k * (k - 1), t) * a(k - 2)
            - _q(2 * n, k - 1, t) * b(k - 3))


def appendix_C3(rs: RootSet, X: Poly, Y: Poly, n: int, k: int):
    """Right-hand side for C_3/(k-5)!."""
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    return (-(2 * (n - 1) * a(k) + b(k - 1)) * monomial(rs, (3, 0))
            - (2 * (n - 1) * a(k - 1) + b(k - 2)) * monomial(rs, (2, 0))
            - (2 * (n - 1) * a(k - 2) + b(k - 3)) * monomial(rs, (1, 0))
            - 2 * a(k) * monomial(rs, (2, 1))
            - 2 * a(k - 1) * monomial(rs, (1, 1))
            - _q(6 * n * (n - 1) * (k - 2), k * (k - 1), t) * a(k - 3)
            - _q(3 * n, k - 1, t) * b(k - 4))


def _row4_rhs(rs, X, Y, n, k):
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    e1, e2 = elementary(rs, 1), elementary(rs, 2)
    return (2 * ((2 * n - 3) * a(k) + b(k - 1)) * e2
            + (_q(2 * (n - 1) * (n - k), k, t) * a(k - 1) + _q(n - k + 1, k - 1, t) * b(k - 2)) * e1
            - _q(2 * n * (n - 1) * (2 * k - 3), k * (k - 1), t) * a(k - 2)
            - _q(2 * n, k - 1, t) * b(k - 3))


def _row5_rhs(rs, X, Y, n, k):
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    e1, e2, e3 = (elementary(rs, p) for p in (1, 2, 3))
    return (-3 * (2 * (n - 2) * a(k) + b(k - 1)) * e3
            - (_q(2 * (n * n - (2 * k + 1) * n + 3 * k), k, t) * a(k - 1)
               + _q(n - 2 * k + 2, k - 1, t) * b(k - 2)) * e2
            + (_q(2 * (n - 1) * ((2 * k - 3) * n - k * (k - 1)), k * (k - 1), t) * a(k - 2)
               + _q(2 * n - k + 1, k - 1, t) * b(k - 3)) * e1
            - _q(6 * n * (n - 1) * (k - 2), k * (k - 1), t) * a(k - 3)
            - _q(3 * n, k - 1, t) * b(k - 4))


# Symmetric expressions as {partition: coefficient}; products limited to the
# identities the C_3 elimination needs.
_PRODUCTS = {
    ((1,), (1,)): {(2,): 1, (1, 1): 2},
    ((2,), (1,)): {(3,): 1, (2, 1): 1},
    ((1, 1), (1,)): {(2, 1): 1, (1, 1, 1): 3},
}


def _sym_add(*terms):
    out: dict = {}
    for coeff, expr in terms:
        for lam, c in expr.items():
            out[lam] = out.get(lam, 0) + coeff * c
    return {lam: c for lam, c in out.items() if c != 0}


def _sym_mul(expr: dict, lam2: tuple) -> dict:
    out: dict = {}
    for lam, c in expr.items():
        if lam == ():
            prod = {lam2: 1}
        else:
            key = (lam, lam2) if (lam, lam2) in _PRODUCTS else (lam2, lam)
            prod = _PRODUCTS[key]
        for mu, d in prod.items():
            out[mu] = out.get(mu, 0) + c * d
    return {lam: c for lam, c in out.items() if c != 0}


def _sym_eval(expr: dict, rs: RootSet):
    total = rs._zero()
    for lam, c in expr.items():
        if lam == ():
            total += c
        elif lam == (1, 1, 1):
            total += c * elementary(rs, 3)
        else:
            total += c * monomial(rs, lam if len(lam) == 2 else (lam[0], 0))
    return total


def c3_elimination(X: Poly, Y: Poly, n: int, k: int) -> dict:
    """C_3/(k-5)! as a symmetric expression, from the r=5 row with C_1, C_2 substituted."""
    a, b, t = X.__getitem__, Y.__getitem__, X.mode
    one = {(): 1}
    c1 = _sym_add((-(2 * (n - 1) * a(k) + b(k - 1)), {(1,): 1}),
                  (-_q(2 * n * (n - 1), k, t) * a(k - 1) - _q(n, k - 1, t) * b(k - 2), one))
    c2 = _sym_add((-(2 * (n - 1) * a(k) + b(k - 1)), {(2,): 1}),
                  (-(2 * (n - 1) * a(k - 1) + b(k - 2)), {(1,): 1}),
                  (-2 * a(k), {(1, 1): 1}),
                  (-_q(2 * n * (n - 1) * (2 * k - 3), k * (k - 1), t) * a(k - 2)
                   - _q(2 * n, k - 1, t) * b(k - 3), one))
    row = _sym_add(
        (-3 * (2 * (n - 2) * a(k) + b(k - 1)), {(1, 1, 1): 1}),
        (-(_q(2 * (n * n - (2 * k + 1) * n + 3 * k), k, t) * a(k - 1)
           + _q(n - 2 * k + 2, k - 1, t) * b(k - 2)), {(1, 1): 1}),
        (_q(2 * (n - 1) * ((2 * k - 3) * n - k * (k - 1)), k * (k - 1), t) * a(k - 2)
         + _q(2 * n - k + 1, k - 1, t) * b(k - 3), {(1,): 1}),
        (-_q(6 * n * (n - 1) * (k - 2), k * (k - 1), t) * a(k - 3) - _q(3 * n, k - 1, t) * b(k - 4), one),
    )
    # C3/(k-5)! = row + C2/(k-4)! e1 - C1/(k-3)! e2
    return _sym_add((1, row), (1, _sym_mul(c2, (1,))), (-1, _sym_mul(c1, (1, 1))))


def _m111(rs: RootSet):
    return sum((x * y * z for x, y, z in combinations(rs.roots, 3)), rs._zero())


def identity_checks(rs: RootSet) -> list[CheckReport]:
    """The monomial / elementary identities used when eliminating C_2 and C_3."""
    t = rs.mode
    e1, e2, e3 = (elementary(rs, p) for p in (1, 2, 3))
    m = lambda p, q=0: monomial(rs, (p, q))  # noqa: E731
    return [
        _compare("e2 = m(1,1)", e2, m(1, 1), t),
        _compare("e1^2 = m(2) + 2 m(1,1)", e1 * e1, m(2) + 2 * m(1, 1), t),
        _compare("e3 = m(1,1,1)", e3, _m111(rs), t),
        _compare("m(2) m(1) = m(3) + m(2,1)", m(2) * m(1), m(3) + m(2, 1), t),
        _compare("m(1,1) m(1) = m(2,1) + 3 m(1,1,1)", m(1, 1) * m(1), m(2, 1) + 3 * e3, t),
    ]


def appendix_suite(rs: RootSet, X: Poly, Y: Poly, n: int, k: int) -> list[CheckReport]:
    t = X.mode
    closed = enu.constants_closed_form(rs, X, Y, n, k)
    lin = enu.constants_linear_system(rs, X, Y, n, k)
    scaled = lambda C, q: C.C(q) / factorial(k - 2 - q)  # noqa: E731
    out = []

    explicit = {1: appendix_C1, 2: appendix_C2, 3: appendix_C3}
    for q, need in ((1, 3), (2, 4), (3, 5)):
        name = f"C{q} explicit"
        if k < need:
            out.append(_skip(name, f"needs k >= {need}", t))
            continue
        rhs = explicit[q](rs, X, Y, n, k)
        rep = _compare(name, [scaled(closed, q), scaled(lin, q)], [rhs, rhs], t)
        out.append(rep)

    if k >= 4:
        lhs = scaled(lin, 2) - scaled(lin, 1) * elementary(rs, 1)
        out.append(_compare("row r=4", lhs, _row4_rhs(rs, X, Y, n, k), t))
    else:
        out.append(_skip("row r=4", "needs k >= 4", t))
    if k >= 5:
        lhs = scaled(lin, 3) - scaled(lin, 2) * elementary(rs, 1) + scaled(lin, 1) * elementary(rs, 2)
        out.append(_compare("row r=5", lhs, _row5_rhs(rs, X, Y, n, k), t))
        expr = c3_elimination(X, Y, n, k)
        coeff = expr.get((1, 1, 1), 0)
        out.append(CheckReport("m(1,1,1) absent from C3", coeff == 0 if t == EXACT else abs(coeff) <= FLOAT_TOL,
                               {"coefficient": coeff}, t))
        out.append(_compare("C3 elimination value", _sym_eval(expr, rs), scaled(closed, 3), t))
    else:
        for name in ("row r=5", "m(1,1,1) absent from C3", "C3 elimination value"):
            out.append(_skip(name, "needs k >= 5", t))

    out.extend(identity_checks(rs))
    return out


# -- random instances -------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """Reduced equation with a known degree-``n`` polynomial solution."""

    X: Poly
    Y: Poly
    Z: Poly
    roots: RootSet
    n: int
    k: int


def random_rational(rng: random.Random, bound: int = 20) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_roots(rng: random.Random, n: int, bound: int = 20) -> RootSet:
    roots: set = set()
    while len(roots) < n:
        roots.add(random_rational(rng, bound))
    return RootSet(roots)


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        rows[rank] = [v / lead for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -rows[i][free]
        basis.append(vec)
    return basis


def random_instance(rng: random.Random, k: int, n: int, bound: int = 20) -> Instance:
    """Random exact frame (X, Y) admitting ``prod (z - z_i)`` for random distinct rational roots.

    The roots are drawn first; (X, Y) is a random point of the linear space
    of frames satisfying the Bethe equations at those roots, and Z follows by
    exact division.
    """
    while True:
        rs = random_roots(rng, n, bound)
        y = rs.polynomial()
        d1, d2 = y.derivative(), y.derivative(2)
        rows = []
        for z in rs.roots:
            rows.append([z**l * d2(z) for l in range(k + 1)] + [z**l * d1(z) for l in range(k)])
        basis = _nullspace(rows, 2 * k + 1)
        weights = [random_rational(rng, bound) for _ in basis]
        vec = [sum((w * v[i] for w, v in zip(weights, basis)), Fraction(0)) for i in range(2 * k + 1)]
        X, Y = Poly(vec[: k + 1]), Poly(vec[k + 1:])
        if X.is_zero() or any(X(z) == 0 for z in rs.roots):
            continue
        Z = exact_divide(-(X * d2 + Y * d1), y)
        if Z is None or Z.degree() > k - 2:
            continue
        return Instance(X, Y, Z, rs, n, k)


def instance_checks(inst: Instance) -> list[CheckReport]:
    """Equivalence plus substitution of Z_n built from the linear-system constants."""
    rs, X, Y, n, k = inst.roots, inst.X, inst.Y, inst.n, inst.k
    cross = cross_check_constants(rs, X, Y, n, k)
    C = enu.constants_linear_system(rs, X, Y, n, k)
    Zn = enu.build_Zn(X, Y, n, C)
    sub = verify_polynomial_solution(X, Y, Zn, rs.polynomial())
    sub.detail["Z_matches_instance"] = Zn == inst.Z
    sub.passed = sub.passed and Zn == inst.Z
    return [cross, sub]


def random_battery(seed: int, count: int, ks=(3, 4, 5, 6), ns=range(1, 7)) -> list[tuple[Instance, list[CheckReport]]]:
    rng = random.Random(seed)
    ks, ns = list(ks), list(ns)
    out = []
    for _ in range(count):
        inst = random_instance(rng, rng.choice(ks), rng.choice(ns))
        out.append((inst, instance_checks(inst)))
    return out
