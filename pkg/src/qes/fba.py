"""Functional Bethe ansatz for polynomial solutions of X y'' + Y y' + Z y = 0.

Writing ``y = prod (z - z_i)`` with distinct roots, the equation holds iff

    sum_{j != i} 2 / (z_i - z_j) + Y(z_i) / X(z_i) = 0,   i = 1..n,

and the coefficients of ``Z`` then follow from the roots through the sums
``S_m`` and ``T_m``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .poly import EXACT, FLOAT, Poly, TowerMismatchError
from .symfunc import (
    ConsistencyError,
    Partition2,
    RepeatedRootError,
    RootSet,
    bethe_sum_S_direct,
    monomial,
    power_sum_T,
)

log = logging.getLogger(__name__)

POLE_GUARD = 1e-12


class PoleCollisionError(ZeroDivisionError):
    """A root sits on a zero of X (a singular point of the equation)."""


@dataclass(frozen=True)
class BetheProblem:
    X: Poly
    Y: Poly
    n: int
    k: int

    def __post_init__(self):
        if self.X.degree() > self.k or self.Y.degree() > self.k - 1:
            raise ValueError("degree bounds deg X <= k, deg Y <= k-1 violated")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.X.mode != self.Y.mode:
            raise TowerMismatchError("X and Y in different towers")


@dataclass(frozen=True)
class SolverConfig:
    """Multi-start damped Newton settings.

    ``damping`` is the initial step fraction of every Newton step; steps are
    halved while the residual grows, down to ``min_step``.  Iterates leaving
    ``escape`` times the start radius are rejected, since the Bethe residual
    decays like ``1/z`` and roots running off to infinity look convergent.
    """

    starts: int = 24
    max_iter: int = 100
    tol: float = 1e-10
    seed: int = 0
    damping: float = 1.0
    min_step: float = 2.0**-20
    dedup_tol: float = 1e-8
    escape: float = 1e3


@dataclass(frozen=True)
class BetheSolution:
    roots: RootSet
    residual_norm: float
    c: tuple
    converged: bool
    newton_iterations: int
    start: int = field(default=0, compare=False)


def bethe_residual(rs: RootSet, X: Poly, Y: Poly) -> tuple:
    """Left-hand sides of the Bethe equations at the given roots."""
    if rs.mode != X.mode or X.mode != Y.mode:
        raise TowerMismatchError("roots and coefficients must share a tower")
    zs = rs.roots
    out = []
    for i, zi in enumerate(zs):
        xi = X(zi)
        if xi == 0 or (rs.mode == FLOAT and abs(xi) < POLE_GUARD):
            raise PoleCollisionError(f"X vanishes at root {zi}")
        acc = Y(zi) / xi
        for j, zj in enumerate(zs):
            if j != i:
                acc += 2 / (zi - zj)
        out.append(acc)
    return tuple(out)


def _c_from_sums(rs: RootSet, a, b, k: int) -> list:
    S = [bethe_sum_S_direct(rs, m) for m in range(k)]
    T = [power_sum_T(rs, m) for m in range(k - 1)]
    c = []
    for q in range(k - 1):
        val = -2 * sum((a(q + m + 1) * S[m] for m in range(1, k - q)), rs._zero())
        val -= sum((b(q + m + 1) * T[m] for m in range(k - 1 - q)), rs._zero())
        c.append(val)
    return c


def _c_from_monomials(rs: RootSet, a, b, k: int) -> list:
    n = rs.n
    c = []
    for l in range(k - 2):
        val = -n * (n - 1) * a(l + 2) - n * b(l + 1) + rs._zero()
        for m in range(2, k - l):
            bracket = (n - 1) * monomial(rs, Partition2(m - 1))
            for p in range(1, (m - 1) // 2 + 1):
                bracket += monomial(rs, Partition2(m - 1 - p, p))
            val -= 2 * a(l + m + 1) * bracket
        for m in range(1, k - 1 - l):
            val -= b(l + m + 1) * monomial(rs, Partition2(m))
        c.append(val)
    c.append(-n * (n - 1) * a(k) - n * b(k - 1) + rs._zero())
    return c


def coefficients_from_roots(rs: RootSet, X: Poly, Y: Poly, k: int) -> tuple:
    """``(c_0, ..., c_{k-2})`` of Z determined by the roots.

    Evaluated once through the raw sums ``S_m``, ``T_m`` and once through
    monomial symmetric polynomials; the two must agree.
    """
    if rs.mode != X.mode or X.mode != Y.mode:
        raise TowerMismatchError("roots and coefficients must share a tower")
    if X.degree() > k or Y.degree() > k - 1:
        raise ValueError("degree bounds deg X <= k, deg Y <= k-1 violated")
    a, b = X.__getitem__, Y.__getitem__
    via_sums = _c_from_sums(rs, a, b, k)
    via_monomials = _c_from_monomials(rs, a, b, k)
    for q, (u, v) in enumerate(zip(via_sums, via_monomials)):
        if rs.mode == EXACT:
            ok = u == v
        else:
            scale = max(1.0, X.max_abs(), Y.max_abs()) * (1.0 + max(map(abs, rs.roots), default=0.0)) ** k
            ok = abs(u - v) <= 1e-9 * scale * max(1, rs.n) ** 2
        if not ok:
            raise ConsistencyError(f"c_{q}: sums give {u}, monomials give {v}")
    return tuple(via_monomials)


# -- Newton solver ----------------------------------------------------------


def _residual_and_jacobian(z: np.ndarray, a: np.ndarray, b: np.ndarray):
    X = np.polynomial.polynomial.polyval(z, a)
    dX = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(a)) if len(a) > 1 else 0 * z
    Y = np.polynomial.polynomial.polyval(z, b)
    dY = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(b)) if len(b) > 1 else 0 * z
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, np.inf)
    inv = 1.0 / diff
    F = 2.0 * inv.sum(axis=1) + Y / X
    J = 2.0 * inv**2
    np.fill_diagonal(J, 0.0)
    J[np.diag_indices_from(J)] = -J.sum(axis=1) + (dY * X - Y * dX) / X**2
    return F, J


def _admissible(z: np.ndarray, a: np.ndarray, bound: float) -> bool:
    if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > bound:
        return False
    if np.min(np.abs(np.polynomial.polynomial.polyval(z, a))) < POLE_GUARD:
        return False
    if len(z) > 1 and np.min(np.diff(np.sort(z))) < POLE_GUARD:
        return False
    return True


def _initial_configuration(n: int, radius: float, start: int, rng: np.random.Generator) -> np.ndarray:
    nodes = np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))[::-1]
    if start == 0:
        return 0.5 * radius * nodes
    spread = rng.uniform(0.1, 1.0) * radius
    jitter = rng.uniform(-1.0, 1.0, size=n) * spread / max(n, 1)
    return np.clip(spread * nodes + jitter + rng.uniform(-0.25, 0.25) * radius, -radius, radius)


def _newton(z: np.ndarray, a: np.ndarray, b: np.ndarray, cfg: SolverConfig, bound: float):
    if not _admissible(z, a, bound):
        return None
    F, J = _residual_and_jacobian(z, a, b)
    for it in range(cfg.max_iter + 1):
        if np.max(np.abs(F)) <= cfg.tol:
            return z, F, it
        if it == cfg.max_iter:
            break
        try:
            delta = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            return None
        norm = np.linalg.norm(F)
        step = cfg.damping
        while step >= cfg.min_step:
            trial = z - step * delta
            if _admissible(trial, a, bound):
                Ft, Jt = _residual_and_jacobian(trial, a, b)
                if np.all(np.isfinite(Ft)) and np.linalg.norm(Ft) < norm:
                    z, F, J = trial, Ft, Jt
                    break
            step /= 2
        else:
            return None
    return None


def solve_bethe(prob: BetheProblem, config: SolverConfig | None = None) -> list[BetheSolution]:
    """Real solutions of the Bethe equations found from seeded random starts.

    Solutions whose sorted roots agree within ``config.dedup_tol`` are merged,
    keeping the smaller residual; the list is ordered by the start that first
    produced each solution, so identical inputs give identical output.
    """
    cfg = config or SolverConfig()
    n, k = prob.n, prob.k
    if n < 1:
        raise ValueError("solve_bethe needs n >= 1")
    a = np.array([float(c) for c in prob.X.coeffs] or [0.0])
    b = np.array([float(c) for c in prob.Y.coeffs] or [0.0])
    a_scale = np.max(np.abs(a))
    if a_scale == 0:
        raise ValueError("X vanishes identically")
    radius = 1.0 + np.max(np.abs(b)) / a_scale
    Xf, Yf = prob.X.to_mode(FLOAT), prob.Y.to_mode(FLOAT)
    rng = np.random.default_rng(cfg.seed)

    found: list[BetheSolution] = []
    for start in range(cfg.starts):
        z0 = _initial_configuration(n, radius, start, rng)
        result = _newton(z0, a, b, cfg, cfg.escape * radius)
        if result is None:
            continue
        z, F, iters = result
        try:
            rs = RootSet([float(v) for v in z], FLOAT)
        except RepeatedRootError:
            continue
        residual = max(abs(r) for r in bethe_residual(rs, Xf, Yf))
        if not math.isfinite(residual) or residual > cfg.tol:
            continue
        sol = BetheSolution(
            roots=rs,
            residual_norm=residual,
            c=coefficients_from_roots(rs, Xf, Yf, k),
            converged=True,
            newton_iterations=iters,
            start=start,
        )
        for idx, other in enumerate(found):
            if max(abs(u - v) for u, v in zip(rs.roots, other.roots.roots)) < cfg.dedup_tol:
                if sol.residual_norm < other.residual_norm:
                    found[idx] = BetheSolution(sol.roots, sol.residual_norm, sol.c, True,
                                               sol.newton_iterations, other.start)
                break
        else:
            found.append(sol)
    log.debug("solve_bethe: %d distinct solutions from %d starts", len(found), cfg.starts)
    return found
