import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qes.consistency import random_instance, verify_polynomial_solution
from qes.fba import (
    BetheProblem,
    PoleCollisionError,
    SolverConfig,
    bethe_residual,
    coefficients_from_roots,
    solve_bethe,
)
from qes.poly import FLOAT, Poly, TowerMismatchError
from qes.symfunc import ConsistencyError, RootSet

from oracles import hermite_zeros, rand_poly

HX, HY = Poly([1.0]), Poly([0.0, -2.0])
LX, LY = Poly([1.0, 0.0, -1.0]), Poly([0.0, -2.0])


def test_residual_examples():
    r = 1 / math.sqrt(2)
    res = bethe_residual(RootSet([-r, r]), HX, HY)
    assert max(map(abs, res)) < 1e-14
    assert bethe_residual(RootSet([F(0)]), Poly([1]), Poly([0, -2])) == (0,)
    assert bethe_residual(RootSet([F(1)]), Poly([1]), Poly([0, -2])) == (-2,)


def test_residual_pole_collision():
    with pytest.raises(PoleCollisionError):
        bethe_residual(RootSet([F(1)]), Poly([1, 0, -1]), Poly([0, -2]))
    with pytest.raises(PoleCollisionError):
        bethe_residual(RootSet([1.0, 0.5]), LX, LY)


def test_residual_tower_mismatch():
    with pytest.raises(TowerMismatchError):
        bethe_residual(RootSet([0.5]), Poly([1]), Poly([0, -2]))


def test_problem_validation():
    with pytest.raises(ValueError):
        BetheProblem(Poly([0, 0, 0, 1.0]), HY, 2, 2)
    with pytest.raises(ValueError):
        BetheProblem(HX, HY, -1, 2)
    with pytest.raises(ValueError):
        solve_bethe(BetheProblem(HX, HY, 0, 2))


def test_hermite_n2():
    sols = solve_bethe(BetheProblem(HX, HY, 2, 2))
    assert len(sols) == 1
    assert np.allclose(sols[0].roots.roots, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)
    assert sols[0].converged and sols[0].residual_norm <= 1e-10
    assert sols[0].c == pytest.approx((4.0,))


def test_hermite_n3():
    (sol,) = solve_bethe(BetheProblem(HX, HY, 3, 2))
    assert np.allclose(sol.roots.roots, [-math.sqrt(1.5), 0.0, math.sqrt(1.5)], atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_legendre(n):
    sols = solve_bethe(BetheProblem(LX, LY, n, 2))
    expected = np.sort(np.polynomial.legendre.legroots([0] * n + [1]))
    assert any(np.allclose(s.roots.roots, expected, atol=1e-10) for s in sols)
    for s in sols:
        assert s.c[0] == pytest.approx(n * (n + 1))
    if n == 2:
        assert np.allclose(sols[0].roots.roots, [-1 / math.sqrt(3), 1 / math.sqrt(3)])


def test_hermite_c0_is_2n():
    for n in range(1, 7):
        rs = RootSet(hermite_zeros(n).tolist())
        assert coefficients_from_roots(rs, HX, HY, 2)[0] == pytest.approx(2 * n)


def test_empty_root_set_gives_zero_coefficients():
    rng = random.Random(5)
    c = coefficients_from_roots(RootSet([]), rand_poly(rng, 4), rand_poly(rng, 3), 4)
    assert c == (0, 0, 0)


@given(st.integers(2, 6), st.integers(0, 6), st.randoms(use_true_random=False))
def test_leading_coefficient_depends_only_on_n(k, n, rnd):
    X, Y = rand_poly(rnd, k), rand_poly(rnd, k - 1)
    rs = RootSet(list({F(rnd.randint(-20, 20), rnd.randint(1, 20)) for _ in range(n)}))
    n = rs.n
    c = coefficients_from_roots(rs, X, Y, k)
    assert c[k - 2] == -n * (n - 1) * X[k] - n * Y[k - 1]


def test_sparse_frame_leading_relation():
    k = 4
    X = Poly([0, 0, 0, 0, F(3)])
    Y = Poly([0, 0, 0, F(-5)])
    rs = RootSet([F(1), F(-2), F(7, 3)])
    assert coefficients_from_roots(rs, X, Y, k)[k - 2] == -3 * 2 * 3 + 3 * 5


def test_disagreeing_routes_raise(monkeypatch):
    import qes.fba as fba_mod

    monkeypatch.setattr(fba_mod, "_c_from_sums", lambda rs, a, b, k: [F(99)] * (k - 1))
    with pytest.raises(ConsistencyError):
        fba_mod.coefficients_from_roots(RootSet([F(1)]), Poly([1]), Poly([0, -2]), 2)


@pytest.mark.parametrize("seed", range(4))
def test_solutions_solve_the_ode(seed):
    inst = random_instance(random.Random(seed), 3, 3, bound=6)
    X, Y = inst.X.to_mode(FLOAT), inst.Y.to_mode(FLOAT)
    sols = solve_bethe(BetheProblem(X, Y, 3, 3), SolverConfig(starts=40))
    for s in sols:
        Z = Poly(list(s.c), FLOAT)
        assert verify_polynomial_solution(X, Y, Z, s.roots.polynomial()).passed


def test_determinism():
    prob = BetheProblem(Poly([1.0, 0.0, -1.0]), Poly([0.5, -3.0]), 4, 2)
    cfg = SolverConfig(starts=16, seed=7)
    assert solve_bethe(prob, cfg) == solve_bethe(prob, cfg)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_even_odd_frame_gives_symmetric_roots(n):
    X, Y = Poly([1.0, 0.0, 0.5]), Poly([0.0, -1.0, 0.0, -2.0])
    sols = solve_bethe(BetheProblem(X, Y, n, 4))
    assert sols
    for s in sols:
        zs = np.array(s.roots.roots)
        assert np.allclose(zs, -zs[::-1], atol=1e-8)
