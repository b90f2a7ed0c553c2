import random
from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qes.consistency import random_instance, verify_polynomial_solution
from qes.enu import (
    DivisibilityError,
    IntegrationConstants,
    NUInput,
    assemble,
    build_Zn,
    coefficient_relations,
    constants_closed_form,
    constants_linear_system,
    degree_condition_check,
    find_g,
    hypergeometric_eigenvalue,
    linear_system,
    pi_candidates,
)
from qes.poly import Poly
from qes.symfunc import RepeatedRootError, RootSet

from oracles import planted_nu_problem, rand_poly

z = Poly([0, 1])
ZERO = Poly([])
ONE = Poly([1])


def nu(tau_tilde, sigma, sigma_tilde, k=2):
    return NUInput(Poly(tau_tilde), Poly(sigma), Poly(sigma_tilde), k)


def test_pi_candidates_examples():
    assert pi_candidates(nu([0, 2], [0, 0, 1], [0, 0, -1]), ZERO) == [z, -z]
    assert pi_candidates(nu([], [1], [0, 0, -1]), ZERO) == [z, -z]
    assert pi_candidates(nu([], [1], [0, 0, 1]), ZERO) == []


def test_pi_candidates_rejects_high_degree_g():
    with pytest.raises(ValueError):
        pi_candidates(nu([], [1], [0, 0, -1]), z)


@pytest.mark.parametrize("c", [F(0), F(3), F(-7, 2)])
def test_find_g_k2_shifted_oscillator(c):
    inp = nu([], [1], [c, 0, -1])
    sols = find_g(inp)
    assert (Poly([c]), z) in sols and (Poly([c]), -z) in sols
    for g, pi in sols:
        assemble(inp, g, pi)


def test_find_g_degenerate_input_allowed():
    inp = nu([1, -1], [0, 1], [0, 0, 0])
    for g, pi in find_g(inp):
        assemble(inp, g, pi)


def test_find_g_k3_planted():
    # radicand for g = z + 2 is (z^2 - 1)^2 by construction
    half = (z**3).derivative().scale(F(1, 2))
    sigma_tilde = half * half + (z + 2) * z**3 - (z * z - 1) * (z * z - 1)
    inp = NUInput(ZERO, z**3, sigma_tilde, 3)
    found = [g for g, _ in find_g(inp)]
    assert Poly([2, 1]) in found


def test_find_g_higher_k_is_not_implemented():
    with pytest.raises(NotImplementedError):
        find_g(NUInput(ZERO, Poly([0, 0, 0, 0, 1]), ZERO, 4))


def test_assemble_examples():
    inp = nu([0, 2], [0, 0, 1], [0, 0, -1])
    f = assemble(inp, ZERO, z)
    assert (f.tau, f.h, f.sigma_bar) == (Poly([0, 4]), ONE, Poly([0, 0, 1]))
    f = assemble(inp, ZERO, -z)
    assert (f.tau, f.h, f.sigma_bar) == (ZERO, Poly([-1]), Poly([0, 0, -1]))
    assert f.phi_logderiv == (-z, inp.sigma)
    assert f.tau - inp.tau_tilde - f.pi.scale(2) == ZERO


def test_assemble_rejects_inconsistent_pair():
    inp = nu([0, 2], [0, 0, 1], [0, 0, -1])
    with pytest.raises(DivisibilityError):
        assemble(inp, ZERO, z + 1)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("k", [2, 3])
def test_planted_factorizations_satisfy_invariants(seed, k):
    inp_data = planted_nu_problem(random.Random(1000 * k + seed), k)
    tau_tilde, sigma, sigma_tilde, g_true, s = inp_data
    inp = NUInput(tau_tilde, sigma, sigma_tilde, k)
    sols = find_g(inp)
    assert g_true in [g for g, _ in sols]
    for g, pi in sols:
        f = assemble(inp, g, pi)
        assert sigma * f.h == f.sigma_bar
        assert f.tau == tau_tilde + pi.scale(2)
        assert f.h == g + pi.derivative()


def test_float_tower_find_g():
    inp = NUInput(Poly([0.0]), Poly([1.0]), Poly([2.5, 0.0, -1.0]), 2)
    gs = [g for g, _ in find_g(inp)]
    assert any(abs(g[0] - 2.5) < 1e-9 for g in gs)


def test_build_Zn_examples():
    X, Y = Poly([0, 0, 5]), Poly([0, 3])
    for n in range(5):
        Z = build_Zn(X, Y, n, IntegrationConstants((), n, 2))
        assert Z == Poly([-n * (n - 1) * 5 - n * 3])
        assert hypergeometric_eigenvalue(X, Y, n) == Z[0]
    C1 = F(7, 3)
    assert build_Zn(z**3, z * z, 2, IntegrationConstants((C1,), 2, 3)) == Poly([C1, -4])
    C = IntegrationConstants((F(1), F(2), F(3)), 0, 5)
    assert build_Zn(rand_poly(random.Random(1), 5), rand_poly(random.Random(2), 4), 0, C) == Poly(
        [F(3), F(2), F(1, 2)]
    )


def test_build_Zn_degree_bounds():
    with pytest.raises(ValueError):
        build_Zn(z**4, ZERO, 1, IntegrationConstants((F(0),), 1, 3))
    with pytest.raises(ValueError):
        IntegrationConstants((F(0),), 1, 2)


def test_coefficient_relations_examples():
    for n in range(6):
        assert coefficient_relations(ONE, Poly([0, -2]), n, IntegrationConstants((), n, 2)) == (2 * n,)
    assert coefficient_relations(z**3, z * z, 2, IntegrationConstants((F(5),), 2, 3)) == (5, -4)
    C0 = IntegrationConstants((F(0), F(0)), 0, 4)
    assert coefficient_relations(rand_poly(random.Random(3), 4), rand_poly(random.Random(4), 3), 0, C0) == (0, 0, 0)


@given(st.integers(3, 6), st.integers(0, 6), st.randoms(use_true_random=False))
def test_coefficient_relations_match_build_Zn(k, n, rnd):
    X, Y = rand_poly(rnd, k), rand_poly(rnd, k - 1)
    C = IntegrationConstants([F(rnd.randint(-9, 9), rnd.randint(1, 9)) for _ in range(k - 2)], n, k)
    c = coefficient_relations(X, Y, n, C)
    assert Poly(c) == build_Zn(X, Y, n, C)
    assert c[k - 2] + n * (n - 1) * X[k] + n * Y[k - 1] == 0


def test_degree_condition_examples():
    for n in range(11):
        sigma, tau = Poly([1, 0, -1]), Poly([0, -2])
        h = Poly([n * (n + 1)])
        assert degree_condition_check(sigma, tau, h, n, 2)
        assert not degree_condition_check(sigma, tau, h + ONE, n, 2)
    sigma, tau, n = Poly([F(1, 2), 3, F(-5, 4)]), Poly([7, F(2, 3)]), 4
    h = Poly([-F(1, 2) * n * (n - 1) * sigma.derivative(2)[0] - n * tau.derivative()[0]])
    assert degree_condition_check(sigma, tau, h, n, 2)


def test_k2_has_no_constants():
    rs = RootSet([F(1, 2)])
    assert constants_linear_system(rs, ONE, Poly([1, -2]), 1, 2).values == ()
    assert constants_closed_form(rs, ONE, Poly([1, -2]), 1, 2).values == ()


def test_k3_n1_constant_by_direct_substitution():
    # y = z - 3 in X y'' + Y y' + Z y = 0 forces Y(z) + (c1 z + c0)(z - 3) = 0
    X = Poly([F(2), F(-1), F(5)])  # a3 = 0
    Y = Poly([-15, 2, 1])
    rs = RootSet([3])
    c1 = -1
    c0 = -Y[0] / (-3)  # constant term of Y + c0*(-3) vanishes
    assert Y + Poly([c0, c1]) * (z - 3) == ZERO
    # with n=1 the Z_n derivative terms give -Y'/2 = -(2z + 2)/2; so C1 = c0 + 1
    expected_C1 = c0 + Y[1] / 2
    assert expected_C1 == -4
    assert constants_linear_system(rs, X, Y, 1, 3).values == (expected_C1,)
    assert constants_closed_form(rs, X, Y, 1, 3).values == (expected_C1,)
    Z = build_Zn(X, Y, 1, constants_linear_system(rs, X, Y, 1, 3))
    assert verify_polynomial_solution(X, Y, Z, rs.polynomial()).passed


def test_constants_reject_repeated_roots():
    with pytest.raises(RepeatedRootError):
        RootSet([2, 2])
    with pytest.raises(ValueError):
        constants_closed_form(RootSet([1, 2]), z**3, z * z, 3, 3)


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_system_matrix_is_lower_triangular(k):
    rng = random.Random(k)
    rs = RootSet([F(i, 3) for i in range(1, 5)])
    M, rhs = linear_system(rs, rand_poly(rng, k), rand_poly(rng, k - 1), 4, k)
    assert len(M) == len(rhs) == k - 2
    for r, row in enumerate(M):
        assert all(v == 0 for v in row[r + 1:])
        assert row[r] == F(1, factorial(k - 3 - r))
    det = 1
    for r in range(k - 2):
        det *= M[r][r]
    expected = 1
    for r in range(3, k + 1):
        expected *= factorial(k - r)
    assert det == F(1, expected)


@given(st.integers(3, 6), st.integers(1, 6), st.randoms(use_true_random=False))
def test_linear_system_equals_closed_form_on_arbitrary_roots(k, n, rnd):
    X, Y = rand_poly(rnd, k), rand_poly(rnd, k - 1)
    rs = RootSet(list({F(rnd.randint(-20, 20), rnd.randint(1, 20)) for _ in range(n)}))
    n = rs.n
    assert constants_linear_system(rs, X, Y, n, k) == constants_closed_form(rs, X, Y, n, k)


@given(st.integers(3, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_constants_yield_exact_solution(k, n, seed):
    inst = random_instance(random.Random(seed), k, n)
    C = constants_linear_system(inst.roots, inst.X, inst.Y, n, k)
    Z = build_Zn(inst.X, inst.Y, n, C)
    assert Z == inst.Z
    assert verify_polynomial_solution(inst.X, inst.Y, Z, inst.roots.polynomial()).passed
