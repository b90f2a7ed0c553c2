import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qes import consistency
from qes.consistency import (
    appendix_suite,
    c3_elimination,
    cross_check_constants,
    identity_checks,
    instance_checks,
    random_battery,
    random_instance,
    verify_polynomial_solution,
)
from qes.poly import Poly
from qes.symfunc import RootSet

from oracles import rand_poly

z = Poly([0, 1])


def test_verify_examples():
    assert verify_polynomial_solution(Poly([1]), Poly([0, -2]), Poly([4]), z * z - Poly([F(1, 2)])).passed
    assert verify_polynomial_solution(Poly([1, 0, -1]), Poly([0, -2]), Poly([6]), z * z - Poly([F(1, 3)])).passed
    rep = verify_polynomial_solution(Poly([1]), Poly([0, -2]), Poly([5]), z * z - Poly([F(1, 2)]))
    assert not rep.passed and rep.tower == "exact"


def test_verify_float_tower():
    r = 1 / math.sqrt(2)
    y = RootSet([-r, r]).polynomial()
    assert verify_polynomial_solution(Poly([1.0]), Poly([0.0, -2.0]), Poly([4.0]), y).passed
    assert not verify_polynomial_solution(Poly([1.0]), Poly([0.0, -2.0]), Poly([4.1]), y).passed


def test_cross_check_k2():
    rep = cross_check_constants(RootSet([F(0)]), Poly([1]), Poly([0, -2]), 1, 2)
    assert rep.passed
    assert rep.detail["note"] == "k=2: no integration constants"


def test_cross_check_k3_n1():
    X, Y = Poly([F(2), F(-1), F(5)]), Poly([-15, 2, 1])
    rep = cross_check_constants(RootSet([3]), X, Y, 1, 3)
    assert rep.passed
    assert rep.detail["constants_linear_system"] == [-4]


@pytest.mark.parametrize("k", [4, 5, 6])
def test_cross_check_random(k):
    inst = random_instance(random.Random(k), k, 4)
    assert cross_check_constants(inst.roots, inst.X, inst.Y, 4, k).passed


def test_cross_check_detects_perturbed_constant(monkeypatch):
    inst = random_instance(random.Random(11), 4, 3)
    real = consistency.enu.constants_closed_form

    def shifted(*args):
        C = real(*args)
        return type(C)((C.values[0] + 1,) + C.values[1:], C.n, C.k)

    monkeypatch.setattr(consistency.enu, "constants_closed_form", shifted)
    rep = cross_check_constants(inst.roots, inst.X, inst.Y, 3, 4)
    assert not rep.passed and not rep.detail["constants_agree"] and rep.detail["c_agree"]


def test_identity_examples():
    reps = {r.name: r for r in identity_checks(RootSet([1, 2]))}
    assert reps["e1^2 = m(2) + 2 m(1,1)"].detail["lhs"] == 9
    assert reps["m(2) m(1) = m(3) + m(2,1)"].detail["lhs"] == 15
    assert all(r.passed for r in reps.values())


@given(st.lists(st.builds(F, st.integers(-20, 20), st.integers(1, 20)), max_size=8, unique=True))
def test_identities_hold(zs):
    assert all(r.passed for r in identity_checks(RootSet(zs)))


@pytest.mark.parametrize("k,n", [(5, 3), (6, 4), (7, 2)])
def test_appendix_suite_passes(k, n):
    inst = random_instance(random.Random(100 + k), k, n)
    reps = appendix_suite(inst.roots, inst.X, inst.Y, n, k)
    assert all(r.passed and not r.skipped for r in reps), [r.name for r in reps if not r.passed]


def test_appendix_suite_on_arbitrary_frame():
    rng = random.Random(8)
    rs = RootSet([F(1, 2), F(-3), F(5, 7)])
    reps = appendix_suite(rs, rand_poly(rng, 6), rand_poly(rng, 5), 3, 6)
    assert all(r.passed for r in reps)


def test_appendix_suite_skips_below_threshold():
    inst = random_instance(random.Random(1), 3, 2)
    reps = {r.name: r for r in appendix_suite(inst.roots, inst.X, inst.Y, 2, 3)}
    assert not reps["C1 explicit"].skipped and reps["C1 explicit"].passed
    for name in ("C2 explicit", "C3 explicit", "row r=4", "row r=5", "m(1,1,1) absent from C3"):
        assert reps[name].skipped


def test_c3_elimination_has_no_triple_term():
    rng = random.Random(2)
    expr = c3_elimination(rand_poly(rng, 5), rand_poly(rng, 4), 3, 5)
    assert expr.get((1, 1, 1), 0) == 0


def test_random_instance_has_true_solution():
    for seed in range(10):
        inst = random_instance(random.Random(seed), 3 + seed % 4, 1 + seed % 6)
        assert verify_polynomial_solution(inst.X, inst.Y, inst.Z, inst.roots.polynomial()).passed
        assert all(r.passed for r in instance_checks(inst))


def test_random_battery_is_seeded():
    a = [(i.X, i.Y, i.roots) for i, _ in random_battery(4, 5)]
    b = [(i.X, i.Y, i.roots) for i, _ in random_battery(4, 5)]
    assert a == b


def test_report_to_dict():
    rep = verify_polynomial_solution(Poly([1]), Poly([0, -2]), Poly([2]), z)
    d = rep.to_dict()
    assert list(d) == ["name", "passed", "skipped", "tower", "detail"]
    assert d["passed"] and d["detail"]["max_abs_coeff"] == 0
