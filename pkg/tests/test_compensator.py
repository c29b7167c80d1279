import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from singlejump import functions as fx
from singlejump.compensator import (JumpMarkSpec, check_locally_integrable, compensate,
                                    compensated_process, compensator_path, expected_total_mark,
                                    survival_from_K)
from singlejump.errors import NotLocallyIntegrable, VanishingK
from singlejump.integrate import stieltjes_integral
from singlejump.measure import Distribution, UniformPiece
from singlejump.solver import verify_condition_m


@pytest.mark.parametrize("Kabs,ok", [
    (fx.power(-1.0), False),
    (fx.const(1.0), True),
    (fx.power(-0.5), True),
])
def test_local_integrability_examples(expo, Kabs, ok):
    assert check_locally_integrable(JumpMarkSpec(fx.const(0.0), Kabs), expo) is ok


def test_bounded_mark_on_any_law(uniform, two_atoms, mixed):
    for d in (uniform, two_atoms, mixed):
        assert check_locally_integrable(JumpMarkSpec(fx.const(1.0)), d)


def test_kabs_defaults_to_abs_K():
    m = JumpMarkSpec(fx.affine(1.0, -1.0))
    np.testing.assert_array_equal(m.Kabs(np.array([0.0, 2.0])), [1.0, 1.0])


def test_compensate_raises_for_non_integrable_marks(expo):
    with pytest.raises(NotLocallyIntegrable):
        compensate(JumpMarkSpec(fx.power(-1.0)), expo)


def test_hazard_identity(expo):
    res = compensate(JumpMarkSpec(fx.const(1.0)), expo)
    t = np.linspace(0.0, 5.0, 51)
    np.testing.assert_allclose(res.F.F(t), t, atol=1e-8)
    assert res.caseB_jump == 0.0


def test_two_atom_compensator(two_atoms):
    res = compensate(JumpMarkSpec(fx.const(1.0)), two_atoms)
    F = res.F.F(np.array([0.5, 1.0, 1.5]))
    np.testing.assert_array_equal(F, [0.0, 0.5, 0.5])
    assert res.caseB_jump == 1.0
    assert compensator_path(res, 2.0, 2.0) == 1.5
    # E A_inf = 0.5 * A(gamma=1) + 0.5 * A(gamma=2) = E X_inf
    EA = 0.5 * compensator_path(res, 1.0, 10.0) + 0.5 * compensator_path(res, 2.0, 10.0)
    assert EA == 1.0 == expected_total_mark(JumpMarkSpec(fx.const(1.0)), two_atoms)


def test_zero_mark(uniform):
    res = compensate(JumpMarkSpec(fx.const(0.0)), uniform)
    np.testing.assert_array_equal(res.F.F(np.linspace(0, 0.9, 5)), 0.0)
    assert res.caseB_jump == 0.0


@pytest.mark.parametrize("gamma,t,expected", [(2.0, 3.0, 2.0), (2.0, 1.0, 1.0), (0.5, 0.0, 0.0)])
def test_compensator_path_case_a(expo, gamma, t, expected):
    res = compensate(JumpMarkSpec(fx.const(1.0)), expo)
    assert compensator_path(res, gamma, t) == pytest.approx(expected, abs=1e-10)


def test_compensator_path_is_zero_at_time_zero(two_atoms, mixed):
    for d in (two_atoms, mixed):
        res = compensate(JumpMarkSpec(fx.const(1.0)), d)
        assert compensator_path(res, 1.0, 0.0) == 0.0


def test_atom_increments_are_hazard_steps():
    d = Distribution(atoms={0.5: 0.2, 1.0: 0.3}, pieces=[UniformPiece(0.0, 2.0, 0.5)])
    K = fx.affine(1.0, 2.0)
    res = compensate(JumpMarkSpec(K), d)
    for a in (0.5, 1.0):
        jump = res.F.F(np.array([a]))[0] - res.F.F_left(np.array([a]))[0]
        expected = float(K(np.array([a]))[0]) * d.atom_mass(a) / float(d.survival_left(a))
        assert jump == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("name", ["expo", "uniform", "mixed", "two_atoms"])
def test_compensated_process_satisfies_balance(request, name):
    d = request.getfixturevalue(name)
    res = compensate(JumpMarkSpec(fx.exponential(-0.3, 1.5)), d)
    rep = compensated_process(res)
    assert verify_condition_m(rep.pair).passed


def test_expected_compensator_equals_expected_mark():
    d = Distribution(atoms={0.5: 0.2, 1.0: 0.3, 3.0: 0.1}, pieces=[UniformPiece(0.0, 2.0, 0.4)])
    mark = JumpMarkSpec(fx.affine(1.0, 2.0))
    res = compensate(mark, d)
    # E A_inf = int F(gamma) dG + final-atom term; F(gamma) includes gamma's own step
    g = d.atom_t
    parts = [float(res.F.F(np.array([a]))[0]) * d.atom_mass(a) for a in g if a < d.t_G]
    cont = Distribution(pieces=[UniformPiece(0.0, 2.0, 0.4)], mass_inf=0.6)
    dens = stieltjes_integral(fx.RealFunction(res.F.F, "F"), cont, 0.0, 2.0).value
    end = (float(res.F.F_left(np.array([3.0]))[0]) + res.caseB_jump) * d.atom_mass(3.0)
    EA = math.fsum(parts + [dens, end])
    assert EA == pytest.approx(expected_total_mark(mark, d), abs=1e-8)


@pytest.mark.parametrize("t,expected", [(0.5, math.exp(-0.5)), (1.0, math.exp(-1.0)),
                                        (2.0, math.exp(-2.0)), (0.0, 1.0)])
def test_survival_constant_K(t, expected):
    assert survival_from_K(fx.const(1.0), t) == pytest.approx(expected, abs=1e-8)


def test_survival_linear_K():
    assert survival_from_K(fx.affine(1.0, 1.0), 1.0) == pytest.approx(0.5, abs=1e-8)


def test_survival_vectorised_and_monotone():
    t = np.array([2.0, 0.5, 1.0])
    s = survival_from_K(fx.affine(1.0, 1.0), t)
    np.testing.assert_allclose(s, 1.0 / (1.0 + t), atol=1e-10)


@pytest.mark.parametrize("K", [fx.affine(-1.0, 0.5), fx.const(0.0)])
def test_survival_needs_positive_K(K):
    with pytest.raises(VanishingK):
        survival_from_K(K, 1.0)


@given(st.floats(0.2, 5.0), st.floats(0.0, 3.0))
def test_survival_round_trip_through_hazard(rate, t):
    # K is the reciprocal hazard, so K = 1/rate reproduces the Exp(rate) survival
    K = fx.const(1.0 / rate)
    assert survival_from_K(K, t) == pytest.approx(math.exp(-rate * t), abs=1e-8)


def test_survival_round_trip_weibull_like():
    # Gbar(t) = (1 + t)^-2 has hazard 2/(1+t), so K(t) = (1+t)/2
    t = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(survival_from_K(fx.affine(0.5, 0.5), t), (1 + t) ** -2.0,
                               atol=1e-8)
