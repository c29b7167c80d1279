import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from singlejump.errors import ConfigValidationError, InvalidDistribution
from singlejump.measure import (Distribution, ExponentialPiece, PolyPiece, PowerPiece,
                                TablePiece, UniformPiece, distribution_from_config)
from singlejump.rng import path_uniforms


def test_cdf_examples(uniform, two_atoms, expo):
    assert uniform.cdf(0.5) == 0.5
    assert two_atoms.cdf(1.0) == 0.5
    assert expo.cdf(1.0) == pytest.approx(-math.expm1(-1.0), abs=1e-15)


def test_survival_examples(uniform, two_atoms):
    assert two_atoms.survival(2.0) == 0.0
    assert two_atoms.survival_left(2.0) == 0.5
    assert uniform.survival(0.25) == 0.75
    assert uniform.survival_left(0.25) == 0.75


def test_mass_at_infinity_is_the_far_tail():
    d = Distribution.exponential(weight=0.7, mass_inf=0.3)
    assert d.survival(50.0) == pytest.approx(0.3, abs=1e-15)
    assert d.survival(math.inf) == 0.3


@pytest.mark.parametrize("name,tag,t_G", [
    ("uniform", "A", 1.0),
    ("two_atoms", "B", 2.0),
    ("expo", "A", math.inf),
])
def test_endpoint_case(request, name, tag, t_G):
    case = request.getfixturevalue(name).endpoint_case()
    assert case.tag == tag
    assert case.t_G == t_G
    assert case.support == (0.0, t_G, tag == "B")


def test_sample_examples(uniform, two_atoms, expo):
    assert uniform.sample(0.3) == pytest.approx(0.3, abs=1e-15)
    assert two_atoms.sample(0.7) == 2.0
    assert two_atoms.sample(0.5) == 1.0
    assert expo.sample(0.5) == pytest.approx(math.log(2.0), rel=1e-14)


def test_sample_returns_inf_above_finite_mass():
    d = Distribution.exponential(weight=0.7, mass_inf=0.3)
    assert math.isinf(d.sample(0.71))
    assert math.isfinite(d.sample(0.69))


@pytest.mark.parametrize("t", [0.0, 0.2, 0.5, 0.99, 1.0, 1.2, 1.5, 1.7, 2.0, 3.5, 40.0])
def test_cdf_plus_survival_is_one(mixed, t):
    assert mixed.cdf(t) + mixed.survival(t) == pytest.approx(1.0, abs=1e-14)


def test_left_limit_jump_is_atom_mass(mixed):
    ts = np.array([0.0, 0.3, 1.5, 1.7, 2.0])
    jump = mixed.survival_left(ts) - mixed.survival(ts)
    np.testing.assert_allclose(jump, [0.1, 0.0, 0.2, 0.0, 0.0], atol=1e-15)


def test_case_b_iff_positive_left_survival_at_finite_end(uniform, two_atoms, expo, mixed):
    for d in (uniform, two_atoms, expo, mixed):
        tG = d.t_G
        b = math.isfinite(tG) and d.survival_left(tG) > 0
        assert d.endpoint_case().is_B == b


def test_atom_tied_with_density_end_is_case_b():
    d = Distribution(atoms={1.0: 0.25}, pieces=[UniformPiece(0.0, 1.0, 0.75)])
    assert d.endpoint_case().is_B
    assert d.t_G == 1.0


@pytest.mark.parametrize("kwargs", [
    dict(atoms={1.0: 0.6, 2.0: 0.6}),
    dict(atoms={0.0: 1.0}),
    dict(pieces=[UniformPiece(0.0, 1.0, 0.5), UniformPiece(0.5, 2.0, 0.5)]),
    dict(atoms={-1.0: 1.0}),
    dict(atoms={1.0: 0.0, 2.0: 1.0}),
])
def test_invalid_distributions_are_rejected(kwargs):
    with pytest.raises(InvalidDistribution):
        Distribution(**kwargs)


def test_renormalize_flag():
    d = Distribution(atoms={1.0: 2.0 / 3.0}, pieces=[UniformPiece(0, 1, 1.0)], renormalize=True)
    assert d.atom_mass(1.0) == pytest.approx(0.4)
    assert d.cdf(1.0) == pytest.approx(1.0)


@pytest.mark.parametrize("piece,ref", [
    (UniformPiece(0.0, 2.0), stats.uniform(0, 2)),
    (ExponentialPiece(0.0, None, rate=3.0), stats.expon(scale=1 / 3)),
    (PowerPiece(0.0, 1.0, alpha=1.0), stats.triang(c=0.0)),
    (PolyPiece(0.0, 1.0, coeffs=[0.0, 2.0]), stats.triang(c=1.0)),
])
def test_piece_cdf_against_scipy(piece, ref):
    t = np.linspace(0.0, 2.0, 41)
    d = Distribution(pieces=[piece])
    np.testing.assert_allclose(d.cdf(t), ref.cdf(t), atol=1e-13)


def test_truncated_exponential_piece():
    d = Distribution(pieces=[ExponentialPiece(1.0, 3.0, rate=2.0)])
    ref = stats.truncexpon(b=4.0, loc=1.0, scale=0.5)
    t = np.linspace(0.5, 3.5, 31)
    np.testing.assert_allclose(d.cdf(t), ref.cdf(t), atol=1e-13)
    np.testing.assert_allclose(d.sample(np.array([0.1, 0.5, 0.9])),
                               ref.ppf([0.1, 0.5, 0.9]), rtol=1e-12)


def test_table_piece_is_normalised():
    d = Distribution(pieces=[TablePiece([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])])
    assert d.cdf(1.0) == pytest.approx(0.5)
    assert d.cdf(2.0) == pytest.approx(1.0)
    assert d.sample(0.5) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", ["uniform", "expo", "two_atoms", "mixed"])
def test_sampling_matches_cdf(request, name):
    d = request.getfixturevalue(name)
    u = path_uniforms(7, 0, 1_000_000)[:, 0]
    x = np.sort(d.sample(u))
    x = x[np.isfinite(x)]
    ts = np.unique(np.concatenate([x[:: 997], d.atom_t]))
    emp = np.searchsorted(x, ts, side="right") / u.size
    assert np.max(np.abs(emp - d.cdf(ts))) < 0.002


def test_exponential_sampling_ks_against_scipy(expo):
    u = path_uniforms(11, 0, 200_000)[:, 0]
    assert stats.kstest(expo.sample(u), "expon").statistic < 0.005


@given(st.floats(0.0, 1.0, exclude_min=True, exclude_max=True))
def test_quantile_is_generalized_inverse(u):
    d = Distribution(atoms={0.5: 0.3, 2.0: 0.2}, pieces=[UniformPiece(0.0, 1.0, 0.5)])
    t = d.sample(u)
    assert d.cdf(t) >= u - 1e-12
    assert d.cdf(t - 1e-9) <= u + 1e-12


def test_validation_grid(uniform, two_atoms):
    g = uniform.validation_grid(64)
    assert g.size == 65 and g[0] == 0.0 and g[-1] < 1.0
    np.testing.assert_array_equal(two_atoms.validation_grid(), [0.0, 1.0])
    assert np.all(uniform.survival(uniform.validation_grid(8, eps_floor=0.5)) >= 0.5)


def test_config_roundtrip(mixed):
    block = {"atoms": [[1.0, 0.5]],
             "pieces": [{"kind": "exp", "rate": 1.0, "from": 0, "to": None, "weight": 0.2}],
             "mass_inf": 0.3}
    d = distribution_from_config(block)
    assert d.survival(1e9) == pytest.approx(0.3)
    again = distribution_from_config(mixed.config())
    t = np.linspace(0, 4, 17)
    np.testing.assert_allclose(again.cdf(t), mixed.cdf(t), atol=1e-15)


@pytest.mark.parametrize("block", [
    {"atoms": [[1.0, 0.5]]},
    {"pieces": [{"kind": "gamma", "shape": 2}]},
    {"pieces": [{"kind": "uniform", "from": 0}]},
    {"atoms": [[1, 1]], "extra": 1},
])
def test_bad_config_blocks(block):
    with pytest.raises(ConfigValidationError):
        distribution_from_config(block)
