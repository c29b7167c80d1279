import math

import numpy as np
import pytest

from singlejump import functions as fx
from singlejump.errors import ConfigValidationError


@pytest.mark.parametrize("block,t,expected", [
    ({"kind": "const", "c": 2.5}, 0.3, 2.5),
    ({"kind": "affine", "a": 2, "b": -1}, 0.25, -0.5),
    ({"kind": "poly", "coeffs": [1, 0, 3]}, 2.0, 13.0),
    ({"kind": "power", "alpha": -0.5}, 4.0, 0.5),
    ({"kind": "power", "alpha": -2, "shift": 1}, 1.0, 0.25),
    ({"kind": "power_recip"}, 0.75, 4.0),
    ({"kind": "power_recip2"}, 0.5, 4.0),
    ({"kind": "one_minus_power", "beta": 0.5, "end": 2.0}, 1.0, 1.0),
    ({"kind": "exp", "rate": -1.0, "c": 2.0}, 0.0, 2.0),
    ({"kind": "log_singular", "p": 2}, 0.0, 1.0),
    ({"kind": "table", "ts": [0, 1], "vs": [0, 2]}, 0.25, 0.5),
    ({"kind": "points", "ts": [1, 2], "vs": [1, -1]}, 2.0, -1.0),
    ({"kind": "scaled", "c": 3, "f": {"kind": "const", "c": 2}}, 9.0, 6.0),
    ({"kind": "sum", "terms": [{"kind": "const", "c": 1}, {"kind": "power", "alpha": 1}]}, 2.0, 3.0),
    ({"kind": "product", "terms": [{"kind": "exp", "rate": 1}, {"kind": "exp", "rate": -1}]},
     5.0, 1.0),
    (1.5, 3.0, 1.5),
])
def test_config_catalog(block, t, expected):
    f = fx.from_config(block)
    assert float(f(np.array([t]))[0]) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("block", [
    {"kind": "nope"},
    {"kind": "power"},
    {"kind": "power", "alpha": 1, "beta": 2},
    {"c": 1},
    {"kind": "sum", "terms": []},
    {"kind": "const", "c": 1, "declared": {"middle": "convergent"}},
])
def test_config_rejects(block):
    with pytest.raises(ConfigValidationError):
        fx.from_config(block)


def test_config_roundtrip():
    block = {"kind": "sum", "terms": [{"kind": "power", "alpha": -0.5, "c": 2.0},
                                      {"kind": "const", "c": -1.0}]}
    f = fx.from_config(block)
    g = fx.from_config(f.config)
    t = np.linspace(0.1, 3, 9)
    np.testing.assert_array_equal(f(t), g(t))


def test_declared_survives_scaling_and_abs():
    f = fx.from_config({"kind": "power", "alpha": -1, "declared": {"left": "divergent"}})
    assert f.declared == {"left": "divergent"}
    assert (f * 3).declared == {"left": "divergent"}
    assert f.abs().declared == {"left": "divergent"}
    assert (f * 0).declared == {}


def test_arithmetic_and_shapes():
    f = fx.power(1.0) * 2 - 1
    t = np.array([[0.0, 0.5], [1.0, 2.0]])
    np.testing.assert_array_equal(f(t), 2 * t - 1)
    np.testing.assert_array_equal(fx.const(3)(t), np.full((2, 2), 3.0))
    assert (1 - fx.power(1.0))(np.array([0.25]))[0] == 0.75
    assert (fx.const(1) / fx.const(4))(np.array([0.0]))[0] == 0.25


def test_log_singular_is_integrable_near_end():
    f = fx.log_singular(2.0)
    # antiderivative of 1/(x (1 - log x)^2) is 1/(1 - log x)
    x = 1e-6
    assert 1.0 / (1.0 - math.log(x)) == pytest.approx(0.0675, abs=1e-3)
    assert np.isfinite(f(np.array([1 - 1e-12]))).all()
