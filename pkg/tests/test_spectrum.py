import numpy as np
import pytest

from beamsign import Grid, Interval, ScalarField
from beamsign.spectrum import (
    SpectralData,
    delta1,
    delta1_alt,
    delta2,
    lambda2,
    lambda3,
    lambda_k,
    resonance_check,
)

UNIT = Interval(0.0, 1.0)

# first positive root of tan x = tanh x, from an independent bisection
X1 = 3.926602312047919


def test_lambda_k_closed_forms():
    assert abs(lambda_k(0.0, UNIT, 1) - np.pi**4) < 1e-12 * np.pi**4
    assert abs(lambda_k(0.0, Interval(0.0, np.pi), 1) - 1.0) < 1e-12
    target = 16.0 * np.pi**4 + 4.0 * np.pi**2
    assert abs(lambda_k(1.0, UNIT, 2) - target) < 1e-12 * target
    vals = [lambda_k(3.0, UNIT, k) for k in range(1, 8)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        lambda_k(0.0, UNIT, 0)
    with pytest.raises(ValueError):
        lambda_k(-1.0, UNIT, 1)


def test_lambda2_against_tan_tanh_oracle():
    value = lambda2(0.0, UNIT)
    target = -4.0 * X1**4
    assert abs(value - target) < 1e-8 * abs(target)
    assert abs(value - (-950.8842701244664)) < 1e-6
    # at p = 0 the threshold scales like length**-4
    assert abs(lambda2(0.0, Interval(0.0, 2.0)) - value / 16.0) < 1e-8 * abs(value) / 16.0


def test_lambda2_equation_residual():
    for p in (0.0, 1.0, 5.0, 10.0):
        lam = -lambda2(p, UNIT)
        q = np.sqrt(2.0 * np.sqrt(lam) - p)
        r = np.sqrt(2.0 * np.sqrt(lam) + p)
        assert abs(np.tan(0.5 * q) / q - np.tanh(0.5 * r) / r) < 1e-10


def test_lambda3_against_tan_tanh_oracle():
    value = lambda3(0.0, UNIT)
    assert abs(value - X1**4) < 1e-8 * X1**4
    assert abs(value - 237.72106753111677) < 1e-6
    assert abs(lambda3(0.0, Interval(0.0, 2.0)) - value / 16.0) < 1e-8 * value / 16.0


def test_lambda3_equation_residual():
    for p in (0.0, 1.0, 5.0, 10.0):
        lam = lambda3(p, UNIT)
        w = np.sqrt(p * p + 4.0 * lam)
        q = np.sqrt(w - p)
        r = np.sqrt(w + p)
        assert abs(np.tan(q / np.sqrt(2.0)) / q - np.tanh(r / np.sqrt(2.0)) / r) < 1e-10


def test_threshold_ordering_and_p_monotonicity():
    prev1 = prev1p = 0.0
    for p in (0.0, 1.0, 5.0, 10.0):
        sd = SpectralData.compute(p, UNIT)
        assert 0.0 < sd.lambda1 < sd.lambda3 < -sd.lambda2
        assert sd.lambda1 < sd.lambda1_prime
        assert sd.lambda1 > prev1
        assert sd.lambda1_prime > prev1p
        prev1, prev1p = sd.lambda1, sd.lambda1_prime
    assert lambda2(1.0, UNIT) < lambda2(0.0, UNIT)
    assert lambda3(1.0, UNIT) > lambda3(0.0, UNIT)


def test_spectral_data_rejects_bad_ordering():
    with pytest.raises(ValueError):
        SpectralData(
            p=0.0,
            interval=UNIT,
            lambda1=np.pi**4,
            lambda1_prime=16.0 * np.pi**4,
            lambda2=-50.0,
            lambda3=237.72,
            delta1=4.0 * np.pi**2,
        )


def test_delta1_examples():
    assert abs(delta1(0.0, UNIT) - 4.0 * np.pi**2) < 1e-12
    assert delta1(10.0, UNIT) == 40.0
    two = Interval(0.0, 2.0)
    assert abs(delta1(0.0, two) - 4.0 * np.pi**2 / 8.0) < 1e-12
    assert delta1_alt(0.0, UNIT) == delta1(0.0, UNIT)
    assert abs(delta1_alt(0.0, two) - 4.0 * np.pi**2 / 2.0**1.5) < 1e-12


def test_delta2_values_and_window():
    lam1 = np.pi**4
    lam1p = 16.0 * np.pi**4
    for c_m, expected in (
        (-500.0, 0.6791880545411144),
        (-250.0, 0.8395940272705572),
        (-200.0, 0.8716752218164457),
        (-300.0, 0.8075128327246687),
    ):
        value = delta2(0.0, UNIT, c_m)
        assert abs(value - expected) < 1e-12
        assert abs(value - min(-1.0 - c_m / lam1, 1.0 + c_m / lam1p)) < 1e-14
    for c_m in np.linspace(-lam1p + 1.0, -lam1 - 1.0, 25):
        assert 0.0 < delta2(0.0, UNIT, float(c_m)) < 1.0
    with pytest.raises(ValueError):
        delta2(0.0, UNIT, -lam1)
    with pytest.raises(ValueError):
        delta2(0.0, UNIT, -lam1p)
    with pytest.raises(ValueError):
        delta2(0.0, UNIT, -50.0)


def test_resonance_check():
    g = Grid(UNIT, 64)
    assert resonance_check(ScalarField.constant(g, 0.0), 0.0, UNIT)
    assert not resonance_check(ScalarField.constant(g, -np.pi**4), 0.0, UNIT)
    spanning = ScalarField(g, np.linspace(-900.0, -200.0, g.n + 1))
    assert resonance_check(spanning, 0.0, UNIT)
    second = ScalarField.constant(g, -lambda_k(0.0, UNIT, 2))
    assert not resonance_check(second, 0.0, UNIT)
    with pytest.raises(ValueError):
        resonance_check(ScalarField.constant(g, 0.0), 0.0, Interval(0.0, 2.0))


def test_spectral_data_compute_is_consistent():
    sd = SpectralData.compute(2.0, UNIT)
    assert sd.lambda1 == lambda_k(2.0, UNIT, 1)
    assert sd.lambda1_prime == lambda_k(2.0, UNIT, 2)
    assert sd.lambda2 == lambda2(2.0, UNIT)
    assert sd.lambda3 == lambda3(2.0, UNIT)
    assert sd.delta1 == delta1(2.0, UNIT)
