import numpy as np
import pytest

from beamsign.expressions import ExpressionError, parse_expression


def ev(source, t):
    return parse_expression(source)(np.asarray(t, dtype=np.float64))


def test_basic_evaluation():
    assert ev("t", 0.25) == 0.25
    assert abs(ev("pi", 0.0) - np.pi) < 1e-15
    assert ev("1000*sin(pi*t)^2", 0.5) == pytest.approx(1000.0, abs=1e-9)
    assert ev("2*3+4", 0.0) == 10.0
    assert ev("2+3*4", 0.0) == 14.0
    assert ev("(2+3)*4", 0.0) == 20.0


def test_power_is_right_associative_and_binds_tightly():
    assert ev("2^3^2", 0.0) == 512.0
    assert ev("-2^2", 0.0) == -4.0
    assert ev("2^-1", 0.0) == 0.5
    assert ev("3*t^2", 2.0) == 12.0


def test_functions_and_whitespace():
    t = np.linspace(0.0, 1.0, 11)
    out = ev(" 1 + 2 * cos( pi * t ) ", t)
    assert out.shape == t.shape
    assert np.allclose(out, 1.0 + 2.0 * np.cos(np.pi * t))
    assert np.allclose(ev("sqrt(abs(t))", [-4.0, 9.0]), [2.0, 3.0])
    assert np.allclose(ev("exp(0*t)", t), 1.0)
    assert np.allclose(ev("tanh(t)", t), np.tanh(t))


def test_scalar_results_broadcast_to_the_grid():
    t = np.linspace(0.0, 1.0, 5)
    out = ev("3", t)
    assert out.shape == t.shape
    assert np.all(out == 3.0)


def test_parse_errors_carry_offsets():
    with pytest.raises(ExpressionError) as info:
        parse_expression("2*(3+")
    assert info.value.offset == 5
    assert "at offset 5" in str(info.value)
    with pytest.raises(ExpressionError) as info:
        parse_expression("foo(t)")
    assert info.value.offset == 0
    with pytest.raises(ExpressionError) as info:
        parse_expression("2*q")
    assert info.value.offset == 2
    with pytest.raises(ExpressionError) as info:
        parse_expression("1 + $")
    assert info.value.offset == 4
    with pytest.raises(ExpressionError) as info:
        parse_expression("sin 1")
    assert info.value.offset == 4
    with pytest.raises(ExpressionError) as info:
        parse_expression("1 2")
    assert info.value.offset == 2
    with pytest.raises(ExpressionError):
        parse_expression("")
    with pytest.raises(ExpressionError):
        parse_expression("   ")


def test_evaluation_errors_carry_offsets():
    t = np.linspace(0.0, 1.0, 5)
    with pytest.raises(ExpressionError) as info:
        ev("1/t", t)
    assert info.value.offset == 1
    with pytest.raises(ExpressionError) as info:
        ev("sqrt(t-1)", t)
    assert info.value.offset == 0
    with pytest.raises(ExpressionError):
        ev("(0-2)^0.5", t)
    with pytest.raises(ExpressionError):
        ev("exp(1000)", t)


def test_division_away_from_zero_is_fine():
    t = np.linspace(0.5, 1.0, 5)
    assert np.allclose(ev("1/t", t), 1.0 / t)


def test_expression_remembers_its_source():
    expr = parse_expression("1+t")
    assert expr.source == "1+t"
