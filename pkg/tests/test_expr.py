import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spps import expr


@pytest.mark.parametrize("src,x,want", [
    ("0", 0.7, 0.0),
    ("x", 2.5, 2.5),
    ("2^3^2", 0.0, 512.0),           # right-associative power
    ("-x^2", 3.0, -9.0),             # unary minus binds below the power
    ("(-x)^2", 3.0, 9.0),
    ("1 - 2 - 3", 0.0, -4.0),
    ("6 / 3 / 2", 0.0, 1.0),
    ("2*x + x^2", 2.0, 8.0),
    ("pow(x, 3)", 2.0, 8.0),
    ("abs(-4)", 0.0, 4.0),
    ("sqrt(x)", 9.0, 3.0),
])
def test_evaluate_real(src, x, want):
    got = expr.evaluate(expr.parse(src), x)
    assert got == pytest.approx(want)
    assert isinstance(got, complex)


def test_evaluate_trig_and_logs():
    assert expr.evaluate(expr.parse("sin(x)^2 + cos(x)^2"), 0.83) == \
        pytest.approx(1.0)
    assert expr.evaluate(expr.parse("ln(exp(x))"), 1.7) == pytest.approx(1.7)


def test_complex_literals():
    v = expr.evaluate(expr.parse("(1+2i)*x"), 2.0)
    assert v == pytest.approx(2 + 4j)
    # "i" alone is the unit
    assert expr.evaluate(expr.parse("i^2"), 0.0) == pytest.approx(-1.0)


@pytest.mark.parametrize("src,offset", [
    ("3 + * 2", 4),
    ("foo(x)", 0),
    ("pi", 0),          # no named constants in the grammar
    ("sin()", 4),
    ("(1+2", 4),
])
def test_parse_errors_carry_offsets(src, offset):
    with pytest.raises(expr.ParseError) as err:
        expr.parse(src)
    assert err.value.offset == offset
    assert f"offset {offset}" in str(err.value)


def test_division_by_zero_is_eval_error():
    tree = expr.parse("1/x")
    with pytest.raises(expr.EvalError):
        expr.evaluate(tree, 0.0)


def test_as_callable_matches_scalar_eval():
    tree = expr.parse("x^2*sin(3*x) - exp(-x)")
    fn = expr.as_callable(tree)
    xs = np.linspace(0.1, 3.0, 17)
    vec = fn(xs)
    scal = np.array([expr.evaluate(tree, float(x)) for x in xs])
    np.testing.assert_allclose(vec, scal, rtol=1e-15, atol=0)


@given(st.data())
def test_pretty_roundtrip(data):
    """pretty() output reparses to a numerically identical tree."""
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1)))
    tree = expr.sample(rng)
    text = expr.pretty(tree)
    back = expr.parse(text)
    assert expr.pretty(back) == text
    for x in (0.3, 1.1, 2.7):
        a = expr.evaluate(tree, x)
        b = expr.evaluate(back, x)
        if any(map(math.isnan, (a.real, a.imag))):
            assert any(map(math.isnan, (b.real, b.imag)))
        elif math.isinf(abs(a)):
            assert a == b
        else:
            assert b == pytest.approx(a, rel=1e-12, abs=1e-12)
