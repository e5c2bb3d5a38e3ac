"""
Tests for the symbol parser in symbols.py.

Covers:
- Parsing and vectorised evaluation
- Canonical printing that reparses to the same function
- Syntax errors with positions
- Symbolic derivatives and composition
- Symbol classes, linear forms and growth majorants
"""

import math

import numpy as np
import pytest

from fockbench.src.errors import SymbolSyntaxError
from fockbench.src.symbols import (
    classify,
    compose,
    differentiate,
    growth_bound,
    linear_combination,
    linear_form,
    parse_symbol,
    to_text,
)

SAMPLES = np.array([0.0, 1.0, -0.5 + 0.75j, 1.5j, -2.0 - 1.0j])


def test_evaluates_polynomial():
    """z^2 + 1 at 2i is -3."""
    f = parse_symbol("z^2 + 1")
    assert f(np.array([2j]))[0] == pytest.approx(-3.0)


def test_unary_minus_binds_looser_than_power():
    assert parse_symbol("-z^2")(np.array([1.0]))[0] == pytest.approx(-1.0)


@pytest.mark.parametrize("text, expected", [("2.5i", 2.5j), ("i", 1j), ("3 - 2i", 3 - 2j), ("1e-1", 0.1)])
def test_numeric_literals(text, expected):
    assert parse_symbol(text)(np.array([0.0]))[0] == pytest.approx(expected)


@pytest.mark.parametrize(
    "text",
    [
        "z^2 + 1",
        "exp(0.25*z^2)",
        "-(z - 1)^3",
        "(1 + 2i)*z - exp(-z)",
        "z*(z + 1)*(z - 1i)",
        "exp(exp(0.1*z))",
        "-3.5",
        "z - (z^2 - z)",
    ],
)
def test_printer_round_trip(text):
    """to_text reparses to a function with bitwise identical values."""
    f = parse_symbol(text)
    again = parse_symbol(to_text(f))
    rng = np.random.default_rng(3)
    z = rng.uniform(-3.0, 3.0, 100) + 1j * rng.uniform(-3.0, 3.0, 100)
    assert np.array_equal(again(z), f(z))
    assert to_text(again) == to_text(f)


@pytest.mark.parametrize(
    "text, position",
    [
        ("z^-1", 2),
        ("sin(z)", 0),
        ("z^1.5", 2),
        ("(z + 1", 6),
        ("z + ", 4),
        ("2 $ z", 2),
    ],
)
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(SymbolSyntaxError) as info:
        parse_symbol(text)
    assert info.value.position == position


def test_empty_expression_rejected():
    with pytest.raises(SymbolSyntaxError):
        parse_symbol("   ")


def test_derivative_of_polynomial():
    df = differentiate(parse_symbol("z^3 - 2*z"))
    assert df(np.array([2.0]))[0] == pytest.approx(10.0)


def test_derivative_of_exponential():
    f = parse_symbol("exp(0.3*z)")
    df = differentiate(f)
    np.testing.assert_allclose(df(SAMPLES), 0.3 * f(SAMPLES), rtol=1e-13)


def test_derivative_matches_finite_difference():
    f = parse_symbol("z^2*exp(0.2*z^2) + (1 - i)*z")
    df = differentiate(f)
    h = 1e-6
    z = np.array([0.3 + 0.4j, -1.1 + 0.2j])
    numeric = (f(z + h) - f(z - h)) / (2 * h)
    np.testing.assert_allclose(df(z), numeric, rtol=1e-7)


def test_derivative_is_linear():
    f = parse_symbol("z^3*exp(0.1*z)")
    g = parse_symbol("exp(0.2*z^2) - 4*z")
    a, b = 1.5 - 2.0j, -0.75
    combined = differentiate(linear_combination(a, f, b, g))
    expected = a * differentiate(f)(SAMPLES) + b * differentiate(g)(SAMPLES)
    np.testing.assert_allclose(combined(SAMPLES), expected, rtol=1e-13, atol=1e-13)


def test_composition():
    f = compose(parse_symbol("z^2 + z"), parse_symbol("0.5*z"))
    assert f(np.array([2.0]))[0] == pytest.approx(2.0)


@pytest.mark.parametrize(
    "text, kind, degree",
    [
        ("0*z", "zero", 0),
        ("z - z", "zero", 0),
        ("2", "constant", 0),
        ("exp(0)*3", "constant", 0),
        ("z^3 - z", "polynomial", 3),
        ("exp(0.25*z^2)", "gauss-poly", 0),
        ("z*exp(z)", "gauss-poly", 1),
        ("exp(z^3)", "general", None),
        ("exp(exp(z))", "general", None),
        ("z + exp(z)", "general", None),
        ("z + 1e15", "polynomial", 1),
        ("z^3 + 1e15", "polynomial", 3),
        ("1e15*z^2 - 1e-3*z", "polynomial", 2),
        ("0.1*z + 0.2*z - 0.3*z", "zero", 0),
    ],
)
def test_classification(text, kind, degree):
    cls = classify(parse_symbol(text))
    assert cls.kind == kind
    if degree is not None:
        assert cls.degree == degree


@pytest.mark.parametrize(
    "text",
    [
        "7",
        "z^3 - z",
        "(z + 1)*(z - 2i)^2",
        "exp(0.5)*(z - 1)^2",
        "z^3 + 1e15",
        "z*exp(z)",
        "(z^2 + 1)*exp(0.25*z^2 - 0.5*z)",
    ],
)
def test_classification_agrees_on_interpolation_points(text):
    """The recognised closed form matches the symbol on 2d + 1 points of a circle."""
    f = parse_symbol(text)
    cls = classify(f)
    count = 2 * cls.degree + 1
    z = 1.5 * np.exp(2j * np.pi * np.arange(count) / count + 0.1j)
    np.testing.assert_allclose(cls.closed_form(z), f(z), rtol=1e-12)


def test_gauss_poly_coefficients_and_closed_form():
    f = parse_symbol("(z + 1)*exp(0.25*z^2 - 0.5*z)")
    cls = classify(f)
    assert cls.c2 == pytest.approx(0.25)
    assert cls.c1 == pytest.approx(-0.5)
    np.testing.assert_allclose(cls.closed_form(SAMPLES), f(SAMPLES), rtol=1e-13)


@pytest.mark.parametrize(
    "text, expected",
    [("0.5*z", (0.5, 0.0)), ("2*z + 1i", (2.0, 1j)), ("z", (1.0, 0.0)), ("3", (0.0, 3.0))],
)
def test_linear_form(text, expected):
    a, b = linear_form(parse_symbol(text))
    assert a == pytest.approx(expected[0])
    assert b == pytest.approx(expected[1])


@pytest.mark.parametrize("text", ["z^2", "exp(z)", "z*exp(0.1*z^2)"])
def test_linear_form_rejects_nonlinear(text):
    assert linear_form(parse_symbol(text)) is None


def test_growth_bound_polynomial():
    bound = growth_bound(parse_symbol("3*z^2 + 1"))
    assert bound.log_A == pytest.approx(math.log(4.0))
    assert bound.k == 2
    assert bound.s == 0


def test_growth_bound_majorises_gauss_poly():
    f = parse_symbol("(z - 2)*exp(0.25*z^2 + 0.5i*z)")
    bound = growth_bound(f)
    assert bound.s == pytest.approx(0.25)
    theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    for r in (0.5, 2.0, 6.0):
        z = r * np.exp(1j * theta)
        assert np.all(f.log_abs(z) <= bound.log_value(r) + 1e-12)


def test_large_constant_keeps_higher_coefficients():
    cls = classify(parse_symbol("z^3 + 1e15"))
    assert cls.poly == (1e15, 0j, 0j, 1 + 0j)


def test_growth_bound_general_is_none():
    assert growth_bound(parse_symbol("exp(exp(z))")) is None
    assert growth_bound(parse_symbol("1 + exp(z^3)")) is None


@pytest.mark.parametrize("text", ["1 + exp(z)", "z*(1 - exp(0.5*z^2))", "(exp(z) + z^2)^2"])
def test_growth_bound_majorises_general_symbols(text):
    f = parse_symbol(text)
    assert classify(f).kind == "general"
    bound = growth_bound(f)
    assert bound is not None
    theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    for r in (0.0, 0.5, 2.0, 6.0):
        z = r * np.exp(1j * theta)
        assert np.all(f.log_abs(z) <= bound.log_value(r) + 1e-12)
