"""
Tests for Fock norms and kernels in fock.py.

Covers:
- Closed-form monomial norms for several p and alpha
- Unit norm of the normalised kernels, including p = inf
- The Littlewood-Paley window over the standard family
- Nesting, pointwise-derivative and subharmonic invariants
"""

import math

import numpy as np
import pytest

from fockbench.src.errors import DomainError
from fockbench.src.fock import (
    FockFunction,
    FockParams,
    fock_function,
    fock_norm,
    littlewood_paley_rhs,
    lp_family,
    lp_window,
    monomial_norm,
    nesting_ratio,
    normalized_kernel,
    pointwise_derivative_bound_ratio,
    subharmonic_ratio,
)
from fockbench.src.symbols import monomial

KERNEL_POINTS = [complex(x, y) for x in (-2.8, 0.0, 2.8) for y in (-2.8, 0.0, 2.8)]


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_monomial_norms_match_closed_form(p, alpha):
    """||z^n||_p = ((2/(alpha p))^{np/2} Gamma(np/2 + 1))^{1/p} for n <= 6."""
    for n in range(7):
        f = FockFunction(monomial(n), alpha, f"z^{n}")
        result = fock_norm(f, p)
        expected = ((2.0 / (alpha * p)) ** (n * p / 2.0) * math.gamma(n * p / 2.0 + 1.0)) ** (1.0 / p)
        assert result.status == "finite"
        assert result.value == pytest.approx(expected, rel=1e-6)
        assert monomial_norm(n, p, alpha) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0, math.inf])
def test_constant_has_unit_norm(p):
    result = fock_norm(fock_function("1", 1.0), p, tol=1e-10)
    assert result.value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("p, alpha", [(2.0, -1.0), (2.0, 0.0), (-1.0, 1.0)])
def test_norm_rejects_arguments_outside_the_domain(p, alpha):
    with pytest.raises(DomainError):
        fock_norm(fock_function("z", 1.0), p, alpha)


def test_sum_of_mixed_growth_has_finite_norm():
    """||1 + e^z||_2^2 = 4 + sum_{n>=1} 1/n! = 3 + e for alpha = 1."""
    result = fock_norm(fock_function("1 + exp(z)", 1.0), 2.0)
    assert result.status == "finite"
    assert result.value == pytest.approx(math.sqrt(3.0 + math.e), rel=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_normalized_kernels_have_unit_norm(p, alpha):
    for w in KERNEL_POINTS:
        assert abs(w) <= 4.0
        result = fock_norm(normalized_kernel(w, alpha), p)
        assert result.value == pytest.approx(1.0, abs=1e-6), f"w={w}"


def test_unbounded_symbol_diverges():
    result = fock_norm(fock_function("exp(z^2)", 1.0), 2.0)
    assert result.diverges


def test_gauss_poly_norm_finite_below_threshold():
    """exp(c z^2) lies in F_1^2 exactly when |c| < 1/2."""
    assert fock_norm(fock_function("exp(0.2*z^2)", 1.0), 2.0).status == "finite"
    assert fock_norm(fock_function("exp(0.5*z^2)", 1.0), 2.0).diverges


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_littlewood_paley_window(p):
    """RHS/LHS stays within a factor 100 over the family and is stable under refinement."""
    family = lp_family(1.0)
    coarse = lp_window(family, p, 1.0, tol=1e-5)
    fine = lp_window(family, p, 1.0, tol=1e-7)
    assert len(coarse.ratios) == len(family)
    assert coarse.spread <= 100.0
    assert fine.spread == pytest.approx(coarse.spread, rel=0.05)


def test_littlewood_paley_rhs_of_constant():
    """f' = 0, so only |f(0)| survives."""
    assert littlewood_paley_rhs(fock_function("3", 1.0), 2.0).value == pytest.approx(3.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_nesting_ratio(n):
    """||f||_2 <= ||f||_1 for the normalised weights."""
    f = FockFunction(monomial(n), 1.0, f"z^{n}")
    ratio = nesting_ratio(f, 1.0, 2.0)
    assert ratio == pytest.approx(monomial_norm(n, 2.0, 1.0) / monomial_norm(n, 1.0, 1.0), rel=1e-6)
    assert ratio <= 1.0 + 1e-6


def test_nesting_ratio_requires_order():
    with pytest.raises(ValueError):
        nesting_ratio(fock_function("z", 1.0), 2.0, 1.0)


def test_pointwise_derivative_bound_for_kernels():
    for w in (1.0, 2.0 + 1.0j, -3.0j):
        samples = np.array([w, 0.5 * w, 0j])
        ratio = pointwise_derivative_bound_ratio(normalized_kernel(w, 1.0), 2.0, samples)
        assert 0.0 < ratio < 1.0


def test_subharmonic_ratio_is_bounded():
    samples = [0.5, 1.0 + 1.0j, -2.0, 3.0j]
    ratio = subharmonic_ratio(fock_function("z^3", 1.0), 2.0, samples)
    assert 0.0 < ratio < 10.0
    assert subharmonic_ratio(fock_function("7", 1.0), 2.0, samples) == 0.0


def test_params_validation_and_routing():
    assert FockParams(1.0, 2.0, 2.0).theorem == "theorem1"
    assert FockParams(1.0, 1.0, math.inf).theorem == "theorem1"
    assert FockParams(1.0, math.inf, 2.0).theorem == "theorem2"
    with pytest.raises(ValueError):
        FockParams(0.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        FockParams(1.0, 0.0, 2.0)
