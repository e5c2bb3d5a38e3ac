"""
Tests for lattices, disc measures and the measure transforms in lattice.py.

Covers:
- Lattice construction, covering, disjointness and overlap bounds
- Disc measures of densities and pushforwards against closed forms
- mu_tilde against its Gaussian closed form
- The three-way equivalence window and its invariance under r
- The weighted-space comparison for f_r and f_tilde
"""

import math

import numpy as np
import pytest

from fockbench.src.lattice import (
    D_rq,
    check_lattice,
    disc_density,
    disc_measure,
    disc_measures,
    equivalence_report,
    gaussian_density,
    weighted_transform_report,
    lens_area,
    make_lattice,
    mu_tilde,
    mu_tilde_field,
    overlap_count,
    pushforward,
    zero_measure,
)
from fockbench.src.symbols import parse_symbol

DISC_MASS = math.pi * (1.0 - math.exp(-1.0))


def sample_measures():
    return {
        "gaussian": gaussian_density(1.0),
        "disc": disc_density(3.0),
        "pushforward": pushforward(gaussian_density(1.0), parse_symbol("2*z")),
    }


# =============================================================================
# LATTICES
# =============================================================================

def test_lattice_node_count():
    lattice = make_lattice(1.0, 5.0)
    assert len(lattice) == 37
    assert lattice.spacing == pytest.approx(math.sqrt(2.0))


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_lattice_soundness(r):
    check = check_lattice(make_lattice(r, 10.0 * r), probes=1000)
    assert check.covering_ok
    assert check.disjoint_ok
    assert check.nmax_ok
    assert check.ok


def test_overlap_count():
    lattice = make_lattice(1.0, 5.0)
    # the origin and its four neighbours at distance sqrt(2)
    assert overlap_count(lattice, 0j, 2.0) == 5


def test_lattice_argument_checks():
    with pytest.raises(ValueError):
        make_lattice(0.0, 5.0)
    with pytest.raises(ValueError):
        check_lattice(make_lattice(1.0, 1.0))


# =============================================================================
# DISC MEASURES
# =============================================================================

def test_lens_area():
    assert float(lens_area(0.0, 1.0, 3.0)) == pytest.approx(math.pi)
    assert float(lens_area(5.0, 1.0, 3.0)) == 0.0
    assert float(lens_area(1.0, 1.0, 1.0)) == pytest.approx(2.0 * math.pi / 3.0 - math.sqrt(3.0) / 2.0)


def test_disc_measure_of_gaussian():
    assert disc_measure(gaussian_density(1.0), 0j, 1.0) == pytest.approx(DISC_MASS, rel=1e-8)
    assert D_rq(gaussian_density(1.0), 1.0, 1.0, 0j) == pytest.approx(DISC_MASS, rel=1e-8)


def test_disc_measure_of_indicator_is_exact():
    mu = disc_density(3.0, level=2.0)
    assert disc_measure(mu, 0j, 1.0) == pytest.approx(2.0 * math.pi)
    assert disc_measure(mu, 10.0, 1.0) == 0.0


def test_linear_pushforward_disc_measure():
    """Pushing e^{-|z|^2} dm forward by 2z puts the mass of |z| <= 1 on |zeta| <= 2."""
    mu = pushforward(gaussian_density(1.0), parse_symbol("2*z"))
    assert disc_measure(mu, 0j, 2.0) == pytest.approx(DISC_MASS, rel=1e-7)


def test_nonlinear_pushforward_disc_measure():
    """z -> z^2 maps |z| <= 1 onto |zeta| <= 1."""
    mu = pushforward(gaussian_density(1.0), parse_symbol("z^2"))
    assert disc_measure(mu, 0j, 1.0) == pytest.approx(DISC_MASS, rel=1e-2)


def test_vectorised_disc_measures_match_single():
    mu = gaussian_density(1.0)
    centers = np.array([0j, 0.5 + 0.5j, -1.5])
    expected = [disc_measure(mu, c, 1.0) for c in centers]
    np.testing.assert_allclose(disc_measures(mu, centers, 1.0), expected, rtol=1e-6)


def test_disc_measure_rejects_bad_radius():
    with pytest.raises(ValueError):
        disc_measure(gaussian_density(1.0), 0j, 0.0)


def test_zero_measure():
    assert disc_measure(zero_measure(), 0j, 1.0) == 0.0
    assert mu_tilde(zero_measure(), 2.0, 1.0, 1.0) == 0.0
    report = equivalence_report(zero_measure(), 2.0, 2.0, 1.0)
    assert report.window == 1.0


# =============================================================================
# MU TILDE
# =============================================================================

@pytest.mark.parametrize("w", [0j, 1.0, 1.5 - 2.0j])
def test_mu_tilde_closed_form(w):
    """For e^{-|z|^2} dm, q = 2, alpha = 1: (1+|w|)^2 (pi/2) e^{-|w|^2/2}."""
    expected = (1.0 + abs(w)) ** 2 * 0.5 * math.pi * math.exp(-0.5 * abs(w) ** 2)
    mu = gaussian_density(1.0)
    assert mu_tilde(mu, 2.0, 1.0, w) == pytest.approx(expected, rel=1e-6)
    assert float(mu_tilde_field(mu, 2.0, 1.0)(np.array([w]))[0]) == pytest.approx(expected, rel=1e-6)


# =============================================================================
# EQUIVALENCE WINDOW
# =============================================================================

@pytest.mark.parametrize("name", ["gaussian", "disc", "pushforward"])
@pytest.mark.parametrize("q", [1.0, 2.0])
@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_equivalence_window(name, q, p):
    report = equivalence_report(sample_measures()[name], q, p, 1.0)
    assert report.membership == (True, True, True)
    for ratio in report.ratios.values():
        assert 1.0 / 100.0 <= ratio <= 100.0
    assert report.window <= 100.0


@pytest.mark.parametrize("name", ["gaussian", "disc", "pushforward"])
def test_membership_independent_of_r(name):
    mu = sample_measures()[name]
    memberships = {equivalence_report(mu, 2.0, 2.0, r).membership for r in (0.5, 1.0, 2.0)}
    assert len(memberships) == 1


def test_weighted_space_comparison():
    report = weighted_transform_report(gaussian_density(1.0), 2.0, 2.0, 1.0)
    assert report.weighted.finite
    for ratio in report.ratios.values():
        assert 1.0 / 100.0 <= ratio <= 100.0
