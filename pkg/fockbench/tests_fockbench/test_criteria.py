"""
Tests for the characterising transforms and verdicts in criteria.py.

Covers:
- Exact verdicts for zero/constant symbols, the V_g degree rule and psi admissibility
- Growth and plateau evidence from B for the single-symbol companion
- p-independence of the p <= q diagnostics
- The scaling example with a Gaussian symbol and a contracting psi
- Pointwise transforms, Berezin values and emitted fields
"""

import math

import numpy as np
import pytest

from fockbench.src.criteria import (
    CRITERION_FIELDS,
    EXACT_NEGATIVE,
    EXACT_POSITIVE,
    INCONCLUSIVE,
    NEGATIVE,
    POSITIVE,
    CriterionGrid,
    berezin_B,
    classify_special,
    criterion_field,
    criterion_quantity,
    eval_M,
    eval_P_psi,
    eval_Q_g,
    integrability_exponent,
    leading_exponent,
    norm_window,
    psi_admissible,
    verdict_theorem1,
    verdict_theorem2,
)
from fockbench.src.fock import FockParams
from fockbench.src.operators import OperatorKind, SymbolPair
from fockbench.src.quadrature import radial_oracle

SMALL_GRID = CriterionGrid(w_radius=1.0, w_radii=1, w_angles=3, probe_r0=1.0, probe_count=4)
HILBERT = FockParams(1.0, 2.0, 2.0)


# =============================================================================
# EXACT ROUTES
# =============================================================================

def test_constant_symbol_is_bounded_not_compact():
    verdicts = classify_special(OperatorKind.JG, SymbolPair.from_text("2"), HILBERT)
    assert verdicts.bounded.route == "corollary1"
    assert verdicts.bounded.outcome == EXACT_POSITIVE
    assert verdicts.compact.outcome == EXACT_NEGATIVE


@pytest.mark.parametrize("op", list(OperatorKind))
def test_zero_symbol_is_compact(op):
    verdicts = classify_special(op, SymbolPair.from_text("0", "0.5*z"), FockParams(1.0, 2.0, math.inf))
    assert verdicts.bounded.outcome == EXACT_POSITIVE
    assert verdicts.compact.outcome == EXACT_POSITIVE


def test_constant_symbol_with_identity_psi_uses_corollary():
    verdicts = classify_special(OperatorKind.C_G_PSI, SymbolPair.from_text("3", "z"), HILBERT)
    assert verdicts.bounded.route == "corollary1"


@pytest.mark.parametrize(
    "g_text, bounded, compact",
    [
        ("z", EXACT_POSITIVE, EXACT_POSITIVE),
        ("z^2 + 1", EXACT_POSITIVE, EXACT_NEGATIVE),
        ("z^3", EXACT_NEGATIVE, EXACT_NEGATIVE),
    ],
)
def test_volterra_degree_rule(g_text, bounded, compact):
    verdicts = classify_special(OperatorKind.VG, SymbolPair.from_text(g_text), HILBERT)
    assert verdicts.bounded.route == "vg-degree-rule"
    assert verdicts.bounded.outcome == bounded
    assert verdicts.compact.outcome == compact


def test_large_constant_term_keeps_the_degree():
    assert classify_special(OperatorKind.JG, SymbolPair.from_text("z + 1e15"), HILBERT) is None
    verdicts = classify_special(OperatorKind.VG, SymbolPair.from_text("z^3 + 1e15"), HILBERT)
    assert verdicts.bounded.outcome == EXACT_NEGATIVE
    assert verdicts.bounded.diagnostics["degree"] == 3


def test_volterra_degree_rule_below_diagonal():
    verdicts = classify_special(OperatorKind.VG, SymbolPair.from_text("z^2"), FockParams(1.0, 4.0, 2.0))
    assert verdicts.bounded.outcome == EXACT_NEGATIVE
    assert classify_special(OperatorKind.VG, SymbolPair.from_text("exp(z)"), HILBERT) is None


def test_nonlinear_psi_is_inadmissible_at_q_inf():
    verdicts = classify_special(OperatorKind.J_G_PSI, SymbolPair.from_text("1", "z^2"), FockParams(1.0, 2.0, math.inf))
    assert verdicts.bounded.route == "psi-inadmissible"
    assert verdicts.bounded.outcome == EXACT_NEGATIVE
    assert verdicts.compact.outcome == EXACT_NEGATIVE


@pytest.mark.parametrize(
    "psi_text, expected",
    [("0.5*z", True), ("z", True), ("0.5*z + 3", True), ("z + 1", False), ("2*z", False), ("z^2", False)],
)
def test_psi_admissible(psi_text, expected):
    assert psi_admissible(SymbolPair.from_text("1", psi_text)) is expected


def test_positive_leading_exponent_is_exact_negative():
    """exp(z^2) outgrows the contraction 0.5z: 0.5(0.25 - 1) + 1 > 0."""
    pair = SymbolPair.from_text("exp(z^2)", "0.5*z")
    assert leading_exponent(pair, 1.0) == pytest.approx(0.625)
    verdicts = classify_special(OperatorKind.J_G_PSI, pair, FockParams(1.0, 2.0, math.inf))
    assert verdicts.bounded.route == "theorem1"
    assert verdicts.bounded.outcome == EXACT_NEGATIVE


# =============================================================================
# NUMERIC ROUTES
# =============================================================================

def test_identity_symbol_companion_grows():
    """J_z is unbounded: B grows monotonically along |w| = 1, 2, 4, 8."""
    pair = SymbolPair.from_text("z")
    assert classify_special(OperatorKind.JG, pair, HILBERT) is None
    verdicts = verdict_theorem1(OperatorKind.JG, pair, HILBERT, SMALL_GRID)
    table = verdicts.bounded.diagnostics["decay_table"]
    assert verdicts.bounded.diagnostics["decay_radii"] == [1.0, 2.0, 4.0, 8.0]
    assert all(b > a for a, b in zip(table, table[1:]))
    assert verdicts.bounded.outcome == NEGATIVE
    assert verdicts.compact.outcome == NEGATIVE


def test_constant_symbol_plateau_below_diagonal():
    params = FockParams(1.0, 2.0, 1.0)
    pair = SymbolPair.from_text("1")
    assert classify_special(OperatorKind.JG, pair, params) is None
    verdicts = verdict_theorem2(OperatorKind.JG, pair, params, SMALL_GRID)
    assert verdicts.bounded.outcome == NEGATIVE
    assert verdicts.bounded.diagnostics["integral"] == math.inf
    assert "plateau" in verdicts.bounded.diagnostics


def test_contracting_psi_is_integrable_below_diagonal():
    params = FockParams(1.0, 2.0, 1.0)
    grid = CriterionGrid(probe_r0=1.0, probe_count=4, integral_order=6, integral_angles=4)
    verdicts = verdict_theorem2(OperatorKind.J_G_PSI, SymbolPair.from_text("1", "0.5*z"), params, grid)
    assert verdicts.bounded.outcome == POSITIVE
    assert verdicts.compact.outcome == POSITIVE
    assert math.isfinite(verdicts.bounded.diagnostics["integral"])
    assert verdicts.bounded.diagnostics["tail_rate"] > 0


def test_theorem1_diagnostics_do_not_depend_on_p():
    pair = SymbolPair.from_text("1", "0.5*z")
    grid = CriterionGrid(w_radius=1.0, w_radii=1, w_angles=3, probe_r0=1.0, probe_count=3)
    verdicts = [verdict_theorem1(OperatorKind.J_G_PSI, pair, FockParams(1.0, p, 2.0), grid) for p in (0.5, 1.0, 2.0)]
    first = verdicts[0].to_dict()
    for other in verdicts[1:]:
        assert other.to_dict() == first


def test_theorem1_rejects_q_below_p():
    with pytest.raises(ValueError):
        verdict_theorem1(OperatorKind.JG, SymbolPair.from_text("z"), FockParams(1.0, 2.0, 1.0))
    with pytest.raises(ValueError):
        verdict_theorem2(OperatorKind.JG, SymbolPair.from_text("z"), HILBERT)


def test_gaussian_symbol_with_contraction_is_compact():
    """exp(0.25 z^2) with psi = 0.5z: M decays by far more than 10x between radii 2 and 64."""
    params = FockParams(1.0, 2.0, math.inf)
    pair = SymbolPair.from_text("exp(0.25*z^2)", "0.5*z")
    assert classify_special(OperatorKind.J_G_PSI, pair, params) is None
    verdicts = verdict_theorem1(OperatorKind.J_G_PSI, pair, params)
    diagnostics = verdicts.bounded.diagnostics
    assert diagnostics["decay_radii"][0] == 2.0
    assert diagnostics["decay_radii"][-1] == 64.0
    assert diagnostics["decay_ratio"] >= 10.0
    assert diagnostics["sup_status"] == "finite"
    assert verdicts.bounded.outcome == POSITIVE
    assert verdicts.compact.outcome == POSITIVE


def test_unbounded_tail_without_growth_is_inconclusive():
    params = FockParams(1.0, 2.0, math.inf)
    verdicts = verdict_theorem1(OperatorKind.J_G_PSI, SymbolPair.from_text("exp(exp(0.01*z))", "0.5*z"), params)
    assert verdicts.bounded.diagnostics["sup_status"] == "unbounded-tail"
    assert verdicts.bounded.outcome in (INCONCLUSIVE, NEGATIVE)


# =============================================================================
# TRANSFORMS AND FIELDS
# =============================================================================

def test_pointwise_transforms_at_origin():
    pair = SymbolPair.from_text("3", "0.5*z + 1")
    origin = np.array([0j])
    # P_psi(0) = e^{|psi(0)|^2/2}; M = |g| (|psi|+1) P_psi
    assert eval_P_psi(pair, 1.0, origin)[0] == pytest.approx(math.exp(0.5))
    assert eval_M(pair, 1.0, origin)[0] == pytest.approx(3.0 * 2.0 * math.exp(0.5))
    with pytest.raises(ValueError):
        eval_M(pair, 1.0, origin, "h")


def test_Q_g_damps_by_the_gaussian_weight():
    pair = SymbolPair.from_text("3")
    values = eval_Q_g(pair, 1.0, np.array([0j, 1 + 0j]))
    assert list(values) == pytest.approx([3.0, 1.5 * math.exp(-0.5)])


def test_berezin_at_origin_matches_radial_oracle():
    value = berezin_B(SymbolPair.from_text("1"), HILBERT, 0j, tol=1e-9)
    expected = radial_oracle(lambda r: math.exp(-r * r) / (1.0 + r) ** 2)
    assert value.finite
    assert value.value == pytest.approx(expected, rel=1e-7)


def test_berezin_special_cases():
    assert berezin_B(SymbolPair.from_text("0"), HILBERT, 1.0).value == 0.0
    assert berezin_B(SymbolPair.from_text("exp(z^3)"), HILBERT, 1.0).status == "diverges-or-unknown"
    assert not berezin_B(SymbolPair.from_text("1", "z^2"), HILBERT, 1.0).finite
    with pytest.raises(ValueError):
        berezin_B(SymbolPair.from_text("1"), FockParams(1.0, 2.0, math.inf), 1.0)


@pytest.mark.parametrize("p, q, expected", [(2.0, 1.0, 2.0), (4.0, 1.0, 4.0 / 3.0), (math.inf, 2.0, 1.0)])
def test_integrability_exponent(p, q, expected):
    assert integrability_exponent(FockParams(1.0, p, q)) == pytest.approx(expected)


@pytest.mark.parametrize("which", ["P_psi", "Q_g", "M_gpsi", "M_gpsipsi"])
def test_pointwise_fields(which):
    field = criterion_field(which, SymbolPair.from_text("z", "0.5*z"), HILBERT, radius=2.0, radii=2, angles=4)
    assert field.which == which
    assert len(field.rows()) == 1 + 2 * 4
    assert np.all(field.values >= 0)


def test_unknown_field_rejected():
    assert "B_g" in CRITERION_FIELDS
    with pytest.raises(ValueError):
        criterion_field("R_g", SymbolPair.from_text("z"), HILBERT)


def test_norm_window_uses_sup():
    params = FockParams(1.0, 2.0, math.inf)
    verdicts = verdict_theorem1(
        OperatorKind.J_G_PSI, SymbolPair.from_text("1", "0.5*z"), params, CriterionGrid(probe_count=3)
    )
    quantity = criterion_quantity(verdicts, params)
    assert quantity == verdicts.bounded.diagnostics["sup"]
    assert norm_window(verdicts, params, quantity / 2.0) == pytest.approx(2.0)
    assert norm_window(verdicts, params, 0.0) is None
