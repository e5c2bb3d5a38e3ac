"""
Characterising transforms and boundedness/compactness verdicts.

    P_psi(z)   = e^{(alpha/2)(|psi(z)|^2 - |z|^2)} / (1+|z|)
    Q_g(z)     = |g(z)| e^{-alpha|z|^2/2} / (1+|z|)
    M_(g,psi)  = |g(z)| (|psi(z)|+1) P_psi(z)          (variant 'g')
    M_(g(psi),psi) = |g(psi(z))| (|psi(z)|+1) P_psi(z) (variant 'g_psi')
    B(w) = int |k_w(psi(z))|^q ((|w|+1) Q(z))^q dm(z)

where the 'g_psi' Berezin variant uses |psi'(z)| Q_{g(psi)}(z). Exponents are
combined in log space; everything returned is nonnegative.

For p <= q boundedness is read off sup M (q = inf) or sup B (q < inf), and
compactness off their decay along doubling radii. For q < p it is the
integrability of B^s, s = 1 for p = inf and p/(p-q) otherwise.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .defaults import (
    B_GRID_ANGLES,
    B_GRID_RADII,
    B_GRID_RADIUS,
    DECAY_FACTOR,
    PLATEAU_SPREAD,
    PROBE_DOUBLINGS,
    PROBE_R0,
    TRANSFORM_TOL,
)
from .errors import ConvergenceError, DomainError
from .fock import FockParams
from .operators import OperatorKind, SymbolPair, effective_pair
from .parallel import parallel_map
from .quadrature import GaussianBound, TailCertificate, gauss_legendre, plane_integrate, sup_field
from .symbols import compose, differentiate, growth_bound

logger = logging.getLogger(__name__)

# Verdict outcomes
EXACT_POSITIVE = "exact-positive"
EXACT_NEGATIVE = "exact-negative"
POSITIVE = "positive-evidence"
NEGATIVE = "negative-evidence"
INCONCLUSIVE = "inconclusive"

CRITERION_FIELDS = ("P_psi", "Q_g", "M_gpsi", "M_gpsipsi", "B_g", "B_gpsi", "D_rq", "mu_tilde")


# =============================================================================
# POINTWISE TRANSFORMS
# =============================================================================

def log_P_psi(pair: SymbolPair, alpha: float, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    psi = pair.psi(z)
    return 0.5 * alpha * (np.abs(psi) ** 2 - np.abs(z) ** 2) - np.log1p(np.abs(z))


def eval_P_psi(pair: SymbolPair, alpha: float, z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.exp(log_P_psi(pair, alpha, z))


def log_Q_g(pair: SymbolPair, alpha: float, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return pair.g.log_abs(z) - 0.5 * alpha * np.abs(z) ** 2 - np.log1p(np.abs(z))


def eval_Q_g(pair: SymbolPair, alpha: float, z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.exp(log_Q_g(pair, alpha, z))


def log_M(pair: SymbolPair, alpha: float, z: np.ndarray, variant: str = "g") -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    psi = pair.psi(z)
    log_g = pair.g.log_abs(psi) if variant == "g_psi" else pair.g.log_abs(z)
    return log_g + np.log1p(np.abs(psi)) + log_P_psi(pair, alpha, z)


def eval_M(pair: SymbolPair, alpha: float, z: np.ndarray, variant: str = "g") -> np.ndarray:
    """M_(g,psi) (variant 'g') or M_(g(psi),psi) (variant 'g_psi')."""
    if variant not in ("g", "g_psi"):
        raise DomainError(f"unknown M variant {variant!r}")
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.exp(log_M(pair, alpha, z, variant))
    return np.where(np.isnan(values), 0.0, values)


def _psi_gaussian(pair: SymbolPair, alpha: float) -> Optional[Tuple[float, float, GaussianBound]]:
    """(|a|, |b|, majorant of e^{(alpha/2)|psi|^2}) for linear psi = az + b."""
    form = pair.psi_linear
    if form is None:
        return None
    a, b = abs(form[0]), abs(form[1])
    bound = GaussianBound(0.5 * alpha * b * b, 0.0, 0.5 * alpha * a * a, alpha * a * b)
    return a, b, bound


def _symbol_bound(pair: SymbolPair, variant: str) -> Optional[GaussianBound]:
    if variant == "g_psi":
        return growth_bound(compose(pair.g, pair.psi))
    return growth_bound(pair.g)


def M_bound(pair: SymbolPair, alpha: float, variant: str = "g") -> Optional[GaussianBound]:
    """Majorant of M without its e^{-alpha|z|^2/2} factor; None for nonlinear psi."""
    linear = _psi_gaussian(pair, alpha)
    g_bound = _symbol_bound(pair, variant)
    if linear is None or g_bound is None:
        return None
    a, b, gauss = linear
    radial = GaussianBound(math.log(max(a, 1.0 + b)), 1.0)
    return g_bound * radial * gauss


def M_certificate(pair: SymbolPair, alpha: float, variant: str = "g") -> Optional[TailCertificate]:
    bound = M_bound(pair, alpha, variant)
    return None if bound is None else bound.to_certificate(0.5 * alpha)


def leading_exponent(pair: SymbolPair, alpha: float, variant: str = "g") -> Optional[float]:
    """
    Gaussian growth rate of M for gauss-poly (or polynomial) g and linear psi:
    (alpha/2)(|a|^2 - 1) + |c2|, with c2 taken from g or g(psi).
    """
    form = pair.psi_linear
    cls = pair.g.symbol_class
    if form is None or cls.kind in ("general", "zero"):
        return None
    a = abs(form[0])
    c2 = abs(cls.c2) * (a * a if variant == "g_psi" else 1.0)
    return 0.5 * alpha * (a * a - 1.0) + c2


# =============================================================================
# BEREZIN-TYPE TRANSFORMS
# =============================================================================

@dataclass(frozen=True)
class BerezinValue:
    """B(w) with status 'finite' or 'diverges-or-unknown'."""

    value: float
    error: float = 0.0
    status: str = "finite"

    @property
    def finite(self) -> bool:
        return self.status == "finite"


def _berezin_log_integrand(pair: SymbolPair, alpha: float, q: float, w: complex, variant: str):
    dpsi = differentiate(pair.psi)
    log_w = -0.5 * alpha * abs(w) ** 2 + math.log1p(abs(w))

    def log_integrand(z: np.ndarray) -> np.ndarray:
        psi = pair.psi(z)
        kernel = alpha * np.real(psi * np.conj(w)) + log_w
        if variant == "g_psi":
            log_q = pair.g.log_abs(psi) + dpsi.log_abs(z)
        else:
            log_q = pair.g.log_abs(z)
        log_q = log_q - 0.5 * alpha * np.abs(z) ** 2 - np.log1p(np.abs(z))
        return q * (kernel + log_q)

    return log_integrand


def berezin_bound(pair: SymbolPair, alpha: float, w: complex, variant: str = "g") -> Optional[GaussianBound]:
    """Majorant of |k_w(psi)| (|w|+1) |g-factor| for linear psi, without e^{-alpha|z|^2/2}."""
    form = pair.psi_linear
    g_bound = _symbol_bound(pair, variant)
    if form is None or g_bound is None:
        return None
    a, b = abs(form[0]), abs(form[1])
    kernel = GaussianBound(alpha * abs(w) * b - 0.5 * alpha * abs(w) ** 2 + math.log1p(abs(w)), 0.0, 0.0, alpha * abs(w) * a)
    bound = kernel * g_bound
    if variant == "g_psi":
        bound = bound.scale(a)
    return bound


def berezin_B(
    pair: SymbolPair,
    params: FockParams,
    w: complex,
    variant: str = "g",
    tol: float = TRANSFORM_TOL,
) -> BerezinValue:
    """
    Certified plane integral B(w); 'diverges-or-unknown' when the integrand has
    no Gaussian tail certificate (general g, nonlinear psi, too much growth).
    """
    q, alpha = params.q, params.alpha
    if math.isinf(q):
        raise DomainError("berezin_B needs q < inf")
    if pair.g.kind == "zero":
        return BerezinValue(0.0)
    bound = berezin_bound(pair, alpha, w, variant)
    cert = None if bound is None else bound.power(q).to_certificate(0.5 * alpha * q)
    if cert is None:
        return BerezinValue(math.inf, status="diverges-or-unknown")
    log_integrand = _berezin_log_integrand(pair, alpha, q, w, variant)

    def integrand(z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(log_integrand(z))

    result = plane_integrate(integrand, cert, tol)
    return BerezinValue(float(np.real(result.value)), result.error)


# =============================================================================
# VERDICTS
# =============================================================================

@dataclass
class Verdict:
    """One answer (bounded or compact) with the numbers that justify it."""

    question: str
    route: str
    outcome: str
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.outcome in (EXACT_POSITIVE, EXACT_NEGATIVE)

    @property
    def positive(self) -> bool:
        return self.outcome in (EXACT_POSITIVE, POSITIVE)

    def to_dict(self) -> Dict[str, Any]:
        return {"question": self.question, "route": self.route, "outcome": self.outcome, "diagnostics": self.diagnostics}


@dataclass
class VerdictPair:
    bounded: Verdict
    compact: Verdict

    def to_dict(self) -> Dict[str, Any]:
        return {"bounded": self.bounded.to_dict(), "compact": self.compact.to_dict()}


@dataclass(frozen=True)
class CriterionGrid:
    """w-grid for B, doubling probe radii, and the product rule used for int B^s."""

    w_radius: float = B_GRID_RADIUS
    w_radii: int = B_GRID_RADII
    w_angles: int = B_GRID_ANGLES
    probe_r0: float = PROBE_R0
    probe_count: int = PROBE_DOUBLINGS
    integral_order: int = 12
    integral_angles: int = 8
    tol: float = TRANSFORM_TOL

    def w_points(self) -> List[complex]:
        points = [0j]
        for i in range(1, self.w_radii + 1):
            radius = self.w_radius * i / self.w_radii
            points.extend(complex(radius * np.exp(2j * np.pi * j / self.w_angles)) for j in range(self.w_angles))
        return points

    def probes(self) -> List[float]:
        return [self.probe_r0 * 2**n for n in range(self.probe_count)]


def _pair(route: str, bounded: str, compact: str, **diagnostics: Any) -> VerdictPair:
    return VerdictPair(
        Verdict("bounded", route, bounded, dict(diagnostics)),
        Verdict("compact", route, compact, dict(diagnostics)),
    )


def _exact(flag: bool) -> str:
    return EXACT_POSITIVE if flag else EXACT_NEGATIVE


def _nonconstant(pair: SymbolPair) -> bool:
    cls = pair.g.symbol_class
    if cls.kind in ("zero", "constant"):
        return False
    if cls.kind in ("polynomial", "gauss-poly"):
        return True
    samples = pair.g(np.array([0.0, 0.5 + 0.25j, -0.75 + 1.0j]))
    return bool(np.max(np.abs(samples - samples[0])) > 1e-12 * max(1.0, float(np.max(np.abs(samples)))))


def psi_admissible(pair: SymbolPair) -> bool:
    """psi = az + b with |a| <= 1, and b = 0 when |a| = 1."""
    form = pair.psi_linear
    if form is None:
        return False
    a, b = form
    if abs(a) > 1.0 + 1e-12:
        return False
    if abs(abs(a) - 1.0) <= 1e-12:
        return abs(b) <= 1e-12
    return True


def classify_special(op: OperatorKind, pair: SymbolPair, params: FockParams) -> Optional[VerdictPair]:
    """
    Exact verdicts from symbol classes, or None to fall through to numerics.

    Rules: the zero symbol gives the zero operator. J_g and M_g (including
    J_(g,psi), C_(g,psi) with psi = z) are bounded for constant g and compact
    only for g = 0. V_g is bounded iff deg g <= 2 and compact iff deg g <= 1
    (q < p: iff deg g <= 1). For J_(g,psi) with q = inf, psi must be az + b with
    |a| <= 1 (b = 0 when |a| = 1); a linear psi with a gauss-poly g whose M has
    a positive Gaussian growth rate is unbounded.
    """
    theorem1 = params.p <= params.q
    g_class = pair.g.symbol_class
    psi_identity = pair.psi_is_identity or not op.uses_psi
    if g_class.kind == "zero":
        return _pair("corollary1", EXACT_POSITIVE, EXACT_POSITIVE, g_class="zero")

    if op is OperatorKind.VG:
        if not g_class.is_polynomial:
            return None
        degree = g_class.degree or 0
        if theorem1:
            return _pair("vg-degree-rule", _exact(degree <= 2), _exact(degree <= 1), degree=degree)
        return _pair("vg-degree-rule", _exact(degree <= 1), _exact(degree <= 1), degree=degree)

    if op in (OperatorKind.JG, OperatorKind.MG) or (
        op in (OperatorKind.J_G_PSI, OperatorKind.C_G_PSI) and psi_identity
    ):
        if g_class.kind == "constant" and theorem1:
            return _pair("corollary1", EXACT_POSITIVE, EXACT_NEGATIVE, g_class="constant")
        return None

    if op is OperatorKind.J_G_PSI and math.isinf(params.q) and not psi_admissible(pair):
        return _pair("psi-inadmissible", EXACT_NEGATIVE, EXACT_NEGATIVE, psi=str(pair.psi))

    if op in (OperatorKind.J_G_PSI, OperatorKind.C_G_PSI) and math.isinf(params.q) and theorem1:
        variant = "g" if op is OperatorKind.J_G_PSI else "g_psi"
        exponent = leading_exponent(pair, params.alpha, variant)
        if exponent is not None and exponent > 0:
            return _pair("theorem1", EXACT_NEGATIVE, EXACT_NEGATIVE, leading_exponent=exponent)
    return None


def psi_growth(pair: SymbolPair, radii: Sequence[float], angles: int = 32) -> float:
    """max over probe circles of max |psi(z)| - |z|; positive values rule out boundedness at q = inf."""
    theta = 2.0 * np.pi * np.arange(angles) / angles
    best = -math.inf
    for radius in radii:
        z = radius * np.exp(1j * theta)
        best = max(best, float(np.max(np.abs(pair.psi(z)))) - radius)
    return best


def _decay_table(values: Sequence[float]) -> bool:
    first, last = values[0], values[-1]
    return last == 0.0 or (first > 0 and last <= first / DECAY_FACTOR)


def _circle_max(pair: SymbolPair, alpha: float, radius: float, variant: str, angles: int = 64) -> float:
    theta = 2.0 * np.pi * np.arange(angles) / angles
    return float(np.max(eval_M(pair, alpha, radius * np.exp(1j * theta), variant)))


def _variant(op: OperatorKind) -> str:
    return "g_psi" if op in (OperatorKind.C_G_PSI, OperatorKind.CG_PSI) else "g"


def verdict_theorem1(
    op: OperatorKind, pair: SymbolPair, params: FockParams, grid: CriterionGrid = CriterionGrid()
) -> VerdictPair:
    """
    p <= q. q = inf reads sup M and its decay on doubling circles; q < inf reads
    sup B over the w-grid and its decay along doubling radii. The exponent p is
    not used.
    """
    if params.p > params.q:
        raise DomainError("verdict_theorem1 expects p <= q")
    pair = effective_pair(op, pair)
    variant = _variant(op)
    probes = grid.probes()
    diagnostics: Dict[str, Any] = {"psi_growth": psi_growth(pair, probes)}
    if math.isinf(params.q):
        return _theorem1_sup(pair, params, variant, probes, diagnostics)
    return _theorem1_berezin(pair, params, variant, grid, diagnostics)


def _theorem1_sup(
    pair: SymbolPair, params: FockParams, variant: str, probes: List[float], diagnostics: Dict[str, Any]
) -> VerdictPair:
    alpha = params.alpha
    exponent = leading_exponent(pair, alpha, variant)
    if exponent is not None:
        diagnostics["leading_exponent"] = exponent
    decay = [_circle_max(pair, alpha, r, variant) for r in probes]
    diagnostics["decay_radii"] = probes
    diagnostics["decay_table"] = decay
    diagnostics["decay_ratio"] = decay[0] / decay[-1] if decay[-1] > 0 else math.inf
    decaying = _decay_table(decay)

    cert = M_certificate(pair, alpha, variant)
    sup = sup_field(lambda z: eval_M(pair, alpha, z, variant), cert)
    diagnostics["sup_status"] = sup.status
    if sup.status == "unbounded-tail":
        growing = all(b > a for a, b in zip(decay, decay[1:])) and decay[-1] >= DECAY_FACTOR * decay[0]
        bounded = NEGATIVE if growing else INCONCLUSIVE
        compact = NEGATIVE if not decaying else INCONCLUSIVE
        if not growing:
            diagnostics["sup_lower_bound"] = max(decay)
        return _pair("theorem1", bounded, compact, **diagnostics)
    diagnostics.update(sup=sup.value, argmax=[sup.argmax.real, sup.argmax.imag], attained_inside=sup.attained_inside)
    bounded = POSITIVE if sup.attained_inside else INCONCLUSIVE
    if bounded == POSITIVE:
        compact = POSITIVE if decaying else NEGATIVE
    else:
        compact = INCONCLUSIVE
    return _pair("theorem1", bounded, compact, **diagnostics)


def _berezin_many(pair: SymbolPair, params: FockParams, points: Sequence[complex], variant: str, tol: float) -> List[BerezinValue]:
    return parallel_map(lambda w: berezin_B(pair, params, w, variant, tol), list(points))


def _theorem1_berezin(
    pair: SymbolPair, params: FockParams, variant: str, grid: CriterionGrid, diagnostics: Dict[str, Any]
) -> VerdictPair:
    points = grid.w_points()
    probes = grid.probes()
    values = _berezin_many(pair, params, points + [complex(r) for r in probes], variant, grid.tol)
    for w, value in zip(points + [complex(r) for r in probes], values):
        if not value.finite:
            diagnostics["witness"] = [w.real, w.imag]
            return _pair("theorem1", NEGATIVE, NEGATIVE, **diagnostics)
    grid_values = [v.value for v in values[: len(points)]]
    probe_values = [v.value for v in values[len(points) :]]
    diagnostics.update(
        sup=max(grid_values + probe_values),
        argmax_index=int(np.argmax(grid_values + probe_values)),
        decay_radii=probes,
        decay_table=probe_values,
    )
    growing = all(b > a for a, b in zip(probe_values, probe_values[1:])) and probe_values[-1] >= DECAY_FACTOR * probe_values[0]
    if growing:
        return _pair("theorem1", NEGATIVE, NEGATIVE, **diagnostics)
    compact = POSITIVE if _decay_table(probe_values) else NEGATIVE
    return _pair("theorem1", POSITIVE, compact, **diagnostics)


def integrability_exponent(params: FockParams) -> float:
    """s = 1 for p = inf, p/(p-q) otherwise."""
    if math.isinf(params.p):
        return 1.0
    return params.p / (params.p - params.q)


def verdict_theorem2(
    op: OperatorKind, pair: SymbolPair, params: FockParams, grid: CriterionGrid = CriterionGrid()
) -> VerdictPair:
    """
    q < p: bounded iff compact iff B is in L^s.

    B is probed on doubling radii. A plateau means B^s is not integrable. A
    decaying tail is fitted with a Gaussian rate, which serves as the w-tail
    certificate for a product-rule integral of B^s; without decay or plateau
    the verdict is inconclusive.
    """
    if not params.q < params.p:
        raise DomainError("verdict_theorem2 expects q < p")
    pair = effective_pair(op, pair)
    variant = _variant(op)
    s = integrability_exponent(params)
    diagnostics: Dict[str, Any] = {"s": s}
    if math.isinf(params.p):
        diagnostics["q_independent"] = True
    probes = grid.probes()
    probe_values = _berezin_many(pair, params, [complex(r) for r in probes], variant, grid.tol)
    if not all(v.finite for v in probe_values):
        diagnostics["reason"] = "no certificate for B"
        return _pair("theorem2", INCONCLUSIVE, INCONCLUSIVE, **diagnostics)
    values = [v.value for v in probe_values]
    diagnostics.update(decay_radii=probes, decay_table=values)
    if all(v == 0.0 for v in values):
        diagnostics["integral"] = 0.0
        return _pair("theorem2", POSITIVE, POSITIVE, **diagnostics)
    if values[-1] >= PLATEAU_SPREAD * values[0] and values[0] > 0:
        diagnostics["plateau"] = values[-1]
        diagnostics["integral"] = math.inf
        return _pair("theorem2", NEGATIVE, NEGATIVE, **diagnostics)

    rate = _fitted_rate(probes, values)
    diagnostics["tail_rate"] = rate
    if rate is None:
        diagnostics["reason"] = "no w-tail certificate"
        return _pair("theorem2", INCONCLUSIVE, INCONCLUSIVE, **diagnostics)
    try:
        integral = _integrate_B_power(pair, params, variant, s, probes, values, rate, grid)
    except ConvergenceError as exc:
        diagnostics["reason"] = str(exc)
        return _pair("theorem2", INCONCLUSIVE, INCONCLUSIVE, **diagnostics)
    diagnostics["integral"] = integral
    outcome = POSITIVE if math.isfinite(integral) else NEGATIVE
    return _pair("theorem2", outcome, outcome, **diagnostics)


def _fitted_rate(radii: Sequence[float], values: Sequence[float]) -> Optional[float]:
    """Smallest Gaussian rate gamma with B(R_{n+1}) <= B(R_n) e^{-gamma (R_{n+1}^2 - R_n^2)}."""
    rates = []
    for (r0, v0), (r1, v1) in zip(zip(radii, values), zip(radii[1:], values[1:])):
        if v0 <= 0:
            continue
        if v1 <= 0:
            continue
        rates.append(-math.log(v1 / v0) / (r1 * r1 - r0 * r0))
    if not rates and values[-1] == 0.0:
        return 1.0
    positive = [r for r in rates if r > 0]
    if not rates or len(positive) < len(rates):
        return None
    return min(positive)


def _integrate_B_power(
    pair: SymbolPair,
    params: FockParams,
    variant: str,
    s: float,
    radii: Sequence[float],
    values: Sequence[float],
    rate: float,
    grid: CriterionGrid,
) -> float:
    """int B^s dm: Gauss-Legendre x trapezoid on |w| <= R_last, fitted Gaussian tail beyond."""
    r_max = radii[-1]
    x, weights = gauss_legendre(grid.integral_order)
    r = 0.5 * r_max * (x + 1.0)
    theta = 2.0 * np.pi * np.arange(grid.integral_angles) / grid.integral_angles
    points = [complex(ri * np.exp(1j * t)) for ri in r for t in theta]
    samples = _berezin_many(pair, params, points, variant, grid.tol)
    if not all(v.finite for v in samples):
        return math.inf
    b = np.array([v.value for v in samples]).reshape(len(r), len(theta))
    ring = np.sum(b**s, axis=1) * (2.0 * np.pi / grid.integral_angles)
    inner = float(np.sum(ring * r * 0.5 * r_max * weights))
    # B(w)^s <= B(R)^s e^{-s rate (|w|^2 - R^2)} beyond the last probe
    tail = math.pi * values[-1] ** s / (s * rate)
    return inner + tail


# =============================================================================
# FIELDS AND WINDOWS
# =============================================================================

@dataclass
class CriterionField:
    """Samples of one transform on a polar grid, ready for CSV emission."""

    which: str
    points: np.ndarray
    values: np.ndarray
    tail: Optional[TailCertificate] = None

    def rows(self) -> List[Tuple[float, float, float]]:
        return [(float(z.real), float(z.imag), float(v)) for z, v in zip(self.points, self.values)]


def polar_points(radius: float, radii: int, angles: int) -> np.ndarray:
    points = [0j]
    for i in range(1, radii + 1):
        rho = radius * i / radii
        points.extend(rho * np.exp(2j * np.pi * j / angles) for j in range(angles))
    return np.array(points, dtype=complex)


def criterion_field(
    which: str,
    pair: SymbolPair,
    params: FockParams,
    radius: float = B_GRID_RADIUS,
    radii: int = B_GRID_RADII,
    angles: int = B_GRID_ANGLES,
    r: float = 1.0,
) -> CriterionField:
    """Sample P_psi, Q_g, M_*, B_*, D_rq or mu_tilde (for the pair's pushforward measure)."""
    if which not in CRITERION_FIELDS:
        raise DomainError(f"unknown criterion field {which!r}; expected one of {CRITERION_FIELDS}")
    points = polar_points(radius, radii, angles)
    alpha = params.alpha
    tail: Optional[TailCertificate] = None
    if which == "P_psi":
        values = eval_P_psi(pair, alpha, points)
    elif which == "Q_g":
        values = eval_Q_g(pair, alpha, points)
    elif which in ("M_gpsi", "M_gpsipsi"):
        variant = "g" if which == "M_gpsi" else "g_psi"
        values = eval_M(pair, alpha, points, variant)
        tail = M_certificate(pair, alpha, variant)
    elif which in ("B_g", "B_gpsi"):
        variant = "g" if which == "B_g" else "g_psi"
        results = _berezin_many(pair, params, list(points), variant, TRANSFORM_TOL)
        values = np.array([v.value for v in results])
    else:
        from .lattice import D_rq, mu_tilde, pushforward_density

        q = params.q if math.isfinite(params.q) else 2.0
        measure = pushforward_density(pair, q, alpha)
        if which == "D_rq":
            values = np.array(parallel_map(lambda z: D_rq(measure, q, r, z), list(points)))
        else:
            values = np.array(parallel_map(lambda z: mu_tilde(measure, q, alpha, z), list(points)))
    return CriterionField(which, points, np.asarray(values, dtype=float), tail)


def criterion_quantity(verdicts: VerdictPair, params: FockParams) -> Optional[float]:
    """The norm-governing quantity: sup M, (sup B)^{1/q}, or (int B^s)^{1/(s q)}."""
    diagnostics = verdicts.bounded.diagnostics
    if verdicts.bounded.route == "theorem1" and "sup" in diagnostics:
        sup = diagnostics["sup"]
        return sup if math.isinf(params.q) else sup ** (1.0 / params.q)
    if verdicts.bounded.route == "theorem2" and math.isfinite(diagnostics.get("integral", math.inf)):
        s = diagnostics["s"]
        return diagnostics["integral"] ** (1.0 / (s * params.q))
    return None


def norm_window(verdicts: VerdictPair, params: FockParams, empirical_value: float) -> Optional[float]:
    """criterion quantity / empirical lower bound, for positive verdicts."""
    quantity = criterion_quantity(verdicts, params)
    if quantity is None or empirical_value <= 0 or not verdicts.bounded.positive:
        return None
    return quantity / empirical_value
