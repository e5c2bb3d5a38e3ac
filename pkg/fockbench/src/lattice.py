"""
Lattices, disc measures and the Berezin-type transforms of plane measures.

Measures are densities h dm, or pushforwards (h dm) o psi^{-1} of a density by an
entire psi. A pushforward by a linear psi = az + b (a != 0) is again a density,
h((zeta - b)/a)/|a|^2, and is converted to one before any computation.

    mu_tilde_q(w) = (1+|w|)^q int e^{-alpha q |zeta - w|^2 / 2} dmu(zeta)
    D_rq(z)       = (1+|z|)^q mu(D(z, r))
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import optimize, spatial

from .defaults import (
    DISC_SUBDIVISION_DEPTH,
    DISC_TOL,
    LATTICE_NMAX,
    LATTICE_PROBES,
    LATTICE_SEED,
    LATTICE_TAIL_RATIO,
    NORM_TOL,
)
from .errors import CertificateError, ConvergenceError, DomainError
from .operators import SymbolPair
from .quadrature import (
    Field,
    GaussianBound,
    NormResult,
    PolarGrid,
    TailCertificate,
    bound_crossing,
    disc_integrate,
    gauss_legendre,
    lp_norm_field,
    plane_integrate,
)
from .symbols import EntireExpr, growth_bound, linear_form

logger = logging.getLogger(__name__)

# Fixed disc rule for vectorised disc measures of smooth densities
_DISC_ORDER = 24
_DISC_ANGLES = 48
_CHUNK = 4096


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class WeightedSpaceParams:
    """phi_q(z) = (1+|z|)^q and the outer exponent p of L^p_{phi_q}."""

    q: float
    p: float

    def __post_init__(self) -> None:
        if self.q < 0:
            raise DomainError(f"weight exponent q must be >= 0, got {self.q}")
        if not self.p > 0:
            raise DomainError(f"exponent p must be > 0, got {self.p}")


@dataclass(frozen=True)
class PlaneMeasure:
    """
    A density h dm, or its pushforward by psi.

    bound majorises h (its s may be negative); support/support_center describe
    a disc outside which h vanishes; level is the constant value of h on that
    disc when h is uniform there.
    """

    kind: str
    h: Field
    bound: Optional[GaussianBound]
    psi: Optional[EntireExpr] = None
    support: Optional[float] = None
    support_center: complex = 0j
    level: Optional[float] = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ("density", "pushforward"):
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if self.kind == "pushforward" and self.psi is None:
            raise DomainError("pushforward measure needs psi")

    @property
    def is_zero(self) -> bool:
        return self.bound is not None and self.bound.is_zero

    @property
    def breaks(self) -> Tuple[float, ...]:
        if self.support is not None and self.support_center == 0:
            return (self.support,)
        return ()

    def certificate(self) -> TailCertificate:
        """Certificate for h itself."""
        cert = None if self.bound is None else self.bound.to_certificate(0.0)
        if cert is None:
            raise CertificateError(f"measure {self.label or self.kind} has no Gaussian tail certificate")
        return cert

    def image(self, z: np.ndarray) -> np.ndarray:
        return z if self.psi is None else self.psi(z)

    def as_density(self) -> "PlaneMeasure":
        """Linear pushforwards become densities; everything else is returned unchanged."""
        if self.kind == "density" or self.psi is None:
            return self
        form = linear_form(self.psi)
        if form is None:
            return self
        a, b = form
        if a == 0:
            raise DomainError("a constant psi pushes the measure forward to a point mass")
        base = self.h
        jac = abs(a) ** 2
        bound = None
        if self.bound is not None:
            bound = self.bound.compose_linear(1.0 / abs(a), abs(b) / abs(a)).scale(1.0 / jac)
        return PlaneMeasure(
            "density",
            lambda zeta: base((np.asarray(zeta, dtype=complex) - b) / a) / jac,
            bound,
            support=None if self.support is None else abs(a) * self.support,
            support_center=a * self.support_center + b,
            level=None if self.level is None else self.level / jac,
            label=self.label,
        )


def density(
    h: Field,
    bound: GaussianBound,
    label: str = "",
    support: Optional[float] = None,
    level: Optional[float] = None,
) -> PlaneMeasure:
    return PlaneMeasure("density", h, bound, support=support, level=level, label=label)


def zero_measure() -> PlaneMeasure:
    return PlaneMeasure("density", lambda z: np.zeros(np.shape(z)), GaussianBound.zero(), label="0")


def gaussian_density(c: float = 1.0) -> PlaneMeasure:
    """e^{-c|z|^2} dm."""
    return PlaneMeasure(
        "density",
        lambda z: np.exp(-c * np.abs(z) ** 2),
        GaussianBound(0.0, 0.0, -c, 0.0),
        label=f"exp(-{c:g}|z|^2)",
    )


def disc_density(radius: float, level: float = 1.0) -> PlaneMeasure:
    """level * chi_{|z| <= radius} dm."""
    # level <= level e^{R^2 - |z|^2} on the support
    bound = GaussianBound(math.log(level) + radius**2, 0.0, -1.0, 0.0)
    return PlaneMeasure(
        "density",
        lambda z: level * (np.abs(z) <= radius).astype(float),
        bound,
        support=radius,
        level=level,
        label=f"chi(|z|<={radius:g})",
    )


def pushforward(base: PlaneMeasure, psi: EntireExpr) -> PlaneMeasure:
    if base.kind != "density":
        raise DomainError("only densities can be pushed forward")
    return replace(base, kind="pushforward", psi=psi, label=f"{base.label} o ({psi})^-1")


def pushforward_density(pair: SymbolPair, q: float, alpha: float) -> PlaneMeasure:
    """
    The measure mu_(g,psi): |g|^q (1+|z|)^{-q} e^{(alpha q/2)(|psi|^2 - |z|^2)} dm
    pushed forward by psi.
    """
    g, psi = pair.g, pair.psi

    def h(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        exponent = (
            q * g.log_abs(z)
            - q * np.log1p(np.abs(z))
            + 0.5 * alpha * q * (np.abs(psi(z)) ** 2 - np.abs(z) ** 2)
        )
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(exponent)

    bound = None
    form = linear_form(psi)
    g_bound = growth_bound(g)
    if form is not None and g_bound is not None:
        a, b = abs(form[0]), abs(form[1])
        psi_part = GaussianBound(0.5 * alpha * b * b, 0.0, 0.5 * alpha * a * a, alpha * a * b)
        bound = (g_bound * psi_part).power(q).gaussian(-0.5 * alpha * q)
    base = PlaneMeasure("density", h, bound, label=f"mu[{g},{psi}]")
    return pushforward(base, psi)


# =============================================================================
# DISC MEASURES
# =============================================================================

def lens_area(d: np.ndarray, r: float, S: float) -> np.ndarray:
    """Area of D(x, r) n D(y, S) for |x - y| = d."""
    d = np.asarray(d, dtype=float)
    full = math.pi * min(r, S) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        safe = np.maximum(d, 1e-300)
        a1 = np.clip((safe**2 + r * r - S * S) / (2 * safe * r), -1.0, 1.0)
        a2 = np.clip((safe**2 + S * S - r * r) / (2 * safe * S), -1.0, 1.0)
        kite = np.clip((-safe + r + S) * (safe + r - S) * (safe - r + S) * (safe + r + S), 0.0, None)
        partial = r * r * np.arccos(a1) + S * S * np.arccos(a2) - 0.5 * np.sqrt(kite)
    return np.where(d >= r + S, 0.0, np.where(d <= abs(S - r), full, partial))


def _cell_rule(f: Field, centers: np.ndarray, half: float, order: int) -> float:
    if len(centers) == 0:
        return 0.0
    x, w = gauss_legendre(order)
    nodes = centers[:, None, None] + half * (x[None, :, None] + 1j * x[None, None, :])
    weights = np.outer(w, w) * half * half
    return float(np.sum(np.asarray(f(nodes)) * weights[None, :, :]))


def subdivided_integral(
    h: Field,
    inside: Callable[[np.ndarray], np.ndarray],
    center: complex,
    half: float,
    depth: int = DISC_SUBDIVISION_DEPTH,
    initial: int = 16,
    order: int = 4,
) -> float:
    """
    int h chi_E over the square |Re|,|Im| <= half around center.

    Cells are split while the indicator of E changes on their 3x3 stencil; cells
    still cut by the boundary at the last level integrate h chi_E directly.
    """
    step = 2.0 * half / initial
    offsets = -half + step * (np.arange(initial) + 0.5)
    cells = (center + offsets[:, None] + 1j * offsets[None, :]).ravel()
    cell_half = 0.5 * step
    stencil = np.array([-1.0, 0.0, 1.0])
    parts = []
    for level in range(depth + 1):
        probe = cells[:, None, None] + cell_half * (stencil[None, :, None] + 1j * stencil[None, None, :])
        flags = np.asarray(inside(probe)).reshape(len(cells), 9)
        full = flags.all(axis=1)
        mixed = flags.any(axis=1) & ~full
        parts.append(_cell_rule(h, cells[full], cell_half, order))
        if level == depth or not mixed.any():
            parts.append(_cell_rule(lambda z: h(z) * inside(z), cells[mixed], cell_half, order))
            break
        quarter = 0.5 * cell_half
        shifts = np.array([-quarter - 1j * quarter, quarter - 1j * quarter, -quarter + 1j * quarter, quarter + 1j * quarter])
        cells = (cells[mixed][:, None] + shifts[None, :]).ravel()
        cell_half = quarter
    return math.fsum(parts)


def _smooth_disc(h: Field, center: complex, radius: float, tol: float) -> float:
    order, angles = _DISC_ORDER, _DISC_ANGLES
    previous = disc_integrate(h, center, radius, order, angles)
    for _ in range(4):
        order, angles = 2 * order, 2 * angles
        current = disc_integrate(h, center, radius, order, angles)
        if abs(current - previous) <= tol * max(abs(current), 1e-300):
            return current
        previous = current
    raise ConvergenceError(f"disc measure at {center} did not converge")


def disc_measure(mu: PlaneMeasure, center: complex, radius: float, tol: float = DISC_TOL) -> float:
    """
    mu(D(center, radius)).

    Raises:
        ConvergenceError: the disc rule did not settle
    """
    if radius <= 0:
        raise DomainError(f"radius must be > 0, got {radius}")
    mu = mu.as_density()
    if mu.is_zero:
        return 0.0
    if mu.kind == "density":
        if mu.support is None:
            return _smooth_disc(mu.h, center, radius, tol)
        if mu.level is not None:
            return float(mu.level * lens_area(abs(center - mu.support_center), radius, mu.support))
        S, sc = mu.support, mu.support_center

        def inside_density(z: np.ndarray) -> np.ndarray:
            return ((np.abs(z - center) <= radius) & (np.abs(z - sc) <= S)).astype(float)

        return subdivided_integral(mu.h, inside_density, center, radius)

    # nonlinear pushforward: integrate over the preimage in the source plane
    cert = mu.certificate()
    half = cert.truncation_radius(math.log(tol) + math.log(max(cert.A, 1e-300)))
    psi = mu.psi

    def inside_preimage(z: np.ndarray) -> np.ndarray:
        hit = np.abs(psi(z) - center) <= radius
        if mu.support is not None:
            hit &= np.abs(z - mu.support_center) <= mu.support
        return hit.astype(float)

    return subdivided_integral(mu.h, inside_preimage, 0j, max(half, 1.0))


def disc_measures(mu: PlaneMeasure, centers: np.ndarray, radius: float) -> np.ndarray:
    """Vectorised mu(D(c, radius)) over an array of centers."""
    centers = np.asarray(centers, dtype=complex)
    mu = mu.as_density()
    if mu.is_zero:
        return np.zeros(centers.shape)
    if mu.kind == "density" and mu.support is not None and mu.level is not None:
        return mu.level * lens_area(np.abs(centers - mu.support_center), radius, mu.support)
    if mu.kind == "density" and mu.support is None:
        x, w = gauss_legendre(_DISC_ORDER)
        rho = 0.5 * radius * (x + 1.0)
        theta = 2.0 * np.pi * np.arange(_DISC_ANGLES) / _DISC_ANGLES
        offsets = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
        weights = np.repeat(rho * 0.5 * radius * w, _DISC_ANGLES) * (2.0 * np.pi / _DISC_ANGLES)
        flat = centers.ravel()
        out = np.empty(flat.shape)
        for start in range(0, len(flat), _CHUNK):
            block = flat[start : start + _CHUNK]
            out[start : start + _CHUNK] = np.real(mu.h(block[:, None] + offsets[None, :])) @ weights
        return out.reshape(centers.shape)
    flat = [disc_measure(mu, complex(c), radius) for c in centers.ravel()]
    return np.array(flat).reshape(centers.shape)


def D_rq(mu: PlaneMeasure, q: float, r: float, z: complex) -> float:
    """(1+|z|)^q mu(D(z, r))."""
    return (1.0 + abs(z)) ** q * disc_measure(mu, z, r)


def D_rq_field(mu: PlaneMeasure, q: float, r: float) -> Field:
    return lambda z: (1.0 + np.abs(z)) ** q * disc_measures(mu, z, r)


def D_rq_bound(mu: PlaneMeasure, q: float, r: float) -> Optional[GaussianBound]:
    """sup of h over D(z, r) times the disc area, times (1+|z|)^q."""
    mu = mu.as_density()
    if mu.kind != "density" or mu.bound is None:
        return None
    return mu.bound.compose_linear(1.0, r).scale(math.pi * r * r).radial(q)


def _D_rq_breaks(mu: PlaneMeasure, r: float) -> Tuple[float, ...]:
    mu = mu.as_density()
    if mu.support is None or mu.support_center != 0:
        return ()
    return tuple(b for b in (mu.support - r, mu.support + r) if b > 0)


# =============================================================================
# BEREZIN-TYPE TRANSFORM
# =============================================================================

def mu_tilde(mu: PlaneMeasure, q: float, alpha: float, w: complex, tol: float = NORM_TOL) -> float:
    """
    (1+|w|)^q int e^{-alpha q |zeta - w|^2/2} dmu(zeta), integrated in the source plane.

    Raises:
        CertificateError: the measure has no tail certificate
    """
    if mu.is_zero:
        return 0.0
    cert = mu.certificate()
    factor = (1.0 + abs(w)) ** q
    h = mu.h

    def integrand(z: np.ndarray) -> np.ndarray:
        return factor * h(z) * np.exp(-0.5 * alpha * q * np.abs(mu.image(z) - w) ** 2)

    scaled = TailCertificate(cert.log_A + math.log(factor), cert.k, cert.c, cert.R0)
    result = plane_integrate(integrand, scaled, tol, breaks=mu.breaks)
    return float(np.real(result.value))


@dataclass
class _MeasureNodes:
    """Quadrature nodes of a measure: image points and their masses."""

    points: np.ndarray
    masses: np.ndarray

    @property
    def total(self) -> float:
        return math.fsum(self.masses.tolist())


def measure_nodes(mu: PlaneMeasure, tol: float = DISC_TOL, order: int = 24, angles: int = 96) -> _MeasureNodes:
    cert = mu.certificate()
    mass = plane_integrate(mu.h, cert, NORM_TOL, breaks=mu.breaks).value
    r_trunc = cert.truncation_radius(math.log(tol) + math.log(max(abs(mass), 1e-300)))
    grid = PolarGrid(r_trunc, order, angles, breaks=mu.breaks)
    phase = np.exp(1j * grid.theta())
    points, masses = [], []
    for lo, hi in grid.panels:
        r, w = grid.panel_nodes(lo, hi)
        z = (r[:, None] * phase[None, :]).ravel()
        weights = np.repeat(w * r, grid.angles) * (2.0 * np.pi / grid.angles)
        points.append(mu.image(z))
        masses.append(np.real(mu.h(z)) * weights)
    return _MeasureNodes(np.concatenate(points), np.concatenate(masses))


def mu_tilde_field(mu: PlaneMeasure, q: float, alpha: float) -> Field:
    """Vectorised mu_tilde_q on a fixed node set of the measure."""
    if mu.is_zero:
        return lambda w: np.zeros(np.shape(w))
    nodes = measure_nodes(mu)

    def field_(w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        flat = w.ravel()
        out = np.empty(flat.shape)
        for start in range(0, len(flat), _CHUNK // 4):
            block = flat[start : start + _CHUNK // 4]
            gauss = np.exp(-0.5 * alpha * q * np.abs(nodes.points[None, :] - block[:, None]) ** 2)
            out[start : start + _CHUNK // 4] = gauss @ nodes.masses
        return ((1.0 + np.abs(flat)) ** q * out).reshape(w.shape)

    return field_


def _log_radial_peak(bound: GaussianBound, s_half: float) -> float:
    """max over rho >= 0 of k log(1+rho) + s_half rho^2 + t rho, for s_half < 0."""
    k, t = max(bound.k, 0.0), bound.t

    def slope(rho: float) -> float:
        return k / (1.0 + rho) + 2.0 * s_half * rho + t

    if slope(0.0) <= 0:
        rho = 0.0
    else:
        hi = 1.0
        while slope(hi) > 0:
            hi *= 2.0
        rho = optimize.brentq(slope, 0.0, hi)
    return k * math.log1p(rho) + s_half * rho * rho + t * rho


def mu_tilde_bound(mu: PlaneMeasure, q: float, alpha: float) -> Optional[GaussianBound]:
    """
    Majorant of mu_tilde_q for densities with Gaussian decay.

    Near w the density is at most its sup over |zeta| >= |w|/2; away from w the
    kernel is at most e^{-alpha q |w|^2/8}.
    """
    mu = mu.as_density()
    if mu.is_zero:
        return GaussianBound.zero()
    if mu.kind != "density" or mu.bound is None or mu.bound.s >= 0 or q <= 0:
        return None
    b = mu.bound
    log_peak = _log_radial_peak(b, 0.5 * b.s)
    near = math.log(2.0 * math.pi / (alpha * q)) + b.log_A + log_peak
    far = mu.certificate().log_tail(0.0)
    rate = max(b.s / 8.0, -alpha * q / 8.0)
    return GaussianBound(float(np.logaddexp(near, far)), q, rate, 0.0)


# =============================================================================
# NORMS AND REPORTS
# =============================================================================

def _field_norm(field_: Field, bound: Optional[GaussianBound], p: float, tol: float, breaks: Tuple[float, ...] = ()) -> NormResult:
    return lp_norm_field(field_, bound, p, tol, base_order=8, sup_grid=(120, 64), breaks=breaks)


def weighted_lp_norm(mu: PlaneMeasure, params: WeightedSpaceParams, tol: float = DISC_TOL) -> NormResult:
    """||h phi_q||_{L^p} for a density h dm."""
    mu = mu.as_density()
    if mu.kind != "density":
        raise DomainError("weighted_lp_norm needs a density")
    bound = None if mu.bound is None else mu.bound.radial(params.q)
    q = params.q
    return _field_norm(lambda z: np.abs(mu.h(z)) * (1.0 + np.abs(z)) ** q, bound, params.p, tol, mu.breaks)


def _lp_sequence(values: np.ndarray, p: float) -> float:
    values = np.abs(np.asarray(values, dtype=float))
    if values.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(values))
    return math.fsum((values**p).tolist()) ** (1.0 / p)


def _ratio(a: float, b: float) -> float:
    if a == 0 and b == 0:
        return 1.0
    if b == 0:
        return math.inf
    return a / b


@dataclass
class EquivalenceReport:
    """||mu_tilde_q||_{L^p}, ||D_rq||_{L^p} and the lattice sequence norm."""

    q: float
    p: float
    r: float
    mu_tilde: NormResult
    d_rq: NormResult
    sequence: float
    ratios: Dict[str, float] = field(default_factory=dict)

    @property
    def window(self) -> float:
        """Largest pairwise ratio, folded so that it is >= 1."""
        folded = [max(v, 1.0 / v) if v > 0 else math.inf for v in self.ratios.values()]
        return max(folded) if folded else 1.0

    @property
    def membership(self) -> Tuple[bool, bool, bool]:
        return (self.mu_tilde.finite, self.d_rq.finite, math.isfinite(self.sequence))


def default_lattice_radius(mu: PlaneMeasure, r: float) -> float:
    """Radius beyond which the density bound stays under LATTICE_TAIL_RATIO of its peak, plus r."""
    dens = mu.as_density()
    cert = dens.certificate()
    peak_r = max(0.0, (-1.0 + math.sqrt(1.0 + 2.0 * cert.k / cert.c)) / 2.0)
    level = float(cert.log_bound(peak_r)) + math.log(LATTICE_TAIL_RATIO)
    radius = bound_crossing(cert, level)
    if dens.support is not None:
        radius = min(radius, abs(dens.support_center) + dens.support)
    return radius + r


def equivalence_report(
    mu: PlaneMeasure,
    q: float,
    p: float,
    r: float,
    lattice: Optional["Lattice"] = None,
    alpha: float = 1.0,
    tol: float = DISC_TOL,
) -> EquivalenceReport:
    """
    The three equivalent quantities of an r-lattice argument for mu.

    Raises:
        CertificateError: mu has no tail certificate
    """
    if mu.is_zero:
        zero = NormResult(0.0)
        return EquivalenceReport(q, p, r, zero, zero, 0.0, {"mu_tilde/D_rq": 1.0, "mu_tilde/sequence": 1.0, "D_rq/sequence": 1.0})
    dens = mu.as_density()
    if dens.kind != "density" or dens.bound is None:
        raise CertificateError(f"equivalence_report needs a certified density, got {mu.label}")
    lattice = lattice or make_lattice(r, default_lattice_radius(dens, r))

    tilde = _field_norm(mu_tilde_field(dens, q, alpha), mu_tilde_bound(dens, q, alpha), p, tol)
    d_norm = _field_norm(D_rq_field(dens, q, r), D_rq_bound(dens, q, r), p, tol, _D_rq_breaks(dens, r))
    nodes = lattice.points
    seq = _lp_sequence((1.0 + np.abs(nodes)) ** q * disc_measures(dens, nodes, r), p)
    ratios = {
        "mu_tilde/D_rq": _ratio(tilde.value, d_norm.value),
        "mu_tilde/sequence": _ratio(tilde.value, seq),
        "D_rq/sequence": _ratio(d_norm.value, seq),
    }
    logger.debug("equivalence_report %s q=%g p=%g r=%g: %s", mu.label, q, p, r, ratios)
    return EquivalenceReport(q, p, r, tilde, d_norm, seq, ratios)


@dataclass
class WeightedTransformReport:
    """||f||_{L^p_{phi_q}} against ||f_r||_{L^p} and ||f_tilde_q||_{L^p}."""

    weighted: NormResult
    f_r: NormResult
    f_tilde: NormResult

    @property
    def ratios(self) -> Dict[str, float]:
        return {
            "f_r/weighted": _ratio(self.f_r.value, self.weighted.value),
            "f_tilde/weighted": _ratio(self.f_tilde.value, self.weighted.value),
        }


def weighted_transform_report(f: PlaneMeasure, q: float, p: float, r: float, alpha: float = 1.0, tol: float = DISC_TOL) -> WeightedTransformReport:
    """The maps f -> f_r and f -> f_tilde_q measured on one density."""
    dens = f.as_density()
    weighted = weighted_lp_norm(dens, WeightedSpaceParams(q, p), tol)
    f_r = _field_norm(D_rq_field(dens, q, r), D_rq_bound(dens, q, r), p, tol, _D_rq_breaks(dens, r))
    f_tilde = _field_norm(mu_tilde_field(dens, q, alpha), mu_tilde_bound(dens, q, alpha), p, tol)
    return WeightedTransformReport(weighted, f_r, f_tilde)


# =============================================================================
# LATTICES
# =============================================================================

@dataclass
class Lattice:
    """Square lattice of spacing r sqrt(2), truncated to |z_j| <= R_lattice."""

    r: float
    spacing: float
    points: np.ndarray
    R_lattice: float

    def __len__(self) -> int:
        return len(self.points)

    def tree(self) -> spatial.cKDTree:
        return spatial.cKDTree(np.column_stack([self.points.real, self.points.imag]))


def make_lattice(r: float, R_lattice: float) -> Lattice:
    if not r > 0:
        raise DomainError(f"lattice parameter r must be > 0, got {r}")
    spacing = r * math.sqrt(2.0)
    n = math.ceil(R_lattice / spacing)
    m = np.arange(-n, n + 1)
    grid = (spacing * (m[:, None] + 1j * m[None, :])).ravel()
    points = grid[np.abs(grid) <= R_lattice + 1e-12]
    logger.debug("make_lattice r=%g R=%g: %d nodes", r, R_lattice, len(points))
    return Lattice(r, spacing, points, R_lattice)


def overlap_count(lattice: Lattice, point: complex, radius: float) -> int:
    """How many discs D(z_j, radius) contain point."""
    return int(np.count_nonzero(np.abs(lattice.points - point) < radius))


@dataclass
class LatticeCheck:
    r: float
    probes: int
    uncovered: int
    min_distance: float
    max_overlap: int
    n_max: int = LATTICE_NMAX

    @property
    def covering_ok(self) -> bool:
        return self.uncovered == 0

    @property
    def disjoint_ok(self) -> bool:
        return self.min_distance >= self.r * (1.0 - 1e-12)

    @property
    def nmax_ok(self) -> bool:
        return self.max_overlap <= self.n_max

    @property
    def ok(self) -> bool:
        return self.covering_ok and self.disjoint_ok and self.nmax_ok


def check_lattice(
    lattice: Lattice, probes: int = LATTICE_PROBES, seed: int = LATTICE_SEED, n_max: int = LATTICE_NMAX
) -> LatticeCheck:
    """Covering of |z| <= R - r by D(z_j, r), r/2-disjointness, and D(z_j, 2r) overlaps."""
    inner = lattice.R_lattice - lattice.r
    if inner <= 0:
        raise DomainError("lattice too small to cover anything: R_lattice <= r")
    rng = np.random.default_rng(seed)
    radius = inner * np.sqrt(rng.uniform(0.0, 1.0, probes))
    angle = rng.uniform(0.0, 2.0 * math.pi, probes)
    sample = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    tree = lattice.tree()
    nearest, _ = tree.query(sample)
    uncovered = int(np.count_nonzero(nearest > lattice.r * (1.0 + 1e-9)))
    pair_distance, _ = tree.query(tree.data, k=2)
    counts = tree.query_ball_point(sample, 2.0 * lattice.r, return_length=True)
    check = LatticeCheck(lattice.r, probes, uncovered, float(np.min(pair_distance[:, 1])), int(np.max(counts)), n_max)
    if not check.ok:
        logger.warning("lattice r=%g failed its checks: %s", lattice.r, check)
    return check
