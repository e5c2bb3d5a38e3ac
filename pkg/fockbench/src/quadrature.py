"""
Deterministic quadrature over the complex plane.

Plane integrals use a polar product rule: composite Gauss-Legendre radially and
the uniform trapezoid rule in angle. Integrals are truncated at a radius chosen
from a Gaussian tail certificate, an analytic majorant of the integrand supplied
by the caller. Path integrals run along the straight segment from 0.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize, special

from .defaults import (
    BASE_ORDER,
    CERT_CIRCLE_FACTORS,
    CERT_CIRCLE_POINTS,
    CERT_SLACK,
    MAX_ANGLES,
    MAX_DOUBLINGS,
    MAX_TOL,
    MIN_ANGLES,
    MIN_TOL,
    NORM_TOL,
    PANEL_WIDTH,
    PATH_BASE_PANELS,
    PATH_ORDER,
    SUP_ANGLES,
    SUP_RADIAL_POINTS,
)
from .errors import CertificateError, ConvergenceError, DomainError

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

# Smallest tail we ever aim for, in log space.
_LOG_FLOOR = math.log(1e-300)


# =============================================================================
# BOUNDS AND CERTIFICATES
# =============================================================================

@dataclass(frozen=True)
class GaussianBound:
    """Majorant |f(z)| <= A (1+|z|)^k e^{s|z|^2 + t|z|}, stored with log A."""

    log_A: float
    k: float = 0.0
    s: float = 0.0
    t: float = 0.0

    @classmethod
    def zero(cls) -> "GaussianBound":
        return cls(log_A=-math.inf)

    @classmethod
    def constant(cls, value: float) -> "GaussianBound":
        return cls(log_A=math.log(value) if value > 0 else -math.inf)

    @property
    def A(self) -> float:
        return math.exp(self.log_A) if self.log_A < 700 else math.inf

    @property
    def is_zero(self) -> bool:
        return self.log_A == -math.inf

    def __mul__(self, other: "GaussianBound") -> "GaussianBound":
        if self.is_zero or other.is_zero:
            return GaussianBound.zero()
        return GaussianBound(
            self.log_A + other.log_A,
            self.k + other.k,
            self.s + other.s,
            self.t + other.t,
        )

    def power(self, p: float) -> "GaussianBound":
        if self.is_zero:
            return self
        return GaussianBound(self.log_A * p, self.k * p, self.s * p, self.t * p)

    def scale(self, factor: float) -> "GaussianBound":
        if factor <= 0 or self.is_zero:
            return GaussianBound.zero()
        return GaussianBound(self.log_A + math.log(factor), self.k, self.s, self.t)

    def gaussian(self, s: float) -> "GaussianBound":
        """Multiply by e^{s|z|^2}."""
        return GaussianBound(self.log_A, self.k, self.s + s, self.t)

    def linear(self, t: float) -> "GaussianBound":
        """Multiply by e^{t|z|}."""
        return GaussianBound(self.log_A, self.k, self.s, self.t + t)

    def radial(self, k: float = 1.0) -> "GaussianBound":
        """Multiply by (1+|z|)^k."""
        return GaussianBound(self.log_A, self.k + k, self.s, self.t)

    def monotone(self) -> "GaussianBound":
        """A nondecreasing majorant in |z|, valid for sup over a disc."""
        return GaussianBound(
            self.log_A, max(self.k, 0.0), max(self.s, 0.0), max(self.t, 0.0)
        )

    def compose_linear(self, a_abs: float, b_abs: float) -> "GaussianBound":
        """
        Majorant of |f(u)| over all u with ||u| - a_abs|z|| <= b_abs.

        Covers f(psi(z)) for psi = az + b. Negative s or t keep their decay: for
        s < 0 we use s(a r - b)^2 <= s a^2 r^2 + 2|s| a b r.
        """
        if self.is_zero:
            return self
        k = max(self.k, 0.0)
        radial_factor = max(1.0, a_abs) + b_abs
        return GaussianBound(
            self.log_A + k * math.log(radial_factor) + max(self.s, 0.0) * b_abs**2 + abs(self.t) * b_abs,
            k,
            self.s * a_abs**2,
            2.0 * abs(self.s) * a_abs * b_abs + self.t * a_abs,
        )

    def log_value(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.log_A + self.k * np.log1p(r) + self.s * r**2 + self.t * r

    def to_certificate(self, weight: float) -> Optional["TailCertificate"]:
        """
        Certificate for bound(|z|) * e^{-weight|z|^2}.

        The linear term is absorbed into the Gaussian with half of the margin:
        t r <= eps r^2 + t^2 / (4 eps).

        Returns:
            TailCertificate, or None when the Gaussian margin is not positive
        """
        if self.is_zero:
            return TailCertificate(log_A=-math.inf, k=0.0, c=max(weight, 1.0))
        margin = weight - self.s
        if margin <= 0:
            return None
        eps = margin / 2.0
        log_A = self.log_A
        if self.t > 0:
            log_A += self.t**2 / (4.0 * eps)
        return TailCertificate(log_A=log_A, k=max(self.k, 0.0), c=margin - eps)


@dataclass(frozen=True)
class TailCertificate:
    """Bound |integrand(z)| <= A (1+|z|)^k e^{-c|z|^2} for |z| >= R0."""

    log_A: float
    k: float
    c: float
    R0: float = 0.0

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise CertificateError(f"certificate needs c > 0, got c={self.c}")
        if self.k < 0:
            raise CertificateError(f"certificate needs k >= 0, got k={self.k}")

    @property
    def A(self) -> float:
        return math.exp(self.log_A) if self.log_A < 700 else math.inf

    def log_bound(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.log_A + self.k * np.log1p(r) - self.c * r**2

    def log_tail(self, R: float) -> float:
        """
        Log of the closed-form mass of the bound outside |z| = R.

        Uses (1+r)^k <= m_k (1 + r^k) with m_k = max(1, 2^(k-1)), so the tail is
        a sum of two incomplete Gamma integrals.
        """
        if self.log_A == -math.inf:
            return -math.inf
        R = max(R, self.R0)
        c, k = self.c, self.k
        x = c * R * R
        log_m = max(0.0, (k - 1.0) * math.log(2.0))
        log_first = -x - math.log(2.0 * c)
        a = k / 2.0 + 1.0
        log_second = (
            _log_upper_gamma(a, x) - math.log(2.0) - a * math.log(c)
        )
        return (
            math.log(2.0 * math.pi)
            + log_m
            + self.log_A
            + np.logaddexp(log_first, log_second)
        )

    def truncation_radius(self, log_target: float) -> float:
        """Smallest radius whose tail mass is at most e^{log_target}."""
        log_target = max(log_target, _LOG_FLOOR)
        if self.log_tail(self.R0) <= log_target:
            return self.R0
        hi = max(self.R0, 1.0)
        while self.log_tail(hi) > log_target:
            hi *= 2.0
        lo = self.R0
        return float(
            optimize.brentq(
                lambda R: self.log_tail(R) - log_target, lo, hi, xtol=1e-6
            )
        )

    def verify(self, integrand: Field) -> None:
        """Sanity-check the bound on three circles; raises CertificateError."""
        if self.log_A == -math.inf:
            return
        base = max(self.R0, 1.0)
        theta = 2.0 * np.pi * np.arange(CERT_CIRCLE_POINTS) / CERT_CIRCLE_POINTS
        for factor in CERT_CIRCLE_FACTORS:
            radius = factor * base
            z = radius * np.exp(1j * theta)
            with np.errstate(over="ignore", invalid="ignore"):
                values = np.abs(integrand(z))
            allowed = self.log_bound(radius) + CERT_SLACK
            with np.errstate(divide="ignore"):
                observed = np.log(values)
            if np.any(~np.isfinite(values)) or np.any(observed > allowed):
                raise CertificateError(
                    f"certificate violated on |z|={radius:.4g}: "
                    f"max log|f|={float(np.nanmax(observed)):.6g} > {allowed:.6g}"
                )
        logger.debug("Certificate %s verified on sample circles", self)


def _log_upper_gamma(a: float, x: float) -> float:
    """log Gamma(a, x), stable when the regularized value underflows."""
    q = special.gammaincc(a, x)
    if q > 1e-280:
        return math.log(q) + special.gammaln(a)
    # Continued-fraction leading terms, an upper bound for large x.
    return (a - 1.0) * math.log(x) - x + math.log1p(max(a - 1.0, 0.0) / x)


# =============================================================================
# RESULT TYPES
# =============================================================================

@dataclass(frozen=True)
class QuadResult:
    """A plane integral with its error estimate and the grid that produced it."""

    value: complex
    error: float
    r_trunc: float
    order: int
    angles: int


@dataclass(frozen=True)
class SupResult:
    """
    Supremum of a nonnegative field.

    status is 'finite' when the certificate shows the sup is attained inside the
    scanned disc, 'lower-bound' when it does not, and 'unbounded-tail' when no
    certificate was available and the scan was refused.
    """

    value: float
    argmax: complex
    attained_inside: bool
    radius: float
    status: str
    resolution: float = 0.0


@dataclass(frozen=True)
class NormResult:
    """An L^p-type norm; status is 'finite', 'lower-bound' or 'diverges'."""

    value: float
    error: float = 0.0
    status: str = "finite"
    detail: str = ""

    @property
    def diverges(self) -> bool:
        return self.status == "diverges"

    @property
    def finite(self) -> bool:
        return self.status != "diverges"


# =============================================================================
# GRIDS
# =============================================================================

@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = special.roots_legendre(order)
    return nodes, weights


@dataclass
class PolarGrid:
    """Composite Gauss-Legendre panels on [0, R] times a uniform angular rule."""

    r_trunc: float
    order: int = BASE_ORDER
    angles: int = 2 * MIN_ANGLES
    panel_width: float = PANEL_WIDTH
    panels: List[Tuple[float, float]] = field(default_factory=list)
    breaks: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.angles < MIN_ANGLES or self.angles % 2:
            raise DomainError(f"angular count must be even and >= {MIN_ANGLES}")
        if not self.panels:
            count = max(1, math.ceil(self.r_trunc / self.panel_width))
            edges = set(np.linspace(0.0, self.r_trunc, count + 1).tolist())
            # radii where the integrand has a kink or jump become panel edges
            edges.update(b for b in self.breaks if 0.0 < b < self.r_trunc)
            ordered = sorted(edges)
            self.panels = [(float(a), float(b)) for a, b in zip(ordered[:-1], ordered[1:]) if b - a > 1e-12]

    def refined(self) -> "PolarGrid":
        return PolarGrid(
            r_trunc=self.r_trunc,
            order=2 * self.order,
            angles=min(2 * self.angles, MAX_ANGLES),
            panel_width=self.panel_width,
            panels=self.panels,
        )

    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles) / self.angles

    def panel_nodes(self, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
        x, w = gauss_legendre(self.order)
        half = 0.5 * (hi - lo)
        return lo + half * (x + 1.0), half * w

    def integrate(self, integrand: Field) -> complex:
        """Polar product rule; panel sums are combined with math.fsum."""
        if self.r_trunc <= 0:
            return 0.0
        theta = self.theta()
        phase = np.exp(1j * theta)
        d_theta = 2.0 * np.pi / self.angles
        real_parts: List[float] = []
        imag_parts: List[float] = []
        for lo, hi in self.panels:
            r, w = self.panel_nodes(lo, hi)
            z = r[:, None] * phase[None, :]
            values = np.asarray(integrand(z))
            ring = np.sum(values, axis=1) * d_theta
            total = np.sum(ring * w * r)
            real_parts.append(float(np.real(total)))
            imag_parts.append(float(np.imag(total)))
        return complex(math.fsum(real_parts), math.fsum(imag_parts))


def _check_tol(tol: float) -> None:
    if not MIN_TOL < tol < MAX_TOL:
        raise DomainError(f"tol must lie in ({MIN_TOL}, {MAX_TOL}), got {tol}")


def _initial_angles(r_trunc: float) -> int:
    count = max(2 * MIN_ANGLES, 2 * math.ceil(2.0 * r_trunc))
    return min(count + count % 2, MAX_ANGLES)


# =============================================================================
# PLANE INTEGRATION
# =============================================================================

def plane_integrate(
    integrand: Field,
    cert: TailCertificate,
    tol: float = NORM_TOL,
    base_order: int = BASE_ORDER,
    angles: Optional[int] = None,
    max_doublings: int = MAX_DOUBLINGS,
    breaks: Tuple[float, ...] = (),
) -> QuadResult:
    """
    Integrate a field over the plane against dm.

    Args:
        integrand: vectorised field, called on complex arrays
        cert: tail certificate majorising |integrand|
        tol: relative tolerance
        base_order: starting Gauss-Legendre order per radial panel
        angles: starting angular node count (even, >= 16)
        max_doublings: refinement cap
        breaks: radii where the integrand is not smooth

    Returns:
        QuadResult whose error includes the certified tail beyond r_trunc

    Raises:
        CertificateError: the bound fails on a sample circle
        ConvergenceError: estimates still disagree after max_doublings
    """
    _check_tol(tol)
    if cert.log_A == -math.inf:
        return QuadResult(0.0, 0.0, 0.0, base_order, angles or 2 * MIN_ANGLES)
    cert.verify(integrand)

    # Generous radius for a coarse first estimate, then the radius the estimate needs.
    r_wide = cert.truncation_radius(math.log(tol) + _LOG_FLOOR)
    coarse = PolarGrid(r_wide, base_order, angles or _initial_angles(r_wide), breaks=tuple(breaks))
    estimate = abs(coarse.integrate(integrand))
    log_target = math.log(0.5 * tol) + (
        math.log(estimate) if estimate > 0 else _LOG_FLOOR
    )
    r_trunc = cert.truncation_radius(log_target)
    logger.debug(
        "plane_integrate: coarse=%.6g r_wide=%.3f r_trunc=%.3f", estimate, r_wide, r_trunc
    )

    grid = PolarGrid(r_trunc, base_order, angles or _initial_angles(r_trunc), breaks=tuple(breaks))
    previous = grid.integrate(integrand)
    for step in range(max_doublings):
        grid = grid.refined()
        current = grid.integrate(integrand)
        diff = abs(current - previous)
        logger.debug(
            "plane_integrate: step=%d order=%d angles=%d value=%r diff=%.3g",
            step + 1, grid.order, grid.angles, current, diff,
        )
        if diff <= tol * abs(current) or (current == 0 and previous == 0):
            tail = math.exp(cert.log_tail(r_trunc)) if r_trunc > 0 else 0.0
            value = current.real if current.imag == 0 else current
            return QuadResult(value, diff + tail, r_trunc, grid.order, grid.angles)
        previous = current
    raise ConvergenceError(
        f"plane integral did not converge after {max_doublings} doublings "
        f"(last difference {diff:.3g})"
    )


def radial_oracle(
    profile: Callable[[float], float], tol: float = 1e-11, upper: float = np.inf
) -> float:
    """Independent 1-D check: 2 pi int_0^inf r profile(r) dr via adaptive quadrature."""
    value, error = integrate.quad(
        lambda r: r * profile(r), 0.0, upper, epsabs=0.0, epsrel=tol, limit=200
    )
    if error > 10 * tol * abs(value) + 1e-300:
        raise ConvergenceError(f"radial oracle error estimate {error:.3g} too large")
    return 2.0 * math.pi * value


def disc_integrate(
    integrand: Field, center: complex, radius: float, order: int = 32, angles: int = 64
) -> float:
    """Polar product rule on D(center, radius) for smooth integrands."""
    x, w = gauss_legendre(order)
    r = 0.5 * radius * (x + 1.0)
    theta = 2.0 * np.pi * np.arange(angles) / angles
    z = center + r[:, None] * np.exp(1j * theta)[None, :]
    ring = np.sum(np.asarray(integrand(z)) * np.ones(z.shape), axis=1) * (2.0 * np.pi / angles)
    return float(np.real(np.sum(ring * r * 0.5 * radius * w)))


# =============================================================================
# PATH INTEGRATION
# =============================================================================

def path_integrate_many(
    h: Field,
    endpoints: np.ndarray,
    tol: float = NORM_TOL,
    order: int = PATH_ORDER,
    max_doublings: int = MAX_DOUBLINGS,
    log_shift: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Integrate h along the segments [0, endpoint] for an array of endpoints.

    Composite Gauss-Legendre in the segment parameter; the panel count doubles
    until every endpoint's estimate agrees with the previous one to tol, relative
    to the larger of the result and the integral of |h|.

    Args:
        h: integrand, or its complex logarithm when log_shift is given
        endpoints: complex array of segment ends
        tol: relative tolerance
        order: Gauss-Legendre order per panel
        max_doublings: refinement cap
        log_shift: per-endpoint real shift; the integrand becomes
            exp(h(u) - log_shift) so huge values never materialise

    Raises:
        ConvergenceError: refinement cap reached
    """
    endpoints = np.asarray(endpoints, dtype=complex)
    shape = endpoints.shape
    flat = endpoints.ravel()
    shift = None if log_shift is None else np.asarray(log_shift, dtype=float).ravel()
    x, w = gauss_legendre(order)

    def composite(panels: int) -> Tuple[np.ndarray, np.ndarray]:
        total = np.zeros(flat.shape, dtype=complex)
        mass = np.zeros(flat.shape, dtype=float)
        for j in range(panels):
            lo, hi = j / panels, (j + 1) / panels
            t = lo + 0.5 * (hi - lo) * (x + 1.0)
            nodes = flat[:, None] * t[None, :]
            with np.errstate(over="ignore", invalid="ignore", under="ignore"):
                values = np.asarray(h(nodes)) * np.ones_like(nodes)
                if shift is not None:
                    values = np.exp(values - shift[:, None])
            values = np.where(np.isnan(values), 0.0, values)
            weights = 0.5 * (hi - lo) * w
            total = total + values @ weights
            mass = mass + np.abs(values) @ weights
        return total * flat, mass * np.abs(flat)

    panels = max(PATH_BASE_PANELS, math.ceil(float(np.max(np.abs(flat), initial=0.0)) / 2.0))
    previous, _ = composite(panels)
    for _ in range(max_doublings):
        panels *= 2
        current, mass = composite(panels)
        diff = np.abs(current - previous)
        scale = np.maximum(np.abs(current), 1e-3 * mass)
        if np.all(diff <= tol * scale):
            return current.reshape(shape)
        previous = current
    raise ConvergenceError(
        f"path integral did not converge after {max_doublings} doublings"
    )


def path_integrate(h: Field, endpoint: complex, tol: float = NORM_TOL) -> complex:
    """Integral of h along the segment from 0 to endpoint."""
    return complex(path_integrate_many(h, np.array([endpoint]), tol)[0])


# =============================================================================
# SUPREMA AND FIELD NORMS
# =============================================================================

def _scan(field: Field, radius: float, radial: int, angular: int) -> Tuple[float, complex]:
    r = np.linspace(0.0, radius, radial)
    theta = 2.0 * np.pi * np.arange(angular) / angular
    z = r[:, None] * np.exp(1j * theta)[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.asarray(field(z), dtype=float) * np.ones(z.shape)
    values = np.where(np.isnan(values), 0.0, values)
    index = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[index]), complex(z[index])


def _polish(field: Field, center: complex, step: float, rounds: int = 3) -> Tuple[float, complex]:
    best_value, best_point = float(np.real(field(np.array([center]))[0])), center
    offsets = np.linspace(-1.0, 1.0, 21)
    for _ in range(rounds):
        patch = best_point + step * (offsets[:, None] + 1j * offsets[None, :])
        with np.errstate(over="ignore", invalid="ignore"):
            values = np.asarray(field(patch), dtype=float) * np.ones(patch.shape)
        values = np.where(np.isnan(values), 0.0, values)
        index = np.unravel_index(int(np.argmax(values)), values.shape)
        if values[index] > best_value:
            best_value, best_point = float(values[index]), complex(patch[index])
        step /= 10.0
    return best_value, best_point


def sup_field(
    field: Field,
    cert: Optional[TailCertificate],
    radial: int = SUP_RADIAL_POINTS,
    angular: int = SUP_ANGLES,
    radius: float = 8.0,
) -> SupResult:
    """
    Supremum of a nonnegative field over the plane.

    The grid extends to the radius R* beyond which the certificate bound stays
    below the current grid maximum. The reported value is a grid lower bound,
    polished locally around the argmax.
    """
    if cert is None:
        logger.info("sup_field refused: no Gaussian tail certificate")
        return SupResult(math.inf, 0j, False, 0.0, "unbounded-tail")
    if cert.log_A == -math.inf:
        return SupResult(0.0, 0j, True, 0.0, "finite")

    value, point = _scan(field, radius, radial, angular)
    for _ in range(8):
        log_level = math.log(value) if value > 0 else _LOG_FLOOR
        r_star = bound_crossing(cert, log_level)
        if r_star <= radius:
            break
        radius = r_star
        value, point = _scan(field, radius, radial, angular)
    resolution = max(radius / (radial - 1), 2.0 * math.pi * radius / angular)
    value, point = _polish(field, point, resolution)
    r_star = bound_crossing(cert, math.log(value) if value > 0 else _LOG_FLOOR)
    attained = value > 0 and r_star <= radius
    status = "finite" if attained else "lower-bound"
    if not attained:
        logger.info("sup_field: sup %.6g is a lower bound only", value)
    return SupResult(value, point, attained, radius, status, resolution)


def bound_crossing(cert: TailCertificate, log_level: float) -> float:
    """Radius past which the certificate bound stays below e^{log_level}."""
    # The bound is decreasing beyond its peak at r with k/(1+r) = 2cr.
    peak = max(0.0, (-1.0 + math.sqrt(1.0 + 2.0 * cert.k / cert.c)) / 2.0)
    start = max(peak, cert.R0)
    if cert.log_bound(start) <= log_level:
        return start
    hi = max(start, 1.0)
    while cert.log_bound(hi) > log_level:
        hi *= 2.0
    return float(
        optimize.brentq(lambda r: float(cert.log_bound(r)) - log_level, start, hi)
    )


def lp_norm_field(
    field: Field,
    bound: Optional[GaussianBound],
    p: float,
    tol: float = NORM_TOL,
    weight: float = 0.0,
    base_order: int = BASE_ORDER,
    sup_grid: Tuple[int, int] = (SUP_RADIAL_POINTS, SUP_ANGLES),
    breaks: Tuple[float, ...] = (),
) -> NormResult:
    """
    L^p(C, dm) norm of a nonnegative field.

    Args:
        field: the field, already multiplied by any e^{-weight|z|^2} factor
        bound: majorant of the field without the e^{-weight|z|^2} factor
        p: exponent in (0, inf]
        tol: relative tolerance for p < inf
        weight: Gaussian weight the field carries
        base_order: starting radial order for p < inf
        sup_grid: (radial, angular) scan sizes for p = inf
        breaks: radii where the field is not smooth

    Returns:
        NormResult; 'diverges' when no certificate exists for the p-th power
    """
    if bound is None:
        return NormResult(math.inf, status="diverges", detail="no growth bound")
    if bound.is_zero:
        return NormResult(0.0)
    if math.isinf(p):
        cert = bound.to_certificate(weight)
        if cert is None:
            return NormResult(math.inf, status="diverges", detail="no Gaussian margin")
        sup = sup_field(field, cert, radial=sup_grid[0], angular=sup_grid[1])
        return NormResult(sup.value, sup.resolution, sup.status)
    cert = bound.power(p).to_certificate(weight * p)
    if cert is None:
        return NormResult(math.inf, status="diverges", detail="no Gaussian margin")
    result = plane_integrate(
        lambda z: np.abs(field(z)) ** p, cert, tol, base_order=base_order, breaks=breaks
    )
    integral = float(np.real(result.value))
    if integral <= 0:
        return NormResult(0.0, result.error)
    norm = integral ** (1.0 / p)
    return NormResult(norm, norm * result.error / (p * integral))
