"""
Fock spaces F_alpha^p: norms, reproducing kernels and Littlewood-Paley checks.

The Hermitian pairing <z, w> is z * conj(w) throughout. Norm integrands are
formed in log space, |f(z)| e^{-alpha|z|^2/2} = exp(log|f(z)| - alpha|z|^2/2), so
kernels far from the origin do not overflow.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .defaults import NORM_TOL
from .errors import DomainError
from .quadrature import NormResult, disc_integrate, lp_norm_field
from .symbols import (
    Const,
    EntireExpr,
    Exp,
    Product,
    Sum,
    Z,
    differentiate,
    exp_of,
    growth_bound,
    identity,
    monomial,
    parse_symbol,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FockParams:
    """(alpha, p, q); p and q may be math.inf."""

    alpha: float
    p: float
    q: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        for name in ("p", "q"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must lie in (0, inf], got {value}")

    @property
    def theorem(self) -> str:
        """'theorem1' when p <= q, 'theorem2' when q < p."""
        return "theorem1" if self.p <= self.q else "theorem2"


@dataclass(frozen=True)
class FockFunction:
    """An entire function together with the weight alpha it is normed against."""

    expr: EntireExpr
    alpha: float
    label: str = field(default="", compare=False)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return self.expr(z)

    def weighted(self, z: np.ndarray, alpha: Optional[float] = None) -> np.ndarray:
        """|f(z)| e^{-alpha|z|^2/2}, evaluated in log space."""
        a = self.alpha if alpha is None else alpha
        z = np.asarray(z, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(self.expr.log_abs(z) - 0.5 * a * np.abs(z) ** 2)


def fock_function(text: str, alpha: float) -> FockFunction:
    return FockFunction(parse_symbol(text), alpha, label=text)


def kernel(w: complex, alpha: float) -> FockFunction:
    """K_w(z) = e^{alpha z conj(w)}."""
    expr = exp_of(EntireExpr(Product((Const(alpha * np.conj(w)), Z))))
    return FockFunction(expr, alpha, label=f"K[{w}]")


def normalized_kernel(w: complex, alpha: float) -> FockFunction:
    """k_w(z) = e^{alpha z conj(w) - alpha|w|^2/2}, of unit norm in every F_alpha^p."""
    arg = Sum((Product((Const(alpha * np.conj(w)), Z)), Const(complex(-0.5 * alpha * abs(w) ** 2))))
    return FockFunction(EntireExpr(Exp(arg)), alpha, label=f"k[{w}]")


def fock_norm(
    f: FockFunction, p: float, alpha: Optional[float] = None, tol: float = NORM_TOL
) -> NormResult:
    """
    ||f||_{F_alpha^p}.

    For p < inf this is ((alpha p / 2 pi) int |f|^p e^{-alpha p|z|^2/2} dm)^{1/p};
    for p = inf it is sup |f(z)| e^{-alpha|z|^2/2}, flagged 'lower-bound' when the
    sup is not certified as attained.

    Returns:
        NormResult with status 'diverges' when the symbol grows too fast for a
        Gaussian tail certificate

    Raises:
        DomainError: alpha <= 0 or p <= 0
    """
    a = f.alpha if alpha is None else alpha
    FockParams(a, p, p)
    bound = growth_bound(f.expr)
    result = lp_norm_field(lambda z: f.weighted(z, a), bound, p, tol, weight=0.5 * a)
    if result.diverges:
        logger.info("fock_norm(%s, p=%s, alpha=%s) diverges: %s", f.label, p, a, result.detail)
        return result
    if math.isinf(p):
        return result
    factor = (a * p / (2.0 * math.pi)) ** (1.0 / p)
    return NormResult(result.value * factor, result.error * factor, result.status)


def littlewood_paley_rhs(
    f: FockFunction, p: float, alpha: Optional[float] = None, tol: float = NORM_TOL
) -> NormResult:
    """
    Derivative side of the Littlewood-Paley estimate.

    p < inf: (|f(0)|^p + int |f'|^p (1+|z|)^{-p} e^{-p alpha|z|^2/2} dm)^{1/p}
    p = inf: |f(0)| + sup |f'(z)| (1+|z|)^{-1} e^{-alpha|z|^2/2}
    """
    a = f.alpha if alpha is None else alpha
    derivative = FockFunction(differentiate(f.expr), a)
    at_zero = float(np.abs(f(np.array([0j]))[0]))

    def field(z: np.ndarray) -> np.ndarray:
        return derivative.weighted(z, a) / (1.0 + np.abs(z))

    result = lp_norm_field(field, growth_bound(derivative.expr), p, tol, weight=0.5 * a)
    if result.diverges:
        return result
    if math.isinf(p):
        return NormResult(at_zero + result.value, result.error, result.status)
    value = (at_zero**p + result.value**p) ** (1.0 / p)
    return NormResult(value, result.error, result.status)


def pointwise_derivative_bound_ratio(
    f: FockFunction, p: float, samples: np.ndarray, alpha: Optional[float] = None
) -> float:
    """max over samples of |f'(z)| / ((1+|z|) e^{alpha|z|^2/2} ||f||_p)."""
    a = f.alpha if alpha is None else alpha
    norm = fock_norm(f, p, a)
    if norm.diverges:
        raise DomainError(f"norm of {f.label} diverges in F^{p}")
    derivative = FockFunction(differentiate(f.expr), a)
    if derivative.expr.kind == "zero":
        return 0.0
    samples = np.asarray(samples, dtype=complex)
    ratios = derivative.weighted(samples, a) / (1.0 + np.abs(samples)) / norm.value
    return float(np.max(ratios))


def nesting_ratio(
    f: FockFunction, p: float, q: float, alpha: Optional[float] = None, tol: float = NORM_TOL
) -> float:
    """||f||_q / ||f||_p for p <= q; F^p sits inside F^q so this stays bounded."""
    if p > q:
        raise DomainError("nesting_ratio expects p <= q")
    lower = fock_norm(f, p, alpha, tol)
    upper = fock_norm(f, q, alpha, tol)
    if lower.diverges:
        return 0.0
    return upper.value / lower.value


def subharmonic_ratio(
    f: FockFunction,
    p: float,
    samples: Sequence[complex],
    radius: float = 1.0,
    alpha: Optional[float] = None,
) -> float:
    """
    max over samples of |f'(z)|^p e^{-alpha p|z|^2/2} / int_{D(z,r)} |f'|^p e^{-alpha p|w|^2/2} dm.

    The local subharmonic estimate says this is bounded by a constant C_r.
    """
    a = f.alpha if alpha is None else alpha
    derivative = FockFunction(differentiate(f.expr), a)
    if derivative.expr.kind == "zero":
        return 0.0
    best = 0.0
    for z in samples:
        point = float(derivative.weighted(np.array([z]), a)[0]) ** p
        local = disc_integrate(lambda w: derivative.weighted(w, a) ** p, complex(z), radius)
        if local > 0:
            best = max(best, point / local)
    return best


@dataclass
class LPWindow:
    """Measured two-sided Littlewood-Paley window over a function family."""

    p: float
    alpha: float
    ratios: Dict[str, float]

    @property
    def lower(self) -> float:
        return min(self.ratios.values())

    @property
    def upper(self) -> float:
        return max(self.ratios.values())

    @property
    def spread(self) -> float:
        return self.upper / self.lower


def lp_family(alpha: float, kernel_points: Iterable[complex] = (1, 2j, -2, 3 - 1j, -1 - 3j)) -> List[FockFunction]:
    """The family {1, z, z^2, exp(0.2 z^2), k_w}."""
    family = [
        FockFunction(parse_symbol("1"), alpha, "1"),
        FockFunction(identity(), alpha, "z"),
        FockFunction(monomial(2), alpha, "z^2"),
        FockFunction(parse_symbol("exp(0.2*z^2)"), alpha, "exp(0.2*z^2)"),
    ]
    family.extend(normalized_kernel(w, alpha) for w in kernel_points)
    return family


def lp_window(
    family: Sequence[FockFunction], p: float, alpha: float, tol: float = NORM_TOL
) -> LPWindow:
    """littlewood_paley_rhs / fock_norm for every family member."""
    ratios: Dict[str, float] = {}
    for f in family:
        lhs = fock_norm(f, p, alpha, tol)
        rhs = littlewood_paley_rhs(f, p, alpha, tol)
        if lhs.diverges or rhs.diverges:
            logger.warning("Skipping %s in LP window: norm diverges", f.label)
            continue
        ratios[f.label] = rhs.value / lhs.value
    return LPWindow(p, alpha, ratios)


def monomial_norm(n: int, p: float, alpha: float) -> float:
    """Closed form ||z^n||_p = ((2/(alpha p))^{np/2} Gamma(np/2 + 1))^{1/p} for p < inf."""
    if math.isinf(p):
        # sup r^n e^{-alpha r^2/2} at r^2 = n/alpha
        return (n / alpha) ** (n / 2.0) * math.exp(-n / 2.0) if n else 1.0
    log_value = (n * p / 2.0) * math.log(2.0 / (alpha * p)) + math.lgamma(n * p / 2.0 + 1.0)
    return math.exp(log_value / p)


def unit_monomials(top: int, p: float, alpha: float) -> List[Tuple[FockFunction, float]]:
    """(z^n, ||z^n||_p) for n <= top."""
    return [(FockFunction(monomial(n), alpha, f"z^{n}"), monomial_norm(n, p, alpha)) for n in range(top + 1)]
