"""
Integral, multiplication and composition-type operators induced by (g, psi).

    Vg      f -> int_0^z f g'
    Jg      f -> int_0^z f' g
    Mg      f -> g f
    Vg_psi  f -> int_0^z f(psi) g'
    Cg_psi  f -> int_0^{psi(z)} f g'
    J_g_psi f -> int_0^z f'(psi(u)) g(u) du
    C_g_psi f -> int_0^{psi(z)} f' g

Values come from straight-segment path integrals. Images are evaluated with the
Gaussian weight folded into the integrand, in log space, so norms of T k_w stay
finite far from the origin.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .defaults import (
    DECAY_FACTOR,
    FAMILY_ANGLES,
    FAMILY_MONOMIALS,
    FAMILY_RADII,
    FAMILY_RADIUS,
    PROBE_DOUBLINGS,
    PROBE_R0,
    TRANSFORM_TOL,
)
from .fock import FockFunction, FockParams, normalized_kernel, unit_monomials
from .parallel import parallel_map
from .quadrature import GaussianBound, NormResult, lp_norm_field, path_integrate_many
from .symbols import (
    EntireExpr,
    compose,
    differentiate,
    growth_bound,
    identity,
    linear_form,
    parse_symbol,
)

logger = logging.getLogger(__name__)


class OperatorKind(str, Enum):
    VG = "Vg"
    JG = "Jg"
    MG = "Mg"
    VG_PSI = "Vg_psi"
    CG_PSI = "Cg_psi"
    J_G_PSI = "J_g_psi"
    C_G_PSI = "C_g_psi"

    @property
    def uses_psi(self) -> bool:
        return self in (OperatorKind.VG_PSI, OperatorKind.CG_PSI, OperatorKind.J_G_PSI, OperatorKind.C_G_PSI)

    @property
    def endpoint_is_psi(self) -> bool:
        return self in (OperatorKind.CG_PSI, OperatorKind.C_G_PSI)


@dataclass(frozen=True)
class SymbolPair:
    """The inducing symbols (g, psi); psi = z for the single-symbol operators."""

    g: EntireExpr
    psi: EntireExpr = field(default_factory=identity)

    @classmethod
    def from_text(cls, g: str, psi: str = "z") -> "SymbolPair":
        return cls(parse_symbol(g), parse_symbol(psi))

    @property
    def psi_linear(self) -> Optional[Tuple[complex, complex]]:
        return linear_form(self.psi)

    @property
    def psi_is_identity(self) -> bool:
        return self.psi_linear == (1 + 0j, 0j)


def effective_pair(op: OperatorKind, pair: SymbolPair) -> SymbolPair:
    """Single-symbol operators ignore psi."""
    return pair if op.uses_psi else SymbolPair(pair.g, identity())


# =============================================================================
# APPLICATION
# =============================================================================

def _log_integrand(op: OperatorKind, pair: SymbolPair, f: EntireExpr) -> Callable[[np.ndarray], np.ndarray]:
    """Complex log of the path integrand of op applied to f."""
    g, psi = pair.g, pair.psi
    if op in (OperatorKind.VG, OperatorKind.CG_PSI):
        dg = differentiate(g)
        return lambda u: f.log(u) + dg.log(u)
    if op in (OperatorKind.JG, OperatorKind.C_G_PSI):
        df = differentiate(f)
        return lambda u: df.log(u) + g.log(u)
    if op is OperatorKind.VG_PSI:
        dg = differentiate(g)
        return lambda u: f.log(psi(u)) + dg.log(u)
    if op is OperatorKind.J_G_PSI:
        df = differentiate(f)
        return lambda u: df.log(psi(u)) + g.log(u)
    raise ValueError(f"{op.value} is not an integral operator")


def apply_weighted(
    op: OperatorKind,
    pair: SymbolPair,
    f: EntireExpr,
    z: np.ndarray,
    alpha: float = 0.0,
    tol: float = TRANSFORM_TOL,
) -> np.ndarray:
    """(T f)(z) e^{-alpha|z|^2/2} on a complex array, never forming T f itself."""
    z = np.asarray(z, dtype=complex)
    shift = 0.5 * alpha * np.abs(z) ** 2
    if op is OperatorKind.MG:
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            values = np.exp(pair.g.log(z) + f.log(z) - shift)
        return np.where(np.isnan(values), 0.0, values)
    if pair.g.kind == "zero":
        return np.zeros(z.shape, dtype=complex)
    endpoints = pair.psi(z) if op.endpoint_is_psi else z
    return path_integrate_many(_log_integrand(op, pair, f), endpoints, tol, log_shift=shift)


def apply(
    op: OperatorKind, pair: SymbolPair, f: FockFunction, z: complex, tol: float = 1e-10
) -> complex:
    """(T f)(z) for a single point."""
    return complex(apply_weighted(op, effective_pair(op, pair), f.expr, np.array([z]), 0.0, tol)[0])


def image_bound(op: OperatorKind, pair: SymbolPair, f: EntireExpr) -> Optional[GaussianBound]:
    """
    Growth majorant of T f.

    |int_0^z h| <= |z| max_{|u| <= |z|} |h(u)|, so a path integral adds one power
    of (1+|z|) to a monotone majorant of its integrand. Endpoint psi(z) needs a
    linear psi. Returns None when any factor has no majorant.
    """
    g, psi = pair.g, pair.psi
    if g.kind == "zero":
        return GaussianBound.zero()
    if op is OperatorKind.MG:
        return _product(growth_bound(g), growth_bound(f))
    if op is OperatorKind.VG:
        integrand = _product(growth_bound(f), growth_bound(differentiate(g)))
    elif op is OperatorKind.JG:
        integrand = _product(growth_bound(differentiate(f)), growth_bound(g))
    elif op is OperatorKind.VG_PSI:
        integrand = _product(growth_bound(compose(f, psi)), growth_bound(differentiate(g)))
    elif op is OperatorKind.J_G_PSI:
        integrand = _product(growth_bound(compose(differentiate(f), psi)), growth_bound(g))
    elif op is OperatorKind.CG_PSI:
        integrand = _product(growth_bound(f), growth_bound(differentiate(g)))
    else:
        integrand = _product(growth_bound(differentiate(f)), growth_bound(g))
    if integrand is None:
        return None
    bound = integrand.monotone().radial(1.0)
    if op.endpoint_is_psi:
        form = pair.psi_linear
        if form is None:
            return None
        bound = bound.compose_linear(abs(form[0]), abs(form[1]))
    return bound


def _product(a: Optional[GaussianBound], b: Optional[GaussianBound]) -> Optional[GaussianBound]:
    if a is not None and a.is_zero or b is not None and b.is_zero:
        return GaussianBound.zero()
    if a is None or b is None:
        return None
    return a * b


def image_norm(
    op: OperatorKind, pair: SymbolPair, f: EntireExpr, q: float, alpha: float, tol: float = TRANSFORM_TOL
) -> NormResult:
    """||T f||_{F_alpha^q}; 'diverges' when the image has no Gaussian certificate."""
    pair = effective_pair(op, pair)
    bound = image_bound(op, pair, f)

    def field(z: np.ndarray) -> np.ndarray:
        return np.abs(apply_weighted(op, pair, f, z, alpha, tol))

    result = lp_norm_field(field, bound, q, tol, weight=0.5 * alpha)
    if result.diverges or math.isinf(q):
        return result
    factor = (alpha * q / (2.0 * math.pi)) ** (1.0 / q)
    return NormResult(result.value * factor, result.error * factor, result.status)


# =============================================================================
# EMPIRICAL NORMS
# =============================================================================

@dataclass(frozen=True)
class FamilySpec:
    """Kernels k_w on a polar grid |w| <= W plus normalised monomials z^n, n <= N."""

    W: float = FAMILY_RADIUS
    radii: int = FAMILY_RADII
    angles: int = FAMILY_ANGLES
    monomials: int = FAMILY_MONOMIALS

    def kernel_points(self) -> List[complex]:
        points = [0j]
        for i in range(1, self.radii + 1):
            radius = self.W * i / self.radii
            for j in range(self.angles):
                points.append(complex(radius * np.exp(2j * np.pi * j / self.angles)))
        return points


@dataclass(frozen=True)
class FamilyMember:
    label: str
    function: FockFunction
    norm: float


def build_family(spec: FamilySpec, params: FockParams) -> List[FamilyMember]:
    """Members in family order; kernel norms are exactly 1, monomial norms closed form."""
    members = [FamilyMember(f"k[{w:.6g}]", normalized_kernel(w, params.alpha), 1.0) for w in spec.kernel_points()]
    for f, norm in unit_monomials(spec.monomials, params.p, params.alpha):
        members.append(FamilyMember(f.label, f, norm))
    return members


@dataclass
class EmpiricalNorm:
    """Lower bound on ||T||_{F^p -> F^q} with the member that attains it."""

    value: float
    witness: str
    diverges: bool = False
    ratios: Dict[str, float] = field(default_factory=dict)


def empirical_norm(
    op: OperatorKind,
    pair: SymbolPair,
    params: FockParams,
    family: FamilySpec = FamilySpec(),
    tol: float = TRANSFORM_TOL,
) -> EmpiricalNorm:
    """
    max over the family of ||T f||_q / ||f||_p.

    A member with divergent image norm makes the result 'diverges' with that
    member as witness. Ties keep the earliest member.
    """
    members = build_family(family, params)

    def ratio(member: FamilyMember) -> NormResult:
        return image_norm(op, pair, member.function.expr, params.q, params.alpha, tol)

    results = parallel_map(ratio, members)
    ratios: Dict[str, float] = {}
    best, witness = -1.0, ""
    for member, result in zip(members, results):
        if result.diverges:
            logger.info("empirical_norm: image of %s diverges", member.label)
            return EmpiricalNorm(math.inf, member.label, True, ratios)
        value = result.value / member.norm
        ratios[member.label] = value
        if value > best:
            best, witness = value, member.label
    return EmpiricalNorm(max(best, 0.0), witness, False, ratios)


def growth_table(
    op: OperatorKind,
    pair: SymbolPair,
    params: FockParams,
    radii: Sequence[float],
    angle: float = 0.0,
    tol: float = TRANSFORM_TOL,
) -> List[Tuple[float, float]]:
    """(|w|, ||T k_w||_q) along a ray; inf marks a divergent image."""
    def row(radius: float) -> Tuple[float, float]:
        w = complex(radius * np.exp(1j * angle))
        result = image_norm(op, pair, normalized_kernel(w, params.alpha).expr, params.q, params.alpha, tol)
        return float(radius), math.inf if result.diverges else result.value

    return parallel_map(row, list(radii))


def is_monotone_growth(table: Sequence[Tuple[float, float]]) -> bool:
    values = [value for _, value in table]
    return all(b > a for a, b in zip(values, values[1:]))


@dataclass
class CompactnessProbe:
    """||T k_w||_q along |w| = R0 2^n; decaying means a factor-10 drop."""

    decaying: bool
    table: List[Tuple[float, float]]
    diverges: bool = False


def probe_radii(r0: float = PROBE_R0, count: int = PROBE_DOUBLINGS) -> List[float]:
    return [r0 * 2**n for n in range(count)]


def compactness_probe(
    op: OperatorKind,
    pair: SymbolPair,
    params: FockParams,
    radii: Optional[Sequence[float]] = None,
    tol: float = TRANSFORM_TOL,
) -> CompactnessProbe:
    """Kernels escaping to infinity must be mapped to a null sequence by a compact T."""
    table = growth_table(op, pair, params, radii or probe_radii(), tol=tol)
    values = [value for _, value in table]
    if any(math.isinf(v) for v in values):
        return CompactnessProbe(False, table, diverges=True)
    first, last = values[0], values[-1]
    decaying = last == 0.0 or (first > 0 and last <= first / DECAY_FACTOR)
    return CompactnessProbe(decaying, table)


@dataclass
class CounterpartReport:
    """Empirical norms of a companion operator and its Li-Stevic counterpart."""

    companion: EmpiricalNorm
    counterpart: EmpiricalNorm

    @property
    def ratio(self) -> float:
        if self.companion.diverges or self.companion.value == 0:
            return math.inf if self.counterpart.value > 0 else 0.0
        return self.counterpart.value / self.companion.value


COUNTERPART_OF = {
    OperatorKind.J_G_PSI: OperatorKind.VG_PSI,
    OperatorKind.C_G_PSI: OperatorKind.CG_PSI,
}


def counterpart_check(
    op: OperatorKind,
    pair: SymbolPair,
    params: FockParams,
    family: FamilySpec = FamilySpec(),
    tol: float = TRANSFORM_TOL,
) -> CounterpartReport:
    """Bounded J_(g,psi) forces bounded V_g^psi; likewise C_(g,psi) and C_g^psi."""
    counterpart = COUNTERPART_OF[op]
    return CounterpartReport(
        companion=empirical_norm(op, pair, params, family, tol),
        counterpart=empirical_norm(counterpart, pair, params, family, tol),
    )
