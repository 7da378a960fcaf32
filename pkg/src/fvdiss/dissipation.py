"""Scalar dissipation functions d(nu) for the Riemann-solver catalog.

Every scheme in the framework is characterized by a dimensionless function
d(nu) applied to the Courant numbers nu = lambda * dt/dx of the system's
waves.  The catalog covers the classical solvers

    upwind/Roe      d(nu) = |nu|
    Lax-Friedrichs  d(nu) = 1
    Rusanov (LLF)   d(nu) = max(|nu_min|, |nu_max|)
    HLL             d(nu) = chord of |nu| through nu_min, nu_max
    Lax-Wendroff    d(nu) = nu^2

and the hybrid family built from the interface wave-speed bounds:

    P2          HLL chord plus alpha * (nu - nu_min)(nu - nu_max), the
                monotone quadratic interpolating |nu| at both bounds and
                tangent at the dominant one
    d_omega     omega * nu^2 + (1 - omega) * |nu|
    HLL-omega   chord of d_omega through the bounds
    P2-omega    HLL-omega chord plus beta * (nu - nu_min)(nu - nu_max),
                identically omega * nu^2 + (1 - omega) * d_P2(nu)

All functions here are pure; the optional Diagnostics argument is an
explicit accumulator for degenerate-bounds fallbacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateBoundsError, UnsupportedKindError


class SolverKind(str, Enum):
    UPWIND = "upwind"
    LAX_FRIEDRICHS = "lax_friedrichs"
    RUSANOV = "rusanov"
    HLL = "hll"
    LAX_WENDROFF = "lax_wendroff"
    P2 = "p2"
    D_OMEGA = "d_omega"
    HLL_OMEGA = "hll_omega"
    P2_OMEGA = "p2_omega"


#: kinds whose d(nu) depends on the parameter omega
OMEGA_KINDS = frozenset({SolverKind.D_OMEGA, SolverKind.HLL_OMEGA, SolverKind.P2_OMEGA})

#: kinds whose d(nu) is a global polynomial in nu for fixed bounds
POLYNOMIAL_KINDS = frozenset({
    SolverKind.HLL, SolverKind.LAX_WENDROFF, SolverKind.P2,
    SolverKind.HLL_OMEGA, SolverKind.P2_OMEGA,
})

#: kinds whose coefficients divide by (nu_max - nu_min)
HLL_FAMILY = frozenset({
    SolverKind.HLL, SolverKind.P2, SolverKind.HLL_OMEGA, SolverKind.P2_OMEGA,
})


@dataclass
class Diagnostics:
    """Mergeable counters collected during flux assembly."""

    degenerate_fallbacks: int = 0
    jacobian_retries: int = 0

    def merge(self, other: "Diagnostics") -> "Diagnostics":
        self.degenerate_fallbacks += other.degenerate_fallbacks
        self.jacobian_retries += other.jacobian_retries
        return self


@dataclass(frozen=True)
class SolverSpec:
    """A solver kind plus its omega parameter (ignored by non-omega kinds)."""

    kind: SolverKind
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SolverKind(self.kind))
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")

    @property
    def label(self) -> str:
        """Stable identifier used in file names and figure legends."""
        if self.kind in OMEGA_KINDS:
            return f"{self.kind.value}_w{self.omega:.2f}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "SolverSpec":
        """Parse 'kind' or 'kind:omega', e.g. 'hll' or 'p2_omega:0.3'."""
        name, _, tail = text.strip().partition(":")
        try:
            kind = SolverKind(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in SolverKind)
            raise ValueError(f"unknown solver kind {name!r}; expected one of: {valid}")
        omega = float(tail) if tail else 0.0
        return cls(kind, omega)


@dataclass(frozen=True)
class NuBounds:
    """Courant numbers of the slowest and fastest waves at an interface."""

    nu_min: float
    nu_max: float

    def __post_init__(self):
        if not (math.isfinite(self.nu_min) and math.isfinite(self.nu_max)):
            raise ValueError(f"bounds must be finite, got ({self.nu_min}, {self.nu_max})")
        if self.nu_min > self.nu_max:
            raise ValueError(f"nu_min {self.nu_min} exceeds nu_max {self.nu_max}")

    @property
    def nu_bar(self) -> float:
        """Bound of larger magnitude; ties select nu_max."""
        return self.nu_max if abs(self.nu_max) >= abs(self.nu_min) else self.nu_min


@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of d(nu) = c0 + c1 nu + c2 nu^2."""

    c0: float
    c1: float
    c2: float

    def __call__(self, nu):
        return self.c0 + nu * (self.c1 + nu * self.c2)


# ---------------------------------------------------------------------------
# array kernels (shared with the vectorized flux path)
# ---------------------------------------------------------------------------

def degenerate_mask(nu_min, nu_max):
    """True where nu_max - nu_min is below the relative degeneracy threshold."""
    scale = np.maximum(1.0, np.maximum(np.abs(nu_min), np.abs(nu_max)))
    return (nu_max - nu_min) <= 1e-12 * scale


def rusanov_value(nu_min, nu_max):
    return np.maximum(np.abs(nu_min), np.abs(nu_max))


def _chord(y_lo, y_hi, lo, hi):
    """Intercept and slope of the line through (lo, y_lo) and (hi, y_hi)."""
    slope = (y_hi - y_lo) / (hi - lo)
    return y_lo - slope * lo, slope


def _alpha_raw(lo, hi):
    span = hi - lo
    return (span - np.abs(np.abs(hi) - np.abs(lo))) / (span * span)


def _p2_coeffs_raw(lo, hi):
    b0, b1 = _chord(np.abs(lo), np.abs(hi), lo, hi)
    a = _alpha_raw(lo, hi)
    return b0 + a * lo * hi, b1 - a * (lo + hi), a


def _hll_omega_coeffs_raw(omega, lo, hi):
    b0, b1 = _chord(omega * lo * lo + (1.0 - omega) * np.abs(lo),
                    omega * hi * hi + (1.0 - omega) * np.abs(hi), lo, hi)
    return b0, b1, np.zeros_like(np.asarray(b0, dtype=float))


def poly_coeffs_arrays(kind, omega, nu_min, nu_max):
    """(c0, c1, c2, degenerate) arrays for a polynomial-form kind.

    Degenerate lanes of the HLL family carry the Rusanov constant
    (c0 = max(|nu_min|, |nu_max|), c1 = c2 = 0); Lax-Wendroff never
    degenerates.
    """
    lo = np.asarray(nu_min, dtype=float)
    hi = np.asarray(nu_max, dtype=float)
    if kind is SolverKind.LAX_WENDROFF:
        zero = np.zeros_like(lo)
        return zero, zero, np.ones_like(lo), np.zeros_like(lo, dtype=bool)
    if kind not in HLL_FAMILY:
        raise UnsupportedKindError(f"{kind.value} has no global polynomial form in nu")

    degenerate = degenerate_mask(lo, hi)
    safe_hi = np.where(degenerate, lo + 1.0, hi)
    if kind is SolverKind.HLL:
        c0, c1 = _chord(np.abs(lo), np.abs(safe_hi), lo, safe_hi)
        c2 = np.zeros_like(c0)
    elif kind is SolverKind.P2:
        c0, c1, c2 = _p2_coeffs_raw(lo, safe_hi)
    elif kind is SolverKind.HLL_OMEGA:
        c0, c1, c2 = _hll_omega_coeffs_raw(omega, lo, safe_hi)
    else:  # P2_OMEGA: omega-blend of Lax-Wendroff and P2 coefficients
        p0, p1, p2 = _p2_coeffs_raw(lo, safe_hi)
        c0 = (1.0 - omega) * p0
        c1 = (1.0 - omega) * p1
        c2 = omega + (1.0 - omega) * p2

    fallback = rusanov_value(lo, hi)
    c0 = np.where(degenerate, fallback, c0)
    c1 = np.where(degenerate, 0.0, c1)
    c2 = np.where(degenerate, 0.0, c2)
    return c0, c1, c2, degenerate


def eval_d_arrays(kind, omega, nu, nu_min, nu_max):
    """Vectorized d(nu); returns (values, degenerate mask)."""
    nu = np.asarray(nu, dtype=float)
    no_fallback = np.zeros_like(nu, dtype=bool)
    if kind is SolverKind.UPWIND:
        return np.abs(nu), no_fallback
    if kind is SolverKind.LAX_FRIEDRICHS:
        return np.ones_like(nu), no_fallback
    if kind is SolverKind.RUSANOV:
        return np.broadcast_to(rusanov_value(nu_min, nu_max), nu.shape).copy(), no_fallback
    if kind is SolverKind.LAX_WENDROFF:
        return nu * nu, no_fallback
    if kind is SolverKind.D_OMEGA:
        return omega * nu * nu + (1.0 - omega) * np.abs(nu), no_fallback
    if kind is SolverKind.P2_OMEGA:
        # value-level blend keeps omega=0 bit-identical to P2 and omega=1 exact
        base, degenerate = eval_d_arrays(SolverKind.P2, 0.0, nu, nu_min, nu_max)
        blend = omega * nu * nu + (1.0 - omega) * base
        return np.where(degenerate, base, blend), degenerate
    c0, c1, c2, degenerate = poly_coeffs_arrays(kind, omega, nu_min, nu_max)
    return c0 + nu * (c1 + nu * c2), np.broadcast_to(degenerate, nu.shape)


# ---------------------------------------------------------------------------
# public scalar API
# ---------------------------------------------------------------------------

def eval_d(spec: SolverSpec, nu: float, bounds: NuBounds,
           diagnostics: Diagnostics | None = None) -> float:
    """Evaluate the dissipation function of `spec` at Courant number `nu`.

    HLL-family kinds with degenerate bounds fall back to the Rusanov value
    max(|nu_min|, |nu_max|); the fallback is counted in `diagnostics` and
    never raises.
    """
    value, degenerate = eval_d_arrays(spec.kind, spec.omega, nu,
                                      bounds.nu_min, bounds.nu_max)
    if diagnostics is not None and np.any(degenerate):
        diagnostics.degenerate_fallbacks += int(np.count_nonzero(degenerate))
    return float(value)


def alpha(bounds: NuBounds) -> float:
    """Curvature coefficient of the monotone quadratic solver.

    alpha = (nu_max - nu_min - ||nu_max| - |nu_min||) / (nu_max - nu_min)^2,
    nonnegative for any ordered bounds.
    """
    if degenerate_mask(bounds.nu_min, bounds.nu_max):
        raise DegenerateBoundsError(
            f"bounds ({bounds.nu_min}, {bounds.nu_max}) are degenerate; "
            "use the Rusanov fallback")
    return float(_alpha_raw(bounds.nu_min, bounds.nu_max))


def beta(bounds: NuBounds, omega: float) -> float:
    """Curvature coefficient of the omega family: omega + (1 - omega) * alpha."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    return omega + (1.0 - omega) * alpha(bounds)


def quad_coeffs(spec: SolverSpec, bounds: NuBounds,
                diagnostics: Diagnostics | None = None) -> QuadCoeffs:
    """Coefficients (c0, c1, c2) with eval_d(spec, nu) = c0 + c1 nu + c2 nu^2.

    Only polynomial-form kinds are supported; degenerate bounds yield the
    constant Rusanov polynomial.
    """
    if spec.kind not in POLYNOMIAL_KINDS:
        raise UnsupportedKindError(
            f"{spec.kind.value} is not a global polynomial of nu")
    c0, c1, c2, degenerate = poly_coeffs_arrays(spec.kind, spec.omega,
                                                bounds.nu_min, bounds.nu_max)
    if diagnostics is not None and np.any(degenerate):
        diagnostics.degenerate_fallbacks += int(np.count_nonzero(degenerate))
    return QuadCoeffs(float(c0), float(c1), float(c2))


def sample_dissipation(specs, bounds: NuBounds, nu_lo: float, nu_hi: float,
                       n_samples: int):
    """Tabulate d(nu) for each spec on a uniform, endpoint-inclusive nu grid.

    Returns rows (kind, omega, nu, d) ordered by spec, then ascending nu.
    """
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    if not nu_lo < nu_hi:
        raise ValueError(f"empty sampling range [{nu_lo}, {nu_hi}]")
    nus = np.linspace(nu_lo, nu_hi, n_samples)
    rows = []
    for spec in specs:
        values, _ = eval_d_arrays(spec.kind, spec.omega, nus,
                                  bounds.nu_min, bounds.nu_max)
        rows.extend(
            (spec.kind.value, spec.omega, float(nu), float(d))
            for nu, d in zip(nus, values)
        )
    return rows
