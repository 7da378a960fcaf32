"""Interface flux assembly without eigendecomposition.

The numerical flux is

    f_hat(uL, uR) = (f(uL) + f(uR))/2 + D(uL, uR) (uL - uR)/2

where the dissipation matrix D is a function of the flux Jacobian.  D is
never formed: for kinds whose d(nu) is a polynomial c0 + c1 nu + c2 nu^2
the product D (uL - uR) is assembled as

    (dx/dt) c0 (uL - uR)  +  c1 (f(uL) - f(uR))  +  (dt/dx) c2 A(u_bar) df

using the Roe property A_tilde (uL - uR) = f(uL) - f(uR) for the linear
term and a Jacobian-vector product at u_bar = (uL + uR)/2 for the
quadratic term (analytic when the model provides one, otherwise a
matrix-free finite difference).  Kinds without a polynomial form (upwind
and the upwind/Lax-Wendroff blend) require a model with an exact
eigensystem; `spectral_flux_oracle` applies the full similarity transform
and serves as the reference implementation in tests.

All entry points accept single states of shape (N,) or batches (M, N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissipation import (
    Diagnostics,
    NuBounds,
    POLYNOMIAL_KINDS,
    SolverKind,
    SolverSpec,
    eval_d_arrays,
    poly_coeffs_arrays,
)
from .errors import InvalidStateError, NumericFailureError, UnsupportedKindError
from .models import Model

_SQRT_EPS = float(np.sqrt(np.finfo(float).eps))
_CBRT_EPS = float(np.cbrt(np.finfo(float).eps))

BOUNDS_MODES = ("left_right", "both_states")
DIFF_MODES = ("central", "one_sided")


@dataclass
class InterfaceContext:
    """Per-interface evaluation context (mainly for inspection in tests)."""

    dt_over_dx: float
    bounds: NuBounds
    diagnostics: Diagnostics


def _col(c):
    """Append a trailing axis so per-interface coefficients broadcast over states."""
    return np.asarray(c, dtype=float)[..., None]


def _check_finite(values, what):
    if np.all(np.isfinite(values)):
        return
    bad = np.flatnonzero(~np.isfinite(np.atleast_2d(values)).all(axis=-1))
    raise NumericFailureError(f"non-finite {what} at interface {int(bad[0])}")


def jacobian_action(model: Model, u_bar, v, *, diff_mode: str = "central",
                    diagnostics: Diagnostics | None = None) -> np.ndarray:
    """Compute A(u_bar) v, the flux Jacobian applied to v.

    Uses the model's analytic product when available, otherwise a
    matrix-free finite difference along v/|v|.  The step is
    eps = cbrt(machine eps) * (1 + |u_bar|_inf) for central differences
    (the standard truncation/roundoff balance for a two-sided first
    derivative) and sqrt(machine eps) * (...) for one-sided.  If a
    perturbed state is inadmissible the step shrinks by 10x, up to 4
    retries.  Zero directions map to the zero vector.
    """
    if diff_mode not in DIFF_MODES:
        raise ValueError(f"diff_mode must be one of {DIFF_MODES}, got {diff_mode!r}")
    if model.jacobian_action is not None:
        return model.jacobian_action(u_bar, v)
    u = np.asarray(u_bar, dtype=float)
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    w = v / np.where(norm > 0.0, norm, 1.0)
    base = _CBRT_EPS if diff_mode == "central" else _SQRT_EPS
    eps = base * (1.0 + np.max(np.abs(u), axis=-1, keepdims=True))
    last_error = None
    for attempt in range(5):
        try:
            if diff_mode == "central":
                diff = model.flux(u + eps * w) - model.flux(u - eps * w)
                out = diff * (norm / (2.0 * eps))
            else:
                diff = model.flux(u + eps * w) - model.flux(u)
                out = diff * (norm / eps)
            return np.where(norm > 0.0, out, 0.0)
        except InvalidStateError as err:
            last_error = err
            eps = eps * 0.1
            if diagnostics is not None and attempt < 4:
                diagnostics.jacobian_retries += 1
    raise NumericFailureError(
        f"Jacobian-vector product failed after 4 step reductions: {last_error}")


def _nu_bounds(spec_kind, uL, uR, speeds_L, speeds_R, model, r, bounds_mode):
    sL_min, sL_max = speeds_L if speeds_L is not None else model.min_max_speeds(uL)
    sR_min, sR_max = speeds_R if speeds_R is not None else model.min_max_speeds(uR)
    if spec_kind is SolverKind.RUSANOV:
        # spectral radius over both states; independent of bounds_mode
        lam = np.maximum(np.maximum(np.abs(sL_min), np.abs(sL_max)),
                         np.maximum(np.abs(sR_min), np.abs(sR_max)))
        return -lam * r, lam * r
    if bounds_mode == "left_right":
        lam_lo, lam_hi = sL_min, sR_max
    elif bounds_mode == "both_states":
        lam_lo = np.minimum(sL_min, sR_min)
        lam_hi = np.maximum(sL_max, sR_max)
    else:
        raise ValueError(f"bounds_mode must be one of {BOUNDS_MODES}, got {bounds_mode!r}")
    # slowest-left/fastest-right estimates can invert for colliding streams;
    # every bounds-dependent formula is symmetric under the swap
    lo = np.minimum(lam_lo, lam_hi) * r
    hi = np.maximum(lam_lo, lam_hi) * r
    return lo, hi


def _dissipation_product(model, spec, uL, uR, fL, fR, r, *, bounds_mode,
                         diff_mode, diagnostics, speeds_L=None, speeds_R=None):
    """D(uL, uR) @ (uL - uR) without forming D."""
    kind = spec.kind
    dU = uL - uR
    if kind is SolverKind.LAX_FRIEDRICHS:
        return dU / r

    if kind in (SolverKind.UPWIND, SolverKind.D_OMEGA):
        if model.eigensystem is None:
            raise UnsupportedKindError(
                f"{kind.value} needs the exact eigensystem; model "
                f"{model.name!r} does not provide one")
        T, lam = model.eigensystem
        nus = lam * r
        d, _ = eval_d_arrays(kind, spec.omega, nus, float(nus[0]), float(nus[-1]))
        D = (T @ np.diag(d) @ np.linalg.inv(T)) / r
        return dU @ D.T

    lo, hi = _nu_bounds(kind, uL, uR, speeds_L, speeds_R, model, r, bounds_mode)
    if kind is SolverKind.RUSANOV:
        return _col(hi / r) * dU
    c0, c1, c2, degenerate = poly_coeffs_arrays(kind, spec.omega, lo, hi)
    if diagnostics is not None and np.any(degenerate):
        diagnostics.degenerate_fallbacks += int(np.count_nonzero(degenerate))
    df = fL - fR
    term = _col(c0) * dU / r + _col(c1) * df
    if np.any(c2 != 0.0):
        u_bar = 0.5 * (uL + uR)
        adf = jacobian_action(model, u_bar, df, diff_mode=diff_mode,
                              diagnostics=diagnostics)
        term = term + _col(c2) * r * adf
    return term


def numerical_flux(model: Model, spec: SolverSpec, uL, uR, dt_over_dx: float, *,
                   bounds_mode: str = "left_right", diff_mode: str = "central",
                   diagnostics: Diagnostics | None = None) -> np.ndarray:
    """Interface flux for one state pair or a batch of pairs.

    Wave-speed bounds follow `bounds_mode`: "left_right" takes the slowest
    wave of the left state and the fastest of the right, "both_states" the
    min/max over both.  Degenerate bounds fall back to the Rusanov constant
    and are counted in `diagnostics`.
    """
    if dt_over_dx <= 0.0:
        raise ValueError(f"dt_over_dx must be positive, got {dt_over_dx}")
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    fL = model.flux(uL)
    fR = model.flux(uR)
    term = _dissipation_product(model, spec, uL, uR, fL, fR, dt_over_dx,
                                bounds_mode=bounds_mode, diff_mode=diff_mode,
                                diagnostics=diagnostics)
    out = 0.5 * (fL + fR) + 0.5 * term
    _check_finite(out, "numerical flux")
    return out


def interface_fluxes(model: Model, spec: SolverSpec, u_ext, dt_over_dx: float, *,
                     bounds_mode: str = "left_right", diff_mode: str = "central",
                     diagnostics: Diagnostics | None = None) -> np.ndarray:
    """Fluxes at all interior interfaces of a ghost-extended state array.

    `u_ext` has shape (n+2, N); the flux and wave speeds of each cell are
    evaluated once and shared between its two interfaces, which is what the
    time-stepping loop wants.
    """
    if dt_over_dx <= 0.0:
        raise ValueError(f"dt_over_dx must be positive, got {dt_over_dx}")
    u_ext = np.asarray(u_ext, dtype=float)
    f_ext = model.flux(u_ext)
    uL, uR = u_ext[:-1], u_ext[1:]
    fL, fR = f_ext[:-1], f_ext[1:]
    speeds_L = speeds_R = None
    if spec.kind is SolverKind.RUSANOV or spec.kind in POLYNOMIAL_KINDS:
        s_min, s_max = model.min_max_speeds(u_ext)
        speeds_L = (s_min[:-1], s_max[:-1])
        speeds_R = (s_min[1:], s_max[1:])
    term = _dissipation_product(model, spec, uL, uR, fL, fR, dt_over_dx,
                                bounds_mode=bounds_mode, diff_mode=diff_mode,
                                diagnostics=diagnostics,
                                speeds_L=speeds_L, speeds_R=speeds_R)
    out = 0.5 * (fL + fR) + 0.5 * term
    _check_finite(out, "numerical flux")
    return out


def spectral_flux_oracle(model: Model, spec: SolverSpec, uL, uR,
                         dt_over_dx: float, *, bounds_mode: str = "left_right",
                         diagnostics: Diagnostics | None = None) -> np.ndarray:
    """Reference flux via the exact similarity transform T diag(d(nu_i)) T^-1.

    Only valid on models exposing a constant eigensystem; used in tests to
    cross-check the matrix-free assembly.
    """
    if model.eigensystem is None:
        raise UnsupportedKindError(
            f"model {model.name!r} does not expose an exact eigensystem")
    if dt_over_dx <= 0.0:
        raise ValueError(f"dt_over_dx must be positive, got {dt_over_dx}")
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    T, lam = model.eigensystem
    r = dt_over_dx
    lo, hi = _nu_bounds(spec.kind, uL, uR, None, None, model, r, bounds_mode)
    # constant-coefficient models give identical bounds at every interface
    lo = float(np.min(lo))
    hi = float(np.max(hi))
    d, degenerate = eval_d_arrays(spec.kind, spec.omega, lam * r, lo, hi)
    if diagnostics is not None and np.any(degenerate):
        diagnostics.degenerate_fallbacks += int(np.count_nonzero(degenerate))
    D = (T @ np.diag(d) @ np.linalg.inv(T)) / r
    return 0.5 * (model.flux(uL) + model.flux(uR)) + 0.5 * ((uL - uR) @ D.T)
