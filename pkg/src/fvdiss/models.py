"""Hyperbolic model definitions: flux, wave-speed bounds, optional extras.

A model bundles everything the flux assembly needs about a conservation law
u_t + f(u)_x = 0: the flux itself, per-state bounds on the characteristic
speeds, and optionally an analytic Jacobian-vector product and (for
constant-coefficient systems) the exact eigensystem.  All callables accept
a single state of shape (N,) or a batch of shape (M, N) and vectorize over
the leading axis.

Three instances are provided: scalar advection, a general constant-
coefficient linear system, and 1D ideal MHD with constant normal field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidStateError

#: states with density or pressure at/below this floor are rejected
MHD_FLOOR = 1e-12


@dataclass(frozen=True)
class Model:
    name: str
    n_vars: int
    flux: Callable[[np.ndarray], np.ndarray]
    min_max_speeds: Callable[[np.ndarray], tuple]
    jacobian_action: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    eigensystem: Optional[tuple] = None  # (T, eigenvalues ascending)


def advection_model(a: float) -> Model:
    """Scalar transport u_t + a u_x = 0."""
    a = float(a)

    def flux(u):
        return a * np.asarray(u, dtype=float)

    def speeds(u):
        shape = np.asarray(u).shape[:-1]
        s = np.full(shape, a)
        return s, s.copy()

    return Model(
        name="advection",
        n_vars=1,
        flux=flux,
        min_max_speeds=speeds,
        jacobian_action=lambda u_bar, v: a * np.asarray(v, dtype=float),
        eigensystem=(np.eye(1), np.array([a])),
    )


def linear_system_model(A, T, eigenvalues) -> Model:
    """Constant-coefficient system f(u) = A u with known eigensystem.

    The factorization A = T diag(eigenvalues) T^-1 is validated to 1e-10 at
    construction; eigenvalues must be sorted ascending.
    """
    A = np.asarray(A, dtype=float)
    T = np.asarray(T, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or T.shape != (n, n) or lam.shape != (n,):
        raise ValueError(f"inconsistent shapes: A {A.shape}, T {T.shape}, eigenvalues {lam.shape}")
    if np.any(np.diff(lam) < 0):
        raise ValueError(f"eigenvalues must be sorted ascending, got {lam}")
    residual = np.abs(A - T @ np.diag(lam) @ np.linalg.inv(T)).max()
    if residual > 1e-10:
        raise ValueError(f"A != T diag(lam) T^-1: max residual {residual:.3e}")

    lam_lo, lam_hi = float(lam[0]), float(lam[-1])

    def flux(u):
        return np.asarray(u, dtype=float) @ A.T

    def speeds(u):
        shape = np.asarray(u).shape[:-1]
        return np.full(shape, lam_lo), np.full(shape, lam_hi)

    return Model(
        name="linear_system",
        n_vars=n,
        flux=flux,
        min_max_speeds=speeds,
        jacobian_action=lambda u_bar, v: np.asarray(v, dtype=float) @ A.T,
        eigensystem=(T, lam),
    )


# ---------------------------------------------------------------------------
# ideal MHD, one-dimensional, constant normal field
# ---------------------------------------------------------------------------
#
# Conserved ordering: (rho, rho vx, rho vy, rho vz, By, Bz, E) with
# E = p/(gamma - 1) + rho (vx^2 + vy^2 + vz^2)/2 + (By^2 + Bz^2)/2.


@dataclass(frozen=True)
class MhdPrimitive:
    """Primitive MHD state; tangential pairs are (vy, vz) and (By, Bz)."""

    rho: float
    vx: float
    vy: float
    vz: float
    p: float
    By: float
    Bz: float

    def __post_init__(self):
        if not np.all(np.asarray(self.rho) > MHD_FLOOR):
            raise ValueError(f"nonpositive density: {np.min(self.rho)}")
        if not np.all(np.asarray(self.p) > MHD_FLOOR):
            raise ValueError(f"nonpositive pressure: {np.min(self.p)}")


def mhd_prim_to_cons(w: MhdPrimitive, gamma: float = 5.0 / 3.0) -> np.ndarray:
    kinetic = 0.5 * w.rho * (w.vx**2 + w.vy**2 + w.vz**2)
    magnetic = 0.5 * (w.By**2 + w.Bz**2)
    energy = w.p / (gamma - 1.0) + kinetic + magnetic
    return np.stack([
        np.asarray(w.rho, dtype=float),
        w.rho * w.vx, w.rho * w.vy, w.rho * w.vz,
        np.asarray(w.By, dtype=float), np.asarray(w.Bz, dtype=float),
        energy,
    ], axis=-1)


def mhd_cons_to_prim(u: np.ndarray, gamma: float = 5.0 / 3.0) -> MhdPrimitive:
    """Invert the energy relation; rejects density/pressure at the floor.

    NaNs fail the positivity comparisons, so non-finite states are rejected
    through the same path.
    """
    u = np.asarray(u, dtype=float)
    rho = u[..., 0]
    if not np.all(rho > MHD_FLOOR):
        raise InvalidStateError(f"nonpositive density: min rho = {np.min(rho)}")
    vx = u[..., 1] / rho
    vy = u[..., 2] / rho
    vz = u[..., 3] / rho
    By = u[..., 4]
    Bz = u[..., 5]
    kinetic = 0.5 * rho * (vx * vx + vy * vy + vz * vz)
    magnetic = 0.5 * (By * By + Bz * Bz)
    p = (gamma - 1.0) * (u[..., 6] - kinetic - magnetic)
    if not np.all(p > MHD_FLOOR):
        raise InvalidStateError(f"nonpositive pressure: min p = {np.min(p)}")
    return MhdPrimitive(rho=rho, vx=vx, vy=vy, vz=vz, p=p, By=By, Bz=Bz)


def mhd_flux(u: np.ndarray, Bx: float, gamma: float = 5.0 / 3.0) -> np.ndarray:
    w = mhd_cons_to_prim(u, gamma)
    u = np.asarray(u, dtype=float)
    p_total = w.p + 0.5 * (w.By**2 + w.Bz**2)
    energy = u[..., 6]
    return np.stack([
        w.rho * w.vx,
        w.rho * w.vx * w.vx + p_total,
        w.rho * w.vx * w.vy - Bx * w.By,
        w.rho * w.vx * w.vz - Bx * w.Bz,
        w.vx * w.By - Bx * w.vy,
        w.vx * w.Bz - Bx * w.vz,
        (energy + p_total) * w.vx - Bx * (w.By * w.vy + w.Bz * w.vz),
    ], axis=-1)


def mhd_speeds(u: np.ndarray, Bx: float, gamma: float = 5.0 / 3.0) -> tuple:
    """Extremal characteristic speeds vx -+ c_f (fast magnetosonic).

    c_f^2 = (a^2 + b^2 + sqrt((a^2 + b^2)^2 - 4 a^2 bx^2)) / 2 with
    a^2 = gamma p / rho, b^2 = |B|^2 / rho, bx^2 = Bx^2 / rho.
    """
    w = mhd_cons_to_prim(u, gamma)
    a2 = gamma * w.p / w.rho
    b2 = (Bx * Bx + w.By * w.By + w.Bz * w.Bz) / w.rho
    bx2 = Bx * Bx / w.rho
    total = a2 + b2
    # discriminant >= (a^2 - b^2)^2 >= 0; clip guards roundoff only
    disc = np.maximum(total * total - 4.0 * a2 * bx2, 0.0)
    cf = np.sqrt(0.5 * (total + np.sqrt(disc)))
    return w.vx - cf, w.vx + cf


def mhd_model(Bx: float, gamma: float = 5.0 / 3.0) -> Model:
    """Ideal MHD with constant normal field Bx; no eigensystem exposed."""
    Bx = float(Bx)
    gamma = float(gamma)
    return Model(
        name="mhd",
        n_vars=7,
        flux=lambda u: mhd_flux(u, Bx, gamma),
        min_max_speeds=lambda u: mhd_speeds(u, Bx, gamma),
    )
