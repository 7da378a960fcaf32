"""Independent reference implementations used as test oracles.

Everything here is deliberately written from first principles (textbook
formulas, brute-force finite differences, hand-rolled loops) and must stay
independent of the code paths it is used to check.
"""

import numpy as np


def textbook_hll_flux(u_left, u_right, f_left, f_right, s_left, s_right):
    """Classic two-wave HLL flux with explicit supersonic branches.

    F = F_L                                        if S_L >= 0
      = F_R                                        if S_R <= 0
      = (S_R F_L - S_L F_R + S_L S_R (U_R - U_L)) / (S_R - S_L)  otherwise
    """
    if s_left >= 0.0:
        return np.asarray(f_left, dtype=float)
    if s_right <= 0.0:
        return np.asarray(f_right, dtype=float)
    u_left = np.asarray(u_left, dtype=float)
    u_right = np.asarray(u_right, dtype=float)
    f_left = np.asarray(f_left, dtype=float)
    f_right = np.asarray(f_right, dtype=float)
    return (
        s_right * f_left - s_left * f_right + s_left * s_right * (u_right - u_left)
    ) / (s_right - s_left)


def finite_difference_jacobian(flux_fn, u, eps=1e-7):
    """Dense flux Jacobian df_i/du_j by central differences, column by column."""
    u = np.asarray(u, dtype=float)
    n = u.size
    jac = np.empty((n, n))
    for j in range(n):
        h = eps * max(1.0, abs(u[j]))
        up = u.copy()
        um = u.copy()
        up[j] += h
        um[j] -= h
        jac[:, j] = (flux_fn(up) - flux_fn(um)) / (2.0 * h)
    return jac


def jacobian_eigenvalues(flux_fn, u, eps=1e-7):
    """Sorted real parts of the numerically computed flux-Jacobian eigenvalues."""
    jac = finite_difference_jacobian(flux_fn, u, eps=eps)
    return np.sort(np.linalg.eigvals(jac).real)


def hand_rolled_upwind_step(u, nu):
    """One explicit two-point upwind update (positive speed, transmissive ends)."""
    u = np.asarray(u, dtype=float)
    out = u.copy()
    for i in range(u.size):
        left = u[i - 1] if i > 0 else u[0]
        out[i] = u[i] - nu * (u[i] - left)
    return out


def sine_cell_averages(x_lo, x_hi, n_cells, shift=0.0):
    """Exact cell averages of sin(2*pi*(x - shift)) on a uniform grid."""
    edges = np.linspace(x_lo, x_hi, n_cells + 1)
    anti = -np.cos(2.0 * np.pi * (edges - shift)) / (2.0 * np.pi)
    return (anti[1:] - anti[:-1]) / np.diff(edges)
