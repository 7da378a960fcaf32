"""Tests for the model abstraction and its three instances."""

import numpy as np
import pytest

from fvdiss.errors import InvalidStateError
from fvdiss.models import (
    MhdPrimitive,
    advection_model,
    linear_system_model,
    mhd_cons_to_prim,
    mhd_flux,
    mhd_model,
    mhd_prim_to_cons,
    mhd_speeds,
)

from .oracles import finite_difference_jacobian, jacobian_eigenvalues

GAMMA = 5.0 / 3.0
BX = 1.5

# Riemann states of the shock-tube scenario: (rho, vx, (vy, vz), p, (By, Bz))
LEFT_PRIM = MhdPrimitive(rho=3.0, vx=0.0, vy=0.0, vz=0.0, p=3.0, By=1.0, Bz=1.0)
RIGHT_PRIM = MhdPrimitive(rho=1.0, vx=0.0, vy=0.0, vz=0.0, p=1.0,
                          By=np.cos(1.5), Bz=np.sin(1.5))


def random_admissible_state(rng):
    w = MhdPrimitive(
        rho=float(rng.uniform(0.1, 5.0)),
        vx=float(rng.uniform(-2.0, 2.0)),
        vy=float(rng.uniform(-2.0, 2.0)),
        vz=float(rng.uniform(-2.0, 2.0)),
        p=float(rng.uniform(0.1, 5.0)),
        By=float(rng.uniform(-2.0, 2.0)),
        Bz=float(rng.uniform(-2.0, 2.0)),
    )
    return mhd_prim_to_cons(w, GAMMA)


class TestAdvection:
    def test_flux_and_speeds(self):
        m = advection_model(1.0)
        assert m.flux(np.array([0.5]))[0] == 0.5
        lo, hi = m.min_max_speeds(np.array([3.7]))
        assert (lo, hi) == (1.0, 1.0)
        assert advection_model(-2.0).flux(np.array([3.0]))[0] == -6.0

    def test_batch_shapes(self):
        m = advection_model(2.0)
        u = np.linspace(0, 1, 5).reshape(5, 1)
        assert m.flux(u).shape == (5, 1)
        lo, hi = m.min_max_speeds(u)
        assert lo.shape == (5,) and np.all(hi == 2.0)

    def test_eigensystem_present(self):
        T, lam = advection_model(1.5).eigensystem
        assert T.shape == (1, 1) and lam[0] == 1.5


class TestLinearSystem:
    def diag_model(self):
        A = np.diag([-1.0, 2.0])
        return linear_system_model(A, np.eye(2), np.array([-1.0, 2.0]))

    def test_flux_diagonal(self):
        m = self.diag_model()
        assert m.flux(np.array([1.0, 1.0])) == pytest.approx([-1.0, 2.0])

    def test_identity_speeds(self):
        m = linear_system_model(np.eye(2), np.eye(2), np.array([1.0, 1.0]))
        lo, hi = m.min_max_speeds(np.zeros(2))
        assert (lo, hi) == (1.0, 1.0)

    def test_reconstruction_residual(self):
        T = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]])
        lam = np.array([-1.0, 0.1, 2.0])
        A = T @ np.diag(lam) @ np.linalg.inv(T)
        m = linear_system_model(A, T, lam)
        resid = np.abs(A - T @ np.diag(lam) @ np.linalg.inv(T)).max()
        assert resid <= 1e-10
        assert m.min_max_speeds(np.zeros(3)) == (-1.0, 2.0)

    def test_bad_eigensystem_rejected(self):
        with pytest.raises(ValueError):
            linear_system_model(np.diag([1.0, 2.0]), np.eye(2), np.array([1.0, 3.0]))

    def test_jacobian_action_is_matrix_product(self):
        rng = np.random.default_rng(5)
        m = self.diag_model()
        v = rng.normal(size=2)
        assert m.jacobian_action(rng.normal(size=2), v) == pytest.approx(np.diag([-1.0, 2.0]) @ v)


class TestMhdConversions:
    def test_left_state_energy(self):
        # E = p/(gamma-1) + kinetic + magnetic = 4.5 + 0 + 1
        u = mhd_prim_to_cons(LEFT_PRIM, GAMMA)
        assert u == pytest.approx([3.0, 0.0, 0.0, 0.0, 1.0, 1.0, 5.5])

    def test_unit_internal_energy(self):
        w = MhdPrimitive(rho=1.0, vx=0.0, vy=0.0, vz=0.0, p=GAMMA - 1.0, By=0.0, Bz=0.0)
        assert mhd_prim_to_cons(w, GAMMA)[6] == pytest.approx(1.0)

    def test_cons_to_prim_left_state(self):
        w = mhd_cons_to_prim(np.array([3.0, 0.0, 0.0, 0.0, 1.0, 1.0, 5.5]), GAMMA)
        assert (w.rho, w.vx, w.vy, w.vz, w.p, w.By, w.Bz) == pytest.approx(
            (3.0, 0.0, 0.0, 0.0, 3.0, 1.0, 1.0))

    def test_roundtrip_random(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            u = random_admissible_state(rng)
            w = mhd_cons_to_prim(u, GAMMA)
            assert mhd_prim_to_cons(w, GAMMA) == pytest.approx(u, abs=1e-14, rel=1e-14)

    def test_right_state_roundtrip(self):
        u = mhd_prim_to_cons(RIGHT_PRIM, GAMMA)
        w = mhd_cons_to_prim(u, GAMMA)
        assert mhd_prim_to_cons(w, GAMMA) == pytest.approx(u, abs=1e-14)

    def test_energy_below_floor_rejected(self):
        u = mhd_prim_to_cons(LEFT_PRIM, GAMMA)
        u[6] = 0.9  # below kinetic + magnetic content
        with pytest.raises(InvalidStateError):
            mhd_cons_to_prim(u, GAMMA)

    def test_nonpositive_density_rejected(self):
        with pytest.raises(InvalidStateError):
            mhd_cons_to_prim(np.array([-1.0, 0, 0, 0, 0, 0, 1.0]), GAMMA)
        with pytest.raises(ValueError):
            MhdPrimitive(rho=1.0, vx=0, vy=0, vz=0, p=-0.1, By=0, Bz=0)


class TestMhdFlux:
    def test_left_state_flux(self):
        # momentum flux 0 + 3 + 1 = 4; tangential -1.5 * (1, 1); rest zero with v = 0
        u = mhd_prim_to_cons(LEFT_PRIM, GAMMA)
        f = mhd_flux(u, BX, GAMMA)
        assert f == pytest.approx([0.0, 4.0, -1.5, -1.5, 0.0, 0.0, 0.0])

    def test_hydrostatic_flux(self):
        w = MhdPrimitive(rho=2.0, vx=0.0, vy=0.0, vz=0.0, p=0.7, By=0.0, Bz=0.0)
        f = mhd_flux(mhd_prim_to_cons(w, GAMMA), 0.0, GAMMA)
        assert f == pytest.approx([0.0, 0.7, 0.0, 0.0, 0.0, 0.0, 0.0], abs=1e-15)

    def test_scaling_law(self):
        # rho -> s rho, p -> s p, B -> sqrt(s) B (incl. Bx), v fixed:
        # mass/momentum/energy rows scale by s, induction rows by sqrt(s)
        rng = np.random.default_rng(13)
        for _ in range(100):
            u = random_admissible_state(rng)
            bx = float(rng.uniform(-2.0, 2.0))
            s = float(rng.uniform(0.3, 3.0))
            w = mhd_cons_to_prim(u, GAMMA)
            scaled = MhdPrimitive(rho=s * w.rho, vx=w.vx, vy=w.vy, vz=w.vz,
                                  p=s * w.p, By=np.sqrt(s) * w.By, Bz=np.sqrt(s) * w.Bz)
            f = mhd_flux(u, bx, GAMMA)
            fs = mhd_flux(mhd_prim_to_cons(scaled, GAMMA), np.sqrt(s) * bx, GAMMA)
            expect = f * np.array([s, s, s, s, np.sqrt(s), np.sqrt(s), s])
            assert fs == pytest.approx(expect, rel=1e-12, abs=1e-12)

    def test_batch_matches_rows(self):
        rng = np.random.default_rng(17)
        batch = np.stack([random_admissible_state(rng) for _ in range(8)])
        fb = mhd_flux(batch, BX, GAMMA)
        for i in range(8):
            assert fb[i] == pytest.approx(mhd_flux(batch[i], BX, GAMMA))


class TestMhdSpeeds:
    def test_right_state_fast_speed(self):
        u = mhd_prim_to_cons(RIGHT_PRIM, GAMMA)
        lo, hi = mhd_speeds(u, BX, GAMMA)
        # oracle: eigenvalues of the finite-difference flux Jacobian
        eigs = jacobian_eigenvalues(lambda s: mhd_flux(s, BX, GAMMA), u)
        assert hi == pytest.approx(eigs[-1], abs=1e-6)
        assert lo == pytest.approx(eigs[0], abs=1e-6)
        assert hi == pytest.approx(1.9931713, abs=1e-4)
        assert lo == pytest.approx(-hi, abs=1e-12)

    def test_zero_field_is_sound_speed(self):
        w = MhdPrimitive(rho=2.0, vx=0.3, vy=0.0, vz=0.0, p=1.1, By=0.0, Bz=0.0)
        lo, hi = mhd_speeds(mhd_prim_to_cons(w, GAMMA), 0.0, GAMMA)
        c = np.sqrt(GAMMA * 1.1 / 2.0)
        assert (lo, hi) == pytest.approx((0.3 - c, 0.3 + c))

    def test_no_tangential_field_collapses_to_max(self):
        # with B_t = 0 the discriminant gives c_f^2 = max(a^2, b_x^2)
        w = MhdPrimitive(rho=1.0, vx=0.0, vy=0.0, vz=0.0, p=1.0, By=0.0, Bz=0.0)
        u = mhd_prim_to_cons(w, GAMMA)
        a = np.sqrt(GAMMA)
        for bx in (0.5, 3.0):
            _, hi = mhd_speeds(u, bx, GAMMA)
            assert hi == pytest.approx(max(a, abs(bx)), rel=1e-12)

    def test_speeds_bracket_jacobian_eigenvalues(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            u = random_admissible_state(rng)
            bx = float(rng.uniform(-2.0, 2.0))
            eigs = jacobian_eigenvalues(lambda s: mhd_flux(s, bx, GAMMA), u)
            lo, hi = mhd_speeds(u, bx, GAMMA)
            assert eigs[0] >= lo - 1e-5
            assert eigs[-1] <= hi + 1e-5


class TestMhdModel:
    def test_model_wiring(self):
        m = mhd_model(BX, GAMMA)
        assert m.n_vars == 7
        assert m.eigensystem is None and m.jacobian_action is None
        u = mhd_prim_to_cons(LEFT_PRIM, GAMMA)
        assert m.flux(u) == pytest.approx(mhd_flux(u, BX, GAMMA))
        assert m.min_max_speeds(u) == pytest.approx(mhd_speeds(u, BX, GAMMA))

    def test_fd_jacobian_times_state_consistency(self):
        # directional FD derivative agrees with the dense FD Jacobian product
        rng = np.random.default_rng(25)
        u = random_admissible_state(rng)
        v = rng.normal(size=7)
        jac = finite_difference_jacobian(lambda s: mhd_flux(s, BX, GAMMA), u)
        h = 1e-7
        directional = (mhd_flux(u + h * v, BX, GAMMA) - mhd_flux(u - h * v, BX, GAMMA)) / (2 * h)
        assert directional == pytest.approx(jac @ v, rel=1e-5, abs=1e-5)
