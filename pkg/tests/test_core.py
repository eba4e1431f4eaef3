import math
import random

import pytest
from hypothesis import given, strategies as st

from coriolis_sim.core import (
    BodyState,
    FrictionParams,
    InvalidInputError,
    InvalidParamsError,
    InvalidTimestepError,
    RotatingFrame,
    coriolis_accel,
    centrifugal_accel,
    euler_accel,
    jacobi_energy,
    net_forces,
    step,
    surface_friction,
    to_inertial,
    to_rotating,
)
from coriolis_sim.vec import Vec3, ZERO

from helpers import free_particle_rot


def frame(wz=0.0, az=0.0, theta=0.0):
    return RotatingFrame(omega=Vec3(0, 0, wz), alpha=Vec3(0, 0, az), theta=theta)


def approx_vec(v, expected, abs_tol=1e-12):
    assert v.x == pytest.approx(expected[0], abs=abs_tol)
    assert v.y == pytest.approx(expected[1], abs=abs_tol)
    assert v.z == pytest.approx(expected[2], abs=abs_tol)


class TestFictitiousAccels:
    def test_coriolis_rightward_for_ccw_spin(self):
        approx_vec(coriolis_accel(frame(1.0), Vec3(1, 0, 0)), (0, -2, 0))

    def test_coriolis_zero_velocity(self):
        assert coriolis_accel(frame(1.0), ZERO) == ZERO

    def test_coriolis_parallel_omega(self):
        approx_vec(coriolis_accel(frame(2.0), Vec3(0, 0, 5)), (0, 0, 0))

    def test_centrifugal_outward(self):
        approx_vec(centrifugal_accel(frame(2.0), Vec3(1, 0, 0)), (4, 0, 0))

    def test_centrifugal_origin(self):
        assert centrifugal_accel(frame(2.0), ZERO) == ZERO

    def test_centrifugal_axial_r(self):
        approx_vec(centrifugal_accel(frame(2.0), Vec3(0, 0, 3)), (0, 0, 0))

    def test_euler_zero_alpha(self):
        assert euler_accel(frame(1.0), Vec3(0.3, -0.2, 0)) == ZERO

    def test_euler_cross(self):
        approx_vec(euler_accel(frame(0.0, az=1.0), Vec3(1, 0, 0)), (0, -1, 0))

    def test_euler_axial_r(self):
        approx_vec(euler_accel(frame(0.0, az=1.0), Vec3(0, 0, 4)), (0, 0, 0))

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInputError):
            coriolis_accel(frame(1.0), Vec3(float("nan"), 0, 0))
        with pytest.raises(InvalidInputError):
            centrifugal_accel(frame(1.0), Vec3(float("inf"), 0, 0))

    def test_tilted_omega_rejected(self):
        with pytest.raises(InvalidInputError):
            RotatingFrame(omega=Vec3(0.1, 0, 1))

    @given(
        wz=st.floats(-5, 5),
        vx=st.floats(-10, 10),
        vy=st.floats(-10, 10),
    )
    def test_perpendicularity_property(self, wz, vx, vy):
        v = Vec3(vx, vy, 0)
        a = coriolis_accel(frame(wz), v)
        assert abs(a.dot(v)) <= 1e-12 * abs(wz) * v.dot(v) + 1e-300

    def test_right_deflection_sign(self):
        rng = random.Random(7)
        for _ in range(200):
            v = Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), 0)
            if v.norm() < 1e-6:
                continue
            a = coriolis_accel(frame(rng.uniform(0.1, 4.0)), v)
            assert v.cross(a).z < 0  # 90 degrees clockwise from v


class TestFriction:
    params = FrictionParams(mu_s=0.3, mu_k=0.3)

    def body(self, v=ZERO, m=1.0):
        return BodyState(t=0, r_rot=ZERO, v_rot=v, mass=m)

    def test_kinetic_opposes_motion(self):
        f = surface_friction(self.body(Vec3(2, 0, 0)), self.params, ZERO, True)
        approx_vec(f, (-0.3 * 9.81, 0, 0))

    def test_static_balance_below_threshold(self):
        f = surface_friction(self.body(), self.params, Vec3(1, 0, 0), True)
        approx_vec(f, (-1, 0, 0))

    def test_off_surface_zero(self):
        assert surface_friction(self.body(Vec3(2, 0, 0)), self.params, Vec3(1, 0, 0), False) == ZERO

    def test_static_breakaway(self):
        # load over mu_s*m*g: kinetic friction against the load direction
        f = surface_friction(self.body(), self.params, Vec3(5, 0, 0), True)
        approx_vec(f, (-0.3 * 9.81, 0, 0))

    def test_bad_params_rejected(self):
        with pytest.raises(InvalidParamsError):
            FrictionParams(mu_s=0.1, mu_k=0.3)


class TestNetForces:
    def test_all_zero_at_rest(self):
        b = net_forces(BodyState(mass=1.0), frame(0.0), FrictionParams(), ZERO, True)
        assert b.total() == ZERO

    def test_coriolis_scaled_by_mass(self):
        st_ = BodyState(v_rot=Vec3(1, 0, 0), mass=2.0)
        b = net_forces(st_, frame(1.0), FrictionParams(), ZERO, False)
        approx_vec(b.coriolis, (0, -4, 0))
        assert b.centrifugal == ZERO and b.euler == ZERO

    def test_centrifugal_component(self):
        st_ = BodyState(r_rot=Vec3(1, 0, 0), mass=1.0)
        b = net_forces(st_, frame(1.0), FrictionParams(), ZERO, False)
        approx_vec(b.centrifugal, (1, 0, 0))

    def test_total_is_component_sum(self):
        st_ = BodyState(r_rot=Vec3(0.4, -0.1, 0), v_rot=Vec3(0.2, 0.7, 0), mass=0.5)
        b = net_forces(st_, frame(1.3), FrictionParams(mu_s=0.4, mu_k=0.2), Vec3(0.1, 0.2, 0), True)
        expected = b.coriolis + b.centrifugal + b.euler + b.friction + b.applied
        assert (b.total() - expected).norm() == 0.0

    def test_mass_linearity_of_fictitious_terms(self):
        st1 = BodyState(r_rot=Vec3(0.5, 0.2, 0), v_rot=Vec3(-0.3, 0.9, 0), mass=1.0)
        st3 = BodyState(r_rot=st1.r_rot, v_rot=st1.v_rot, mass=3.0)
        b1 = net_forces(st1, frame(0.8), FrictionParams(), ZERO, False)
        b3 = net_forces(st3, frame(0.8), FrictionParams(), ZERO, False)
        for name in ("coriolis", "centrifugal", "euler"):
            assert (getattr(b3, name) - getattr(b1, name) * 3.0).norm() < 1e-12


class TestStep:
    def test_straight_line_without_rotation(self):
        s, f = step(BodyState(v_rot=Vec3(1, 0, 0), mass=1.0), frame(0.0),
                    FrictionParams(), ZERO, False, 1e-3)
        assert s.r_rot == Vec3(1e-3, 0, 0)
        assert s.v_rot == Vec3(1, 0, 0)
        assert s.t == 1e-3

    def test_free_particle_matches_closed_form(self):
        s = BodyState(v_rot=Vec3(1, 0, 0), mass=1.0)
        f = frame(1.0)
        p = FrictionParams()
        for _ in range(1000):
            s, f = step(s, f, p, ZERO, False, 1e-3)
        expected = free_particle_rot(s.t, Vec3(1, 0, 0), 1.0)
        assert (s.r_rot - expected).norm() < 1e-8
        assert s.r_rot.x == pytest.approx(math.cos(1.0), abs=1e-8)
        assert s.r_rot.y == pytest.approx(-math.sin(1.0), abs=1e-8)

    def test_inertial_view_is_straight(self):
        s = BodyState(v_rot=Vec3(1, 0, 0), mass=1.0)
        f = frame(1.0)
        p = FrictionParams()
        for _ in range(1000):
            s, f = step(s, f, p, ZERO, False, 1e-3)
            r_in, _ = to_inertial(s, f)
            assert abs(r_in.y) < 1e-8
            assert r_in.x == pytest.approx(s.t, abs=1e-8)

    def test_theta_advances_analytically(self):
        s = BodyState(mass=1.0)
        f = frame(0.75)
        for _ in range(4000):
            s, f = step(s, f, FrictionParams(), ZERO, False, 1e-3)
        assert f.theta == pytest.approx(0.75 * s.t, rel=1e-12)

    def test_free_trajectory_mass_independent(self):
        runs = []
        for m in (0.5, 2.0):
            s = BodyState(v_rot=Vec3(0.4, -0.6, 0), mass=m)
            f = frame(1.2)
            for _ in range(500):
                s, f = step(s, f, FrictionParams(), ZERO, False, 1e-3)
            runs.append(s.r_rot)
        assert runs[0] == runs[1]

    def test_determinism_bitwise(self):
        def one_run():
            s = BodyState(r_rot=Vec3(0.1, 0.2, 0), v_rot=Vec3(-0.3, 0.5, 0), mass=0.7)
            f = frame(1.1, az=0.05)
            out = []
            for _ in range(300):
                s, f = step(s, f, FrictionParams(mu_s=0.2, mu_k=0.1), Vec3(0.05, 0, 0), True, 1e-3)
                out.append((s.r_rot, s.v_rot, f.theta))
            return out

        assert one_run() == one_run()

    def test_bad_dt(self):
        with pytest.raises(InvalidTimestepError):
            step(BodyState(mass=1.0), frame(0.0), FrictionParams(), ZERO, False, 0.0)

    def test_static_body_stays_put_under_small_push(self):
        p = FrictionParams(mu_s=0.5, mu_k=0.3)
        s = BodyState(r_rot=Vec3(0.2, 0, 0), mass=1.0)
        f = frame(0.0)
        push = Vec3(1.0, 0, 0)  # below mu_s*m*g = 4.905 N
        for _ in range(1000):
            s, f = step(s, f, p, push, True, 1e-3)
        assert s.v_rot == ZERO
        assert s.r_rot == Vec3(0.2, 0, 0)


class TestTransforms:
    def test_identity_at_zero_angle(self):
        s = BodyState(r_rot=Vec3(0.3, 0.4, 0), v_rot=Vec3(1, 2, 0), mass=1.0)
        r_in, v_in = to_inertial(s, frame(0.5, theta=0.0))
        assert r_in == s.r_rot
        approx_vec(v_in, (s.v_rot + Vec3(0, 0, 0.5).cross(s.r_rot)).as_tuple())

    def test_quarter_turn(self):
        s = BodyState(r_rot=Vec3(1, 0, 0), mass=1.0)
        r_in, _ = to_inertial(s, frame(0.0, theta=math.pi / 2))
        approx_vec(r_in, (0, 1, 0))

    def test_half_turn_inverse(self):
        r_rot, v_rot = to_rotating(Vec3(1, 0, 0), ZERO, frame(0.0, theta=math.pi))
        approx_vec(r_rot, (-1, 0, 0))

    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(100):
            f = frame(rng.uniform(-2, 2), theta=rng.uniform(-6, 6))
            s = BodyState(
                r_rot=Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), 0),
                v_rot=Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), 0),
                mass=1.0,
            )
            r_in, v_in = to_inertial(s, f)
            r_back, v_back = to_rotating(r_in, v_in, f)
            assert (r_back - s.r_rot).norm() < 1e-12
            assert (v_back - s.v_rot).norm() < 1e-12


class TestJacobi:
    def test_rest_at_center(self):
        assert jacobi_energy(BodyState(mass=1.0), frame(1.0)) == 0.0

    def test_kinetic_only(self):
        assert jacobi_energy(BodyState(v_rot=Vec3(1, 0, 0), mass=1.0), frame(1.0)) == 0.5

    def test_conserved_along_free_run(self):
        s = BodyState(v_rot=Vec3(1, 0, 0), mass=1.0)
        f = frame(1.0)
        j0 = jacobi_energy(s, f)
        worst = 0.0
        for _ in range(10_000):
            s, f = step(s, f, FrictionParams(), ZERO, False, 1e-3)
            worst = max(worst, abs(jacobi_energy(s, f) - j0))
        assert worst / abs(j0) < 1e-9
