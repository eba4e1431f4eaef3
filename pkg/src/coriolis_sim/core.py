"""Deterministic rotating-frame point-mass dynamics.

The turntable spins about +z.  A body observed from the co-rotating frame
feels three fictitious accelerations on top of any real (applied + friction)
force:

    a = F_applied/m + F_fric/m - 2 w x v - w x (w x r) - alpha x r

Integration is classical RK4 at a fixed timestep; the frame angle theta is
advanced analytically so it never drifts relative to omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .vec import Vec3, ZERO


class SimulationError(ValueError):
    """Base class for simulator input errors."""


class InvalidInputError(SimulationError):
    pass


class InvalidParamsError(SimulationError):
    pass


class InvalidTimestepError(SimulationError):
    pass


DEFAULT_DT = 1e-3  # s, matches the 1 kHz haptic servo budget
STANDARD_GRAVITY = 9.81  # m/s^2


def _require_finite(*vectors: Vec3) -> None:
    for v in vectors:
        if not v.is_finite():
            raise InvalidInputError(f"non-finite vector component in {v}")


def _require_axial(v: Vec3, what: str) -> None:
    if v.x != 0.0 or v.y != 0.0:
        raise InvalidInputError(f"{what} must be parallel to +z, got {v}")


@dataclass(frozen=True)
class RotatingFrame:
    """Angular state of the turntable: omega/alpha along +z, accumulated angle theta."""

    omega: Vec3 = ZERO
    alpha: Vec3 = ZERO
    theta: float = 0.0

    def __post_init__(self) -> None:
        _require_finite(self.omega, self.alpha)
        if not math.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")
        _require_axial(self.omega, "omega")
        _require_axial(self.alpha, "alpha")

    @property
    def omega_z(self) -> float:
        return self.omega.z

    @property
    def alpha_z(self) -> float:
        return self.alpha.z


@dataclass(frozen=True)
class BodyState:
    """Position/velocity of the body expressed in the rotating frame."""

    t: float = 0.0
    r_rot: Vec3 = ZERO
    v_rot: Vec3 = ZERO
    mass: float = 0.5

    def __post_init__(self) -> None:
        _require_finite(self.r_rot, self.v_rot)
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise InvalidInputError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class FrictionParams:
    """Coulomb friction against the disc surface (normal force = m*g)."""

    mu_s: float = 0.0
    mu_k: float = 0.0
    g: float = STANDARD_GRAVITY
    v_eps: float = 1e-6  # static/slip velocity threshold, m/s

    def __post_init__(self) -> None:
        if not (self.mu_s >= self.mu_k >= 0.0):
            raise InvalidParamsError(
                f"require mu_s >= mu_k >= 0, got mu_s={self.mu_s}, mu_k={self.mu_k}"
            )
        if self.g < 0.0 or self.v_eps < 0.0:
            raise InvalidParamsError("g and v_eps must be non-negative")


@dataclass(frozen=True)
class ForceBreakdown:
    """Per-component forces (N) acting on the body at one instant."""

    coriolis: Vec3 = ZERO
    centrifugal: Vec3 = ZERO
    euler: Vec3 = ZERO
    friction: Vec3 = ZERO
    applied: Vec3 = ZERO

    def total(self) -> Vec3:
        return self.coriolis + self.centrifugal + self.euler + self.friction + self.applied

    def fictitious(self) -> Vec3:
        return self.coriolis + self.centrifugal + self.euler


def coriolis_accel(frame: RotatingFrame, v_rot: Vec3) -> Vec3:
    """-2 w x v: deflects moving bodies perpendicular to their velocity."""
    _require_finite(v_rot)
    return frame.omega.cross(v_rot) * -2.0


def centrifugal_accel(frame: RotatingFrame, r_rot: Vec3) -> Vec3:
    """-w x (w x r): radially outward from the spin axis."""
    _require_finite(r_rot)
    return -frame.omega.cross(frame.omega.cross(r_rot))


def euler_accel(frame: RotatingFrame, r_rot: Vec3) -> Vec3:
    """-alpha x r: present only while the spin rate is changing."""
    _require_finite(r_rot)
    return -frame.alpha.cross(r_rot)


def surface_friction(
    state: BodyState,
    params: FrictionParams,
    tangential_applied: Vec3,
    on_surface: bool,
) -> Vec3:
    """Coulomb friction force from the disc surface, in the rotating frame.

    The disc is at rest in the rotating frame, so the slip velocity is v_rot.
    Below the slip threshold, static friction cancels the tangential load up
    to mu_s*m*g; above it (or while slipping) kinetic friction applies.
    """
    _require_finite(tangential_applied)
    if not on_surface:
        return ZERO
    n = state.mass * params.g
    speed = state.v_rot.norm()
    if speed > params.v_eps:
        return state.v_rot * (-params.mu_k * n / speed)
    load = tangential_applied.norm()
    if load <= params.mu_s * n:
        return -tangential_applied
    if load == 0.0:
        return ZERO
    return tangential_applied * (-params.mu_k * n / load)


def net_forces(
    state: BodyState,
    frame: RotatingFrame,
    params: FrictionParams,
    applied: Vec3,
    on_surface: bool,
) -> ForceBreakdown:
    """Full force breakdown at the given state.

    Friction sees the total non-friction tangential load (applied plus
    fictitious), so a parked body under sub-threshold load nets to zero.
    """
    _require_finite(applied)
    m = state.mass
    f_cor = coriolis_accel(frame, state.v_rot) * m
    f_cen = centrifugal_accel(frame, state.r_rot) * m
    f_eul = euler_accel(frame, state.r_rot) * m
    load = applied + f_cor + f_cen + f_eul
    f_fric = surface_friction(state, params, load, on_surface)
    return ForceBreakdown(
        coriolis=f_cor, centrifugal=f_cen, euler=f_eul, friction=f_fric, applied=applied
    )


def _accel_planar(
    rx: float,
    ry: float,
    vx: float,
    vy: float,
    wz: float,
    az: float,
    mass: float,
    params: FrictionParams,
    ax_app: float,
    ay_app: float,
    on_surface: bool,
) -> tuple[float, float]:
    # fictitious terms for w = wz ez, alpha = az ez, planar r, v
    fx = 2.0 * wz * vy + wz * wz * rx + az * ry + ax_app
    fy = -2.0 * wz * vx + wz * wz * ry - az * rx + ay_app
    if on_surface:
        mu_g = params.g
        speed = math.sqrt(vx * vx + vy * vy)
        if speed > params.v_eps:
            k = params.mu_k * mu_g / speed
            fx -= k * vx
            fy -= k * vy
        else:
            load = math.sqrt(fx * fx + fy * fy)
            if load <= params.mu_s * mu_g:
                return (0.0, 0.0)
            if load > 0.0:
                k = params.mu_k * mu_g / load
                fx -= k * fx
                fy -= k * fy
    return (fx, fy)


def step(
    state: BodyState,
    frame: RotatingFrame,
    params: FrictionParams,
    applied: Vec3,
    on_surface: bool,
    dt: float = DEFAULT_DT,
) -> tuple[BodyState, RotatingFrame]:
    """Advance the body by one fixed RK4 step and the frame angle analytically.

    Deterministic: identical inputs give bitwise-identical outputs.  A body
    decelerated through zero by kinetic friction is snapped to rest when the
    static condition holds, avoiding stick-slip chatter at v ~ 0.
    """
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidTimestepError(f"dt must be positive, got {dt}")
    _require_finite(applied)

    wz0 = frame.omega_z
    az = frame.alpha_z
    m = state.mass
    # applied acceleration (z discarded: planar dynamics)
    ax_app = applied.x / m
    ay_app = applied.y / m

    rx, ry = state.r_rot.x, state.r_rot.y
    vx, vy = state.v_rot.x, state.v_rot.y

    def deriv(rx_, ry_, vx_, vy_, s):
        ax, ay = _accel_planar(
            rx_, ry_, vx_, vy_, wz0 + az * s, az, m, params, ax_app, ay_app, on_surface
        )
        return vx_, vy_, ax, ay

    h = dt
    k1 = deriv(rx, ry, vx, vy, 0.0)
    k2 = deriv(
        rx + 0.5 * h * k1[0], ry + 0.5 * h * k1[1],
        vx + 0.5 * h * k1[2], vy + 0.5 * h * k1[3], 0.5 * h,
    )
    k3 = deriv(
        rx + 0.5 * h * k2[0], ry + 0.5 * h * k2[1],
        vx + 0.5 * h * k2[2], vy + 0.5 * h * k2[3], 0.5 * h,
    )
    k4 = deriv(
        rx + h * k3[0], ry + h * k3[1],
        vx + h * k3[2], vy + h * k3[3], h,
    )
    sixth = h / 6.0
    new_rx = rx + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    new_ry = ry + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    new_vx = vx + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    new_vy = vy + sixth * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])

    if on_surface and params.mu_k > 0.0:
        # remaining speed is below one kinetic-friction kick per step, so the
        # body stops within the next dt: park it if static friction holds
        if math.hypot(new_vx, new_vy) <= params.mu_k * params.g * dt:
            wz1 = wz0 + az * dt
            lx = ax_app + wz1 * wz1 * new_rx + az * new_ry
            ly = ay_app + wz1 * wz1 * new_ry - az * new_rx
            if math.hypot(lx, ly) <= params.mu_s * params.g:
                new_vx = 0.0
                new_vy = 0.0

    new_state = replace(
        state,
        t=state.t + dt,
        r_rot=Vec3(new_rx, new_ry, 0.0),
        v_rot=Vec3(new_vx, new_vy, 0.0),
    )
    new_frame = RotatingFrame(
        omega=Vec3(0.0, 0.0, wz0 + az * dt),
        alpha=frame.alpha,
        theta=frame.theta + wz0 * dt + 0.5 * az * dt * dt,
    )
    return new_state, new_frame


def _rotate_z(v: Vec3, theta: float) -> Vec3:
    c = math.cos(theta)
    s = math.sin(theta)
    return Vec3(c * v.x - s * v.y, s * v.x + c * v.y, v.z)


def to_inertial(state: BodyState, frame: RotatingFrame) -> tuple[Vec3, Vec3]:
    """Map the rotating-frame pose to the fixed frame."""
    r_in = _rotate_z(state.r_rot, frame.theta)
    v_in = _rotate_z(state.v_rot + frame.omega.cross(state.r_rot), frame.theta)
    return r_in, v_in


def to_rotating(r_in: Vec3, v_in: Vec3, frame: RotatingFrame) -> tuple[Vec3, Vec3]:
    """Exact inverse of to_inertial."""
    _require_finite(r_in, v_in)
    r_rot = _rotate_z(r_in, -frame.theta)
    v_rot = _rotate_z(v_in, -frame.theta) - frame.omega.cross(r_rot)
    return r_rot, v_rot


def jacobi_energy(state: BodyState, frame: RotatingFrame) -> float:
    """Specific Jacobi integral 0.5|v_rot|^2 - 0.5|w x r|^2.

    Conserved for free motion (no friction, no applied force, alpha = 0) in a
    uniformly rotating frame; used as a numerical-integrity oracle.
    """
    wr = frame.omega.cross(state.r_rot)
    return 0.5 * state.v_rot.dot(state.v_rot) - 0.5 * wr.dot(wr)
