"""The two demo scenarios: ball-on-disc (with friction) and frictionless glider.

A Session owns the live body/frame state and is stepped by exactly one
writer; completed Traces are immutable and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from . import core
from .core import (
    BodyState,
    ForceBreakdown,
    FrictionParams,
    RotatingFrame,
    SimulationError,
)
from .vec import Vec3, ZERO


class ConfigError(SimulationError):
    pass


class ExportError(SimulationError):
    pass


class UndefinedCurvatureError(SimulationError):
    pass


class ScenarioKind(str, Enum):
    BALL = "ball"
    GLIDER = "glider"


class Vantage(str, Enum):
    ROTATING = "rotating"
    INERTIAL = "inertial"


class Curvature(str, Enum):
    RIGHT = "right"
    LEFT = "left"
    STRAIGHT = "straight"


@dataclass(frozen=True)
class ScenarioConfig:
    kind: ScenarioKind = ScenarioKind.BALL
    disc_radius: float = 1.0
    mass: float = 0.5
    friction: FrictionParams = field(default_factory=FrictionParams)
    omega0: float = 0.5
    vantage: Vantage | None = None  # None: scenario default
    dt: float = core.DEFAULT_DT
    record_stride: int = 10  # 100 Hz trace at the default 1 kHz step rate

    def __post_init__(self) -> None:
        if self.disc_radius <= 0.0:
            raise ConfigError(f"disc_radius must be positive, got {self.disc_radius}")
        if self.mass <= 0.0:
            raise ConfigError(f"mass must be positive, got {self.mass}")
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.record_stride < 1:
            raise ConfigError(f"record_stride must be >= 1, got {self.record_stride}")
        if self.kind is ScenarioKind.GLIDER and (
            self.friction.mu_s != 0.0 or self.friction.mu_k != 0.0
        ):
            # the glider moves without surface friction
            object.__setattr__(
                self, "friction", replace(self.friction, mu_s=0.0, mu_k=0.0)
            )

    @property
    def effective_vantage(self) -> Vantage:
        if self.vantage is not None:
            return self.vantage
        return Vantage.ROTATING if self.kind is ScenarioKind.BALL else Vantage.INERTIAL


@dataclass(frozen=True)
class TraceSample:
    t: float
    r_rot: Vec3
    v_rot: Vec3
    r_in: Vec3
    v_in: Vec3
    theta: float
    forces: ForceBreakdown


@dataclass(frozen=True)
class Trace:
    config: ScenarioConfig
    samples: tuple[TraceSample, ...]


class Session:
    """Single-owner live simulation of one scenario."""

    def __init__(self, config: ScenarioConfig, impulse: Vec3 = ZERO):
        if not impulse.is_finite():
            raise ConfigError(f"impulse must be finite, got {impulse}")
        self.config = config
        self.state = BodyState(
            t=0.0, r_rot=ZERO, v_rot=impulse * (1.0 / config.mass), mass=config.mass
        )
        self.frame = RotatingFrame(omega=Vec3(0.0, 0.0, config.omega0))
        self.friction = config.friction
        self.tick_index = 0

    def on_surface(self) -> bool:
        if self.config.kind is not ScenarioKind.BALL:
            return False
        return self.state.r_rot.norm() <= self.config.disc_radius

    def forces(self, applied: Vec3 = ZERO) -> ForceBreakdown:
        return core.net_forces(
            self.state, self.frame, self.friction, applied, self.on_surface()
        )

    def advance_one(self, applied: Vec3 = ZERO) -> None:
        """Advance one dt without computing the force breakdown."""
        self.state, self.frame = core.step(
            self.state, self.frame, self.friction, applied, self.on_surface(), self.config.dt
        )
        self.tick_index += 1

    def step_one(self, applied: Vec3 = ZERO) -> ForceBreakdown:
        """Advance one dt; returns the force breakdown at the pre-step state."""
        breakdown = self.forces(applied)
        self.advance_one(applied)
        return breakdown

    def sample(self, applied: Vec3 = ZERO) -> TraceSample:
        r_in, v_in = core.to_inertial(self.state, self.frame)
        return TraceSample(
            t=self.state.t,
            r_rot=self.state.r_rot,
            v_rot=self.state.v_rot,
            r_in=r_in,
            v_in=v_in,
            theta=self.frame.theta,
            forces=self.forces(applied),
        )


def launch(config: ScenarioConfig, impulse: Vec3 = ZERO) -> Session:
    """Start a session with the body at the disc center, v = impulse/mass."""
    return Session(config, impulse)


def run(session: Session, duration: float) -> Trace:
    """Step the session for `duration` seconds, recording at the config stride."""
    if duration <= 0.0:
        raise ConfigError(f"duration must be positive, got {duration}")
    n_steps = round(duration / session.config.dt)
    stride = session.config.record_stride
    samples = []
    for i in range(1, n_steps + 1):
        session.advance_one()
        if i % stride == 0:
            samples.append(session.sample())
    return Trace(config=session.config, samples=tuple(samples))


def vantage_view(sample: TraceSample, vantage: Vantage) -> tuple[Vec3, str]:
    """Select the recorded position in the requested frame."""
    if vantage is Vantage.ROTATING:
        return sample.r_rot, Vantage.ROTATING.value
    return sample.r_in, Vantage.INERTIAL.value


CSV_HEADER = (
    "t,x_rot,y_rot,z_rot,vx_rot,vy_rot,vz_rot,"
    "x_in,y_in,z_in,vx_in,vy_in,vz_in,theta,"
    "fcor_x,fcor_y,fcor_z,fcen_x,fcen_y,fcen_z,"
    "ffric_x,ffric_y,ffric_z,fapp_x,fapp_y,fapp_z"
)


def _row(s: TraceSample) -> str:
    vals = (
        (s.t,)
        + s.r_rot.as_tuple()
        + s.v_rot.as_tuple()
        + s.r_in.as_tuple()
        + s.v_in.as_tuple()
        + (s.theta,)
        + s.forces.coriolis.as_tuple()
        + s.forces.centrifugal.as_tuple()
        + s.forces.friction.as_tuple()
        + s.forces.applied.as_tuple()
    )
    return ",".join(repr(v) for v in vals)


def trace_csv_bytes(trace: Trace) -> bytes:
    lines = [CSV_HEADER]
    lines.extend(_row(s) for s in trace.samples)
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_csv(trace: Trace, destination: str) -> int:
    """Write the trace as CSV (round-trip float precision); returns bytes written."""
    data = trace_csv_bytes(trace)
    try:
        with open(destination, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise ExportError(f"cannot write trace to {destination}: {exc}") from exc
    return len(data)


def curvature_sign(trace: Trace | Sequence[TraceSample], frame_choice: Vantage,
                   tolerance: float = 1e-9) -> Curvature:
    """Classify the selected-frame path as curving right, left, or straight.

    Accumulates the z-component of (chord x next-chord) along the path; for
    counterclockwise spin a free body's rotating-frame path curves clockwise,
    i.e. to the right.
    """
    samples = trace.samples if isinstance(trace, Trace) else tuple(trace)
    if len(samples) < 3:
        raise UndefinedCurvatureError("need at least 3 samples")
    points = [vantage_view(s, frame_choice)[0] for s in samples]
    chords = [b - a for a, b in zip(points, points[1:])]
    if all(c.norm() == 0.0 for c in chords):
        raise UndefinedCurvatureError("stationary trace has no curvature")
    acc = 0.0
    for a, b in zip(chords, chords[1:]):
        acc += a.x * b.y - a.y * b.x
    if abs(acc) < tolerance:
        return Curvature.STRAIGHT
    return Curvature.LEFT if acc > 0.0 else Curvature.RIGHT
