"""Haptic device abstraction with the Falcon-class envelope.

The device reports a grip position inside a cube workspace and accepts a
force command each 1 ms tick.  Input is turned into a push on the body via a
spring-damper virtual coupling; output displays the fictitious forces,
clamped to the hardware maximum without changing direction.  No real driver
here: ScriptedDevice is the seam where hardware would attach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import BodyState, ForceBreakdown, InvalidInputError, SimulationError
from .vec import Vec3, ZERO

LBF_TO_N = 4.448
INCH_TO_M = 0.0254


class InvalidScriptError(SimulationError):
    pass


@dataclass(frozen=True)
class DeviceSpec:
    # 4-inch cube workspace, ~2 lbf max force, 1 kHz servo tick
    workspace_half_extent: float = 2.0 * INCH_TO_M  # 0.0508 m
    f_max: float = 2.0 * LBF_TO_N  # 8.896 N
    tick: float = 1e-3
    resolution_quantum: float = 0.0  # optional position quantization, off by default

    def __post_init__(self) -> None:
        if self.workspace_half_extent <= 0 or self.f_max <= 0 or self.tick <= 0:
            raise InvalidInputError("device spec extents must be positive")
        if self.resolution_quantum < 0:
            raise InvalidInputError("resolution_quantum must be >= 0")


@dataclass(frozen=True)
class CouplingParams:
    k_c: float = 50.0  # N/m
    b_c: float = 2.0  # N*s/m
    display_gain: float = 1.0

    def __post_init__(self) -> None:
        if self.k_c < 0 or self.b_c < 0 or self.display_gain < 0:
            raise InvalidInputError("coupling parameters must be >= 0")


@dataclass(frozen=True)
class HapticFrameCommand:
    tick_index: int
    force_out: Vec3
    proxy_pos_device: Vec3


@dataclass(frozen=True)
class DeviceMapping:
    p_world: Vec3
    p_device: Vec3  # clamped (and optionally quantized) device position
    clamped: bool


def clamp_to_magnitude(v: Vec3, f_max: float) -> Vec3:
    """Saturate |v| at f_max, preserving direction."""
    mag = v.norm()
    if mag <= f_max or mag == 0.0:
        return v
    return v * (f_max / mag)


def _quantize(x: float, q: float) -> float:
    return round(x / q) * q if q > 0.0 else x


def map_device_to_world(p_device: Vec3, spec: DeviceSpec, disc_radius: float) -> DeviceMapping:
    """Scale the device cube onto the disc; out-of-workspace readings clamp."""
    if not p_device.is_finite():
        raise InvalidInputError(f"non-finite device reading {p_device}")
    h = spec.workspace_half_extent
    cx = min(max(p_device.x, -h), h)
    cy = min(max(p_device.y, -h), h)
    cz = min(max(p_device.z, -h), h)
    clamped = (cx, cy, cz) != (p_device.x, p_device.y, p_device.z)
    q = spec.resolution_quantum
    p_dev = Vec3(_quantize(cx, q), _quantize(cy, q), _quantize(cz, q))
    scale = disc_radius / h
    return DeviceMapping(
        p_world=Vec3(p_dev.x * scale, p_dev.y * scale, 0.0),  # planar scene
        p_device=p_dev,
        clamped=clamped,
    )


def coupling_force(p_world: Vec3, body: BodyState, params: CouplingParams) -> Vec3:
    """Spring-damper pull of the body toward the device proxy."""
    if not p_world.is_finite():
        raise InvalidInputError(f"non-finite proxy position {p_world}")
    f = (p_world - body.r_rot) * params.k_c - body.v_rot * params.b_c
    return f.with_z(0.0)


def display_force(forces: ForceBreakdown, params: CouplingParams, spec: DeviceSpec) -> Vec3:
    """Fictitious-force sum scaled by the display gain and clamped to f_max."""
    return clamp_to_magnitude(forces.fictitious() * params.display_gain, spec.f_max)


def haptic_tick(device_reading: Vec3, session, spec: DeviceSpec,
                params: CouplingParams) -> HapticFrameCommand:
    """One full servo cycle: read, couple, step one dt, display.

    Pure function of (reading, prior session state); tick_index increments.
    """
    mapping = map_device_to_world(device_reading, spec, session.config.disc_radius)
    applied = coupling_force(mapping.p_world, session.state, params)
    session.step_one(applied)
    force_out = display_force(session.forces(applied), params, spec)
    return HapticFrameCommand(
        tick_index=session.tick_index,
        force_out=force_out,
        proxy_pos_device=mapping.p_device,
    )


class ScriptedDevice:
    """Test double for the physical device: holds the last scripted position."""

    def __init__(self, script: Sequence[tuple[int, Vec3]] = ()):
        last = -1
        for tick, pos in script:
            if tick <= last:
                raise InvalidScriptError(
                    f"script tick indices must be strictly increasing, got {tick} after {last}"
                )
            if tick < 0:
                raise InvalidScriptError(f"negative tick index {tick}")
            if not pos.is_finite():
                raise InvalidScriptError(f"non-finite script position {pos}")
            last = tick
        self._script = tuple((int(t), p) for t, p in script)

    def read(self, tick_index: int) -> Vec3:
        pos = ZERO
        for tick, p in self._script:
            if tick > tick_index:
                break
            pos = p
        return pos


def load_device_script(path: str) -> ScriptedDevice:
    """Read a tick,x,y,z CSV (header optional) into a ScriptedDevice."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if lineno == 1 and parts[0].strip().lower() == "tick":
                continue
            if len(parts) != 4:
                raise InvalidScriptError(f"{path}:{lineno}: expected tick,x,y,z")
            try:
                tick = int(parts[0])
                x, y, z = (float(p) for p in parts[1:])
            except ValueError as exc:
                raise InvalidScriptError(f"{path}:{lineno}: {exc}") from exc
            entries.append((tick, Vec3(x, y, z)))
    return ScriptedDevice(entries)
