"""Interactive rotating-frame physics simulator with haptic force display.

Subpackages:
    core       rotating-frame dynamics, friction, RK4 stepping, frame transforms
    scenarios  ball-on-disc and glider runs, trace recording, CSV export
    haptics    device envelope, virtual coupling, force clamp, scripted device
    protocol   text-frame messages between service and clients
    service    FastAPI app (REST + WebSocket session streaming)
    study      GPA-balanced group assignment and paired quiz reports
"""

from .vec import Vec3, ZERO
from .core import (
    BodyState,
    ForceBreakdown,
    FrictionParams,
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
from .scenarios import (
    Curvature,
    ScenarioConfig,
    ScenarioKind,
    Session,
    Trace,
    TraceSample,
    Vantage,
    curvature_sign,
    export_csv,
    launch,
    run,
    vantage_view,
)

__all__ = [
    "Vec3", "ZERO",
    "BodyState", "ForceBreakdown", "FrictionParams", "RotatingFrame",
    "coriolis_accel", "centrifugal_accel", "euler_accel", "jacobi_energy",
    "net_forces", "step", "surface_friction", "to_inertial", "to_rotating",
    "Curvature", "ScenarioConfig", "ScenarioKind", "Session", "Trace",
    "TraceSample", "Vantage", "curvature_sign", "export_csv", "launch",
    "run", "vantage_view",
]
