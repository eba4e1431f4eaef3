"""FastAPI service: REST endpoints for batch runs and study tools, plus a
WebSocket session that streams simulation state and accepts steering input.

Each WebSocket connection owns one session; incoming messages are applied in
arrival order between physics batches.  The physics advances at the 1 kHz
internal rate in batches sized for a ~30-60 Hz publish cadence.
"""

from __future__ import annotations

import asyncio
from collections import deque
from dataclasses import replace
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, Field

from . import core, haptics, protocol, scenarios, study
from .scenarios import ScenarioConfig, ScenarioKind, Session, Vantage
from .vec import Vec3, ZERO

PUBLISH_HZ = 30
TRACE_TAIL_LEN = 256


class LiveSession:
    """Single-writer wrapper around a Session for the streaming service."""

    def __init__(self, config: ScenarioConfig | None = None,
                 spec: haptics.DeviceSpec | None = None,
                 coupling: haptics.CouplingParams | None = None):
        self.config = config or ScenarioConfig()
        self.spec = spec or haptics.DeviceSpec()
        self.coupling = coupling or haptics.CouplingParams()
        self.vantage = self.config.effective_vantage
        self.session = Session(self.config)
        self.device_pos: Optional[Vec3] = None  # held pointer/device position
        self.seq = 0
        self._tail: deque[tuple[Vec3, Vec3]] = deque(maxlen=TRACE_TAIL_LEN)
        self.ticks_per_publish = max(1, round(1.0 / (PUBLISH_HZ * self.config.dt)))
        self._last_applied = ZERO

    # -- input handling -------------------------------------------------

    def apply(self, msg: protocol.Message) -> Optional[protocol.ErrorMsg]:
        try:
            if isinstance(msg, protocol.InputMsg):
                self.device_pos = Vec3(*msg.position)
            elif isinstance(msg, protocol.SetParamMsg):
                self._set_param(msg.name, msg.value)
            elif isinstance(msg, protocol.VantageMsg):
                self.vantage = Vantage(msg.frame)
            elif isinstance(msg, protocol.LaunchMsg):
                self._launch(Vec3(*msg.impulse))
            elif isinstance(msg, protocol.ResetMsg):
                self._reset()
            else:
                return protocol.ErrorMsg(reason=f"unexpected message type {msg.type!r}")
        except (core.SimulationError, protocol.ProtocolError, ValueError) as exc:
            return protocol.ErrorMsg(reason=str(exc))
        return None

    def apply_text(self, text: str) -> Optional[protocol.ErrorMsg]:
        try:
            msg = protocol.decode(text)
        except protocol.ProtocolError as exc:
            return protocol.ErrorMsg(reason=str(exc))
        return self.apply(msg)

    def _set_param(self, name: str, value: float) -> None:
        s = self.session
        if name == "omega":
            # theta stays continuous; only future dynamics change
            s.frame = core.RotatingFrame(
                omega=Vec3(0.0, 0.0, value), alpha=s.frame.alpha, theta=s.frame.theta
            )
        elif name == "mu_k":
            s.friction = replace(s.friction, mu_k=value)
        elif name == "mu_s":
            s.friction = replace(s.friction, mu_s=value)
        elif name == "mass":
            s.state = replace(s.state, mass=value)
        elif name == "gain":
            self.coupling = replace(self.coupling, display_gain=value)
        else:
            raise ValueError(f"unknown parameter {name!r}")

    def _launch(self, impulse: Vec3) -> None:
        s = self.session
        s.state = core.BodyState(
            t=0.0, r_rot=ZERO, v_rot=impulse * (1.0 / s.state.mass), mass=s.state.mass
        )
        self._tail.clear()

    def _reset(self) -> None:
        frame = self.session.frame
        self.session = Session(self.config)
        self.session.frame = core.RotatingFrame(omega=frame.omega, theta=0.0)
        self.device_pos = None
        self._tail.clear()

    # -- physics / publishing -------------------------------------------

    def advance(self, n_ticks: int | None = None) -> None:
        n = self.ticks_per_publish if n_ticks is None else n_ticks
        for _ in range(n):
            if self.device_pos is not None:
                mapping = haptics.map_device_to_world(
                    self.device_pos, self.spec, self.config.disc_radius
                )
                applied = haptics.coupling_force(
                    mapping.p_world, self.session.state, self.coupling
                )
            else:
                applied = ZERO
            self.session.advance_one(applied)
            self._last_applied = applied
        r_in, _ = core.to_inertial(self.session.state, self.session.frame)
        self._tail.append((self.session.state.r_rot, r_in))

    def state_msg(self) -> protocol.StateMsg:
        s = self.session
        r_in, _ = core.to_inertial(s.state, s.frame)
        forces = s.forces(self._last_applied)
        tail_index = 0 if self.vantage is Vantage.ROTATING else 1
        self.seq += 1
        return protocol.StateMsg(
            seq=self.seq,
            t=s.state.t,
            theta=s.frame.theta,
            omega=s.frame.omega_z,
            ball=protocol.BallPayload(
                r_rot=s.state.r_rot.as_tuple(),
                v_rot=s.state.v_rot.as_tuple(),
                r_in=r_in.as_tuple(),
            ),
            forces=protocol.ForcesPayload(
                coriolis=forces.coriolis.as_tuple(),
                centrifugal=forces.centrifugal.as_tuple(),
                euler=forces.euler.as_tuple(),
                friction=forces.friction.as_tuple(),
                applied=forces.applied.as_tuple(),
            ),
            trace_tail=[p[tail_index].as_tuple() for p in self._tail],
        )


# -- REST models ---------------------------------------------------------


class SimulateRequest(BaseModel):
    scenario: ScenarioKind = ScenarioKind.BALL
    omega: float = 0.5
    mu_k: float = 0.0
    mu_s: float = 0.0
    mass: float = 0.5
    disc_radius: float = 1.0
    dt: float = core.DEFAULT_DT
    duration: float = Field(gt=0)
    impulse: tuple[float, float, float] = (0.0, 0.0, 0.0)
    vantage: Vantage | None = None
    record_stride: int = 10
    include_csv: bool = False


class SimulateResponse(BaseModel):
    scenario: ScenarioKind
    duration: float
    samples: int
    curvature: str
    vantage: Vantage
    final_r_rot: tuple[float, float, float]
    final_r_in: tuple[float, float, float]
    csv: str | None = None


class StudentIn(BaseModel):
    id: str
    gpa: float
    quiz_score: float | None = None


class BalanceRequest(BaseModel):
    roster: list[StudentIn]
    k: int = Field(ge=2)


class GroupOut(BaseModel):
    name: str
    members: list[str]
    gpa_mean: float
    gpa_variance: float


class BalanceResponse(BaseModel):
    groups: list[GroupOut]
    objective: float
    method: str


class PairIn(BaseModel):
    pair_id: str
    control: str
    experimental: str
    independent_variable: str = ""


class ReportRequest(BaseModel):
    groups: dict[str, list[StudentIn]]
    pairs: list[PairIn]


class ReportRowOut(BaseModel):
    pair_id: str
    control: str
    experimental: str
    independent_variable: str
    delta_percent: float


class ReportResponse(BaseModel):
    rows: list[ReportRowOut]
    text: str


def _run_simulation(req: SimulateRequest) -> tuple[scenarios.Trace, ScenarioConfig]:
    friction = core.FrictionParams(mu_s=max(req.mu_s, req.mu_k), mu_k=req.mu_k)
    config = ScenarioConfig(
        kind=req.scenario,
        disc_radius=req.disc_radius,
        mass=req.mass,
        friction=friction,
        omega0=req.omega,
        vantage=req.vantage,
        dt=req.dt,
        record_stride=req.record_stride,
    )
    session = scenarios.launch(config, Vec3(*req.impulse))
    return scenarios.run(session, req.duration), config


def create_app() -> FastAPI:
    app = FastAPI(title="coriolis-sim")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        trace, config = _run_simulation(req)
        vantage = config.effective_vantage
        try:
            curvature = scenarios.curvature_sign(trace, vantage).value
        except scenarios.UndefinedCurvatureError:
            curvature = "undefined"
        last = trace.samples[-1]
        return SimulateResponse(
            scenario=config.kind,
            duration=req.duration,
            samples=len(trace.samples),
            curvature=curvature,
            vantage=vantage,
            final_r_rot=last.r_rot.as_tuple(),
            final_r_in=last.r_in.as_tuple(),
            csv=scenarios.trace_csv_bytes(trace).decode("utf-8") if req.include_csv else None,
        )

    @app.post("/study/balance", response_model=BalanceResponse)
    def balance(req: BalanceRequest):
        roster = [study.StudentRecord(s.id, s.gpa, s.quiz_score) for s in req.roster]
        assignment = study.balance_groups(roster, req.k)
        named = study.assignment_groups(assignment)
        return BalanceResponse(
            groups=[
                GroupOut(
                    name=name,
                    members=[s.id for s in g],
                    gpa_mean=assignment.means[i],
                    gpa_variance=assignment.variances[i],
                )
                for i, (name, g) in enumerate(named.items())
            ],
            objective=assignment.objective,
            method=assignment.method,
        )

    @app.post("/study/report", response_model=ReportResponse)
    def quiz_report(req: ReportRequest):
        groups = {
            name: [study.StudentRecord(s.id, s.gpa, s.quiz_score) for s in members]
            for name, members in req.groups.items()
        }
        pairs = [
            study.PairSpec(p.pair_id, p.control, p.experimental, p.independent_variable)
            for p in req.pairs
        ]
        rep = study.report(groups, pairs)
        return ReportResponse(
            rows=[
                ReportRowOut(
                    pair_id=r.pair_id,
                    control=r.control_group,
                    experimental=r.experimental_group,
                    independent_variable=r.independent_variable,
                    delta_percent=r.delta_percent,
                )
                for r in rep.rows
            ],
            text=rep.to_text(),
        )

    @app.websocket("/ws")
    async def ws_session(ws: WebSocket):
        await ws.accept()
        live = LiveSession()
        interval = 1.0 / PUBLISH_HZ
        try:
            while True:
                try:
                    text = await asyncio.wait_for(ws.receive_text(), timeout=interval)
                except asyncio.TimeoutError:
                    text = None
                if text is not None:
                    reply = live.apply_text(text)
                    if reply is not None:
                        await ws.send_text(protocol.encode(reply))
                live.advance()
                await ws.send_text(protocol.encode(live.state_msg()))
        except WebSocketDisconnect:
            pass

    return app


app = create_app()
