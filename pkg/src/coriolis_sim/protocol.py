"""Text-frame protocol between the session service and its clients.

Every frame is one UTF-8 JSON object.  decode() is total: any input either
yields a message or raises ProtocolError, never anything else.  Unknown extra
fields are ignored for forward compatibility; unknown types are rejected.
"""

from __future__ import annotations

import json
import math
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator


class ProtocolError(ValueError):
    pass


ParamName = Literal["omega", "mu_k", "mu_s", "mass", "gain"]
FrameName = Literal["rotating", "inertial"]

Vector = tuple[float, float, float]


def _check_finite_vec(v):
    if not all(math.isfinite(c) for c in v):
        raise ValueError("vector components must be finite")
    return v


class _Msg(BaseModel):
    model_config = ConfigDict(extra="ignore")


class InputMsg(_Msg):
    type: Literal["input"] = "input"
    position: Vector  # device-coordinate pointer/grip position, meters

    _finite = field_validator("position")(_check_finite_vec)


class SetParamMsg(_Msg):
    type: Literal["set_param"] = "set_param"
    name: ParamName
    value: float

    @field_validator("value")
    @classmethod
    def _finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("value must be finite")
        return v


class VantageMsg(_Msg):
    type: Literal["vantage"] = "vantage"
    frame: FrameName


class LaunchMsg(_Msg):
    type: Literal["launch"] = "launch"
    impulse: Vector

    _finite = field_validator("impulse")(_check_finite_vec)


class ResetMsg(_Msg):
    type: Literal["reset"] = "reset"


class BallPayload(_Msg):
    r_rot: Vector
    v_rot: Vector
    r_in: Vector


class ForcesPayload(_Msg):
    coriolis: Vector
    centrifugal: Vector
    euler: Vector
    friction: Vector
    applied: Vector


class StateMsg(_Msg):
    type: Literal["state"] = "state"
    seq: int
    t: float
    theta: float
    omega: float
    ball: BallPayload
    forces: ForcesPayload
    trace_tail: list[Vector] = Field(default_factory=list, max_length=256)


class ErrorMsg(_Msg):
    type: Literal["error"] = "error"
    reason: str


Message = Union[InputMsg, SetParamMsg, VantageMsg, LaunchMsg, ResetMsg, StateMsg, ErrorMsg]

_TYPES: dict[str, type[_Msg]] = {
    "input": InputMsg,
    "set_param": SetParamMsg,
    "vantage": VantageMsg,
    "launch": LaunchMsg,
    "reset": ResetMsg,
    "state": StateMsg,
    "error": ErrorMsg,
}


def _reject_constant(token: str):
    # bare NaN/Infinity tokens are not valid protocol numbers
    raise ProtocolError(f"non-finite constant {token!r} in frame")


def encode(msg: Message) -> str:
    """Serialize with canonical (declaration-order) fields, compact separators."""
    return json.dumps(msg.model_dump(mode="json"), separators=(",", ":"))


def decode(text) -> Message:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError(f"frame is not UTF-8: {exc}") from exc
    if not isinstance(text, str):
        raise ProtocolError(f"frame must be text, got {type(text).__name__}")
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except ProtocolError:
        raise
    except Exception as exc:
        raise ProtocolError(f"frame is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("frame must be a JSON object")
    msg_type = obj.get("type")
    if not isinstance(msg_type, str) or msg_type not in _TYPES:
        raise ProtocolError(f"unknown message type {msg_type!r}")
    cls = _TYPES[msg_type]
    try:
        return cls.model_validate(obj)
    except ValidationError as exc:
        raise ProtocolError(f"invalid {msg_type} message: {exc.errors()[:3]}") from exc
