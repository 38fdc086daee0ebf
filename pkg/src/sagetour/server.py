"""Live tour sessions over a WebSocket, steerable while they run.

Wire protocol: single-line JSON text messages shaped
``{"type": <t>, "payload": {...}}`` with types hello, frame, set_params,
playback, reseed, error.  Unknown payload fields are ignored; an unknown
type gets an error reply and the session keeps going.  Field-by-field
schemas are documented in the README.

Each connection owns an isolated pipeline: a reader task funnels client
messages into a mailbox queue, and the sender loop drains the mailbox
once per frame before computing it, so parameter changes land on the
next emitted frame and never retroactively.  Frame points are rounded
to 6 significant digits on the wire; offline exports keep full
precision.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, WebSocket
from starlette.websockets import WebSocketDisconnect

from .dataset import Dataset
from .sage import SageParams, apply_sage
from .tourpath import PathConfig, frame_stream

logger = logging.getLogger("sagetour.server")

DEFAULT_FPS = 25.0
MAX_FPS = 1000.0
WIRE_DIGITS = 6

_DISCONNECT = object()
_PATCHABLE = ("gamma", "R", "half_range")


def apply_params_live(current: SageParams, patch: dict) -> SageParams:
    """Return params with the patch applied; never mutates ``current``.

    Only gamma, R and half_range are patchable; other keys are ignored.
    While half_range is tracking R (was never set explicitly), a patched
    R carries the canvas scale along with it; an explicit half_range is
    never overridden.  Nonpositive or non-numeric values raise a
    ValueError naming the offending field.
    """
    kwargs = {
        "p_input": current.p_input,
        "R": current.R,
        "gamma": current.gamma,
        "half_range": current.half_range,
    }
    for field in _PATCHABLE:
        if field not in patch or patch[field] is None:
            continue
        try:
            value = float(patch[field])
        except (TypeError, ValueError):
            raise ValueError(f"{field} must be a positive number") from None
        if not value > 0:
            raise ValueError(f"{field} must be positive")
        kwargs[field] = value
    return SageParams(**kwargs)


def round_significant(a: np.ndarray, digits: int = WIRE_DIGITS) -> np.ndarray:
    """Round to ``digits`` significant digits, elementwise."""
    a = np.asarray(a, dtype=float)
    out = a.copy()
    nonzero = (a != 0) & np.isfinite(a)
    magnitude = np.floor(np.log10(np.abs(a[nonzero])))
    factor = 10.0 ** (digits - 1 - magnitude)
    out[nonzero] = np.round(a[nonzero] * factor) / factor
    return out


def _wire_params(params: SageParams) -> dict:
    return {
        "gamma": params.gamma,
        "R": params.R,
        "half_range": params.effective_half_range,
        "p_eff": params.p_eff,
        "focus_inverted": params.focus_inverted,
    }


def _message(kind: str, payload: dict) -> str:
    return json.dumps({"type": kind, "payload": payload})


def _error(reason: str, field: str | None = None) -> str:
    payload: dict = {"reason": reason}
    if field is not None:
        payload["field"] = field
    return _message("error", payload)


@dataclass
class SessionConfig:
    params: SageParams
    step_angle: float = 0.05
    seed: int = 0
    fps: float = DEFAULT_FPS


class TourSession:
    """Mutable per-connection state: stream position, params, playback."""

    def __init__(self, dataset: Dataset, cfg: SessionConfig):
        self.dataset = dataset
        self.params = cfg.params
        self.step_angle = cfg.step_angle
        self.seed = cfg.seed
        self.fps = cfg.fps
        self.playing = True
        self.next_index = 0
        self._frames = frame_stream(dataset.p, PathConfig(step_angle=cfg.step_angle, seed=cfg.seed))

    @property
    def period(self) -> float:
        return 1.0 / self.fps

    def hello_json(self) -> str:
        return _message(
            "hello",
            {
                "n": self.dataset.n,
                "p": self.dataset.p,
                "column_names": list(self.dataset.column_names),
                "labels": list(self.dataset.labels) if self.dataset.labels else None,
                "params": _wire_params(self.params),
                "seed": self.seed,
                "fps": self.fps,
            },
        )

    def next_frame_json(self) -> str:
        basis = next(self._frames)
        coords = apply_sage(self.dataset.values @ basis, self.params)
        message = _message(
            "frame",
            {
                "frame_index": self.next_index,
                "basis": basis.tolist(),
                "points": round_significant(coords).tolist(),
                "params": _wire_params(self.params),
            },
        )
        self.next_index += 1
        return message

    def _playback_ack(self) -> str:
        return _message(
            "playback",
            {"playing": self.playing, "fps": self.fps, "next_frame_index": self.next_index},
        )

    def handle(self, text: str) -> str | None:
        """Apply one client message; returns a reply to send, if any."""
        try:
            message = json.loads(text)
        except json.JSONDecodeError:
            return _error("message is not valid JSON")
        if not isinstance(message, dict) or not isinstance(message.get("type"), str):
            return _error("message must be an object with a string 'type'")
        kind = message["type"]
        payload = message.get("payload")
        if payload is None:
            payload = {}
        if not isinstance(payload, dict):
            return _error("payload must be an object", field="payload")
        if kind == "set_params":
            try:
                self.params = apply_params_live(self.params, payload)
            except ValueError as exc:
                field = next((f for f in _PATCHABLE if f in str(exc)), None)
                return _error(str(exc), field=field)
            return None
        if kind == "playback":
            action = payload.get("action")
            if action == "pause":
                self.playing = False
            elif action == "play":
                self.playing = True
            elif action == "rate":
                fps = payload.get("fps")
                if not isinstance(fps, (int, float)) or not 0 < fps <= MAX_FPS:
                    return _error(f"fps must be in (0, {MAX_FPS:g}]", field="fps")
                self.fps = float(fps)
            else:
                return _error("playback action must be pause, play, or rate", field="action")
            return self._playback_ack()
        if kind == "reseed":
            seed = payload.get("seed")
            if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
                return _error("seed must be a nonnegative integer", field="seed")
            self.seed = seed
            self._frames = frame_stream(self.dataset.p, PathConfig(step_angle=self.step_angle, seed=seed))
            return None
        return _error(f"unknown message type {kind!r}")


async def _reader(ws: WebSocket, mailbox: asyncio.Queue) -> None:
    while True:
        try:
            text = await ws.receive_text()
        except WebSocketDisconnect:
            mailbox.put_nowait(_DISCONNECT)
            return
        except (KeyError, RuntimeError):
            # Non-text frame or receive after close: surface as a bad message.
            mailbox.put_nowait("\x00non-text frame")
            continue
        mailbox.put_nowait(text)


async def _run_session(ws: WebSocket, session: TourSession, mailbox: asyncio.Queue) -> None:
    await ws.send_text(session.hello_json())
    while True:
        if not session.playing:
            incoming = await mailbox.get()
        else:
            incoming = mailbox.get_nowait() if not mailbox.empty() else None
        if incoming is _DISCONNECT:
            return
        if incoming is not None:
            if incoming.startswith("\x00"):
                await ws.send_text(_error("expected a text message"))
            else:
                reply = session.handle(incoming)
                if reply is not None:
                    await ws.send_text(reply)
            continue
        await ws.send_text(session.next_frame_json())
        await asyncio.sleep(session.period)


def _session_config(app_defaults: SessionConfig, query) -> SessionConfig:
    """Per-connection overrides via query params: seed, fps, gamma, R, half_range, step_angle."""
    params = app_defaults.params
    patch = {k: query[k] for k in _PATCHABLE if k in query}
    if patch:
        params = apply_params_live(params, patch)
    seed = int(query.get("seed", app_defaults.seed))
    fps = float(query.get("fps", app_defaults.fps))
    step_angle = float(query.get("step_angle", app_defaults.step_angle))
    if not 0 < fps <= MAX_FPS:
        raise ValueError(f"fps must be in (0, {MAX_FPS:g}]")
    return SessionConfig(params=params, step_angle=step_angle, seed=seed, fps=fps)


def create_app(
    dataset: Dataset,
    params: SageParams | None = None,
    step_angle: float = 0.05,
    seed: int = 0,
    fps: float = DEFAULT_FPS,
) -> FastAPI:
    """Build the ASGI app serving live tour sessions at ws /tour."""
    if params is None:
        params = SageParams.from_data(dataset.values)
    defaults = SessionConfig(params=params, step_angle=step_angle, seed=seed, fps=fps)
    app = FastAPI(title="sagetour")

    @app.get("/")
    def index() -> dict:
        return {
            "service": "sagetour",
            "tour_endpoint": "/tour",
            "n": dataset.n,
            "p": dataset.p,
        }

    @app.websocket("/tour")
    async def tour_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        try:
            cfg = _session_config(defaults, ws.query_params)
        except ValueError as exc:
            await ws.send_text(_error(str(exc)))
            await ws.close(code=1008)
            return
        session = TourSession(dataset, cfg)
        mailbox: asyncio.Queue = asyncio.Queue()
        reader = asyncio.create_task(_reader(ws, mailbox))
        try:
            await _run_session(ws, session, mailbox)
        except WebSocketDisconnect:
            pass
        except Exception:
            # Send races during client teardown are expected; anything else
            # still must not take the worker down.
            logger.debug("tour session ended abnormally", exc_info=True)
        finally:
            reader.cancel()

    return app


def serve(
    dataset: Dataset,
    bind: str = "127.0.0.1:8765",
    params: SageParams | None = None,
    step_angle: float = 0.05,
    seed: int = 0,
    fps: float = DEFAULT_FPS,
) -> None:
    """Run the tour server until interrupted."""
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bind must look like host:port, got {bind!r}")
    app = create_app(dataset, params=params, step_angle=step_angle, seed=seed, fps=fps)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
