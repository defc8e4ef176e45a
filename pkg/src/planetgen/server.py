"""Websocket front end for planet sessions.

One connection drives one session. Client frames are JSON text:
{type:"open", config:{...}} then {type:"camera", pos:[x,y,z], look:[x,y,z]}.
Every accepted frame is answered with a delta: one JSON control frame
followed by its binary tile frames. Bad frames get {type:"error", code:400}
and leave the session untouched. {type:"stats"} returns session counters
(used by the viewer's debug overlay).
"""
from __future__ import annotations

import asyncio
import json
import logging

import websockets

from .config import PlanetConfig, parse_config
from .errors import ConfigError, DomainError
from .lod import CameraState
from .service import PlanetSession, SessionDelta

log = logging.getLogger("planetgen.server")


def _error_frame(message) -> str:
    return json.dumps({"type": "error", "code": 400, "message": str(message)})


async def _send_delta(ws, delta: SessionDelta):
    await ws.send(json.dumps(delta.control_frame()))
    for frame in delta.tile_frames():
        await ws.send(frame)


def make_handler(default_config: PlanetConfig):
    async def handler(ws):
        session = None
        async for raw in ws:
            try:
                if isinstance(raw, (bytes, bytearray)):
                    raise ConfigError("expected a JSON text frame")
                msg = json.loads(raw)
                if not isinstance(msg, dict):
                    raise ConfigError("frame must be a JSON object")
                mtype = msg.get("type")
                if mtype == "open":
                    if session is not None:
                        raise ConfigError("session already open")
                    cfg = (parse_config(msg["config"]) if msg.get("config")
                           else default_config)
                    session = PlanetSession(cfg)
                    log.info("session %s opened", session.session_id)
                    await _send_delta(ws, session.open())
                elif mtype == "camera":
                    if session is None:
                        raise ConfigError("no open session")
                    camera = CameraState(
                        position=tuple(msg["pos"]),
                        look_direction=tuple(msg.get("look", (1.0, 0.0, 0.0))),
                    )
                    await _send_delta(ws, session.on_camera(camera))
                elif mtype == "stats":
                    if session is None:
                        raise ConfigError("no open session")
                    s = session.stats()
                    await ws.send(json.dumps({
                        "type": "stats",
                        "leaves": s.leaves,
                        "max_depth_in_use": s.max_depth_in_use,
                        "vertices_resident": s.vertices_resident,
                        "last_update_s": s.last_update_s,
                    }))
                else:
                    raise ConfigError(f"unknown frame type {mtype!r}")
            except (ConfigError, DomainError, KeyError, TypeError, ValueError) as e:
                await ws.send(_error_frame(e))
        if session is not None:
            log.info("session %s closed", session.session_id)

    return handler


async def serve(config: PlanetConfig, host: str = "127.0.0.1", port: int = 8765):
    """Bind and return the websocket server (caller owns its lifetime)."""
    return await websockets.serve(make_handler(config), host, port, max_size=None)


def run_server(config: PlanetConfig, host: str = "127.0.0.1", port: int = 8765):
    """Serve until interrupted. Raises OSError if the port cannot be bound."""

    async def main():
        server = await serve(config, host, port)
        log.info("listening on ws://%s:%d", host, port)
        try:
            await asyncio.Future()
        finally:
            server.close()
            await server.wait_closed()

    asyncio.run(main())
