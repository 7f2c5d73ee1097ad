"""Live session protocol: versioned line-JSON messages over any ordered
text transport, plus the session loop that lets a client play the game.

Client messages (all carry "v": 1):
  {"v":1,"kind":"walk","direction":<radians>}   walk one tick that way
  {"v":1,"kind":"turn","facing":<radians>}      turn in place
  {"v":1,"kind":"raise","raised":<bool>}        raise/lower the phone
  {"v":1,"kind":"ping","t_client":<number>}     echoed in the next state

Server messages: scenario_info (once, on connect), state (every tick),
feedback (one per game event), rssi_debug (every tick when enabled),
error (malformed client input; the session continues).

The session consumes the latest command-bearing client message delivered
before each tick (last writer wins within a tick; no message means
idle), so a recorded message script replays to the identical event log.
"""

from __future__ import annotations

import json
import math
import os
import queue
import time
from dataclasses import dataclass

from . import game as gm
from .harness import TickEngine, TickResult
from .scenario import Scenario
from .world import IDLE, MoveCommand

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    pass


def parse_client_message(text: str) -> dict:
    """Validate one raw client line; returns the parsed object."""
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"invalid JSON: {e}") from e
    if not isinstance(msg, dict):
        raise ProtocolError("message must be a JSON object")
    if msg.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {msg.get('v')!r}")
    kind = msg.get("kind")
    if kind == "walk":
        _finite_angle(msg, "direction")
    elif kind == "turn":
        _finite_angle(msg, "facing")
    elif kind == "raise":
        if not isinstance(msg.get("raised"), bool):
            raise ProtocolError("raise needs a boolean 'raised'")
    elif kind == "ping":
        tc = msg.get("t_client")
        if tc is not None and (isinstance(tc, bool)
                               or not isinstance(tc, (int, float))):
            raise ProtocolError("t_client must be a number")
    else:
        raise ProtocolError(f"unknown kind {kind!r}")
    return msg


def _finite_angle(msg: dict, key: str) -> float:
    v = msg.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)) \
            or not math.isfinite(v):
        raise ProtocolError(f"'{key}' must be a finite angle in radians")
    return float(v)


def command_from(msg: dict) -> MoveCommand | None:
    """MoveCommand for a parsed client message; None for ping."""
    kind = msg["kind"]
    if kind == "walk":
        a = float(msg["direction"])
        return MoveCommand.walk((math.cos(a), math.sin(a)))
    if kind == "turn":
        a = float(msg["facing"])
        return MoveCommand.turn((math.cos(a), math.sin(a)))
    if kind == "raise":
        return MoveCommand.set_raised(msg["raised"])
    return None


def _server_line(kind: str, t: float, payload: dict) -> str:
    return json.dumps({"v": PROTOCOL_VERSION, "kind": kind, "t": t,
                       "payload": payload},
                      separators=(",", ":"), allow_nan=False)


def scenario_info_message(scenario: Scenario, debug_rssi: bool) -> str:
    fp = scenario.floorplan
    payload = {
        "name": scenario.name,
        "bounds": list(fp.bounds),
        "walls": [{"a": list(w.a), "b": list(w.b),
                   "attenuation_db": w.attenuation_db} for w in fp.walls],
        "obstacles": [{"label": o.label,
                       "polygon": [list(v) for v in o.polygon],
                       "attenuation_db": o.attenuation_db}
                      for o in fp.obstacles],
        "galleries": [{"gallery_id": g.gallery_id, "rect": list(g.rect)}
                      for g in fp.galleries],
        "artifacts": [{"artifact_id": a.artifact_id,
                       "position": list(a.position),
                       "gallery_id": a.gallery_id} for a in fp.artifacts],
        "beacons": [{"beacon_id": b.beacon_id, "artifact_id": b.artifact_id,
                     "position": list(b.position), "enabled": b.enabled}
                    for b in scenario.beacons],
        "quests": [{"ghost_id": q.ghost_id, "artifact_id": q.artifact_id}
                   for q in scenario.quests.quests],
        "tick": scenario.tick,
        "duration": scenario.duration,
        "debug_rssi": debug_rssi,
    }
    return _server_line("scenario_info", 0.0, payload)


def state_message(result: TickResult, game_phase: str, quest_index: int,
                  active_ghost: str | None, pong) -> str:
    payload = {
        "visitor": {
            "position": list(result.visitor.position),
            "facing": list(result.visitor.facing),
            "raised": result.visitor.phone_raised,
        },
        "crowd": [[p[0], p[1], r] for p, r in result.crowd_poses],
        "phase": game_phase,
        "quest_index": quest_index,
        "active_ghost": active_ghost,
        "zone": result.zone,
        "gallery": result.gallery,
    }
    if pong is not None:
        payload["pong"] = pong
    return _server_line("state", result.t, payload)


def feedback_message(ev: gm.GameEvent) -> str:
    return _server_line("feedback", ev.time,
                        {"event": ev.kind, "data": ev.payload})


def rssi_debug_message(result: TickResult) -> str:
    beacons = [{"beacon_id": bid,
                "smoothed": est.smoothed_rssi,
                "zone": est.zone,
                "trend": est.trend}
               for bid, est in sorted(result.estimates.items())]
    return _server_line("rssi_debug", result.t, {"beacons": beacons})


def error_message(t: float, message: str) -> str:
    return _server_line("error", t, {"message": message})


class ScriptedTransport:
    """Deterministic replay transport: message i is delivered on poll
    number tick_index(i). One poll happens per tick, so a recorded
    interactive session replays exactly."""

    def __init__(self, timed_messages: list[tuple[int, str]]):
        self.pending = sorted(timed_messages, key=lambda m: m[0])
        self.polls = 0
        self.sent: list[str] = []

    def poll(self) -> list[str]:
        out = [text for tick, text in self.pending if tick == self.polls]
        self.pending = [(k, m) for k, m in self.pending if k != self.polls]
        self.polls += 1
        return out

    def send(self, text: str) -> None:
        self.sent.append(text)

    def closed(self) -> bool:
        return False

    def close(self) -> None:
        pass


class QueueTransport:
    """Thread-safe transport bridging a session thread to an async socket."""

    def __init__(self):
        self.inbox: queue.Queue = queue.Queue()
        self.outbox: queue.Queue = queue.Queue()
        self._closed = False

    def poll(self) -> list[str]:
        out = []
        while True:
            try:
                out.append(self.inbox.get_nowait())
            except queue.Empty:
                return out

    def send(self, text: str) -> None:
        self.outbox.put(text)

    def closed(self) -> bool:
        return self._closed

    def mark_closed(self) -> None:
        self._closed = True

    def close(self) -> None:
        self._closed = True
        self.outbox.put(None)  # sentinel: no more server messages


def default_run_dir() -> str:
    return os.environ.get("SEAMQUEST_RUN_DIR", "runs")


def persist_log(lines: list[str], scenario_name: str, run_dir: str | None,
                session_id: str | None = None) -> str:
    target_dir = run_dir if run_dir is not None else default_run_dir()
    os.makedirs(target_dir, exist_ok=True)
    stamp = session_id or time.strftime("%Y%m%d-%H%M%S")
    path = os.path.join(target_dir, f"{scenario_name}-{stamp}.jsonl")
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
    return path


@dataclass
class SessionResult:
    log_lines: list[str]
    log_path: str | None
    ticks: int


def serve_session(scenario: Scenario, transport, real_time: bool = False,
                  debug_rssi: bool = False, run_dir: str | None = None,
                  session_id: str | None = None,
                  persist: bool = True) -> SessionResult:
    """Run one interactive session over the given transport.

    Ticks until the scenario duration elapses or the transport reports
    closed; wall-clock paced when real_time. The final event log is
    persisted to the run directory (SEAMQUEST_RUN_DIR overrides the
    default) unless persist is False.
    """
    engine = TickEngine(scenario)
    try:
        transport.send(scenario_info_message(scenario, debug_rssi))
        next_wall = time.monotonic()
        while not engine.finished and not transport.closed():
            command = IDLE
            pong = None
            for text in transport.poll():
                try:
                    msg = parse_client_message(text)
                except ProtocolError as e:
                    transport.send(error_message(engine.t, str(e)))
                    continue
                if msg["kind"] == "ping":
                    pong = msg.get("t_client", engine.t)
                    continue
                command = command_from(msg)
            result = engine.tick(command)
            active = result.active_quest
            ghost = (scenario.quests.quests[active].ghost_id
                     if active is not None else None)
            transport.send(state_message(result, engine.game.phase,
                                         engine.game.quest_index, ghost, pong))
            for ev in result.events:
                transport.send(feedback_message(ev))
            if debug_rssi:
                transport.send(rssi_debug_message(result))
            if real_time:
                next_wall += scenario.tick
                delay = next_wall - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
    except (OSError, RuntimeError):
        pass  # transport failure: fall through to the log flush
    finally:
        try:
            transport.close()
        except (OSError, RuntimeError):
            pass
    log_path = None
    if persist:
        log_path = persist_log(engine.lines, scenario.name, run_dir,
                               session_id)
    return SessionResult(log_lines=engine.lines, log_path=log_path,
                         ticks=engine.ticks_done)
