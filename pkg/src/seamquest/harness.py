"""Headless execution: the shared tick engine, scripted runs, coverage
maps, and museum metrics.

One TickEngine instance drives both scripted (headless) runs and live
interactive sessions, so the two are the same simulation by
construction; only the source of per-tick visitor commands differs.

The event log is line-delimited JSON, one object per line with keys
(t, kind, payload), in a fixed per-tick order: the visitor command line,
then one sample line per enabled beacon in listing order, then any game
events. With an equal scenario (seed included) the log is byte-identical
across runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import game as gm
from . import sensing as sn
from .errors import LogParseError
from .geometry import Point, point_in_convex
from .radio import NoiseChannel, RadioParams, deterministic_rssi, sample_rssi
from .rng import substream
from .scenario import Scenario
from .sensing import BeaconHistory, ProximityEstimate
from .world import (Beacon, Floorplan, MoveCommand, VisitorState, WorldState,
                    step)


def _dump_line(t: float, kind: str, payload: dict) -> str:
    return json.dumps({"t": t, "kind": kind, "payload": payload},
                      separators=(",", ":"), allow_nan=False)


def _command_payload(cmd: MoveCommand) -> dict:
    out: dict = {"kind": cmd.kind}
    if cmd.direction is not None:
        out["direction"] = list(cmd.direction)
    if cmd.facing is not None:
        out["facing"] = list(cmd.facing)
    if cmd.raised is not None:
        out["raised"] = cmd.raised
    return out


@dataclass
class TickResult:
    t: float
    visitor: VisitorState
    crowd_poses: list[tuple[Point, float]]
    estimates: dict[str, ProximityEstimate]
    active_quest: int | None
    zone: str | None
    events: list[gm.GameEvent]
    lines: list[str]
    gallery: str | None


class TickEngine:
    """The simulation loop body, one fixed tick per call.

    Every tick: apply the visitor command, move the crowd, sample every
    enabled beacon, refresh proximity estimates, advance the quest
    machine with the active quest's estimate, and append the tick's log
    lines. Callers choose where commands come from (script or client).
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.world = WorldState(floorplan=scenario.floorplan,
                                beacons=scenario.beacons,
                                visitor=scenario.visitor,
                                crowd=scenario.crowd,
                                t=0.0)
        self.params = scenario.radio
        self.cfg = scenario.sensing
        self.script = scenario.quests
        self.game = gm.initial_state(0.0)
        self._jitter_rng = substream(scenario.seed, "game/jitter")
        self.channels: dict[str, NoiseChannel] = {}
        self.histories: dict[str, BeaconHistory] = {}
        for b in scenario.beacons:
            if b.enabled:
                self.channels[b.beacon_id] = NoiseChannel(
                    substream(scenario.seed, f"radio/{b.beacon_id}"),
                    scenario.radio)
                self.histories[b.beacon_id] = BeaconHistory(b.beacon_id)
        self._beacon_by_id = {b.beacon_id: b for b in scenario.beacons}
        self.t = 0.0
        self.ticks_done = 0
        self.lines: list[str] = []

    @property
    def finished(self) -> bool:
        return self.ticks_done >= self.scenario.tick_count

    def _quest_beacon(self, quest_index: int) -> Beacon:
        bid = self.script.quests[quest_index].beacon_id
        return self._beacon_by_id[bid]

    def tick(self, command: MoveCommand) -> TickResult:
        dt = self.scenario.tick
        self.world = step(self.world, command, dt)
        t = self.world.t
        visitor = self.world.visitor
        crowd_poses = self.world.crowd_poses(t)

        sample_lines: list[str] = []
        for b in self.scenario.beacons:
            if not b.enabled:
                continue
            s = sample_rssi(b, visitor, self.world, t,
                            self.channels[b.beacon_id], self.params)
            sn.ingest(self.histories[b.beacon_id], s, self.cfg)
            sample_lines.append(_dump_line(t, "sample", {
                "beacon_id": b.beacon_id,
                "rssi": s.rssi,
                "detected": s.detected,
            }))

        estimates = {bid: sn.estimate(h, t, self.cfg)
                     for bid, h in self.histories.items()}

        active = gm.active_quest_index(self.game)
        est = None
        arrived = False
        if active is not None:
            bid = self.script.quests[active].beacon_id
            est = estimates[bid]
            arrived = sn.arrival_check(self.histories[bid], t, self.cfg)
        self.game, events = gm.advance(self.game, est, arrived, t,
                                       self._jitter_rng, self.script)

        gallery = self.world.floorplan.gallery_at(visitor.position)
        cmd_line = _dump_line(t, "command", {
            "command": _command_payload(command),
            "position": list(visitor.position),
            "facing": list(visitor.facing),
            "raised": visitor.phone_raised,
            "gallery": gallery,
            "active_quest": active,
            "zone": est.zone if est is not None else None,
        })
        lines = [cmd_line] + sample_lines
        for ev in events:
            lines.append(_dump_line(ev.time, ev.kind, ev.payload))
        self.lines.extend(lines)
        self.t = t
        self.ticks_done += 1
        return TickResult(t=t, visitor=visitor, crowd_poses=crowd_poses,
                          estimates=estimates, active_quest=active,
                          zone=est.zone if est is not None else None,
                          events=events, lines=lines, gallery=gallery)


class ScriptPlayer:
    """Feeds scripted visitor commands to the engine: the entry with the
    greatest time <= the tick's start time is in effect (idle before the
    first entry)."""

    def __init__(self, entries):
        self.entries = list(entries)
        self.pos = 0
        self.current = MoveCommand.idle()

    def command_at(self, t: float) -> MoveCommand:
        while self.pos < len(self.entries) and self.entries[self.pos].t <= t:
            self.current = self.entries[self.pos].command
            self.pos += 1
        return self.current


@dataclass
class RunMetrics:
    gallery_dwell_s: dict[str, float] = field(default_factory=dict)
    gallery_dwell_ticks: dict[str, int] = field(default_factory=dict)
    non_gallery_dwell_s: float = 0.0
    non_gallery_ticks: int = 0
    visit_order: list[str] = field(default_factory=list)
    quest_completion_t: list[float] = field(default_factory=list)
    feedback_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    lost_fraction: float = 0.0
    total_ticks: int = 0
    tick: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "gallery_dwell_s": dict(sorted(self.gallery_dwell_s.items())),
            "non_gallery_dwell_s": self.non_gallery_dwell_s,
            "visit_order": self.visit_order,
            "quest_completion_t": self.quest_completion_t,
            "feedback_counts": {f"{tr}/{zn}": n for (tr, zn), n
                                in sorted(self.feedback_counts.items())},
            "lost_fraction": self.lost_fraction,
            "total_ticks": self.total_ticks,
            "tick": self.tick,
        }


def compute_metrics(log_lines, floorplan: Floorplan,
                    scenario: Scenario) -> RunMetrics:
    """Museum metrics from a run's event log.

    Gallery assignment recomputes from the logged visitor position (the
    first listed gallery containing it), so the log's own gallery field
    is advisory. Dwell seconds are tick counts times the tick length.
    """
    m = RunMetrics(tick=scenario.tick)
    for line_no, line in enumerate(log_lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            kind = obj["kind"]
            payload = obj["payload"]
            t = obj["t"]
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise LogParseError(line_no, str(e)) from e
        if kind == "command":
            try:
                pos = tuple(payload["position"])
                zone = payload["zone"]
            except (KeyError, TypeError) as e:
                raise LogParseError(line_no, f"bad command line: {e}") from e
            m.total_ticks += 1
            gallery = floorplan.gallery_at(pos)
            if gallery is None:
                m.non_gallery_ticks += 1
            else:
                m.gallery_dwell_ticks[gallery] = (
                    m.gallery_dwell_ticks.get(gallery, 0) + 1)
                if gallery not in m.visit_order:
                    m.visit_order.append(gallery)
            if zone == sn.LOST:
                m.lost_fraction += 1.0
        elif kind == gm.EV_QUEST_COMPLETED:
            m.quest_completion_t.append(t)
        elif kind == gm.EV_FEEDBACK:
            try:
                key = (payload["trend"], payload["zone"])
            except (KeyError, TypeError) as e:
                raise LogParseError(line_no, f"bad feedback line: {e}") from e
            m.feedback_counts[key] = m.feedback_counts.get(key, 0) + 1
    m.gallery_dwell_s = {g: n * scenario.tick
                         for g, n in m.gallery_dwell_ticks.items()}
    m.non_gallery_dwell_s = m.non_gallery_ticks * scenario.tick
    m.lost_fraction = (m.lost_fraction / m.total_ticks) if m.total_ticks else 0.0
    return m


def run(scenario: Scenario) -> tuple[list[str], RunMetrics]:
    """Execute the whole scenario headlessly.

    Returns the event log (list of JSONL lines, no trailing newlines)
    and the computed metrics.
    """
    engine = TickEngine(scenario)
    player = ScriptPlayer(scenario.visitor_script)
    while not engine.finished:
        engine.tick(player.command_at(engine.t))
    metrics = compute_metrics(engine.lines, scenario.floorplan, scenario)
    return engine.lines, metrics


@dataclass(frozen=True)
class CoverageCell:
    x: float
    y: float
    beacon_id: str
    rssi: float | None      # None when undetected or unreachable
    unreachable: bool


def coverage_map(floorplan: Floorplan, beacons: list[Beacon],
                 params: RadioParams, resolution: float,
                 mode: str = "deterministic", seed: int = 0,
                 draws: int = 16) -> list[CoverageCell]:
    """Per-cell, per-beacon expected RSSI over a regular grid.

    Each cell is evaluated at its center, facing the beacon, with no
    crowd; static walls and shelves still occlude. Cells whose center
    lies inside an obstacle are unreachable. Deterministic mode is
    noise-free; mean-of-k mode averages `draws` independent noisy
    samples from the seeded per-beacon stream.
    """
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    if mode not in ("deterministic", "mean-of-k"):
        raise ValueError("mode must be 'deterministic' or 'mean-of-k'")
    xmin, ymin, xmax, ymax = floorplan.bounds
    nx = max(1, round((xmax - xmin) / resolution))
    ny = max(1, round((ymax - ymin) / resolution))
    cells: list[CoverageCell] = []
    for b in beacons:
        if not b.enabled:
            continue
        rng = substream(seed, f"coverage/{b.beacon_id}")
        for iy in range(ny):
            cy = ymin + (iy + 0.5) * resolution
            for ix in range(nx):
                cx = xmin + (ix + 0.5) * resolution
                center = (cx, cy)
                inside = any(point_in_convex(center, ob.polygon, strict=True)
                             for ob in floorplan.obstacles)
                if inside:
                    cells.append(CoverageCell(cx, cy, b.beacon_id, None, True))
                    continue
                d = math.hypot(b.position[0] - cx, b.position[1] - cy)
                if d > 0.0:
                    facing = ((b.position[0] - cx) / d, (b.position[1] - cy) / d)
                else:
                    facing = (1.0, 0.0)
                visitor = VisitorState(position=center, facing=facing,
                                       phone_raised=False, speed=1.0)
                mean = deterministic_rssi(b.position, visitor, floorplan, [],
                                          params)
                if mode == "deterministic":
                    value = mean
                else:
                    total = 0.0
                    for _ in range(draws):
                        total += (mean
                                  + params.sigma_slow_db * rng.gauss(0.0, 1.0)
                                  + params.sigma_fast_db * rng.gauss(0.0, 1.0))
                    value = total / draws
                if value < params.detect_floor_dbm:
                    cells.append(CoverageCell(cx, cy, b.beacon_id, None, False))
                else:
                    cells.append(CoverageCell(cx, cy, b.beacon_id, value, False))
    return cells


def coverage_csv(cells: list[CoverageCell]) -> str:
    """CSV rendering: x,y,beacon_id,value with value one of a dBm float,
    "none" (undetected), or "unreachable"."""
    lines = ["x,y,beacon_id,rssi"]
    for c in cells:
        if c.unreachable:
            v = "unreachable"
        elif c.rssi is None:
            v = "none"
        else:
            v = repr(c.rssi)
        lines.append(f"{c.x!r},{c.y!r},{c.beacon_id},{v}")
    return "\n".join(lines) + "\n"


def coverage_pgm(cells: list[CoverageCell], beacon_id: str,
                 params: RadioParams) -> str:
    """ASCII PGM grayscale for one beacon: detect floor maps to black,
    the reference power to white; undetected and unreachable are black."""
    mine = [c for c in cells if c.beacon_id == beacon_id]
    if not mine:
        raise ValueError(f"no coverage cells for beacon {beacon_id!r}")
    xs = sorted({c.x for c in mine})
    ys = sorted({c.y for c in mine})
    index = {(c.x, c.y): c for c in mine}
    span = params.p_ref_dbm - params.detect_floor_dbm
    rows = []
    for y in reversed(ys):  # PGM scans top-down; our y grows upward
        row = []
        for x in xs:
            c = index[(x, y)]
            if c.rssi is None:
                row.append(0)
            else:
                frac = (c.rssi - params.detect_floor_dbm) / span
                row.append(max(0, min(255, int(round(frac * 255)))))
        rows.append(" ".join(str(v) for v in row))
    header = f"P2\n{len(xs)} {len(ys)}\n255\n"
    return header + "\n".join(rows) + "\n"
