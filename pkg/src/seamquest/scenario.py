"""Scenario files: one JSON document describing a full simulated visit.

Sections: floorplan, beacons, radio, sensing, quests, visitor,
visitor_script, crowd, seed, duration, tick. Loading validates shape,
cross-references, and geometry, and reports failures with the path of
the offending field. Radio, sensing, and quest timing fields all have
defaults; geometry, beacons, quests, and the seed must be explicit.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from . import geometry as geo
from .errors import (ScenarioError, ScenarioGeometryError,
                     ScenarioReferenceError, ScenarioSchemaError)
from .game import DEFAULT_MESSAGES, FinalGhost, Quest, QuestScript
from .geometry import Point
from .radio import RadioParams
from .sensing import SmoothingConfig, TRENDS, ZONES
from .world import (Artifact, Beacon, CrowdAgent, Floorplan, Gallery,
                    MoveCommand, Obstacle, VisitorState, Wall)


@dataclass(frozen=True)
class ScriptEntry:
    t: float
    command: MoveCommand


@dataclass(frozen=True)
class Scenario:
    floorplan: Floorplan
    beacons: list[Beacon]
    radio: RadioParams
    sensing: SmoothingConfig
    quests: QuestScript
    visitor: VisitorState
    visitor_script: list[ScriptEntry]
    crowd: list[CrowdAgent]
    seed: int
    duration: float
    tick: float
    name: str = "scenario"

    @property
    def tick_count(self) -> int:
        return round(self.duration / self.tick)


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ScenarioSchemaError(f"{path}.{key}" if path else key,
                                  "missing required field")
    return doc[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSchemaError(path, "expected a number")
    v = float(value)
    if v != v or v in (float("inf"), float("-inf")):
        raise ScenarioSchemaError(path, "number must be finite")
    return v


def _string(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioSchemaError(path, "expected a non-empty string")
    return value


def _boolean(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ScenarioSchemaError(path, "expected a boolean")
    return value


def _listof(value, path: str) -> list:
    if not isinstance(value, list):
        raise ScenarioSchemaError(path, "expected a list")
    return value


def _object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioSchemaError(path, "expected an object")
    return value


def _point(value, path: str) -> Point:
    v = _listof(value, path)
    if len(v) != 2:
        raise ScenarioSchemaError(path, "expected [x, y]")
    return (_number(v[0], f"{path}[0]"), _number(v[1], f"{path}[1]"))


def _rect(value, path: str) -> tuple[float, float, float, float]:
    v = _listof(value, path)
    if len(v) != 4:
        raise ScenarioSchemaError(path, "expected [xmin, ymin, xmax, ymax]")
    r = tuple(_number(x, f"{path}[{i}]") for i, x in enumerate(v))
    if not (r[0] < r[2] and r[1] < r[3]):
        raise ScenarioGeometryError(path, "rectangle must have positive extent")
    return r


def _dataclass_from(section: dict, cls, path: str, unit_fields: dict):
    """Build a defaults-bearing dataclass from a JSON object, rejecting
    unknown keys."""
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in section.items():
        if key not in known:
            raise ScenarioSchemaError(f"{path}.{key}", "unknown field")
        kind = unit_fields.get(key, "number")
        if kind == "number":
            kwargs[key] = _number(value, f"{path}.{key}")
        elif kind == "string":
            kwargs[key] = _string(value, f"{path}.{key}")
        else:
            raise AssertionError(kind)
    return cls(**kwargs)


def _load_floorplan(doc: dict) -> Floorplan:
    fp = _object(_require(doc, "floorplan", ""), "floorplan")
    bounds = _rect(_require(fp, "bounds", "floorplan"), "floorplan.bounds")

    walls = []
    for i, w in enumerate(_listof(fp.get("walls", []), "floorplan.walls")):
        p = f"floorplan.walls[{i}]"
        w = _object(w, p)
        a = _point(_require(w, "a", p), f"{p}.a")
        b = _point(_require(w, "b", p), f"{p}.b")
        att = _number(_require(w, "attenuation_db", p), f"{p}.attenuation_db")
        if a == b:
            raise ScenarioGeometryError(p, "wall endpoints coincide")
        if att < 0:
            raise ScenarioSchemaError(f"{p}.attenuation_db", "must be >= 0")
        for name, pt in (("a", a), ("b", b)):
            if not geo.point_in_rect(pt, bounds):
                raise ScenarioGeometryError(f"{p}.{name}", "outside bounds")
        walls.append(Wall(a=a, b=b, attenuation_db=att))

    obstacles = []
    for i, ob in enumerate(_listof(fp.get("obstacles", []), "floorplan.obstacles")):
        p = f"floorplan.obstacles[{i}]"
        ob = _object(ob, p)
        label = _string(ob.get("label", f"obstacle-{i}"), f"{p}.label")
        att = _number(_require(ob, "attenuation_db", p), f"{p}.attenuation_db")
        if att < 0:
            raise ScenarioSchemaError(f"{p}.attenuation_db", "must be >= 0")
        raw = _listof(_require(ob, "polygon", p), f"{p}.polygon")
        if len(raw) < 3:
            raise ScenarioGeometryError(f"{p}.polygon",
                                        "polygon needs at least 3 vertices")
        poly = [_point(v, f"{p}.polygon[{j}]") for j, v in enumerate(raw)]
        poly = geo.ensure_ccw(poly)
        if not geo.is_convex_ccw(poly):
            raise ScenarioGeometryError(f"{p}.polygon",
                                        "polygon must be convex with nonzero area")
        for j, v in enumerate(poly):
            if not geo.point_in_rect(v, bounds):
                raise ScenarioGeometryError(f"{p}.polygon[{j}]", "outside bounds")
        obstacles.append(Obstacle(label=label, polygon=poly, attenuation_db=att))

    galleries = []
    seen_g: set[str] = set()
    for i, g in enumerate(_listof(fp.get("galleries", []), "floorplan.galleries")):
        p = f"floorplan.galleries[{i}]"
        g = _object(g, p)
        gid = _string(_require(g, "gallery_id", p), f"{p}.gallery_id")
        rect = _rect(_require(g, "rect", p), f"{p}.rect")
        if gid in seen_g:
            raise ScenarioReferenceError(f"{p}.gallery_id",
                                         f"duplicate gallery id {gid!r}")
        seen_g.add(gid)
        if not geo.rect_in_rect(rect, bounds):
            raise ScenarioGeometryError(f"{p}.rect", "outside bounds")
        galleries.append(Gallery(gallery_id=gid, rect=rect))

    artifacts = []
    seen_a: set[str] = set()
    for i, a in enumerate(_listof(fp.get("artifacts", []), "floorplan.artifacts")):
        p = f"floorplan.artifacts[{i}]"
        a = _object(a, p)
        aid = _string(_require(a, "artifact_id", p), f"{p}.artifact_id")
        pos = _point(_require(a, "position", p), f"{p}.position")
        gid = _string(_require(a, "gallery_id", p), f"{p}.gallery_id")
        if aid in seen_a:
            raise ScenarioReferenceError(f"{p}.artifact_id",
                                         f"duplicate artifact id {aid!r}")
        seen_a.add(aid)
        if gid not in seen_g:
            raise ScenarioReferenceError(f"{p}.gallery_id",
                                         f"unknown gallery {gid!r}")
        if not geo.point_in_rect(pos, bounds):
            raise ScenarioGeometryError(f"{p}.position", "outside bounds")
        artifacts.append(Artifact(artifact_id=aid, position=pos, gallery_id=gid))

    return Floorplan(bounds=bounds, walls=walls, obstacles=obstacles,
                     galleries=galleries, artifacts=artifacts)


def _load_beacons(doc: dict, floorplan: Floorplan) -> list[Beacon]:
    artifact_ids = {a.artifact_id for a in floorplan.artifacts}
    beacons = []
    seen: set[str] = set()
    for i, b in enumerate(_listof(_require(doc, "beacons", ""), "beacons")):
        p = f"beacons[{i}]"
        b = _object(b, p)
        bid = _string(_require(b, "beacon_id", p), f"{p}.beacon_id")
        aid = _string(_require(b, "artifact_id", p), f"{p}.artifact_id")
        pos = _point(_require(b, "position", p), f"{p}.position")
        enabled = _boolean(b.get("enabled", True), f"{p}.enabled")
        if bid in seen:
            raise ScenarioReferenceError(f"{p}.beacon_id",
                                         f"duplicate beacon id {bid!r}")
        seen.add(bid)
        if aid not in artifact_ids:
            raise ScenarioReferenceError(
                f"{p}.artifact_id",
                f"beacon {bid!r} references unknown artifact {aid!r}")
        if not geo.point_in_rect(pos, floorplan.bounds):
            raise ScenarioGeometryError(f"{p}.position", "outside bounds")
        beacons.append(Beacon(beacon_id=bid, artifact_id=aid, position=pos,
                              enabled=enabled))
    return beacons


_RADIO_FIELDS = {name: "number" for name in (
    "p_ref_dbm", "path_loss_exponent", "sigma_slow_db", "sigma_fast_db",
    "body_max_db", "crowd_per_agent_db", "raise_factor", "detect_floor_dbm",
    "shadow_tau_s")}

_SENSING_FIELDS = {
    "window_s": "number", "method": "string", "half_life_s": "number",
    "trend_gap_s": "number", "trend_epsilon_db": "number",
    "lost_timeout_s": "number", "near_dbm": "number", "mid_dbm": "number",
    "arrival_dbm": "number", "arrival_hold_s": "number",
}


def _load_quests(doc: dict, beacons: list[Beacon]) -> QuestScript:
    qsec = _object(_require(doc, "quests", ""), "quests")
    enabled_by_artifact: dict[str, list[Beacon]] = {}
    for b in beacons:
        if b.enabled:
            enabled_by_artifact.setdefault(b.artifact_id, []).append(b)

    quests = []
    for i, q in enumerate(_listof(_require(qsec, "quests", "quests"),
                                  "quests.quests")):
        p = f"quests.quests[{i}]"
        q = _object(q, p)
        ghost = _string(_require(q, "ghost_id", p), f"{p}.ghost_id")
        aid = _string(_require(q, "artifact_id", p), f"{p}.artifact_id")
        intro = q.get("intro")
        homes = enabled_by_artifact.get(aid, [])
        if not homes:
            raise ScenarioReferenceError(
                f"{p}.artifact_id",
                f"quest artifact {aid!r} has no enabled beacon")
        if len(homes) > 1:
            raise ScenarioReferenceError(
                f"{p}.artifact_id",
                f"quest artifact {aid!r} has several enabled beacons; "
                "the quest target must be unambiguous")
        kwargs = {"ghost_id": ghost, "artifact_id": aid,
                  "beacon_id": homes[0].beacon_id}
        if intro is not None:
            kwargs["intro"] = _string(intro, f"{p}.intro")
        quests.append(Quest(**kwargs))
    if not quests:
        raise ScenarioSchemaError("quests.quests", "at least one quest required")

    fsec = _object(_require(qsec, "final_ghost", "quests"), "quests.final_ghost")
    fkw = {
        "ghost_id": _string(_require(fsec, "ghost_id", "quests.final_ghost"),
                            "quests.final_ghost.ghost_id"),
        "museum_id": _string(_require(fsec, "museum_id", "quests.final_ghost"),
                             "quests.final_ghost.museum_id"),
    }
    if "text" in fsec:
        fkw["text"] = _string(fsec["text"], "quests.final_ghost.text")
    final_ghost = FinalGhost(**fkw)

    skw: dict = {"quests": quests, "final_ghost": final_ghost}
    for key in ("encounter_delay_s", "encounter_jitter_s", "feedback_period_s"):
        if key in qsec:
            skw[key] = _number(qsec[key], f"quests.{key}")
    for key, attr in (("recovery", "recovery_text"),
                      ("achievement", "achievement_text"),
                      ("share", "share_text")):
        if key in qsec:
            skw[attr] = _string(qsec[key], f"quests.{key}")
    if "messages" in qsec:
        msec = _object(qsec["messages"], "quests.messages")
        table = dict(DEFAULT_MESSAGES)
        for trend, zones in msec.items():
            if trend not in TRENDS:
                raise ScenarioSchemaError(f"quests.messages.{trend}",
                                          "unknown trend")
            zones = _object(zones, f"quests.messages.{trend}")
            for zone, text in zones.items():
                if zone not in ZONES:
                    raise ScenarioSchemaError(
                        f"quests.messages.{trend}.{zone}", "unknown zone")
                table[(trend, zone)] = _string(
                    text, f"quests.messages.{trend}.{zone}")
        skw["messages"] = table

    script = QuestScript(**skw)
    try:
        script.validate()
    except ValueError as e:
        raise ScenarioSchemaError("quests", str(e)) from e
    return script


def _load_command(entry: dict, path: str) -> MoveCommand:
    kind = _string(_require(entry, "cmd", path), f"{path}.cmd")
    try:
        if kind == "walk":
            return MoveCommand.walk(_point(_require(entry, "direction", path),
                                           f"{path}.direction"))
        if kind == "turn":
            return MoveCommand.turn(_point(_require(entry, "facing", path),
                                           f"{path}.facing"))
        if kind == "raise":
            return MoveCommand.set_raised(
                _boolean(_require(entry, "raised", path), f"{path}.raised"))
        if kind == "idle":
            return MoveCommand.idle()
    except ValueError as e:
        if isinstance(e, ScenarioError):
            raise
        raise ScenarioSchemaError(path, str(e)) from e
    raise ScenarioSchemaError(f"{path}.cmd", f"unknown command {kind!r}")


def _load_visitor(doc: dict, floorplan: Floorplan) -> VisitorState:
    vsec = _object(_require(doc, "visitor", ""), "visitor")
    pos = _point(_require(vsec, "position", "visitor"), "visitor.position")
    facing = _point(vsec.get("facing", [1.0, 0.0]), "visitor.facing")
    speed = _number(vsec.get("speed", 1.2), "visitor.speed")
    raised = _boolean(vsec.get("phone_raised", False), "visitor.phone_raised")
    if not geo.point_in_rect(pos, floorplan.bounds):
        raise ScenarioGeometryError("visitor.position", "outside bounds")
    for ob in floorplan.obstacles:
        if geo.point_in_convex(pos, ob.polygon, strict=True):
            raise ScenarioGeometryError(
                "visitor.position", f"inside obstacle {ob.label!r}")
    if speed <= 0:
        raise ScenarioSchemaError("visitor.speed", "must be > 0")
    try:
        facing = geo.normalize(facing)
    except ValueError as e:
        raise ScenarioSchemaError("visitor.facing", str(e)) from e
    return VisitorState(position=pos, facing=facing, phone_raised=raised,
                        speed=speed)


def _load_script(doc: dict) -> list[ScriptEntry]:
    entries = []
    last_t = None
    for i, e in enumerate(_listof(doc.get("visitor_script", []),
                                  "visitor_script")):
        p = f"visitor_script[{i}]"
        e = _object(e, p)
        t = _number(_require(e, "t", p), f"{p}.t")
        if t < 0:
            raise ScenarioSchemaError(f"{p}.t", "must be >= 0")
        if last_t is not None and t < last_t:
            raise ScenarioSchemaError(f"{p}.t", "script times must be ordered")
        last_t = t
        entries.append(ScriptEntry(t=t, command=_load_command(e, p)))
    return entries


def _load_crowd(doc: dict, floorplan: Floorplan) -> list[CrowdAgent]:
    agents = []
    seen: set[str] = set()
    for i, a in enumerate(_listof(doc.get("crowd", []), "crowd")):
        p = f"crowd[{i}]"
        a = _object(a, p)
        aid = _string(_require(a, "agent_id", p), f"{p}.agent_id")
        radius = _number(a.get("radius", 0.3), f"{p}.radius")
        if aid in seen:
            raise ScenarioReferenceError(f"{p}.agent_id",
                                         f"duplicate agent id {aid!r}")
        seen.add(aid)
        if radius <= 0:
            raise ScenarioSchemaError(f"{p}.radius", "must be > 0")
        waypoints = []
        last_t = None
        raw = _listof(_require(a, "waypoints", p), f"{p}.waypoints")
        if not raw:
            raise ScenarioSchemaError(f"{p}.waypoints", "must not be empty")
        for j, w in enumerate(raw):
            wp = f"{p}.waypoints[{j}]"
            w = _object(w, wp)
            t = _number(_require(w, "t", wp), f"{wp}.t")
            pos = _point(_require(w, "position", wp), f"{wp}.position")
            if last_t is not None and t <= last_t:
                raise ScenarioSchemaError(f"{wp}.t",
                                          "waypoint times must strictly increase")
            last_t = t
            if not geo.point_in_rect(pos, floorplan.bounds):
                raise ScenarioGeometryError(f"{wp}.position", "outside bounds")
            waypoints.append((t, pos))
        agents.append(CrowdAgent(agent_id=aid, waypoints=waypoints,
                                 radius=radius))
    return agents


def load_scenario(document: str | dict, name: str = "scenario") -> Scenario:
    """Parse and validate a scenario from JSON text or a parsed dict."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as e:
            raise ScenarioSchemaError("", f"invalid JSON: {e}") from e
    else:
        doc = document
    doc = _object(doc, "")

    floorplan = _load_floorplan(doc)
    beacons = _load_beacons(doc, floorplan)

    radio = _dataclass_from(_object(doc.get("radio", {}), "radio"),
                            RadioParams, "radio", _RADIO_FIELDS)
    try:
        radio.validate()
    except ValueError as e:
        raise ScenarioSchemaError("radio", str(e)) from e

    sensing = _dataclass_from(_object(doc.get("sensing", {}), "sensing"),
                              SmoothingConfig, "sensing", _SENSING_FIELDS)
    try:
        sensing.validate(detect_floor_dbm=radio.detect_floor_dbm)
    except ValueError as e:
        raise ScenarioSchemaError("sensing", str(e)) from e

    quests = _load_quests(doc, beacons)
    visitor = _load_visitor(doc, floorplan)
    script = _load_script(doc)
    crowd = _load_crowd(doc, floorplan)

    seed = _require(doc, "seed", "")
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioSchemaError("seed", "expected an integer")
    duration = _number(_require(doc, "duration", ""), "duration")
    tick = _number(_require(doc, "tick", ""), "tick")
    if tick <= 0:
        raise ScenarioSchemaError("tick", "must be > 0")
    if duration < tick:
        raise ScenarioSchemaError("duration", "must be >= tick")

    return Scenario(floorplan=floorplan, beacons=beacons, radio=radio,
                    sensing=sensing, quests=quests, visitor=visitor,
                    visitor_script=script, crowd=crowd, seed=seed,
                    duration=duration, tick=tick, name=name)


def load_scenario_file(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return load_scenario(text, name=name)
