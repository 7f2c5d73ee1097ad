"""The simulated museum: static geometry, beacons, the visitor, scripted crowd.

All geometry is in meters on a 2-D floor. The world advances on a fixed
tick; crowd agents follow piecewise-linear waypoint scripts, the visitor
follows explicit movement commands with stop-at-boundary collision.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import geometry as geo
from .geometry import Point


@dataclass(frozen=True)
class Wall:
    a: Point
    b: Point
    attenuation_db: float


@dataclass(frozen=True)
class Obstacle:
    label: str
    polygon: list[Point]  # convex, CCW
    attenuation_db: float


@dataclass(frozen=True)
class Gallery:
    gallery_id: str
    rect: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


@dataclass(frozen=True)
class Artifact:
    artifact_id: str
    position: Point
    gallery_id: str


@dataclass(frozen=True)
class Floorplan:
    bounds: tuple[float, float, float, float]
    walls: list[Wall] = field(default_factory=list)
    obstacles: list[Obstacle] = field(default_factory=list)
    galleries: list[Gallery] = field(default_factory=list)
    artifacts: list[Artifact] = field(default_factory=list)

    def gallery_at(self, p: Point) -> str | None:
        """First gallery (in listing order) containing p, allowing overlap."""
        for g in self.galleries:
            if geo.point_in_rect(p, g.rect):
                return g.gallery_id
        return None


@dataclass(frozen=True)
class Beacon:
    beacon_id: str
    artifact_id: str
    position: Point
    enabled: bool = True


@dataclass(frozen=True)
class VisitorState:
    position: Point
    facing: Point  # unit vector
    phone_raised: bool = False
    speed: float = 1.2  # m/s


@dataclass(frozen=True)
class CrowdAgent:
    agent_id: str
    waypoints: list[tuple[float, Point]]  # strictly increasing times
    radius: float = 0.3

    def position_at(self, t: float) -> Point:
        return geo.interpolate_waypoints(self.waypoints, t)


@dataclass(frozen=True)
class MoveCommand:
    """One of walk(direction) | turn(facing) | raise | idle."""

    kind: str
    direction: Point | None = None
    facing: Point | None = None
    raised: bool | None = None

    @staticmethod
    def walk(direction: Point) -> "MoveCommand":
        return MoveCommand(kind="walk", direction=geo.normalize(direction))

    @staticmethod
    def turn(facing: Point) -> "MoveCommand":
        return MoveCommand(kind="turn", facing=geo.normalize(facing))

    @staticmethod
    def set_raised(raised: bool) -> "MoveCommand":
        return MoveCommand(kind="raise", raised=bool(raised))

    @staticmethod
    def idle() -> "MoveCommand":
        return MoveCommand(kind="idle")


IDLE = MoveCommand.idle()


@dataclass(frozen=True)
class WorldState:
    floorplan: Floorplan
    beacons: list[Beacon]
    visitor: VisitorState
    crowd: list[CrowdAgent]
    t: float = 0.0

    def crowd_poses(self, t: float | None = None) -> list[tuple[Point, float]]:
        """(position, radius) of every crowd agent at time t (default: now)."""
        at = self.t if t is None else t
        return [(a.position_at(at), a.radius) for a in self.crowd]


def _move_blocked(floorplan: Floorplan, start: Point, target: Point) -> bool:
    if not geo.point_in_rect(target, floorplan.bounds):
        return True
    for w in floorplan.walls:
        if geo.move_blocked_by_segment(start, target, w.a, w.b):
            return True
    for ob in floorplan.obstacles:
        if geo.move_blocked_by_polygon(start, target, ob.polygon):
            return True
    return False


def step(world: WorldState, command: MoveCommand, dt: float) -> WorldState:
    """Advance the world by dt under one visitor command.

    Walking moves the visitor at most speed*dt toward the commanded
    direction and turns them to face it; a move that would touch a wall,
    an obstacle, or leave the bounds is dropped entirely (position keeps
    its old value, time still advances). Crowd agents always follow
    their scripts.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    v = world.visitor
    if command.kind == "walk":
        d = command.direction
        if d is None:
            raise ValueError("walk command needs a direction")
        target = (v.position[0] + d[0] * v.speed * dt,
                  v.position[1] + d[1] * v.speed * dt)
        if _move_blocked(world.floorplan, v.position, target):
            v = replace(v, facing=d)
        else:
            v = replace(v, position=target, facing=d)
    elif command.kind == "turn":
        if command.facing is None:
            raise ValueError("turn command needs a facing")
        v = replace(v, facing=command.facing)
    elif command.kind == "raise":
        if command.raised is None:
            raise ValueError("raise command needs a flag")
        v = replace(v, phone_raised=command.raised)
    elif command.kind == "idle":
        pass
    else:
        raise ValueError(f"unknown command kind: {command.kind!r}")
    return replace(world, visitor=v, t=world.t + dt)


def line_of_sight(a: Point, b: Point, floorplan: Floorplan) -> list[Wall | Obstacle]:
    """Every wall and obstacle intersecting the open segment (a, b), once each.

    Tangencies count as crossings; contact only at a or b itself does not.
    Order is deterministic: walls in listing order, then obstacles.
    """
    crossed: list[Wall | Obstacle] = []
    for w in floorplan.walls:
        if geo.segment_crosses_segment(a, b, w.a, w.b):
            crossed.append(w)
    for ob in floorplan.obstacles:
        if geo.segment_hits_polygon(a, b, ob.polygon):
            crossed.append(ob)
    return crossed
