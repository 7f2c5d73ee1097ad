"""Beacon RSSI model.

A handset hears a beacon at the reference power minus log-distance path
loss, minus body shadowing when the visitor faces away, minus per-object
occlusion for shelves, walls and crowd members on the sight line, plus
two seeded noise terms: a slowly wandering shadowing value (correlated
across samples) and independent per-sample fading. Raising the phone
shrinks only the crowd term.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import geometry as geo
from .geometry import Point
from .world import Floorplan, VisitorState, WorldState, line_of_sight


@dataclass(frozen=True)
class RadioParams:
    p_ref_dbm: float = -59.0          # RSSI at the 1 m reference distance
    path_loss_exponent: float = 2.2
    sigma_slow_db: float = 3.0        # std of correlated shadowing
    sigma_fast_db: float = 2.0        # std of per-sample fading
    body_max_db: float = 15.0         # attenuation with back to the beacon
    crowd_per_agent_db: float = 4.0
    raise_factor: float = 0.15        # crowd multiplier with phone raised
    detect_floor_dbm: float = -95.0
    shadow_tau_s: float = 5.0         # correlation time of slow shadowing

    def validate(self) -> None:
        if not self.path_loss_exponent > 0:
            raise ValueError("path_loss_exponent must be > 0")
        if self.sigma_slow_db < 0 or self.sigma_fast_db < 0:
            raise ValueError("noise sigmas must be >= 0")
        if self.body_max_db < 0:
            raise ValueError("body_max_db must be >= 0")
        if self.crowd_per_agent_db < 0:
            raise ValueError("crowd_per_agent_db must be >= 0")
        if not 0.0 <= self.raise_factor <= 1.0:
            raise ValueError("raise_factor must be in [0, 1]")
        if not self.detect_floor_dbm < self.p_ref_dbm:
            raise ValueError("detect_floor_dbm must be below p_ref_dbm")
        if not self.shadow_tau_s > 0:
            raise ValueError("shadow_tau_s must be > 0")


@dataclass(frozen=True)
class RssiSample:
    time: float
    beacon_id: str
    rssi: float | None  # dBm; None when not detected
    detected: bool


def path_loss(distance: float, params: RadioParams) -> float:
    """Log-distance path loss in dB relative to the 1 m reference.

    Distances under 1 m clamp to the reference (loss 0); non-positive
    distance is a caller error.
    """
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    d = max(distance, 1.0)
    return 10.0 * params.path_loss_exponent * math.log10(d)


def body_attenuation(facing: Point, to_beacon: Point, params: RadioParams) -> float:
    """Body shadowing: 0 with the beacon ahead, body_max directly behind.

    Ramps as body_max * max(0, -cos(angle between facing and to_beacon)).
    """
    f = geo.normalize(facing)
    tb = geo.normalize(to_beacon)
    return params.body_max_db * max(0.0, -geo.dot(f, tb))


def occlusion_attenuation(segment: tuple[Point, Point],
                          floorplan: Floorplan,
                          crowd: list[tuple[Point, float]],
                          phone_raised: bool,
                          params: RadioParams) -> float:
    """Total occlusion on the open sight segment, in dB.

    Static walls and obstacles contribute their configured dB when they
    intersect the segment; crowd members (position, radius) contribute
    crowd_per_agent_db each. Raising the phone scales only the crowd
    term by raise_factor; shelving stays in the way regardless.
    """
    a, b = segment
    total = 0.0
    for item in line_of_sight(a, b, floorplan):
        total += item.attenuation_db
    blocking = 0
    for center, radius in crowd:
        if geo.segment_hits_disk(a, b, center, radius):
            blocking += 1
    crowd_db = params.crowd_per_agent_db * blocking
    if phone_raised:
        crowd_db *= params.raise_factor
    return total + crowd_db


class NoiseChannel:
    """Per-beacon seeded noise state: one RNG stream plus the slow value.

    The slow shadowing term is an exponentially-correlated Gaussian with
    stationary std sigma_slow_db and correlation time shadow_tau_s,
    advanced by whatever time gap separates consecutive samples. Times
    must be non-decreasing; a repeated time reuses the same slow value.
    """

    def __init__(self, rng: random.Random, params: RadioParams):
        self.rng = rng
        self.params = params
        self.slow = 0.0
        self.last_t: float | None = None

    def advance_slow(self, t: float) -> float:
        p = self.params
        if self.last_t is None:
            self.slow = p.sigma_slow_db * self.rng.gauss(0.0, 1.0)
        elif t < self.last_t:
            raise ValueError("sample times must be non-decreasing")
        elif t > self.last_t:
            rho = math.exp(-(t - self.last_t) / p.shadow_tau_s)
            innovation = math.sqrt(1.0 - rho * rho) * self.rng.gauss(0.0, 1.0)
            self.slow = rho * self.slow + p.sigma_slow_db * innovation
        self.last_t = t
        return self.slow


def deterministic_rssi(beacon_pos: Point, visitor: VisitorState,
                       floorplan: Floorplan,
                       crowd: list[tuple[Point, float]],
                       params: RadioParams) -> float:
    """Noise-free RSSI for the given pose; shared by sampling and coverage."""
    d = geo.dist(visitor.position, beacon_pos)
    pl = path_loss(d if d > 0.0 else 1.0, params)
    if d > 0.0:
        to_beacon = geo.sub(beacon_pos, visitor.position)
        body = body_attenuation(visitor.facing, to_beacon, params)
    else:
        body = 0.0
    occ = occlusion_attenuation((visitor.position, beacon_pos), floorplan,
                                crowd, visitor.phone_raised, params)
    return params.p_ref_dbm - pl - body - occ


def sample_rssi(beacon, visitor: VisitorState, world: WorldState, t: float,
                channel: NoiseChannel, params: RadioParams) -> RssiSample:
    """One RSSI observation of a beacon at time t.

    Each time-advancing call consumes exactly two Gaussian draws (slow
    innovation, fast fading) regardless of parameter values, so the
    stream stays aligned across configurations.
    """
    mean = deterministic_rssi(beacon.position, visitor, world.floorplan,
                              world.crowd_poses(t), params)
    slow = channel.advance_slow(t)
    fast = params.sigma_fast_db * channel.rng.gauss(0.0, 1.0)
    raw = mean + slow + fast
    detected = raw >= params.detect_floor_dbm
    return RssiSample(time=t, beacon_id=beacon.beacon_id,
                      rssi=raw if detected else None, detected=detected)
