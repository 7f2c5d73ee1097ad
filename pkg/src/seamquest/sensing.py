"""Proximity estimation from raw beacon samples.

Raw RSSI is noisy, so the game never sees it directly. This layer keeps
a short per-beacon history, smooths detected samples (time-decaying
weighted mean or sliding median), buckets the result into distance
zones, compares now against a moment ago for a warmer/colder trend, and
decides arrival once the smoothed value holds above a threshold.
"""

from __future__ import annotations

import statistics
from collections import deque
from dataclasses import dataclass

NEAR = "near"
MID = "mid"
FAR = "far"
LOST = "lost"

WARMER = "warmer"
COLDER = "colder"
STEADY = "steady"
UNKNOWN = "unknown"

ZONES = (NEAR, MID, FAR, LOST)
TRENDS = (WARMER, COLDER, STEADY, UNKNOWN)


@dataclass(frozen=True)
class SmoothingConfig:
    window_s: float = 6.0
    method: str = "ewma"            # "ewma" | "median"
    half_life_s: float = 1.5        # ewma only
    trend_gap_s: float = 2.0
    trend_epsilon_db: float = 2.0
    lost_timeout_s: float = 4.0
    near_dbm: float = -65.0
    mid_dbm: float = -80.0
    arrival_dbm: float = -60.0
    arrival_hold_s: float = 3.0

    def validate(self, detect_floor_dbm: float | None = None) -> None:
        if not self.window_s > 0:
            raise ValueError("window_s must be > 0")
        if self.method not in ("ewma", "median"):
            raise ValueError("method must be 'ewma' or 'median'")
        if not self.half_life_s > 0:
            raise ValueError("half_life_s must be > 0")
        if not 0 < self.trend_gap_s < self.window_s:
            raise ValueError("trend_gap_s must lie in (0, window_s)")
        if self.trend_epsilon_db < 0:
            raise ValueError("trend_epsilon_db must be >= 0")
        # lost state must be decidable from retained history
        if not 0 < self.lost_timeout_s <= self.window_s:
            raise ValueError("lost_timeout_s must lie in (0, window_s]")
        if not self.near_dbm > self.mid_dbm:
            raise ValueError("near_dbm must be above mid_dbm")
        if not self.arrival_dbm > self.mid_dbm:
            raise ValueError("arrival_dbm must be above mid_dbm")
        if not self.arrival_hold_s > 0:
            raise ValueError("arrival_hold_s must be > 0")
        if detect_floor_dbm is not None and not self.mid_dbm > detect_floor_dbm:
            raise ValueError("mid_dbm must be above the detect floor")


@dataclass(frozen=True)
class ProximityEstimate:
    beacon_id: str
    smoothed_rssi: float | None
    zone: str
    trend: str


class BeaconHistory:
    """Recent samples of one beacon, evicted past the smoothing window."""

    def __init__(self, beacon_id: str):
        self.beacon_id = beacon_id
        self.samples: deque = deque()  # of RssiSample, times non-decreasing

    @property
    def newest_t(self) -> float | None:
        return self.samples[-1].time if self.samples else None


def ingest(history: BeaconHistory, sample, cfg: SmoothingConfig) -> BeaconHistory:
    """Append a sample (detected or not) and evict entries beyond the window."""
    if sample.beacon_id != history.beacon_id:
        raise ValueError(f"sample for {sample.beacon_id!r} ingested into "
                         f"history of {history.beacon_id!r}")
    newest = history.newest_t
    if newest is not None and sample.time < newest:
        raise ValueError("sample time regressed; streams must be ordered")
    history.samples.append(sample)
    horizon = sample.time - cfg.window_s
    while history.samples and history.samples[0].time < horizon:
        history.samples.popleft()
    return history


def smoothed_at(history: BeaconHistory, t: float, cfg: SmoothingConfig) -> float | None:
    """Smoothed RSSI at time t over detected samples in [t - window, t].

    None when no detected sample falls in that span. EWMA weights decay
    by half every half_life_s of sample age; median ignores age.
    """
    lo = t - cfg.window_s
    values: list[float] = []
    weights: list[float] = []
    for s in history.samples:
        if s.time > t:
            break
        if s.time < lo or not s.detected:
            continue
        values.append(s.rssi)
        if cfg.method == "ewma":
            weights.append(0.5 ** ((t - s.time) / cfg.half_life_s))
    if not values:
        return None
    if cfg.method == "median":
        return statistics.median(values)
    wsum = sum(weights)
    return sum(w * v for w, v in zip(weights, values)) / wsum


def _is_lost(history: BeaconHistory, t: float, cfg: SmoothingConfig) -> bool:
    lo = t - cfg.lost_timeout_s
    for s in reversed(history.samples):
        if s.time > t:
            continue
        if s.time < lo:
            break
        if s.detected:
            return False
    return True


def estimate(history: BeaconHistory, t: float, cfg: SmoothingConfig) -> ProximityEstimate:
    """Zone and trend at time t.

    Lost (no detection within lost_timeout_s) reports no smoothed value
    and an unknown trend. Otherwise the smoothed value buckets into
    near/mid/far, and the trend compares against the smoothed value
    trend_gap_s ago with a dead-band of trend_epsilon_db.
    """
    if _is_lost(history, t, cfg):
        return ProximityEstimate(history.beacon_id, None, LOST, UNKNOWN)
    now = smoothed_at(history, t, cfg)
    # not lost implies a detected sample within lost_timeout <= window
    if now >= cfg.near_dbm:
        zone = NEAR
    elif now >= cfg.mid_dbm:
        zone = MID
    else:
        zone = FAR
    past = smoothed_at(history, t - cfg.trend_gap_s, cfg)
    if past is None:
        trend = UNKNOWN
    else:
        delta = now - past
        if delta > cfg.trend_epsilon_db:
            trend = WARMER
        elif delta < -cfg.trend_epsilon_db:
            trend = COLDER
        else:
            trend = STEADY
    return ProximityEstimate(history.beacon_id, now, zone, trend)


def arrival_check(history: BeaconHistory, t: float, cfg: SmoothingConfig) -> bool:
    """Whether smoothed RSSI held at or above arrival_dbm over the last
    arrival_hold_s seconds, continuously.

    The smoothed value is piecewise constant between the instants where
    a sample enters ([sample time]) or ages out ([sample time + window])
    of the smoothing span, so the continuum check reduces to evaluating
    at every such breakpoint in [t - hold, t] plus a midpoint of every
    gap between consecutive breakpoints.
    """
    lo = t - cfg.arrival_hold_s
    breakpoints = {lo, t}
    for s in history.samples:
        for candidate in (s.time, s.time + cfg.window_s):
            if lo <= candidate <= t:
                breakpoints.add(candidate)
    ordered = sorted(breakpoints)
    checkpoints = list(ordered)
    for a, b in zip(ordered, ordered[1:]):
        checkpoints.append(a + (b - a) / 2.0)
    for tau in checkpoints:
        v = smoothed_at(history, tau, cfg)
        if v is None or v < cfg.arrival_dbm:
            return False
    return True
