"""Shared test utilities: independent sensing oracles and scenario builders.

The oracle functions recompute smoothing, zones, trends, and arrival from
their definitions, structured differently from the package code, so the
unit and acceptance suites can demand exact agreement.
"""

from __future__ import annotations

import random

from seamquest.radio import RssiSample
from seamquest.sensing import (COLDER, FAR, LOST, MID, NEAR, STEADY, UNKNOWN,
                               WARMER, SmoothingConfig)


def retained(samples: list[RssiSample], window_s: float) -> list[RssiSample]:
    """History retention contract: samples within the window of the newest."""
    if not samples:
        return []
    horizon = samples[-1].time - window_s
    return [s for s in samples if s.time >= horizon]


def oracle_smoothed(samples: list[RssiSample], t: float,
                    cfg: SmoothingConfig) -> float | None:
    kept = [s for s in samples
            if s.detected and t - cfg.window_s <= s.time <= t]
    if not kept:
        return None
    if cfg.method == "median":
        vals = sorted(s.rssi for s in kept)
        n = len(vals)
        mid = n // 2
        if n % 2 == 1:
            return vals[mid]
        return (vals[mid - 1] + vals[mid]) / 2
    num = 0.0
    den = 0.0
    for s in kept:
        w = 0.5 ** ((t - s.time) / cfg.half_life_s)
        num += w * s.rssi
        den += w
    return num / den


def oracle_lost(samples: list[RssiSample], t: float,
                cfg: SmoothingConfig) -> bool:
    return not any(s.detected and t - cfg.lost_timeout_s <= s.time <= t
                   for s in samples)


def oracle_estimate(samples: list[RssiSample], t: float,
                    cfg: SmoothingConfig) -> tuple[float | None, str, str]:
    """(smoothed, zone, trend) recomputed from scratch."""
    if oracle_lost(samples, t, cfg):
        return None, LOST, UNKNOWN
    now = oracle_smoothed(samples, t, cfg)
    if now >= cfg.near_dbm:
        zone = NEAR
    elif now >= cfg.mid_dbm:
        zone = MID
    else:
        zone = FAR
    past = oracle_smoothed(samples, t - cfg.trend_gap_s, cfg)
    if past is None:
        trend = UNKNOWN
    elif now - past > cfg.trend_epsilon_db:
        trend = WARMER
    elif now - past < -cfg.trend_epsilon_db:
        trend = COLDER
    else:
        trend = STEADY
    return now, zone, trend


def oracle_arrival(samples: list[RssiSample], t: float,
                   cfg: SmoothingConfig) -> bool:
    lo = t - cfg.arrival_hold_s
    times = {lo, t}
    for s in samples:
        if lo <= s.time <= t:
            times.add(s.time)
        exit_t = s.time + cfg.window_s
        if lo <= exit_t <= t:
            times.add(exit_t)
    points = sorted(times)
    probes = list(points)
    for a, b in zip(points, points[1:]):
        probes.append(a + (b - a) / 2.0)
    for tau in probes:
        v = oracle_smoothed(samples, tau, cfg)
        if v is None or v < cfg.arrival_dbm:
            return False
    return True


def random_stream(rng: random.Random, beacon_id: str = "b",
                  max_len: int = 60) -> list[RssiSample]:
    """A random ordered sample stream with detection gaps."""
    samples = []
    t = rng.uniform(0.0, 5.0)
    for _ in range(rng.randint(1, max_len)):
        t += rng.uniform(0.05, 2.0)
        detected = rng.random() < 0.8
        rssi = rng.uniform(-100.0, -40.0) if detected else None
        samples.append(RssiSample(time=t, beacon_id=beacon_id, rssi=rssi,
                                  detected=detected))
    return samples


def random_cfg(rng: random.Random) -> SmoothingConfig:
    window = rng.uniform(2.0, 8.0)
    near = rng.uniform(-70.0, -50.0)
    mid = near - rng.uniform(5.0, 25.0)
    cfg = SmoothingConfig(
        window_s=window,
        method=rng.choice(("ewma", "median")),
        half_life_s=rng.uniform(0.3, 3.0),
        trend_gap_s=rng.uniform(0.1, window * 0.9),
        trend_epsilon_db=rng.uniform(0.0, 4.0),
        lost_timeout_s=rng.uniform(window * 0.1, window),
        near_dbm=near,
        mid_dbm=mid,
        arrival_dbm=rng.uniform(mid + 1.0, -45.0),
        arrival_hold_s=rng.uniform(0.5, 5.0),
    )
    cfg.validate()
    return cfg


def check_event_invariants(events, n_quests: int, completed: bool) -> None:
    """Ordering rules any event stream must satisfy (asserts on failure)."""
    from seamquest import game as gm

    times = [e.time for e in events]
    assert times == sorted(times), "event times regressed"
    done = [e.payload["quest"] for e in events
            if e.kind == gm.EV_QUEST_COMPLETED]
    assert done == list(range(len(done))), f"completion order broke: {done}"
    appeared = [e.payload["quest"] for e in events
                if e.kind == gm.EV_GHOST_APPEARED]
    assert appeared == list(range(len(appeared)))
    kinds = [e.kind for e in events]
    if completed:
        assert done == list(range(n_quests)), f"completed with done={done}"
        for kind in (gm.EV_ACHIEVEMENT, gm.EV_SHARE, gm.EV_FINAL_GHOST,
                     gm.EV_GAME_COMPLETED):
            assert kinds.count(kind) == 1, kind
        assert kinds.index(gm.EV_FINAL_GHOST) < kinds.index(
            gm.EV_GAME_COMPLETED)
        assert kinds.index(gm.EV_ACHIEVEMENT) > max(
            i for i, k in enumerate(kinds) if k == gm.EV_QUEST_COMPLETED)
    else:
        assert kinds.count(gm.EV_ACHIEVEMENT) == 0
        assert kinds.count(gm.EV_GAME_COMPLETED) == 0


def fuzz_one_stream(seed: int, n_quests: int = 4, steps: int = 400) -> bool:
    """Drive an n-quest script with one random estimate stream; assert the
    ordering invariants; return whether the game completed."""
    from seamquest import game as gm
    from seamquest.game import (FinalGhost, Quest, QuestScript, advance,
                                initial_state)
    from seamquest.sensing import ProximityEstimate

    rng = random.Random(seed)
    quests = [Quest(f"g{i}", f"a{i}", beacon_id=f"b{i}")
              for i in range(n_quests)]
    script = QuestScript(quests=quests,
                         final_ghost=FinalGhost("fin", "museum-x"),
                         encounter_delay_s=rng.uniform(0.0, 1.0),
                         encounter_jitter_s=rng.uniform(0.0, 1.0),
                         feedback_period_s=rng.uniform(0.2, 1.5))
    game_rng = random.Random(seed + 1)
    game = initial_state(0.0)
    t = 0.0
    events = []
    zones = (NEAR, MID, FAR, LOST)
    trends = (WARMER, COLDER, STEADY, UNKNOWN)
    for _ in range(steps):
        t += rng.uniform(0.05, 0.5)
        active = gm.active_quest_index(game)
        est = None
        arrived = False
        if active is not None:
            if rng.random() < 0.9:
                zone = rng.choice(zones)
                if zone == LOST:
                    est = ProximityEstimate(f"b{active}", None, LOST, UNKNOWN)
                else:
                    est = ProximityEstimate(f"b{active}",
                                            rng.uniform(-95.0, -40.0), zone,
                                            rng.choice(trends))
            arrived = rng.random() < 0.12
        game, evs = advance(game, est, arrived, t, game_rng, script)
        events.extend(evs)
        if game.phase == gm.COMPLETED:
            break
    finished = game.phase == gm.COMPLETED
    check_event_invariants(events, n_quests=n_quests, completed=finished)
    return finished


def base_scenario_doc(**overrides) -> dict:
    """A small valid scenario document; overrides replace top-level keys."""
    doc = {
        "seed": 5,
        "duration": 4.0,
        "tick": 0.1,
        "floorplan": {
            "bounds": [0.0, 0.0, 10.0, 10.0],
            "walls": [],
            "obstacles": [],
            "galleries": [
                {"gallery_id": "main", "rect": [0.0, 0.0, 10.0, 10.0]},
            ],
            "artifacts": [
                {"artifact_id": "vase", "position": [8.0, 5.0],
                 "gallery_id": "main"},
            ],
        },
        "beacons": [
            {"beacon_id": "b-vase", "artifact_id": "vase",
             "position": [8.0, 5.0], "enabled": True},
        ],
        "radio": {"sigma_slow_db": 0.0, "sigma_fast_db": 0.0},
        "quests": {
            "quests": [{"ghost_id": "Wisp", "artifact_id": "vase"}],
            "final_ghost": {"ghost_id": "Echo", "museum_id": "other-museum"},
            "encounter_delay_s": 0.5,
            "encounter_jitter_s": 0.0,
            "feedback_period_s": 1.0,
        },
        "visitor": {"position": [2.0, 5.0], "facing": [1.0, 0.0]},
        "visitor_script": [],
        "crowd": [],
    }
    doc.update(overrides)
    return doc
