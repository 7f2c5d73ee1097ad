"""Ghost quest state machine.

Ghosts appear one at a time in a fixed order; each asks to be led to
its home artifact. While seeking, the ghost periodically reacts to the
smoothed signal trend (warmer, colder, steady) and distance zone, turns
happy or angry accordingly, and celebrates a recovery the moment its
beacon reappears after a lost stretch. Finishing the last quest unlocks
the museum achievement, offers a share prompt, and summons one final
ghost visiting from another museum.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field, replace

from .sensing import COLDER, LOST, NEAR, ProximityEstimate, TRENDS, WARMER, ZONES

IDLE = "idle"
ENCOUNTER = "encounter"
SEEKING = "seeking"
ARRIVED = "arrived"
FINAL_GHOST = "final_ghost"
COMPLETED = "completed"

EV_GHOST_APPEARED = "ghost_appeared"
EV_FEEDBACK = "feedback"
EV_RECOVERY = "recovery"
EV_QUEST_COMPLETED = "quest_completed"
EV_ACHIEVEMENT = "achievement_unlocked"
EV_SHARE = "share_offered"
EV_FINAL_GHOST = "final_ghost_appeared"
EV_GAME_COMPLETED = "game_completed"

DEFAULT_MESSAGES: dict[tuple[str, str], str] = {
    (WARMER, NEAR): "{ghost} beams. You are almost on top of it!",
    (WARMER, "mid"): "{ghost} grins. This is the right direction, keep going!",
    (WARMER, "far"): "{ghost} perks up. Warmer, but still a long way off.",
    (WARMER, LOST): "{ghost} senses a faint flicker somewhere out there.",
    (COLDER, NEAR): "{ghost} frowns. You are close, but drifting away now.",
    (COLDER, "mid"): "{ghost} grumbles. Wrong way, it is getting colder.",
    (COLDER, "far"): "{ghost} wails. You are getting lost!",
    (COLDER, LOST): "{ghost} howls from far away. The trail has gone cold.",
    ("steady", NEAR): "{ghost} hums happily. Stay right around here.",
    ("steady", "mid"): "{ghost} waits. No closer, no farther.",
    ("steady", "far"): "{ghost} sighs. Still a long walk from home.",
    ("steady", LOST): "{ghost} is quiet. Nothing to go on.",
    ("unknown", NEAR): "{ghost} stirs nearby, still getting its bearings.",
    ("unknown", "mid"): "{ghost} stirs, still getting its bearings.",
    ("unknown", "far"): "{ghost} stirs faintly, still getting its bearings.",
    ("unknown", LOST): "{ghost} cannot sense you at all. Try moving around.",
}
DEFAULT_RECOVERY = "{ghost} brightens. There you are, I can see you again!"
DEFAULT_INTRO = "{ghost} swirls into view. Take me home to {artifact}!"
DEFAULT_FINAL_TEXT = "A stranger ghost drifts in, visiting from {museum}. Until next time!"
DEFAULT_ACHIEVEMENT_TEXT = "Museum master! Every ghost is home."
DEFAULT_SHARE_TEXT = "Tell your friends about your haunted tour?"


@dataclass(frozen=True)
class Quest:
    ghost_id: str
    artifact_id: str
    intro: str = DEFAULT_INTRO
    beacon_id: str | None = None  # resolved by the scenario loader


@dataclass(frozen=True)
class FinalGhost:
    ghost_id: str
    museum_id: str
    text: str = DEFAULT_FINAL_TEXT


@dataclass(frozen=True)
class QuestScript:
    quests: list[Quest]
    final_ghost: FinalGhost
    encounter_delay_s: float = 5.0
    encounter_jitter_s: float = 5.0   # uniform [0, jitter] added to delay
    feedback_period_s: float = 2.0
    messages: dict[tuple[str, str], str] = field(
        default_factory=lambda: dict(DEFAULT_MESSAGES))
    recovery_text: str = DEFAULT_RECOVERY
    achievement_text: str = DEFAULT_ACHIEVEMENT_TEXT
    share_text: str = DEFAULT_SHARE_TEXT

    def validate(self) -> None:
        if not self.quests:
            raise ValueError("quest list must not be empty")
        if self.encounter_delay_s < 0 or self.encounter_jitter_s < 0:
            raise ValueError("encounter delay and jitter must be >= 0")
        if not self.feedback_period_s > 0:
            raise ValueError("feedback_period_s must be > 0")
        for trend in TRENDS:
            for zone in ZONES:
                if (trend, zone) not in self.messages:
                    raise ValueError(f"message table missing ({trend}, {zone})")


@dataclass(frozen=True)
class GameEvent:
    time: float
    kind: str
    payload: dict


@dataclass(frozen=True)
class GameState:
    phase: str = IDLE
    quest_index: int = 0            # next quest in idle, active otherwise
    achievement_emitted: bool = False
    phase_entered_t: float = 0.0
    pending_delay: float | None = None   # delay+jitter, drawn lazily per wait
    next_feedback_t: float | None = None
    prev_lost: bool | None = None   # last estimate's lost flag while seeking


def initial_state(t0: float = 0.0) -> GameState:
    return GameState(phase_entered_t=t0)


def active_quest_index(game: GameState) -> int | None:
    """Quest whose beacon currently drives feedback, None outside quests."""
    if game.phase in (ENCOUNTER, SEEKING, ARRIVED):
        return game.quest_index
    return None


def render_message(template: str, context: dict[str, str]) -> str:
    """Fill {placeholder} fields from context; unknown fields are errors."""
    out: list[str] = []
    for literal, fieldname, spec, conversion in string.Formatter().parse(template):
        out.append(literal)
        if fieldname is None:
            continue
        if spec or conversion or fieldname not in context:
            raise ValueError(f"unknown placeholder {fieldname!r} in template")
        out.append(context[fieldname])
    return "".join(out)


def mood_for(trend: str, zone: str) -> str:
    """Happy/angry/neutral styling class derived from trend and zone."""
    if zone == LOST or trend == COLDER:
        return "angry"
    if trend == WARMER or zone == NEAR:
        return "happy"
    return "neutral"


def _quest_context(script: QuestScript, i: int) -> dict[str, str]:
    q = script.quests[i]
    return {"ghost": q.ghost_id, "artifact": q.artifact_id}


def advance(game: GameState,
            estimate: ProximityEstimate | None,
            arrived: bool,
            t: float,
            rng: random.Random,
            script: QuestScript) -> tuple[GameState, list[GameEvent]]:
    """One tick of the quest machine; returns the new state and any events.

    Several phases can elapse within a single call (an encounter starts
    seeking immediately; the final ghost completes the game in the same
    breath), so this loops until the state settles for this t. Estimates
    must be for the active quest's beacon; any estimate content is
    tolerated, including endless lost stretches, which only degrade the
    feedback text and never stall or break the machine.
    """
    g = game
    events: list[GameEvent] = []
    # est/arr describe the quest active at call time; once a new ghost
    # appears within this call they are stale and must not carry over
    est = estimate
    arr = arrived
    if est is not None:
        idx = active_quest_index(g)
        if idx is not None:
            expected = script.quests[idx].beacon_id
            if expected is not None and est.beacon_id != expected:
                raise ValueError(
                    f"estimate for beacon {est.beacon_id!r} but quest "
                    f"{idx} listens to {expected!r}")

    while True:
        if g.phase == IDLE:
            if g.pending_delay is None:
                jitter = rng.uniform(0.0, script.encounter_jitter_s)
                g = replace(g, pending_delay=script.encounter_delay_s + jitter)
            if t < g.phase_entered_t + g.pending_delay:
                break
            i = g.quest_index
            q = script.quests[i]
            events.append(GameEvent(t, EV_GHOST_APPEARED, {
                "quest": i,
                "ghost_id": q.ghost_id,
                "artifact_id": q.artifact_id,
                "text": render_message(q.intro, _quest_context(script, i)),
            }))
            g = replace(g, phase=ENCOUNTER, phase_entered_t=t,
                        pending_delay=None)
            est = None
            arr = False
            continue

        if g.phase == ENCOUNTER:
            # the ghost is on screen; start listening for its beacon now
            g = replace(g, phase=SEEKING, phase_entered_t=t,
                        next_feedback_t=t + script.feedback_period_s,
                        prev_lost=None)
            continue

        if g.phase == SEEKING:
            i = g.quest_index
            if arr:
                events.append(GameEvent(t, EV_QUEST_COMPLETED, {
                    "quest": i,
                    "ghost_id": script.quests[i].ghost_id,
                }))
                g = replace(g, phase=ARRIVED, phase_entered_t=t,
                            pending_delay=None, next_feedback_t=None,
                            prev_lost=None)
                continue
            if est is not None:
                is_lost = est.zone == LOST
                if g.prev_lost is True and not is_lost:
                    # the beacon came back: celebrate instead of the next
                    # scheduled feedback
                    events.append(GameEvent(t, EV_RECOVERY, {
                        "quest": i,
                        "ghost_id": script.quests[i].ghost_id,
                        "text": render_message(script.recovery_text,
                                               _quest_context(script, i)),
                        "mood": "happy",
                    }))
                    g = replace(g, prev_lost=is_lost,
                                next_feedback_t=t + script.feedback_period_s)
                    break
                g = replace(g, prev_lost=is_lost)
                if g.next_feedback_t is not None and t >= g.next_feedback_t:
                    text = render_message(
                        script.messages[(est.trend, est.zone)],
                        _quest_context(script, i))
                    events.append(GameEvent(t, EV_FEEDBACK, {
                        "quest": i,
                        "ghost_id": script.quests[i].ghost_id,
                        "trend": est.trend,
                        "zone": est.zone,
                        "text": text,
                        "mood": mood_for(est.trend, est.zone),
                    }))
                    g = replace(g, next_feedback_t=g.next_feedback_t
                                + script.feedback_period_s)
            break

        if g.phase == ARRIVED:
            if g.pending_delay is None:
                jitter = rng.uniform(0.0, script.encounter_jitter_s)
                g = replace(g, pending_delay=script.encounter_delay_s + jitter)
            if t < g.phase_entered_t + g.pending_delay:
                break
            nxt = g.quest_index + 1
            if nxt < len(script.quests):
                q = script.quests[nxt]
                events.append(GameEvent(t, EV_GHOST_APPEARED, {
                    "quest": nxt,
                    "ghost_id": q.ghost_id,
                    "artifact_id": q.artifact_id,
                    "text": render_message(q.intro, _quest_context(script, nxt)),
                }))
                g = replace(g, phase=ENCOUNTER, quest_index=nxt,
                            phase_entered_t=t, pending_delay=None)
                est = None
                arr = False
                continue
            events.append(GameEvent(t, EV_ACHIEVEMENT, {
                "text": script.achievement_text,
            }))
            events.append(GameEvent(t, EV_SHARE, {
                "text": script.share_text,
            }))
            fg = script.final_ghost
            events.append(GameEvent(t, EV_FINAL_GHOST, {
                "ghost_id": fg.ghost_id,
                "museum_id": fg.museum_id,
                "text": render_message(fg.text, {"ghost": fg.ghost_id,
                                                 "museum": fg.museum_id}),
            }))
            g = replace(g, phase=FINAL_GHOST, phase_entered_t=t,
                        pending_delay=None, achievement_emitted=True)
            continue

        if g.phase == FINAL_GHOST:
            events.append(GameEvent(t, EV_GAME_COMPLETED, {}))
            g = replace(g, phase=COMPLETED, phase_entered_t=t)
            continue

        break  # completed: absorbing

    return g, events
