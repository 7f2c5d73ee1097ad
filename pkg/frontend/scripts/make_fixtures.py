#!/usr/bin/env python3
"""Regenerate the recorded-session fixtures in frontend/fixtures/.

Drives one live gateway session over the bundled smoke scenario using a
recorded client-message script (hold "walk right" for the first sixty
ticks, then let go), verifies the session's game events are identical
to the headless run of the same scenario, and writes:

    client_script.jsonl       {"tick": k, "text": <client message>}
    session_transcript.jsonl  every server message, in order
    headless_events.jsonl     game-event lines of the headless run

The UI test suite replays session_transcript.jsonl through the view
model and checks it observes exactly headless_events.jsonl, so the
fixtures must only ever be produced by this script, never edited.

Run from anywhere: python3 frontend/scripts/make_fixtures.py
Needs the simulator package installed (pip install -e . in the repo root).
"""

import json
import os
import sys

from seamquest.cli import load_bundled_scenario
from seamquest.gateway import ScriptedTransport, serve_session
from seamquest.harness import run

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                           os.pardir, "fixtures")
WALK_TICKS = 60  # 6 s at 1.2 m/s covers the 8 m to the beacon, minus slack


def game_event_lines(log_lines):
    out = []
    for line in log_lines:
        kind = json.loads(line)["kind"]
        if kind not in ("command", "sample"):
            out.append(line)
    return out


def write_lines(name, lines):
    path = os.path.join(FIXTURE_DIR, name)
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
    print(f"wrote {path} ({len(lines)} lines)")


def main():
    scenario = load_bundled_scenario("smoke")
    # byte-for-byte the message the UI input layer builds for "walk right"
    walk = json.dumps({"v": 1, "kind": "walk", "direction": 0},
                      separators=(",", ":"))
    script = [(k, walk) for k in range(WALK_TICKS)]

    transport = ScriptedTransport(list(script))
    live = serve_session(scenario, transport, persist=False)
    live_events = game_event_lines(live.log_lines)

    headless_lines, _ = run(scenario)
    headless_events = game_event_lines(headless_lines)

    if live_events != headless_events:
        print("recorded session and headless run disagree:", file=sys.stderr)
        for a, b in zip(live_events, headless_events):
            if a != b:
                print(f"  live:     {a}\n  headless: {b}", file=sys.stderr)
        return 1
    if not any(json.loads(l)["payload"].get("trend") == "warmer"
               for l in live_events if json.loads(l)["kind"] == "feedback"):
        print("expected at least one warmer feedback", file=sys.stderr)
        return 1
    if json.loads(live_events[-1])["kind"] != "game_completed":
        print("expected the session to end completed", file=sys.stderr)
        return 1

    os.makedirs(FIXTURE_DIR, exist_ok=True)
    write_lines("client_script.jsonl",
                [json.dumps({"tick": k, "text": text},
                            separators=(",", ":")) for k, text in script])
    write_lines("session_transcript.jsonl", transport.sent)
    write_lines("headless_events.jsonl", headless_events)
    return 0


if __name__ == "__main__":
    sys.exit(main())
