import json
import math
import os

import pytest

from helpers import base_scenario_doc
from seamquest.gateway import (ProtocolError, QueueTransport,
                               ScriptedTransport, command_from,
                               default_run_dir, parse_client_message,
                               persist_log, serve_session)
from seamquest.harness import run
from seamquest.scenario import load_scenario


def tiny_scenario(**overrides):
    return load_scenario(base_scenario_doc(**overrides), name="tiny")


def walk_msg(angle=0.0):
    return json.dumps({"v": 1, "kind": "walk", "direction": angle})


def parse_sent(transport):
    return [json.loads(x) for x in transport.sent]


class TestParseClientMessage:
    def test_valid_kinds(self):
        assert parse_client_message(walk_msg())["kind"] == "walk"
        assert parse_client_message(
            '{"v":1,"kind":"turn","facing":1.5}')["kind"] == "turn"
        assert parse_client_message(
            '{"v":1,"kind":"raise","raised":true}')["raised"] is True
        assert parse_client_message(
            '{"v":1,"kind":"ping","t_client":7}')["t_client"] == 7

    @pytest.mark.parametrize("text", [
        "42",
        "[1,2]",
        "{invalid",
        '{"kind":"walk","direction":0}',          # missing version
        '{"v":2,"kind":"walk","direction":0}',    # wrong version
        '{"v":1,"kind":"dash","direction":0}',    # unknown kind
        '{"v":1,"kind":"walk"}',                  # missing angle
        '{"v":1,"kind":"walk","direction":"n"}',
        '{"v":1,"kind":"walk","direction":true}',
        '{"v":1,"kind":"walk","direction":1e999}',
        '{"v":1,"kind":"raise","raised":1}',
        '{"v":1,"kind":"ping","t_client":true}',
    ])
    def test_rejects(self, text):
        with pytest.raises(ProtocolError):
            parse_client_message(text)

    def test_ping_without_t_client_ok(self):
        assert parse_client_message('{"v":1,"kind":"ping"}')["kind"] == "ping"


class TestCommandFrom:
    def test_walk_angle_zero(self):
        cmd = command_from({"kind": "walk", "direction": 0.0})
        assert cmd.kind == "walk" and cmd.direction == (1.0, 0.0)

    def test_turn_angle(self):
        cmd = command_from({"kind": "turn", "facing": math.pi / 2})
        assert cmd.facing[1] == pytest.approx(1.0)

    def test_raise(self):
        cmd = command_from({"kind": "raise", "raised": False})
        assert cmd.kind == "raise" and cmd.raised is False

    def test_ping_is_not_a_command(self):
        assert command_from({"kind": "ping"}) is None


class TestScriptedSession:
    def session(self, messages, duration=2.0, **kwargs):
        sc = tiny_scenario(duration=duration)
        transport = ScriptedTransport(messages)
        result = serve_session(sc, transport, persist=False, **kwargs)
        return transport, result

    def test_message_shapes(self):
        transport, result = self.session([])
        sent = parse_sent(transport)
        assert sent[0]["kind"] == "scenario_info"
        info = sent[0]["payload"]
        assert info["bounds"] == [0.0, 0.0, 10.0, 10.0]
        assert info["beacons"][0]["beacon_id"] == "b-vase"
        assert info["quests"] == [{"ghost_id": "Wisp", "artifact_id": "vase"}]
        assert info["tick"] == 0.1
        states = [m for m in sent if m["kind"] == "state"]
        assert len(states) == 20 == result.ticks
        assert states[0]["t"] == 0.1
        v = states[0]["payload"]["visitor"]
        assert v["position"] == [2.0, 5.0] and v["raised"] is False
        assert {"phase", "quest_index", "active_ghost", "zone",
                "gallery"} <= set(states[0]["payload"])

    def test_no_message_means_idle(self):
        transport, _ = self.session([])
        states = [m for m in parse_sent(transport) if m["kind"] == "state"]
        assert all(s["payload"]["visitor"]["position"] == [2.0, 5.0]
                   for s in states)

    def test_walk_messages_are_one_shot(self):
        # each walk message moves exactly one tick; silence means idle
        transport, _ = self.session([(k, walk_msg(0.0)) for k in range(5)])
        states = [m for m in parse_sent(transport) if m["kind"] == "state"]
        xs = [s["payload"]["visitor"]["position"][0] for s in states]
        assert xs[0] == pytest.approx(2.12)
        assert xs[4] == pytest.approx(2.6)
        assert xs[5] == xs[4]
        assert xs[-1] == xs[4]

    def test_last_message_in_tick_wins(self):
        transport, _ = self.session([
            (0, walk_msg(0.0)),
            (0, '{"v":1,"kind":"turn","facing":0.5}'),
        ])
        states = [m for m in parse_sent(transport) if m["kind"] == "state"]
        assert states[0]["payload"]["visitor"]["position"] == [2.0, 5.0]

    def test_malformed_message_yields_error_and_continues(self):
        transport, result = self.session([(0, "garbage"),
                                          (1, walk_msg(0.0))])
        sent = parse_sent(transport)
        errors = [m for m in sent if m["kind"] == "error"]
        assert len(errors) == 1
        assert "JSON" in errors[0]["payload"]["message"]
        assert result.ticks == 20  # session survived
        states = [m for m in sent if m["kind"] == "state"]
        assert states[1]["payload"]["visitor"]["position"][0] > 2.0

    def test_ping_pong_echo(self):
        transport, _ = self.session([(3, '{"v":1,"kind":"ping",'
                                         '"t_client":123.25}')])
        states = [m for m in parse_sent(transport) if m["kind"] == "state"]
        assert "pong" not in states[2]["payload"]
        assert states[3]["payload"]["pong"] == 123.25
        assert "pong" not in states[4]["payload"]

    def test_ping_does_not_supersede_a_command(self):
        # ping after walk in the same poll: the walk still applies
        transport, _ = self.session([(0, walk_msg(0.0)),
                                     (0, '{"v":1,"kind":"ping","t_client":5}')])
        states = [m for m in parse_sent(transport) if m["kind"] == "state"]
        assert states[0]["payload"]["visitor"]["position"][0] > 2.0
        assert states[0]["payload"]["pong"] == 5

    def test_feedback_messages_mirror_game_events(self):
        transport, result = self.session([], duration=4.0)
        sent = parse_sent(transport)
        fb = [m for m in sent if m["kind"] == "feedback"]
        assert any(m["payload"]["event"] == "ghost_appeared" for m in fb)
        log_events = [json.loads(line) for line in result.log_lines
                      if json.loads(line)["kind"] not in ("command", "sample")]
        assert len(fb) == len(log_events)
        for msg, line in zip(fb, log_events):
            assert msg["payload"]["event"] == line["kind"]
            assert msg["payload"]["data"] == line["payload"]

    def test_debug_rssi_stream(self):
        transport, _ = self.session([], debug_rssi=True)
        sent = parse_sent(transport)
        dbg = [m for m in sent if m["kind"] == "rssi_debug"]
        assert len(dbg) == 20
        entry = dbg[0]["payload"]["beacons"][0]
        assert entry["beacon_id"] == "b-vase"
        assert {"smoothed", "zone", "trend"} <= set(entry)

    def test_replay_equals_headless_script(self):
        # the same inputs sent as client messages and written as the
        # scenario's visitor script must yield identical game events.
        # live walks are one-shot so they repeat per tick; scripted
        # commands persist until replaced.
        messages = [(k, walk_msg(0.0)) for k in range(20)]
        messages.append((20, '{"v":1,"kind":"raise","raised":true}'))
        messages.extend((k, walk_msg(0.0)) for k in range(30, 40))
        doc_script = [
            {"t": 0.0, "cmd": "walk", "direction": [1.0, 0.0]},
            {"t": 1.95, "cmd": "raise", "raised": True},
            {"t": 2.95, "cmd": "walk", "direction": [1.0, 0.0]},
        ]
        sc_live = tiny_scenario(duration=4.0)
        transport = ScriptedTransport(messages)
        live = serve_session(sc_live, transport, persist=False)
        sc_scripted = tiny_scenario(duration=4.0, visitor_script=doc_script)
        headless_lines, _ = run(sc_scripted)

        def digest(lines):
            events, track = [], []
            for line in lines:
                obj = json.loads(line)
                if obj["kind"] == "command":
                    track.append((obj["t"], obj["payload"]["position"]))
                elif obj["kind"] != "sample":
                    events.append((obj["t"], obj["kind"], tuple(
                        sorted(obj["payload"].items()))))
            return events, track

        live_events, live_track = digest(live.log_lines)
        headless_events, headless_track = digest(headless_lines)
        assert live_track == headless_track
        assert live_events == headless_events
        assert len(live_events) > 0


class TestPersistence:
    def test_log_written_to_run_dir(self, tmp_path):
        sc = tiny_scenario()
        transport = ScriptedTransport([])
        result = serve_session(sc, transport, run_dir=str(tmp_path),
                               session_id="s1")
        assert result.log_path == str(tmp_path / "tiny-s1.jsonl")
        content = (tmp_path / "tiny-s1.jsonl").read_text(encoding="utf-8")
        assert content == "\n".join(result.log_lines) + "\n"

    def test_env_var_overrides_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SEAMQUEST_RUN_DIR", str(tmp_path / "elsewhere"))
        assert default_run_dir() == str(tmp_path / "elsewhere")
        path = persist_log(["{}"], "x", run_dir=None, session_id="s")
        assert path == os.path.join(str(tmp_path / "elsewhere"), "x-s.jsonl")
        assert os.path.exists(path)

    def test_no_persist(self):
        sc = tiny_scenario()
        result = serve_session(sc, ScriptedTransport([]), persist=False)
        assert result.log_path is None


class TestQueueTransport:
    def test_poll_drains_inbox(self):
        q = QueueTransport()
        q.inbox.put("a")
        q.inbox.put("b")
        assert q.poll() == ["a", "b"]
        assert q.poll() == []

    def test_close_sends_sentinel(self):
        q = QueueTransport()
        q.send("x")
        q.close()
        assert q.closed()
        assert q.outbox.get() == "x"
        assert q.outbox.get() is None


class TestWebSocket:
    @pytest.fixture()
    def client(self):
        from fastapi.testclient import TestClient

        from seamquest.server import create_app
        sc = tiny_scenario(duration=1.0)
        app = create_app(sc, real_time=False, persist=False)
        with TestClient(app) as c:
            yield c

    def test_healthz(self, client):
        r = client.get("/healthz")
        assert r.status_code == 200
        assert r.json() == {"ok": True, "scenario": "tiny"}

    def test_session_streams_and_closes(self, client):
        received = []
        with client.websocket_connect("/session") as ws:
            while True:
                try:
                    received.append(json.loads(ws.receive_text()))
                except Exception:
                    break
        assert received[0]["kind"] == "scenario_info"
        states = [m for m in received if m["kind"] == "state"]
        assert len(states) == 10
        assert states[-1]["t"] == pytest.approx(1.0)

    def test_two_sessions_are_isolated(self, client):
        def collect():
            out = []
            with client.websocket_connect("/session") as ws:
                while True:
                    try:
                        out.append(json.loads(ws.receive_text()))
                    except Exception:
                        return out

        a, b = collect(), collect()
        sa = [m for m in a if m["kind"] == "state"]
        sb = [m for m in b if m["kind"] == "state"]
        assert [s["t"] for s in sa] == [s["t"] for s in sb]
        assert sa[0]["payload"]["visitor"] == sb[0]["payload"]["visitor"]
