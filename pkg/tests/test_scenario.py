import copy
import json

import pytest

from helpers import base_scenario_doc
from seamquest.errors import (ScenarioError, ScenarioGeometryError,
                              ScenarioReferenceError, ScenarioSchemaError)
from seamquest.scenario import load_scenario, load_scenario_file


def doc_with(mutate):
    d = copy.deepcopy(base_scenario_doc())
    mutate(d)
    return d


def expect_error(doc, exc, path_fragment):
    with pytest.raises(exc) as e:
        load_scenario(doc)
    assert path_fragment in str(e.value)
    return e.value


class TestHappyPath:
    def test_minimal_loads(self):
        sc = load_scenario(base_scenario_doc(), name="tiny")
        assert sc.name == "tiny"
        assert sc.tick_count == 40
        assert sc.beacons[0].beacon_id == "b-vase"
        assert sc.quests.quests[0].beacon_id == "b-vase"
        assert sc.visitor.position == (2.0, 5.0)
        assert sc.visitor.speed == 1.2  # default

    def test_accepts_json_text(self):
        sc = load_scenario(json.dumps(base_scenario_doc()))
        assert sc.seed == 5

    def test_radio_sensing_defaults_when_omitted(self):
        d = base_scenario_doc()
        del d["radio"]
        sc = load_scenario(d)
        assert sc.radio.p_ref_dbm == -59.0
        assert sc.radio.path_loss_exponent == 2.2
        assert sc.sensing.window_s == 6.0
        assert sc.sensing.method == "ewma"

    def test_partial_radio_overrides(self):
        d = base_scenario_doc(radio={"path_loss_exponent": 3.0})
        sc = load_scenario(d)
        assert sc.radio.path_loss_exponent == 3.0
        assert sc.radio.p_ref_dbm == -59.0

    def test_quest_defaults(self):
        sc = load_scenario(base_scenario_doc())
        assert sc.quests.feedback_period_s == 1.0  # from the doc
        assert sc.quests.recovery_text  # default text present
        sc.quests.validate()

    def test_message_override_merges(self):
        d = base_scenario_doc()
        d["quests"]["messages"] = {"warmer": {"near": "custom {ghost}!"}}
        sc = load_scenario(d)
        assert sc.quests.messages[("warmer", "near")] == "custom {ghost}!"
        assert sc.quests.messages[("colder", "far")]  # default survives

    def test_clockwise_polygon_reoriented(self):
        d = base_scenario_doc()
        d["floorplan"]["obstacles"] = [{
            "label": "case",
            "polygon": [[4.0, 4.0], [4.0, 6.0], [6.0, 6.0], [6.0, 4.0]],
            "attenuation_db": 5.0,
        }]
        sc = load_scenario(d)
        from seamquest.geometry import polygon_signed_area
        assert polygon_signed_area(sc.floorplan.obstacles[0].polygon) > 0

    def test_custom_intro_and_final_text(self):
        d = base_scenario_doc()
        d["quests"]["quests"][0]["intro"] = "Psst, {ghost} here."
        d["quests"]["final_ghost"]["text"] = "Greetings from {museum}."
        sc = load_scenario(d)
        assert sc.quests.quests[0].intro == "Psst, {ghost} here."
        assert sc.quests.final_ghost.text == "Greetings from {museum}."

    def test_visitor_facing_normalized(self):
        d = base_scenario_doc()
        d["visitor"]["facing"] = [0.0, 5.0]
        sc = load_scenario(d)
        assert sc.visitor.facing == (0.0, 1.0)

    def test_load_from_file_names_by_basename(self, tmp_path):
        p = tmp_path / "museum_day.json"
        p.write_text(json.dumps(base_scenario_doc()), encoding="utf-8")
        sc = load_scenario_file(str(p))
        assert sc.name == "museum_day"

    def test_script_and_crowd_load(self):
        d = base_scenario_doc(
            visitor_script=[
                {"t": 0.0, "cmd": "walk", "direction": [1.0, 0.0]},
                {"t": 1.0, "cmd": "turn", "facing": [0.0, 1.0]},
                {"t": 2.0, "cmd": "raise", "raised": True},
                {"t": 3.0, "cmd": "idle"},
            ],
            crowd=[{"agent_id": "c1", "radius": 0.25, "waypoints": [
                {"t": 0.0, "position": [1.0, 1.0]},
                {"t": 2.0, "position": [9.0, 9.0]},
            ]}])
        sc = load_scenario(d)
        assert [e.command.kind for e in sc.visitor_script] == \
            ["walk", "turn", "raise", "idle"]
        assert sc.crowd[0].radius == 0.25
        assert sc.crowd[0].position_at(1.0) == (5.0, 5.0)


class TestSchemaErrors:
    def test_invalid_json_text(self):
        expect_error("{not json", ScenarioSchemaError, "invalid JSON")

    def test_missing_floorplan(self):
        d = base_scenario_doc()
        del d["floorplan"]
        expect_error(d, ScenarioSchemaError, "floorplan")

    def test_missing_seed(self):
        d = base_scenario_doc()
        del d["seed"]
        expect_error(d, ScenarioSchemaError, "seed")

    def test_boolean_seed_rejected(self):
        expect_error(base_scenario_doc(seed=True), ScenarioSchemaError, "seed")

    def test_float_seed_rejected(self):
        expect_error(base_scenario_doc(seed=1.5), ScenarioSchemaError, "seed")

    def test_bad_tick(self):
        expect_error(base_scenario_doc(tick=0.0), ScenarioSchemaError, "tick")

    def test_duration_below_tick(self):
        expect_error(base_scenario_doc(duration=0.05),
                     ScenarioSchemaError, "duration")

    def test_unknown_radio_field(self):
        err = expect_error(doc_with(
            lambda d: d.__setitem__("radio", {"tx_power": -59.0})),
            ScenarioSchemaError, "radio.tx_power")
        assert err.path == "radio.tx_power"

    def test_non_numeric_radio_field(self):
        expect_error(doc_with(
            lambda d: d.__setitem__("radio", {"p_ref_dbm": "loud"})),
            ScenarioSchemaError, "radio.p_ref_dbm")

    def test_invalid_radio_values(self):
        expect_error(doc_with(
            lambda d: d.__setitem__("radio", {"path_loss_exponent": -1.0})),
            ScenarioSchemaError, "radio")

    def test_invalid_sensing_values(self):
        expect_error(doc_with(
            lambda d: d.__setitem__("sensing", {"lost_timeout_s": 99.0})),
            ScenarioSchemaError, "sensing")

    def test_unknown_script_command(self):
        expect_error(doc_with(lambda d: d.__setitem__(
            "visitor_script", [{"t": 0.0, "cmd": "teleport"}])),
            ScenarioSchemaError, "visitor_script[0]")

    def test_zero_walk_direction(self):
        expect_error(doc_with(lambda d: d.__setitem__(
            "visitor_script",
            [{"t": 0.0, "cmd": "walk", "direction": [0.0, 0.0]}])),
            ScenarioSchemaError, "visitor_script[0]")

    def test_script_times_must_be_ordered(self):
        expect_error(doc_with(lambda d: d.__setitem__(
            "visitor_script", [{"t": 2.0, "cmd": "idle"},
                               {"t": 1.0, "cmd": "idle"}])),
            ScenarioSchemaError, "visitor_script[1].t")

    def test_unknown_message_trend(self):
        def mut(d):
            d["quests"]["messages"] = {"hotter": {"near": "x"}}
        expect_error(doc_with(mut), ScenarioSchemaError,
                     "quests.messages.hotter")

    def test_unknown_message_zone(self):
        def mut(d):
            d["quests"]["messages"] = {"warmer": {"touching": "x"}}
        expect_error(doc_with(mut), ScenarioSchemaError,
                     "quests.messages.warmer.touching")

    def test_nonfinite_number_rejected(self):
        def mut(d):
            d["duration"] = float("inf")
        expect_error(doc_with(mut), ScenarioSchemaError, "duration")


class TestReferenceErrors:
    def test_duplicate_beacon_id(self):
        def mut(d):
            d["beacons"].append(dict(d["beacons"][0]))
        expect_error(doc_with(mut), ScenarioReferenceError,
                     "beacons[1].beacon_id")

    def test_beacon_unknown_artifact(self):
        def mut(d):
            d["beacons"][0]["artifact_id"] = "ghost-ship"
        expect_error(doc_with(mut), ScenarioReferenceError, "artifact")

    def test_quest_artifact_without_beacon(self):
        def mut(d):
            d["beacons"][0]["enabled"] = False
        expect_error(doc_with(mut), ScenarioReferenceError,
                     "quests.quests[0]")

    def test_quest_artifact_with_two_beacons(self):
        def mut(d):
            d["beacons"].append({"beacon_id": "b2", "artifact_id": "vase",
                                 "position": [7.0, 5.0], "enabled": True})
        expect_error(doc_with(mut), ScenarioReferenceError, "unambiguous")

    def test_second_disabled_beacon_is_fine(self):
        d = base_scenario_doc()
        d["beacons"].append({"beacon_id": "b2", "artifact_id": "vase",
                             "position": [7.0, 5.0], "enabled": False})
        sc = load_scenario(d)
        assert sc.quests.quests[0].beacon_id == "b-vase"

    def test_duplicate_gallery_id(self):
        def mut(d):
            d["floorplan"]["galleries"].append(
                {"gallery_id": "main", "rect": [0.0, 0.0, 1.0, 1.0]})
        expect_error(doc_with(mut), ScenarioReferenceError, "gallery")

    def test_artifact_unknown_gallery(self):
        def mut(d):
            d["floorplan"]["artifacts"][0]["gallery_id"] = "attic"
        expect_error(doc_with(mut), ScenarioReferenceError, "attic")

    def test_duplicate_crowd_agent(self):
        def mut(d):
            wp = [{"t": 0.0, "position": [1.0, 1.0]}]
            d["crowd"] = [
                {"agent_id": "c", "waypoints": wp},
                {"agent_id": "c", "waypoints": wp},
            ]
        expect_error(doc_with(mut), ScenarioReferenceError, "crowd[1]")


class TestGeometryErrors:
    def test_inverted_bounds(self):
        def mut(d):
            d["floorplan"]["bounds"] = [10.0, 0.0, 0.0, 10.0]
        expect_error(doc_with(mut), ScenarioGeometryError, "bounds")

    def test_degenerate_wall(self):
        def mut(d):
            d["floorplan"]["walls"] = [
                {"a": [1.0, 1.0], "b": [1.0, 1.0], "attenuation_db": 3.0}]
        expect_error(doc_with(mut), ScenarioGeometryError, "walls[0]")

    def test_wall_outside_bounds(self):
        def mut(d):
            d["floorplan"]["walls"] = [
                {"a": [1.0, 1.0], "b": [11.0, 1.0], "attenuation_db": 3.0}]
        expect_error(doc_with(mut), ScenarioGeometryError, "walls[0].b")

    def test_nonconvex_obstacle(self):
        def mut(d):
            d["floorplan"]["obstacles"] = [{
                "label": "star",
                "polygon": [[2.0, 2.0], [6.0, 2.0], [4.0, 3.0], [6.0, 6.0],
                            [2.0, 6.0]],
                "attenuation_db": 4.0}]
        expect_error(doc_with(mut), ScenarioGeometryError, "polygon")

    def test_collinear_polygon(self):
        def mut(d):
            d["floorplan"]["obstacles"] = [{
                "label": "line",
                "polygon": [[2.0, 2.0], [4.0, 2.0], [6.0, 2.0]],
                "attenuation_db": 4.0}]
        expect_error(doc_with(mut), ScenarioGeometryError, "polygon")

    def test_beacon_outside_bounds(self):
        def mut(d):
            d["beacons"][0]["position"] = [55.0, 5.0]
        expect_error(doc_with(mut), ScenarioGeometryError,
                     "beacons[0].position")

    def test_visitor_inside_obstacle(self):
        def mut(d):
            d["floorplan"]["obstacles"] = [{
                "label": "case",
                "polygon": [[1.0, 4.0], [3.0, 4.0], [3.0, 6.0], [1.0, 6.0]],
                "attenuation_db": 4.0}]
        expect_error(doc_with(mut), ScenarioGeometryError, "visitor.position")

    def test_visitor_on_obstacle_edge_allowed(self):
        d = base_scenario_doc()
        d["floorplan"]["obstacles"] = [{
            "label": "case",
            "polygon": [[2.0, 4.0], [3.0, 4.0], [3.0, 6.0], [2.0, 6.0]],
            "attenuation_db": 4.0}]
        sc = load_scenario(d)  # visitor at (2.0, 5.0) sits on the edge
        assert sc.floorplan.obstacles[0].label == "case"

    def test_waypoint_times_strictly_increase(self):
        def mut(d):
            d["crowd"] = [{"agent_id": "c", "waypoints": [
                {"t": 0.0, "position": [1.0, 1.0]},
                {"t": 0.0, "position": [2.0, 2.0]},
            ]}]
        expect_error(doc_with(mut), ScenarioSchemaError, "waypoints[1].t")

    def test_waypoint_outside_bounds(self):
        def mut(d):
            d["crowd"] = [{"agent_id": "c", "waypoints": [
                {"t": 0.0, "position": [40.0, 1.0]}]}]
        expect_error(doc_with(mut), ScenarioGeometryError,
                     "waypoints[0].position")

    def test_gallery_outside_bounds(self):
        def mut(d):
            d["floorplan"]["galleries"][0]["rect"] = [0.0, 0.0, 12.0, 10.0]
        expect_error(doc_with(mut), ScenarioGeometryError, "rect")


def test_all_errors_are_scenario_errors():
    assert issubclass(ScenarioSchemaError, ScenarioError)
    assert issubclass(ScenarioReferenceError, ScenarioError)
    assert issubclass(ScenarioGeometryError, ScenarioError)
    assert issubclass(ScenarioError, ValueError)
