"""Deterministic BLE museum-game simulator.

A seeded discrete-time model of beacon signal strength in a museum
(path loss, body shadowing, shelf and crowd occlusion, correlated
fading), a proximity-and-trend sensing layer, the ghost quest engine
that turns signal trends into warmer/colder feedback, a headless
scenario harness, and a websocket gateway for live play.
"""

from .errors import (LogParseError, ScenarioError, ScenarioGeometryError,
                     ScenarioReferenceError, ScenarioSchemaError)
from .game import (FinalGhost, GameEvent, GameState, Quest, QuestScript,
                   advance, initial_state, render_message)
from .harness import (RunMetrics, TickEngine, compute_metrics, coverage_csv,
                      coverage_map, coverage_pgm, run)
from .radio import (NoiseChannel, RadioParams, RssiSample, body_attenuation,
                    occlusion_attenuation, path_loss, sample_rssi)
from .scenario import Scenario, load_scenario, load_scenario_file
from .sensing import (BeaconHistory, ProximityEstimate, SmoothingConfig,
                      arrival_check, estimate, ingest)
from .world import (Beacon, CrowdAgent, Floorplan, MoveCommand, VisitorState,
                    WorldState, line_of_sight, step)

__version__ = "0.1.0"

__all__ = [
    "LogParseError", "ScenarioError", "ScenarioGeometryError",
    "ScenarioReferenceError", "ScenarioSchemaError",
    "FinalGhost", "GameEvent", "GameState", "Quest", "QuestScript",
    "advance", "initial_state", "render_message",
    "RunMetrics", "TickEngine", "compute_metrics", "coverage_csv",
    "coverage_map", "coverage_pgm", "run",
    "NoiseChannel", "RadioParams", "RssiSample", "body_attenuation",
    "occlusion_attenuation", "path_loss", "sample_rssi",
    "Scenario", "load_scenario", "load_scenario_file",
    "BeaconHistory", "ProximityEstimate", "SmoothingConfig",
    "arrival_check", "estimate", "ingest",
    "Beacon", "CrowdAgent", "Floorplan", "MoveCommand", "VisitorState",
    "WorldState", "line_of_sight", "step",
    "__version__",
]
