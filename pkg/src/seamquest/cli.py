"""Command-line entry points.

    seamquest run <scenario> [--log PATH]
    seamquest coverage <scenario> --resolution R [--out DIR] [--mode M] [--pgm]
    seamquest serve <scenario> --port P [--host H] [--debug-rssi]
    seamquest validate <scenario>

<scenario> is a JSON file path, or the name of a bundled scenario
(smoke, shelved_gallery, crowd_blockage). Exit codes: 0 success,
1 I/O or runtime failure, 2 invalid scenario or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .errors import ScenarioError
from .harness import coverage_csv, coverage_map, coverage_pgm, run
from .scenario import Scenario, load_scenario, load_scenario_file

BUNDLED = ("smoke", "shelved_gallery", "crowd_blockage")


def bundled_scenario_text(name: str) -> str:
    ref = resources.files("seamquest").joinpath(f"scenarios/{name}.json")
    return ref.read_text(encoding="utf-8")


def load_bundled_scenario(name: str) -> Scenario:
    if name not in BUNDLED:
        raise ValueError(f"unknown bundled scenario {name!r}; "
                         f"choose from {', '.join(BUNDLED)}")
    return load_scenario(bundled_scenario_text(name), name=name)


def _resolve_scenario(arg: str) -> Scenario:
    if os.path.exists(arg):
        return load_scenario_file(arg)
    if arg in BUNDLED:
        return load_bundled_scenario(arg)
    raise FileNotFoundError(
        f"no scenario file {arg!r} and no bundled scenario of that name "
        f"(bundled: {', '.join(BUNDLED)})")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seamquest",
        description="Deterministic museum beacon-game simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario headlessly")
    p_run.add_argument("scenario")
    p_run.add_argument("--log", metavar="PATH",
                       help="write the JSONL event log here")

    p_cov = sub.add_parser("coverage", help="compute a signal coverage map")
    p_cov.add_argument("scenario")
    p_cov.add_argument("--resolution", type=float, required=True,
                       metavar="METERS")
    p_cov.add_argument("--out", default=".", metavar="DIR")
    p_cov.add_argument("--mode", choices=("deterministic", "mean-of-k"),
                       default="deterministic")
    p_cov.add_argument("--draws", type=int, default=16,
                       help="samples per cell in mean-of-k mode")
    p_cov.add_argument("--pgm", action="store_true",
                       help="also write one grayscale PGM per beacon")

    p_serve = sub.add_parser("serve", help="serve live websocket sessions")
    p_serve.add_argument("scenario")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--debug-rssi", action="store_true")
    p_serve.add_argument("--run-dir", default=None,
                         help="where session logs land "
                              "(default: $SEAMQUEST_RUN_DIR or ./runs)")

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("scenario")
    return parser


def _cmd_run(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    lines, metrics = run(scenario)
    if args.log:
        out_dir = os.path.dirname(os.path.abspath(args.log))
        os.makedirs(out_dir, exist_ok=True)
        with open(args.log, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
    print(json.dumps({"scenario": scenario.name,
                      "metrics": metrics.to_json_dict()}, indent=2))
    return 0


def _cmd_coverage(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    if args.resolution <= 0:
        print("error: --resolution must be positive", file=sys.stderr)
        return 2
    cells = coverage_map(scenario.floorplan, scenario.beacons, scenario.radio,
                         args.resolution, mode=args.mode, seed=scenario.seed,
                         draws=args.draws)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, f"{scenario.name}-coverage.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(coverage_csv(cells))
    written = [csv_path]
    if args.pgm:
        for b in scenario.beacons:
            if not b.enabled:
                continue
            pgm_path = os.path.join(
                args.out, f"{scenario.name}-{b.beacon_id}.pgm")
            with open(pgm_path, "w", encoding="utf-8") as fh:
                fh.write(coverage_pgm(cells, b.beacon_id, scenario.radio))
            written.append(pgm_path)
    for path in written:
        print(path)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    scenario = _resolve_scenario(args.scenario)
    app = create_app(scenario, real_time=True, debug_rssi=args.debug_rssi,
                     run_dir=args.run_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_validate(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    print(f"OK: {scenario.name} "
          f"({len(scenario.beacons)} beacons, "
          f"{len(scenario.quests.quests)} quests, "
          f"duration {scenario.duration:g} s at tick {scenario.tick:g} s)")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "coverage": _cmd_coverage,
                "serve": _cmd_serve, "validate": _cmd_validate}
    try:
        return handlers[args.command](args)
    except ScenarioError as e:
        print(f"invalid scenario: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
