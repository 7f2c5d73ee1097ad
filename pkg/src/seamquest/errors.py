"""Validation error types shared by scenario loading and world checks."""

from __future__ import annotations


class ScenarioError(ValueError):
    """Base for scenario validation failures; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ScenarioSchemaError(ScenarioError):
    """Wrong shape: missing section, wrong type, bad enum value."""


class ScenarioReferenceError(ScenarioError):
    """Dangling identifier: beacon to artifact, quest to beacon, and so on."""


class ScenarioGeometryError(ScenarioError):
    """Geometric invariant broken: out of bounds, degenerate polygon."""


class LogParseError(ValueError):
    """Malformed event-log line; reports the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"log line {line_no}: {message}")
