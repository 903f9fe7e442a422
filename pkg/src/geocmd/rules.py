"""Pattern-based translator from natural language to canonical calls.

The pattern list lives in a shipped JSON file (``data/rules.json``) rather
than in code, so the command line and the browser demo interpret the exact
same bytes. A rule fires when its trigger matches and every slot pattern
extracts; the first firing rule in file order wins. No rule firing is a
result (``None``), not an error.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from geocmd.calls import (
    AddLayer,
    AddMarker,
    AddVector,
    AddWMS,
    CartoProperty,
    Cartography,
    Draw,
    DrawShape,
    GeometryKind,
    GisCall,
    Move,
    MoveToExtent,
    NumberLiteral,
    ZoomIn,
    ZoomOut,
)

RULES_FORMAT_VERSION = 1


class RulesFileError(ValueError):
    """The rules file is structurally invalid or has the wrong version."""


@dataclass(frozen=True)
class Rule:
    function: str
    trigger: re.Pattern
    slots: dict[str, tuple[re.Pattern, int]]
    args: tuple[dict[str, Any], ...]


def _compile(pattern: str) -> re.Pattern:
    return re.compile(pattern, re.IGNORECASE)


class RuleSet:
    def __init__(self, rules: list[Rule]):
        self.rules = rules

    @classmethod
    def from_mapping(cls, payload: dict) -> "RuleSet":
        if payload.get("format_version") != RULES_FORMAT_VERSION:
            raise RulesFileError(
                f"unsupported rules format_version: {payload.get('format_version')!r}"
            )
        rules = []
        for entry in payload.get("rules", []):
            slots = {
                name: (_compile(spec["pattern"]), spec.get("group", 1))
                for name, spec in entry.get("slots", {}).items()
            }
            rules.append(
                Rule(
                    function=entry["function"],
                    trigger=_compile(entry["trigger"]),
                    slots=slots,
                    args=tuple(entry["args"]),
                )
            )
        if not rules:
            raise RulesFileError("rules file contains no rules")
        return cls(rules)

    @classmethod
    def from_path(cls, path: str | Path) -> "RuleSet":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_mapping(json.load(fh))

    @classmethod
    def default(cls) -> "RuleSet":
        text = resources.files("geocmd").joinpath("data/rules.json").read_text("utf-8")
        return cls.from_mapping(json.loads(text))

    def translate(self, query: str) -> Optional[GisCall]:
        for rule in self.rules:
            if not rule.trigger.search(query):
                continue
            values: dict[str, str] = {}
            for name, (pattern, group) in rule.slots.items():
                found = pattern.search(query)
                if not found or found.group(group) is None:
                    values = {}
                    break
                values[name] = found.group(group)
            else:
                try:
                    return _build_call(rule.function, rule.args, values)
                except ValueError:
                    # Extracted values cannot form a valid call (e.g. a zoom
                    # of 0 levels); let later rules have a try.
                    continue
        return None


def _build_call(function: str, args: tuple[dict, ...], values: dict[str, str]) -> GisCall:
    built: list[Any] = []
    for arg in args:
        kind = arg["kind"]
        if kind == "string":
            built.append(values[arg["slot"]])
        elif kind == "number":
            built.append(NumberLiteral(values[arg["slot"]]))
        elif kind == "int":
            built.append(int(values[arg["slot"]]))
        elif kind == "pair":
            built.append(
                (NumberLiteral(values[arg["x_slot"]]), NumberLiteral(values[arg["y_slot"]]))
            )
        elif kind == "geometry":
            built.append(GeometryKind.from_text(values[arg["slot"]]))
        elif kind == "shape":
            built.append(DrawShape.from_text(values[arg["slot"]]))
        elif kind == "property":
            built.append(CartoProperty.from_text(values[arg["slot"]]))
        elif kind == "null":
            built.append(None)
        else:
            raise RulesFileError(f"unknown argument kind: {kind!r}")
    constructors = {
        "AddMarker": AddMarker,
        "AddLayer": AddLayer,
        "AddVector": AddVector,
        "AddWMS": AddWMS,
        "Cartography": Cartography,
        "Draw": Draw,
        "Move": Move,
        "MoveToExtent": MoveToExtent,
        "ZoomIn": ZoomIn,
        "ZoomOut": ZoomOut,
    }
    if function not in constructors:
        raise RulesFileError(f"rule targets unknown function: {function!r}")
    return constructors[function](*built)


_DEFAULT_RULESET: Optional[RuleSet] = None


def default_ruleset() -> RuleSet:
    global _DEFAULT_RULESET
    if _DEFAULT_RULESET is None:
        _DEFAULT_RULESET = RuleSet.default()
    return _DEFAULT_RULESET


def translate_rules(query: str, ruleset: Optional[RuleSet] = None) -> Optional[GisCall]:
    """Translate one request; ``None`` means no pattern understood it."""
    return (ruleset or default_ruleset()).translate(query)
