"""Problem specifications: strict JSON schema plus a typed wrapper."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any

import jsonschema

SPEC_VERSION = "1"

TASKS = ("prolong", "finite-type", "admissible", "h02", "killing", "flow", "decompose")
BUILTINS = ("gl", "zero", "osp", "p", "spin_w")

_SCALAR = {"type": "string", "pattern": r"^\s*[-+0-9/i*\s]+$"}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _SCALAR}}
_POINT = {"type": "array", "items": {"type": "number"}}

_OPTIONS = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "kmax": {"type": "integer", "minimum": 1, "maximum": 64},
        "max_degree": {"type": "integer", "minimum": 0, "maximum": 8},
        "mode": {"enum": ["frame", "metric"]},
        "frame": {"type": "array", "items": {"type": "string"}},
        "points": {"type": "array", "items": _POINT},
        "field": {"type": "string"},
        "lie_with": {"type": "string"},
        "t_span": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "steps": {"type": "integer", "minimum": 1, "maximum": 100000},
        "step": {"type": "number", "exclusiveMinimum": 0},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "n_params": {"type": "integer", "minimum": 0, "maximum": 6},
        "images": {"type": "array", "items": {"type": "string"}},
    },
}

SPEC_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "superprolong problem",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "task"],
    "properties": {
        "version": {"type": "string"},
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "space": {
            "type": "object",
            "additionalProperties": False,
            "required": ["even", "odd"],
            "properties": {
                "even": {"type": "integer", "minimum": 0, "maximum": 32},
                "odd": {"type": "integer", "minimum": 0, "maximum": 32},
                "n1": {"type": "integer", "minimum": 0},
                "n2": {"type": "integer", "minimum": 0},
            },
        },
        "algebra": {
            "type": "object",
            "additionalProperties": False,
            "oneOf": [{"required": ["builtin"]}, {"required": ["custom"]}],
            "properties": {
                "builtin": {"enum": list(BUILTINS)},
                "params": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "p": {"type": "integer", "minimum": 0, "maximum": 8},
                        "q": {"type": "integer", "minimum": 0, "maximum": 8},
                    },
                },
                "custom": {"type": "array", "items": _MATRIX},
                "close": {"type": "boolean"},
            },
        },
        "task": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(TASKS)},
                "options": _OPTIONS,
            },
        },
    },
}

_LEVEL = {
    "type": "object",
    "additionalProperties": False,
    "required": ["k", "even", "odd"],
    "properties": {
        "k": {"type": "integer"},
        "even": {"type": "integer"},
        "odd": {"type": "integer"},
        "real_even_dim": {"type": "integer"},
        "complex_even_dim": {"type": "integer"},
        "mixed": {"type": "string"},
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "superprolong report",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "tool", "task", "status", "result"],
    "properties": {
        "version": {"const": SPEC_VERSION},
        "tool": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "version"],
            "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
        },
        "seed": {"type": "integer"},
        "task": SPEC_SCHEMA,
        "status": {"enum": ["ok", "error"]},
        "error": {"type": "string"},
        "result": {
            "type": "object",
            "properties": {"levels": {"type": "array", "items": _LEVEL}},
        },
        "timing": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}


class SpecError(ValueError):
    """Validation failure; the message names the offending field."""


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate_spec(data: Any) -> None:
    if isinstance(data, dict) and "version" in data and data["version"] != SPEC_VERSION:
        raise SpecError(f"version: expected {SPEC_VERSION!r}, got {data['version']!r}")
    v = jsonschema.Draft202012Validator(SPEC_SCHEMA)
    errs = sorted(v.iter_errors(data), key=lambda e: (len(list(e.absolute_path)), _path(e)))
    if errs:
        e = errs[0]
        raise SpecError(f"{_path(e)}: {e.message}")


def validate_report(data: Any) -> None:
    jsonschema.Draft202012Validator(REPORT_SCHEMA).validate(data)


@dataclass
class ProblemSpec:
    task: str
    options: dict = field(default_factory=dict)
    space: dict | None = None
    algebra: dict | None = None
    seed: int | None = None
    name: str | None = None
    version: str = SPEC_VERSION

    @classmethod
    def parse(cls, data: Any) -> "ProblemSpec":
        validate_spec(data)
        data = copy.deepcopy(data)
        t = data["task"]
        return cls(
            task=t["kind"],
            options=t.get("options", {}),
            space=data.get("space"),
            algebra=data.get("algebra"),
            seed=data.get("seed"),
            name=data.get("name"),
            version=data["version"],
        )

    def serialize(self) -> dict:
        out: dict[str, Any] = {"version": self.version}
        if self.name is not None:
            out["name"] = self.name
        if self.seed is not None:
            out["seed"] = self.seed
        if self.space is not None:
            out["space"] = copy.deepcopy(self.space)
        if self.algebra is not None:
            out["algebra"] = copy.deepcopy(self.algebra)
        task: dict[str, Any] = {"kind": self.task}
        if self.options:
            task["options"] = copy.deepcopy(self.options)
        out["task"] = task
        return out
