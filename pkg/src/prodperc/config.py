"""Graph descriptors and run configuration files.

A graph descriptor is either a string such as ``hypercube(14)``,
``cycle(4)^7`` or ``C4*P4*K2``, or a JSON object::

    {"hypercube": 14}
    {"factors": [{"kind": "cycle", "k": 4}, {"n": 3, "edges": [[0, 1], [1, 2]]}, "K2"]}

Run configuration files are JSON objects validated against ``RUN_CONFIG_SCHEMA``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

import jsonschema

from prodperc.errors import InvalidParameterError
from prodperc.graph_core import FactorGraph, build_named, from_edges
from prodperc.product import ProductGraph

_FACTOR_SCHEMA = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {
                "kind": {"enum": ["complete", "cycle", "path", "edge"]},
                "k": {"type": "integer", "minimum": 2},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "edges": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                },
                "label": {"type": "string"},
            },
            "required": ["n", "edges"],
            "additionalProperties": False,
        },
    ]
}

GRAPH_SCHEMA = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {"hypercube": {"type": "integer", "minimum": 1}},
            "required": ["hypercube"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"factors": {"type": "array", "items": _FACTOR_SCHEMA, "minItems": 1}},
            "required": ["factors"],
            "additionalProperties": False,
        },
    ]
}

_num = {"type": "number"}
_int = {"type": "integer"}
_uint64 = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "prodperc run configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "graph": GRAPH_SCHEMA,
        "C": {"type": "integer", "minimum": 1},
        "gamma": {"type": "number", "exclusiveMinimum": 0},
        "p": {"type": "number", "minimum": 0, "maximum": 1},
        "eps": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "grid": {"type": "array", "items": {"type": ["number", "string"]}, "minItems": 1},
        "grid_range": {"type": "array", "items": {"type": ["number", "string"]}, "minItems": 3, "maxItems": 3},
        "trials": {"type": "integer", "minimum": 1},
        "seed": _uint64,
        "cap": {"type": "integer", "minimum": 1},
        "start": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["bitmask", "on_the_fly", "onthefly"]},
        "coupled": {"type": "boolean"},
        "c_floor": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "k": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "n_factors": {"type": "integer", "minimum": 2},
        "cycle_len": {"type": "integer", "minimum": 3},
        "out": {"type": "string"},
        "format": {"enum": ["csv", "json"]},
        "threads": {"type": "integer", "minimum": 1},
    },
}

_ATOM = re.compile(
    r"^(?:(?P<fam>complete|cycle|path|hypercube)\((?P<k>\d+)\)|(?P<edge>edge)|(?P<short>[KCP])(?P<sk>\d+))$"
)
_SHORT = {"K": "complete", "C": "cycle", "P": "path"}


def _atom(text: str) -> list[FactorGraph]:
    m = _ATOM.match(text)
    if not m:
        raise InvalidParameterError(f"cannot parse graph factor {text!r}")
    if m["edge"]:
        return [build_named("edge", 2)]
    if m["fam"] == "hypercube":
        return [build_named("edge", 2)] * int(m["k"])
    if m["fam"]:
        return [build_named(m["fam"], int(m["k"]))]
    k = int(m["sk"])
    if m["short"] == "K" and k == 2:
        return [build_named("edge", 2)]
    return [build_named(_SHORT[m["short"]], k)]


def parse_graph_string(text: str) -> list[FactorGraph]:
    factors: list[FactorGraph] = []
    for term in re.sub(r"\s+", "", text).split("*"):
        if not term:
            raise InvalidParameterError(f"empty factor in {text!r}")
        base, _, power = term.partition("^")
        reps = 1
        if power:
            if not power.isdigit() or int(power) < 1:
                raise InvalidParameterError(f"bad exponent in {term!r}")
            reps = int(power)
        factors.extend(_atom(base) * reps)
    return factors


def _factor(obj: Any) -> list[FactorGraph]:
    if isinstance(obj, str):
        return parse_graph_string(obj)
    if "kind" in obj:
        return [build_named(obj["kind"], obj.get("k", 2))]
    return [from_edges(obj["n"], obj["edges"], label=obj.get("label"))]


def build_graph(desc: Any, C: int | None = None, gamma: float | None = None) -> ProductGraph:
    try:
        jsonschema.validate(desc, GRAPH_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidParameterError(f"bad graph descriptor: {exc.message}") from None
    if isinstance(desc, str):
        factors = parse_graph_string(desc)
    elif "hypercube" in desc:
        factors = [build_named("edge", 2)] * desc["hypercube"]
    else:
        factors = [f for item in desc["factors"] for f in _factor(item)]
    return ProductGraph(factors, declared_C=C, declared_gamma=gamma)


def load_config(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameterError(f"cannot read config {path}: {exc}") from None
    validate_config(data)
    return data


def validate_config(data: dict) -> None:
    try:
        jsonschema.validate(data, RUN_CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidParameterError(f"invalid config: {exc.message}") from None


def parse_probability(text: str | float) -> float:
    """Accepts ``0.1``, ``1/14`` or ``1.5/14``."""
    if isinstance(text, (int, float)):
        return float(text)
    num, sep, den = str(text).partition("/")
    try:
        return float(num) / float(den) if sep else float(num)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"cannot parse probability {text!r}") from None
