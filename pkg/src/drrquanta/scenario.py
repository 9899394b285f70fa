"""Scenario files: JSON documents describing a single-node DRR system.

Schema::

    {
      "name": "reference-1",                  # optional
      "units": {"data": "Kb", "time": "s"},   # optional, default bits / s
      "capacity": 40,                         # data per time unit
      "residual_deficit_cap": 3,              # data
      "flows": [
        {"burst": 10, "rate": 1, "deadline": 1, "packet_len": 3},
        ...
      ]
    }

``packet_len`` is optional.  Values are converted to bits, seconds and
bits/second exactly once, at load time; :func:`serialize` always writes base
units without a ``units`` block.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import ParseError, SchemaError
from .model import FlowSpec, SystemSpec, validate

DATA_UNITS = {"bits": 1, "b": 1, "Kb": 1000}
# time units per second
TIME_UNITS = {"s": 1, "ms": 1000}

_TOP_FIELDS = {"name", "units", "capacity", "residual_deficit_cap", "flows"}
_FLOW_FIELDS = {"burst", "rate", "deadline", "packet_len"}
_FLOW_REQUIRED = ("burst", "rate", "deadline")


@dataclass(frozen=True)
class Scenario:
    name: str
    spec: SystemSpec


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(where, f"expected a number, got {value!r}")
    return value


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "expected an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown field")
    for key in ("capacity", "residual_deficit_cap", "flows"):
        if key not in doc:
            raise SchemaError(key, "missing required field")

    units = doc.get("units", {})
    if not isinstance(units, dict):
        raise SchemaError("units", "expected an object")
    if set(units) - {"data", "time"}:
        raise SchemaError("units." + sorted(set(units) - {"data", "time"})[0], "unknown field")
    data_unit = units.get("data", "bits")
    time_unit = units.get("time", "s")
    if data_unit not in DATA_UNITS:
        raise SchemaError("units.data", f"expected one of {sorted(DATA_UNITS)}, got {data_unit!r}")
    if time_unit not in TIME_UNITS:
        raise SchemaError("units.time", f"expected one of {sorted(TIME_UNITS)}, got {time_unit!r}")
    data = DATA_UNITS[data_unit]
    per_second = TIME_UNITS[time_unit]

    def bits(x):
        return x * data if data != 1 else x

    def seconds(x):
        return x / per_second if per_second != 1 else x

    def bits_per_second(x):
        scale = data * per_second
        return x * scale if scale != 1 else x

    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("name", "expected a string")
    flows_doc = doc["flows"]
    if not isinstance(flows_doc, list):
        raise SchemaError("flows", "expected a list")

    flows = []
    for k, fd in enumerate(flows_doc):
        where = f"flows[{k}]"
        if not isinstance(fd, dict):
            raise SchemaError(where, "expected an object")
        unknown = set(fd) - _FLOW_FIELDS
        if unknown:
            raise SchemaError(f"{where}.{sorted(unknown)[0]}", "unknown field")
        for key in _FLOW_REQUIRED:
            if key not in fd:
                raise SchemaError(f"{where}.{key}", "missing required field")
        ell = fd.get("packet_len")
        flows.append(FlowSpec(
            burst=bits(_number(fd["burst"], f"{where}.burst")),
            rate=bits_per_second(_number(fd["rate"], f"{where}.rate")),
            deadline=seconds(_number(fd["deadline"], f"{where}.deadline")),
            packet_len=None if ell is None else bits(_number(ell, f"{where}.packet_len")),
        ))

    spec = SystemSpec(
        capacity=bits_per_second(_number(doc["capacity"], "capacity")),
        residual_deficit_cap=bits(_number(doc["residual_deficit_cap"], "residual_deficit_cap")),
        flows=tuple(flows),
    )
    return Scenario(name, validate(spec))


def load_scenario(text: str) -> SystemSpec:
    """Parse, unit-normalize and validate a scenario document."""
    return parse_scenario(text).spec


def read_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(Path(path).read_text())


def serialize(spec: SystemSpec, name: str = "") -> str:
    doc = {}
    if name:
        doc["name"] = name
    doc["capacity"] = spec.capacity
    doc["residual_deficit_cap"] = spec.residual_deficit_cap
    flows = []
    for f in spec.flows:
        fd = {"burst": f.burst, "rate": f.rate, "deadline": f.deadline}
        if f.packet_len is not None:
            fd["packet_len"] = f.packet_len
        flows.append(fd)
    doc["flows"] = flows
    return json.dumps(doc, indent=2) + "\n"
