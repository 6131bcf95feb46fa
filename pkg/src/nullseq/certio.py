"""JSON reading and writing for every certificate type.

Output is canonical (sorted keys, two-space indent, trailing newline), so a
parse/serialize round trip reproduces the same bytes. A ``created``
timestamp is added only on request and ignored when loading.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .duality import Character, SeparatorSchedule, WitnessReport
from .monothetic import Approximation, DensityCertificate, GeneratorTrace
from .separation import CompactnessVerdict, dichotomy_from_dict
from .sequences import NullSeq

__all__ = ["to_data", "from_data", "dumps", "loads", "save", "load"]


def to_data(obj: Any, timestamp: bool = False) -> dict:
    data = dict(obj.to_dict())
    if isinstance(obj, DensityCertificate):
        data["kind"] = "density-certificate"
    elif isinstance(obj, NullSeq):
        data["kind"] = "null-sequence"
    elif isinstance(obj, Character):
        data["kind"] = "character"
    if timestamp:
        data["created"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return data


def from_data(data: dict) -> Any:
    data = {k: v for k, v in data.items() if k != "created"}
    if data.get("format") == "trace-v1":
        return GeneratorTrace.from_dict(data)
    kind = data.get("kind")
    if kind in ("cover", "discrete"):
        return dichotomy_from_dict(data)
    loaders = {
        "schur-witness": WitnessReport.from_dict,
        "gclosed-separator": SeparatorSchedule.from_dict,
        "approximation": Approximation.from_dict,
        "density-certificate": DensityCertificate.from_dict,
        "null-sequence": NullSeq.from_dict,
        "character": Character.from_dict,
    }
    if kind in loaders:
        return loaders[kind](data)
    if kind in ("compact-box", "not-compact"):
        return CompactnessVerdict.from_dict(data)
    raise ValueError(f"unrecognized artifact (format={data.get('format')!r}, kind={kind!r})")


def dumps(obj: Any, timestamp: bool = False) -> str:
    data = obj if isinstance(obj, dict) else to_data(obj, timestamp)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    return from_data(json.loads(text))


def save(obj: Any, path: str | Path, timestamp: bool = False) -> None:
    Path(path).write_text(dumps(obj, timestamp), encoding="utf-8")


def load(path: str | Path) -> Any:
    return loads(Path(path).read_text(encoding="utf-8"))
