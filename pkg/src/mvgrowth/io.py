"""CSV ingestion/emission and the JSON result envelope."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .data import ReferenceSeries, Trajectory
from .errors import FormatError

__all__ = [
    "parse_reference_csv",
    "parse_patient_csv",
    "format_reference_csv",
    "format_patient_csv",
    "ResultEnvelope",
    "digest",
]


def _rows(text: str) -> tuple[int, list[tuple[int, list[float]]]]:
    """Validate the header and return (p, [(line_no, [time, x1..xp])])."""
    lines = text.splitlines()
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty input: expected header 'time,x1,...,xp'") from None
    header = [h.strip() for h in header]
    p = len(header) - 1
    if p < 1 or header[0] != "time" or header[1:] != [f"x{i}" for i in range(1, p + 1)]:
        raise FormatError(f"line 1: expected header 'time,x1,...,xp', got {','.join(header)!r}")
    out = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != p + 1:
            raise FormatError(f"line {line_no}: expected {p + 1} fields, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise FormatError(f"line {line_no}: non-numeric field in {','.join(row)!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise FormatError(f"line {line_no}: non-finite value")
        out.append((line_no, vals))
    if not out:
        raise FormatError("no data rows")
    return p, out


def parse_reference_csv(text: str) -> ReferenceSeries:
    """Group rows by time; row order within a time is kept."""
    p, rows = _rows(text)
    groups: OrderedDict[float, list[list[float]]] = OrderedDict()
    for _, vals in rows:
        groups.setdefault(vals[0], []).append(vals[1:])
    times = sorted(groups)
    return ReferenceSeries(times, [np.array(groups[t]).reshape(-1, p) for t in times])


def parse_patient_csv(text: str) -> Trajectory:
    p, rows = _rows(text)
    seen: dict[float, int] = {}
    for line_no, vals in rows:
        if vals[0] in seen:
            raise FormatError(f"line {line_no}: duplicate time {vals[0]:g} (first on line {seen[vals[0]]})")
        seen[vals[0]] = line_no
    rows = sorted(rows, key=lambda r: r[1][0])
    return Trajectory([r[1][0] for r in rows], np.array([r[1][1:] for r in rows]).reshape(-1, p))


def _header(p: int) -> str:
    return ",".join(["time"] + [f"x{i}" for i in range(1, p + 1)])


def format_reference_csv(refs: ReferenceSeries) -> str:
    lines = [_header(refs.p)]
    for t, s in refs:
        lines.extend(",".join([repr(t)] + [repr(float(v)) for v in row]) for row in s)
    return "\n".join(lines) + "\n"


def format_patient_csv(traj: Trajectory) -> str:
    lines = [_header(traj.p)]
    lines.extend(",".join([repr(t)] + [repr(float(v)) for v in x]) for t, x in traj)
    return "\n".join(lines) + "\n"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass
class ResultEnvelope:
    command: str
    payload: dict[str, Any]
    inputs: dict[str, str] = field(default_factory=dict)
    version: str = ""
    seed: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "inputs": dict(self.inputs),
            "payload": self.payload,
        }

    def to_json(self) -> str:
        # repr-based float output: 17 significant digits, round-trips exactly
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultEnvelope":
        try:
            d = json.loads(text)
            return cls(
                command=d["command"],
                payload=d["payload"],
                inputs=d.get("inputs", {}),
                version=d.get("version", ""),
                seed=d.get("seed"),
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"not a result envelope: {exc}") from None


def read_text(path) -> tuple[str, bytes]:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8"), raw
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not UTF-8 ({exc})") from None
