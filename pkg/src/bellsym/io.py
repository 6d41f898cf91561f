"""State files, CSV tables and run manifests."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .linalg import DensityMatrix, StateVector
from .monogamy import ScanRecord, SweepPoint

SCAN_COLUMNS = ("index", "seed", "b_ab", "b_bc", "b_ac", "violations")
SWEEP_COLUMNS = ("gamma", "b_ab", "b_bc", "b_ac")


class StateFileError(ValueError):
    def __init__(self, path, field: str, message: str):
        self.path, self.field = str(path), field
        super().__init__(f"{path}: field '{field}': {message}")


def _num(x: float) -> str:
    return f"{x:.17g}"


def _pair(z: complex) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def dumps_state(state: StateVector | DensityMatrix) -> str:
    """Serialize with 17 significant digits so doubles survive the round trip."""
    if isinstance(state, StateVector):
        kind = "pure"
        data = "[" + ", ".join(_pair(z) for z in state.amplitudes) + "]"
    else:
        kind = "mixed"
        rows = ["[" + ", ".join(_pair(z) for z in row) + "]" for row in state.matrix]
        data = "[\n    " + ",\n    ".join(rows) + "\n  ]"
    return (
        "{\n"
        f'  "kind": "{kind}",\n'
        f'  "subsystem_dims": {json.dumps(list(state.dims))},\n'
        f'  "data": {data}\n'
        "}\n"
    )


def save_state(state: StateVector | DensityMatrix, path) -> Path:
    path = Path(path)
    path.write_text(dumps_state(state), encoding="utf-8")
    return path


def _complex_array(path, value, ndim: int) -> np.ndarray:
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(path, "data", f"not numeric: {exc}") from None
    if a.ndim != ndim + 1 or a.shape[-1] != 2:
        raise StateFileError(path, "data", f"expected [re, im] pairs nested {ndim} deep, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def parse_state(obj: Any, path="<state>") -> StateVector | DensityMatrix:
    if not isinstance(obj, dict):
        raise StateFileError(path, "<root>", "expected a JSON object")
    for key in ("kind", "subsystem_dims", "data"):
        if key not in obj:
            raise StateFileError(path, key, "missing")
    kind = obj["kind"]
    dims = obj["subsystem_dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and d > 0 for d in dims):
        raise StateFileError(path, "subsystem_dims", "expected a list of positive integers")
    try:
        if kind == "pure":
            return StateVector(_complex_array(path, obj["data"], 1), dims)
        if kind == "mixed":
            return DensityMatrix(_complex_array(path, obj["data"], 2), dims)
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(path, "data", str(exc)) from None
    raise StateFileError(path, "kind", f"expected 'pure' or 'mixed', got {kind!r}")


def load_state(path) -> StateVector | DensityMatrix:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateFileError(path, "<root>", f"invalid JSON: {exc}") from None
    return parse_state(obj, path)


def load_coefficients(path) -> np.ndarray:
    """Dicke coefficients: a JSON list of numbers or [re, im] pairs, m ascending."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateFileError(path, "<root>", f"invalid JSON: {exc}") from None
    if isinstance(obj, dict):
        obj = obj.get("coefficients")
    if not isinstance(obj, list) or not obj:
        raise StateFileError(path, "coefficients", "expected a non-empty list")
    if all(isinstance(c, (int, float)) for c in obj):
        return np.array(obj, dtype=np.complex128)
    return _complex_array(path, obj, 1)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _row(record) -> tuple[Sequence[str], list[str]]:
    if isinstance(record, ScanRecord):
        return SCAN_COLUMNS, [_fmt(getattr(record, c)) for c in SCAN_COLUMNS]
    if isinstance(record, SweepPoint):
        return SWEEP_COLUMNS, [_fmt(getattr(record, c)) for c in SWEEP_COLUMNS]
    raise TypeError(f"cannot write {type(record).__name__} to CSV")


class CsvEmitter:
    """Writes records one at a time, flushing after each row."""

    def __init__(self, path):
        self.path = Path(path)
        self.count = 0
        self._columns = None
        self._fh = None
        self._writer = None

    def __enter__(self):
        self._fh = self.path.open("w", encoding="utf-8", newline="")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        return self

    def write(self, record) -> None:
        columns, row = _row(record)
        if self._columns is None:
            self._columns = columns
            self._writer.writerow(columns)
        elif columns != self._columns:
            raise TypeError("mixed record types in one CSV file")
        self._writer.writerow(row)
        self._fh.flush()
        self.count += 1

    def __exit__(self, *exc):
        self._fh.close()
        return False


def emit_csv(records: Iterable, path) -> Path:
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    try:
        with CsvEmitter(path) as out:
            for r in records:
                out.write(r)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc
    return Path(path)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    master_seed: int
    record_count: int = 0
    wall_time_seconds: float = 0.0
    tool_version: str = __version__
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def finish(self, record_count: int) -> None:
        self.record_count = record_count
        self.wall_time_seconds = time.perf_counter() - self._start

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "master_seed": self.master_seed,
            "tool_version": self.tool_version,
            "wall_time_seconds": self.wall_time_seconds,
            "record_count": self.record_count,
        }


def manifest_path(data_path) -> Path:
    data_path = Path(data_path)
    return data_path.with_name(data_path.name + ".manifest.json")


def write_manifest(manifest: RunManifest, data_path) -> Path:
    path = manifest_path(data_path)
    path.write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def counterexample_path(data_path) -> Path:
    data_path = Path(data_path)
    return data_path.with_name(data_path.name + ".counterexamples.json")


def write_counterexamples(items: Sequence[dict], data_path) -> Path:
    """Each item carries seed, index, Bell values and the full amplitude list."""
    path = counterexample_path(data_path)
    payload = [
        {
            **{k: v for k, v in item.items() if k != "state"},
            "subsystem_dims": list(item["state"].dims),
            "amplitudes": [[float(z.real), float(z.imag)] for z in item["state"].amplitudes],
        }
        for item in items
    ]
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path
