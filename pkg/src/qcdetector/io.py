"""Structured output: JSON records, flat CSV tables, and run manifests.

Every CLI invocation writes one data file plus ``<output>.manifest.json``
capturing the resolved parameters, tolerances, wall clock, and a sha256 of
each artifact, so a run can be reproduced bit-for-bit from its manifest.
Floats serialize through Python's shortest round-trip repr (up to 17
significant digits, exact on read-back).
"""

import csv
import dataclasses
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def to_jsonable(obj):
    """Recursively convert dataclasses / numpy values to JSON-safe types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": float(obj.real), "imag": float(obj.imag)}
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def make_record(command: str, params: dict, result, flags=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": to_jsonable(params),
        "flags": list(flags),
        "result": to_jsonable(result),
    }


def write_json(path, record: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    return path


def format_float(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def write_csv(path, columns: dict):
    """Write named columns in the given order; rows are aligned entries."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns.keys())
    length = len(next(iter(columns.values()))) if columns else 0
    for name, col in columns.items():
        if len(col) != length:
            raise ValueError(f"column {name!r} length {len(col)} != {length}")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for i in range(length):
            writer.writerow([format_float(columns[name][i]) for name in names])
    return path


def read_csv(path):
    """Read back a table written by ``write_csv`` as {name: list of str}."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    names, data = rows[0], rows[1:]
    return {name: [row[i] for row in data] for i, name in enumerate(names)}


def grid_csv_columns(axis0_name, axis0, axis1_name, axis1, values):
    """Flatten a 2-D grid to columns: axis0 value, then one column per axis1."""
    cols = {axis0_name: [float(v) for v in axis0]}
    for j, a1 in enumerate(axis1):
        cols[f"{axis1_name}={float(a1):.10g}"] = [float(v) for v in values[:, j]]
    return cols


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(output_path, command_line, params: dict, artifacts, wall_seconds, flags=()):
    """Write ``<output>.manifest.json`` next to the primary artifact."""
    from . import __version__

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "command_line": command_line,
        "parameters": to_jsonable(params),
        "flags": list(flags),
        "wall_seconds": wall_seconds,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": {
            str(p): {"sha256": sha256_of(p), "bytes": Path(p).stat().st_size}
            for p in artifacts
            if Path(p).exists()
        },
    }
    path = Path(str(output_path) + ".manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


def read_config(path) -> dict:
    """Parse a ``key = value`` config file; '#' starts a comment."""
    out = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: malformed line {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def eprint(*args):
    print(*args, file=sys.stderr)
