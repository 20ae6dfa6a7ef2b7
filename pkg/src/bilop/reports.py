"""Report serialization: a shared JSON envelope plus CSV scan tables.

Every operation's report is wrapped as {operation, config, verdict,
data} and written to an append-only file named

    {subcommand}-{timestamp}-{seedhash}.json

so scans from different runs can sit side by side and be compared.
Numpy scalars and arrays are converted to plain Python; complex values
become {"re": ..., "im": ...} objects.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import time
from pathlib import Path

import numpy as np


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        if np.isnan(obj):
            return "nan"
        if np.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return to_jsonable(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return {"re": to_jsonable(z.real), "im": to_jsonable(z.imag)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()] if obj.dtype.kind == "c" \
            else to_jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def envelope(operation: str, config: dict, verdict: str, data) -> dict:
    return {
        "operation": operation,
        "config": to_jsonable(config),
        "verdict": verdict,
        "data": to_jsonable(data),
    }


def seed_hash(seed) -> str:
    return hashlib.sha256(str(seed).encode()).hexdigest()[:10]


def report_basename(subcommand: str, seed) -> str:
    stamp = time.strftime("%Y%m%dT%H%M%S")
    return f"{subcommand}-{stamp}-{seed_hash(seed)}"


def _fresh_path(directory: Path, base: str, ext: str) -> Path:
    path = directory / f"{base}{ext}"
    k = 1
    while path.exists():  # append-only: never clobber an earlier report
        path = directory / f"{base}-{k}{ext}"
        k += 1
    return path


def write_report(directory, subcommand: str, seed, payload: dict,
                 table=None, basename: str | None = None) -> list:
    """Write payload JSON (and optional CSV table); return written paths.

    table: (header_row, rows) with each row a (key, value) pair.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    base = basename or report_basename(subcommand, seed)
    paths = []
    jpath = _fresh_path(directory, base, ".json")
    jpath.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    paths.append(jpath)
    if table is not None:
        header, rows = table
        cpath = _fresh_path(directory, base, ".csv")
        with open(cpath, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([to_jsonable(c) for c in row])
        paths.append(cpath)
    return paths
