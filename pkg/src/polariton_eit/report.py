"""Run reports: versioned JSON documents built for byte-level replay.

Everything except the ``generated_at`` stamp is a pure function of the
inputs, so two runs with the same config and seed produce identical
documents.  Keys are sorted and floats use repr round-tripping via the
stock json encoder.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1"
TOOL_NAME = "polariton-eit"


def jsonify(obj):
    """Recursively coerce numpy/dataclass values into JSON-native ones.

    Complex numbers become {"real": ..., "imag": ...} pairs.
    """
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonify(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": float(obj.real), "imag": float(obj.imag)}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def make_report(command: str, *, config_hash: str | None, inputs: dict,
                results: dict, version: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": version},
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "command": command,
        "config_hash": config_hash,
        "inputs": jsonify(inputs),
        "results": jsonify(results),
    }


def write_report(report: dict, path) -> None:
    """Serialize deterministically (sorted keys) and rename into place."""
    path = Path(path)
    text = json.dumps(report, sort_keys=True, indent=2)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text + "\n")
    os.replace(tmp, path)


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def comparable(report: dict) -> dict:
    """The report minus its timestamp, for reproducibility checks."""
    trimmed = dict(report)
    trimmed.pop("generated_at", None)
    return trimmed
