"""JSON serialization of campaign reports.

One report is one JSON document.  Complex matrices are encoded as nested
arrays of ``[re, im]`` pairs, and numbers keep full double precision (the
encoder emits shortest round-trip decimals).  Wall time is deliberately not
serialized, so identical configurations produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bipartite import MixedUnitaryChannel
from .campaigns import CampaignConfig, CampaignReport


def matrix_to_json(m) -> list:
    """Encode a complex matrix as nested lists of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    """Decode the nested [re, im] encoding back into a complex matrix."""
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def _encode_value(value):
    if isinstance(value, MixedUnitaryChannel):
        return {
            "channel": {
                "weights": [float(w) for w in value.weights],
                "unitaries": [matrix_to_json(u) for u in value.unitaries],
                "is_conditional_expectation": bool(value.is_conditional_expectation),
            }
        }
    if isinstance(value, np.ndarray):
        return {"matrix": matrix_to_json(value)}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise TypeError(f"cannot serialize witness value of type {type(value)!r}")


def _decode_value(value):
    if isinstance(value, dict) and set(value) == {"channel"}:
        payload = value["channel"]
        return MixedUnitaryChannel(
            weights=np.array(payload["weights"], dtype=float),
            unitaries=np.stack([matrix_from_json(u) for u in payload["unitaries"]]),
            is_conditional_expectation=payload["is_conditional_expectation"],
        )
    if isinstance(value, dict) and set(value) == {"matrix"}:
        return matrix_from_json(value["matrix"])
    return value


def report_to_dict(report: CampaignReport) -> dict:
    """Plain-JSON form of a report, without the wall time."""
    config = asdict(report.config)
    config["weights"] = list(config["weights"])
    witness = None
    if report.witness is not None:
        witness = {key: _encode_value(value) for key, value in report.witness.items()}
    return {
        "config": config,
        "margins": [float(m) for m in report.margins],
        "violations": int(report.violations),
        "worst_margin": None if report.worst_margin is None else float(report.worst_margin),
        "witness": witness,
        "errors": [dict(e) for e in report.errors],
    }


def report_from_dict(data: dict) -> CampaignReport:
    """Rebuild a report from its JSON form (wall time comes back as 0)."""
    config = dict(data["config"])
    config["weights"] = tuple(config["weights"])
    witness = None
    if data["witness"] is not None:
        witness = {key: _decode_value(value) for key, value in data["witness"].items()}
    return CampaignReport(
        config=CampaignConfig(**config),
        margins=[float(m) for m in data["margins"]],
        violations=int(data["violations"]),
        worst_margin=None if data["worst_margin"] is None else float(data["worst_margin"]),
        witness=witness,
        errors=[dict(e) for e in data["errors"]],
        wall_time=0.0,
    )


def render_report(report: CampaignReport) -> str:
    """The report as a JSON text, stable for identical configurations."""
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def emit_report(report: CampaignReport, path) -> None:
    """Write one report as a single JSON document."""
    path = Path(path)
    try:
        path.write_text(render_report(report), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def load_report(path) -> CampaignReport:
    """Read a report document written by :func:`emit_report`."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc
    return report_from_dict(json.loads(text))
