"""Reports: serializable, replayable records of runs.

The JSON layout is versioned ("report-v1").  Everything under the
"report" key is deterministic for a fixed (scene, seed, tool version);
wall-clock timing lives in a separate top-level field excluded from the
determinism contract.  Fault witnesses embed their full numeric
evidence so they re-check offline without the scene.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import __version__
from .grassmann import Subspace
from .regularity import RegularityVerdict, Status
from .scene import canonical_json, scene_hash

REPORT_SCHEMA = "report-v1"

__all__ = [
    "REPORT_SCHEMA",
    "verdict_to_json",
    "replay_witness",
    "Report",
]


def _round_trip_floats(values) -> list[float]:
    return [float(v) for v in values]


def verdict_to_json(v: RegularityVerdict) -> dict:
    out = {
        "condition": v.condition,
        "x": v.x,
        "y": v.y,
        "point": _round_trip_floats(v.point),
        "status": v.status.value,
        "detail": v.detail,
    }
    if v.required is not None:
        out["required"] = v.required.to_json()
        out["ambient"] = v.required.n
    if v.witness is not None:
        w = v.witness
        out["witness"] = {
            "point": _round_trip_floats(w.point),
            "vector": _round_trip_floats(w.vector),
            "angle": None if w.angle != w.angle else w.angle,  # NaN -> null
            "limit": w.limit.to_json(),
            "required": w.required.to_json(),
            "arc_points": [_round_trip_floats(p) for p in w.arc.points],
        }
    arcs = []
    for a in v.arcs:
        arcs.append(
            {
                "direction": _round_trip_floats(a.direction),
                "converged": a.converged,
                "residual": a.residual,
                "limit": None if a.limit is None else a.limit.to_json(),
                "worst_angle": a.worst_angle,
                "contains_required": a.contains_required,
                "terms": int(len(a.points)),
            }
        )
    if arcs:
        out["arcs"] = arcs
    return out


def replay_witness(verdict_json: dict) -> dict:
    """Re-run the containment test of a stored fault from its own data.

    Returns the recomputed status and angle; a verdict is replayable
    when these match the stored ones to tight tolerance.
    """
    n = verdict_json["ambient"]
    w = verdict_json["witness"]
    limit = Subspace.from_json(w["limit"], n)
    required = Subspace.from_json(w["required"], n)
    res = limit.contains(required)
    return {
        "status": Status.FAILS.value if not res.ok else Status.HOLDS.value,
        "angle": res.worst_angle,
    }


@dataclass
class Report:
    scene_name: str
    scene_data: dict = field(repr=False)
    seed: int
    body: dict = field(default_factory=dict)
    started: float = field(default_factory=time.time)

    def finish(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "tool": f"strathom {__version__}",
            "scene": self.scene_name,
            "scene_hash": scene_hash(self.scene_data),
            "seed": self.seed,
            "report": self.body,
            "timing": {"wall_s": time.time() - self.started},
        }

    def deterministic_json(self) -> str:
        """Canonical serialization of the replayable part only."""
        payload = self.finish()
        payload.pop("timing")
        return canonical_json(payload)

    def write(self, path, pretty: bool = True) -> None:
        payload = self.finish()
        with open(path, "w") as fh:
            if pretty:
                json.dump(payload, fh, indent=2, sort_keys=True)
            else:
                fh.write(canonical_json(payload))
            fh.write("\n")


def write_csv(path, header: tuple[str, ...], rows) -> None:
    """RFC-4180 output; numeric cells, comma separated, CRLF endings."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\r\n")
        for row in rows:
            fh.write(",".join(_cell(c) for c in row) + "\r\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
