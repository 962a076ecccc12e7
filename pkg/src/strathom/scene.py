"""Scene files: the on-disk description of a stratified-map setup.

A scene is a single JSON document declaring the ambient dimension, the
stratifying map (expression text), the strata (chart text plus domain
predicates), declared incidences, optional plan overrides, and optional
experiment blocks.  Everything downstream (validation, checking,
experiments) starts from a scene.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .dsl import DslError, SmoothMap, parse_map
from .strata import ApproachPlan, Incidence, Prestratification, StratifiedMapContext, Stratum

__all__ = [
    "Scene",
    "SceneError",
    "SCENE_SCHEMA",
    "scene_from_dict",
    "load_scene",
    "canonical_json",
    "scene_hash",
]


class SceneError(Exception):
    pass


_BOX = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "array",
        "items": {"type": "number"},
        "minItems": 2,
        "maxItems": 2,
    },
}

SCENE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["ambient_dim", "map", "strata"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "ambient_dim": {"type": "integer", "minimum": 1},
        "map": {"type": "string"},
        "strata": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "dim", "chart"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "dim": {"type": "integer", "minimum": 1},
                    "chart": {"type": "string"},
                    "domain": {"type": "array", "items": {"type": "string"}},
                    "inverse": {"type": "string"},
                    "sample_box": _BOX,
                },
            },
        },
        "incidences": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y", "point"],
                "additionalProperties": False,
                "properties": {
                    "x": {"type": "string"},
                    "y": {"type": "string"},
                    "point": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
        "plan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "ratio": {"type": "number"},
                "terms": {"type": "integer"},
                "directions": {"type": "integer"},
                "window": {"type": "integer"},
                "angle_tol": {"type": "number"},
            },
        },
        "witness": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "arc": {"type": "string"},
                "t0": {"type": "number"},
                "ratio": {"type": "number"},
                "count": {"type": "integer"},
            },
        },
        "experiments": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["stability", "instability", "nongeneric"]},
                "g": {"type": "string"},
                "g_dim": {"type": "integer", "minimum": 1},
                "k_box": _BOX,
                "grid": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "eps": {"type": "number"},
                "trials": {"type": "integer", "minimum": 0},
                "count": {"type": "integer", "minimum": 1},
                "radius": {"type": "number"},
                "bumps": {"type": "integer", "minimum": 1},
                "domain_topology": {"enum": ["line", "circle", "fold"]},
            },
        },
    },
}


@dataclass(frozen=True)
class Scene:
    raw: dict = field(repr=False)
    name: str
    ambient: int
    f: SmoothMap
    prestratification: Prestratification
    plan: ApproachPlan | None
    witness: dict | None
    experiments: dict | None

    def build_context(self, samples: int = 60, seed: int = 0) -> StratifiedMapContext:
        return StratifiedMapContext.build(
            self.f, self.prestratification, samples=samples, seed=seed
        )


def scene_from_dict(data: dict) -> Scene:
    try:
        jsonschema.validate(data, SCENE_SCHEMA)
    except jsonschema.ValidationError as exc:
        pointer = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise SceneError(f"scene schema violation at {pointer or '/'}: {exc.message}") from exc
    n = data["ambient_dim"]
    try:
        f = parse_map(data["map"], n)
    except DslError as exc:
        raise SceneError(f"map does not parse: {exc}") from exc
    strata = []
    for spec in data["strata"]:
        try:
            chart = parse_map(spec["chart"], spec["dim"], domain=tuple(spec.get("domain", ())))
        except DslError as exc:
            raise SceneError(f"chart of {spec['name']!r} does not parse: {exc}") from exc
        if chart.m != n:
            raise SceneError(
                f"chart of {spec['name']!r} maps into R^{chart.m}, scene is in R^{n}"
            )
        inverse = None
        if "inverse" in spec:
            try:
                inverse = parse_map(spec["inverse"], n)
            except DslError as exc:
                raise SceneError(f"inverse hint of {spec['name']!r} does not parse: {exc}") from exc
            if inverse.m != spec["dim"]:
                raise SceneError(f"inverse hint of {spec['name']!r} has wrong output dimension")
        box = tuple(tuple(float(b) for b in pair) for pair in spec.get("sample_box", ()))
        strata.append(
            Stratum(
                name=spec["name"],
                chart=chart,
                inverse_hint=inverse,
                sample_box=box,
            )
        )
    incidences = tuple(
        Incidence(x=i["x"], y=i["y"], point=tuple(float(c) for c in i["point"]))
        for i in data.get("incidences", ())
    )
    try:
        prestrat = Prestratification(ambient=n, strata=tuple(strata), incidences=incidences)
    except (ValueError, KeyError) as exc:
        raise SceneError(str(exc)) from exc
    plan = None
    if "plan" in data:
        p = data["plan"]
        plan = ApproachPlan(
            ratio=p.get("ratio", 0.7),
            terms=p.get("terms", 60),
            total_directions=p.get("directions", 8),
            window=p.get("window", 5),
            angle_tol=p.get("angle_tol", 1e-6),
        )
    return Scene(
        raw=data,
        name=data.get("name", "scene"),
        ambient=n,
        f=f,
        prestratification=prestrat,
        plan=plan,
        witness=data.get("witness"),
        experiments=data.get("experiments"),
    )


def load_scene(path: str | Path) -> Scene:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SceneError(f"{p} is not valid JSON: {exc}") from exc
    return scene_from_dict(data)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def scene_hash(data: dict) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()
