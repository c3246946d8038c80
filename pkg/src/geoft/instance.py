"""Problem instance documents: schema, validation and construction.

An instance is a JSON object.  The ``geometry`` member selects the surface:

    {"kind": "constant-curvature", "K": -1.0}
    {"kind": "revolution", "profile": "torus:2,1"}

Vertices are chart pairs.  On the K-planes a pair is read as Riemannian
normal coordinates about the model origin (plain coordinates when K = 0);
three-component embedding vectors are also accepted for K != 0.  On a
surface of revolution a pair is ``(u, v)``.  An optional ``commands`` list
names the commands the instance is meant for; batch runs skip the others.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .errors import GeometryError
from .kplane import KPlane
from .revolution import DEFAULT_SCAN, DEFAULT_STEP, RevolutionSurface, profile_from_name
from .solver import SolverOptions, WeightedTriangle, WeightTriple

_number = {"type": "number"}
_pair = {"type": "array", "items": _number, "minItems": 2, "maxItems": 3}
_abc = {
    "type": "object",
    "properties": {"A": _number, "B": _number, "C": _number},
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "geoft problem instance",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "commands": {
            "type": "array",
            "items": {"enum": ["solve", "verify", "inverse", "subconscious", "massflow",
                               "evolve", "geodesic", "excess"]},
            "uniqueItems": True,
        },
        "geometry": {
            "oneOf": [
                {
                    "type": "object",
                    "properties": {"kind": {"const": "constant-curvature"}, "K": _number},
                    "required": ["kind", "K"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "kind": {"const": "revolution"},
                        "profile": {"type": "string", "pattern": "^(sphere|torus|cylinder)(:.*)?$"},
                    },
                    "required": ["kind", "profile"],
                    "additionalProperties": False,
                },
            ]
        },
        "vertices": {
            "type": "object",
            "properties": {"A": _pair, "B": _pair, "C": _pair},
            "required": ["A", "B", "C"],
            "additionalProperties": False,
        },
        "weights": {
            "oneOf": [
                dict(_abc, required=["A", "B", "C"]),
                {"type": "array", "items": _number, "minItems": 3, "maxItems": 3},
            ]
        },
        "options": {
            "type": "object",
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "backtrack": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "method": {"enum": ["newton", "gradient"]},
                "scan": {"type": "integer", "minimum": 4},
                "ode_step": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "angles": _abc,
        "c": {"type": "number", "exclusiveMinimum": 0},
        "w_bar_S": _number,
        "flow": {
            "type": "object",
            "properties": {k: {"type": "number", "minimum": 0} for k in
                           ("w_A", "w_B", "w_C", "w_S", "wt_A", "wt_B", "wt_C", "wt_S")},
            "required": ["w_A", "w_B", "w_C", "w_S", "wt_A", "wt_B", "wt_C", "wt_S"],
            "additionalProperties": False,
        },
        "point": _pair,
        "first_variation": {
            "type": "object",
            "properties": {"toward": {"enum": ["A", "B", "C"]}, "h": {"type": "number", "exclusiveMinimum": 0}},
            "additionalProperties": False,
        },
        "geodesic": {
            "type": "object",
            "properties": {
                "start": _pair,
                "end": _pair,
                "heading": _number,
                "direction": _pair,
                "length": {"type": "number", "minimum": 0},
            },
            "required": ["start"],
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

REQUIRED = {
    "solve": ("geometry", "vertices", "weights"),
    "verify": ("geometry", "vertices", "weights"),
    "inverse": ("angles",),
    "subconscious": ("angles",),
    "massflow": ("flow",),
    "evolve": ("geometry", "vertices", "angles"),
    "geodesic": ("geometry", "geodesic"),
    "excess": ("geometry", "vertices"),
}


class InstanceError(ValueError):
    """The instance document does not match the schema."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


def _field_name(path) -> str:
    return ".".join(str(p) for p in path) or "<root>"


def validate(doc: dict, command: str | None = None):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        # oneOf failures hide the informative sub-error
        if err.context:
            err = min(err.context, key=lambda e: (-len(e.absolute_path), e.message))
        field = _field_name(err.absolute_path)
        raise InstanceError(f"{field}: {err.message}", field=field)
    if command is not None:
        for key in REQUIRED[command]:
            if key not in doc:
                raise InstanceError(f"{key}: required for command {command!r}", field=key)


def load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"<document>: not valid JSON ({exc})", field="<document>") from exc


@dataclass
class Instance:
    doc: dict
    degrees: bool = False

    @property
    def name(self) -> str:
        return self.doc.get("name", "")

    def angle(self, x: float) -> float:
        return math.radians(x) if self.degrees else float(x)

    def options(self) -> SolverOptions:
        o = self.doc.get("options", {})
        return SolverOptions(
            tol=o.get("tol", 1e-10),
            max_iter=o.get("max_iter", 10_000),
            step=o.get("step"),
            backtrack=o.get("backtrack", 0.5),
            method=o.get("method", "newton"),
        )

    def geometry(self):
        g = self.doc["geometry"]
        o = self.doc.get("options", {})
        try:
            if g["kind"] == "constant-curvature":
                return KPlane(float(g["K"]))
            return RevolutionSurface(profile_from_name(g["profile"]),
                                     step=o.get("ode_step", DEFAULT_STEP), n_scan=o.get("scan", DEFAULT_SCAN))
        except GeometryError as exc:
            raise InstanceError(f"geometry: {exc}", field="geometry") from exc

    def point(self, geom, coords, field):
        try:
            return geom.point(coords)
        except GeometryError as exc:
            raise InstanceError(f"{field}: {exc}", field=field) from exc

    def vertices(self, geom):
        v = self.doc["vertices"]
        return [self.point(geom, v[q], f"vertices.{q}") for q in "ABC"]

    def weights(self) -> WeightTriple:
        try:
            return WeightTriple.of(self.doc["weights"])
        except GeometryError as exc:
            raise InstanceError(f"weights: {exc}", field="weights") from exc

    def triangle(self, geom=None) -> WeightedTriangle:
        geom = geom or self.geometry()
        try:
            return WeightedTriangle(geom, *self.vertices(geom), self.weights())
        except GeometryError as exc:
            raise InstanceError(f"vertices: {exc}", field="vertices") from exc

    def angles(self, required="ABC") -> dict:
        a = self.doc.get("angles", {})
        for q in required:
            if q not in a:
                raise InstanceError(f"angles.{q}: required", field=f"angles.{q}")
        return {q: self.angle(x) for q, x in a.items()}


def parse(doc: dict, command: str | None = None, degrees: bool = False) -> Instance:
    validate(doc, command)
    return Instance(doc, degrees)
