"""Theory files: JSON (UTF-8), matrices row-major, row index = input effect coordinate."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .errors import InputError
from .theory import CONE_KINDS, Cone, Theory

_number = {"type": "number"}
_vector = {"type": "array", "items": _number}
_matrix = {"type": "array", "items": _vector}

THEORY_SCHEMA = {
    "type": "object",
    "required": ["name", "effect_dim", "unit_effect", "identity", "transformations", "extremal_states", "cone"],
    "properties": {
        "name": {"type": "string"},
        "effect_dim": {"type": "integer", "minimum": 1},
        "unit_effect": _vector,
        "identity": _matrix,
        "transformations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "matrix"],
                "properties": {"name": {"type": "string"}, "matrix": _matrix},
            },
        },
        "extremal_states": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "coords"],
                "properties": {"name": {"type": "string"}, "coords": _vector},
            },
        },
        "faithful_state": {"type": "object", "required": ["matrix"], "properties": {"matrix": _matrix}},
        "cone": {
            "type": "object",
            "required": ["kind"],
            "properties": {"kind": {"enum": list(CONE_KINDS)}, "hilbert_dim": {"type": "integer", "minimum": 1}},
        },
        "experiments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "members"],
                "properties": {"name": {"type": "string"}, "members": {"type": "array", "items": {"type": "string"}}},
            },
        },
    },
}


def theory_from_dict(doc: dict) -> Theory:
    try:
        jsonschema.validate(doc, THEORY_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"theory file invalid at {where}: {exc.message}") from None
    try:
        return Theory(
            name=doc["name"],
            effect_dim=doc["effect_dim"],
            unit_effect=np.array(doc["unit_effect"], dtype=float),
            identity=np.array(doc["identity"], dtype=float),
            transformations={t["name"]: np.array(t["matrix"], dtype=float) for t in doc["transformations"]},
            extremal_states={s["name"]: np.array(s["coords"], dtype=float) for s in doc["extremal_states"]},
            cone=Cone(doc["cone"]["kind"], doc["cone"].get("hilbert_dim")),
            faithful=(np.array(doc["faithful_state"]["matrix"], dtype=float) if "faithful_state" in doc else None),
            experiments={x["name"]: tuple(x["members"]) for x in doc.get("experiments", [])},
        )
    except ValueError as exc:
        # ragged nested lists end up here
        if isinstance(exc, InputError):
            raise
        raise InputError(f"theory file invalid: {exc}") from None


def theory_to_dict(theory: Theory) -> dict:
    cone = {"kind": theory.cone.kind}
    if theory.cone.hilbert_dim is not None:
        cone["hilbert_dim"] = theory.cone.hilbert_dim
    doc = {
        "name": theory.name,
        "effect_dim": theory.effect_dim,
        "unit_effect": theory.unit_effect.tolist(),
        "identity": theory.identity.tolist(),
        "transformations": [{"name": k, "matrix": v.tolist()} for k, v in theory.transformations.items()],
        "extremal_states": [{"name": k, "coords": v.tolist()} for k, v in theory.extremal_states.items()],
    }
    if theory.faithful is not None:
        doc["faithful_state"] = {"matrix": theory.faithful.tolist()}
    doc["cone"] = cone
    if theory.experiments:
        doc["experiments"] = [{"name": k, "members": list(v)} for k, v in theory.experiments.items()]
    return doc


def load_theory(path) -> Theory:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read theory file {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"theory file {path} is not valid JSON: {exc}") from None
    return theory_from_dict(doc)


def dump_theory(theory: Theory) -> str:
    return json.dumps(theory_to_dict(theory), indent=2) + "\n"
