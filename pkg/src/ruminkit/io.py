"""Shipped JSON schemas and loaders for algebra and current files."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .lie_core import AlgebraInputError, load_algebra
from .rumin import RuminComplex, build_rumin_complex

SCHEMAS = ("algebra", "current", "complex_report", "verify_report", "flatnorm_report", "probe_report")


class SchemaError(ValueError):
    """A document does not match its shipped schema."""


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    if kind not in SCHEMAS:
        raise KeyError(f"unknown schema {kind!r}; known: {', '.join(SCHEMAS)}")
    text = resources.files("ruminkit").joinpath("schemas", f"{kind}.schema.json").read_text()
    return json.loads(text)


def validate_document(doc: Any, kind: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(kind))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{kind} document invalid at {where}: {exc.message}") from exc


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise SchemaError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def load_current_file(path: str | Path, algebra: str | None = None, rc: RuminComplex | None = None):
    """Read a current file. Returns (rc, grid, current).

    ``algebra`` overrides the file's algebra field; a relative algebra path is
    resolved against the current file's directory.
    """
    from .discrete.currents import DiscreteCurrent
    from .discrete.grid import Grid

    doc = read_json(path)
    validate_document(doc, "current")
    source = algebra or doc["algebra"]
    candidate = Path(path).parent / source
    if algebra is None and candidate.exists():
        source = str(candidate)
    if rc is None:
        rc = build_rumin_complex(load_algebra(source))
    box = tuple((lo, hi) for lo, hi in doc["grid"]["box"])
    if len(box) != rc.n:
        raise AlgebraInputError(f"grid box has {len(box)} intervals but the algebra has dimension {rc.n}")
    grid = Grid(rc.alg, box, doc["grid"]["h"])
    return rc, grid, DiscreteCurrent.from_json(doc, rc, grid)
