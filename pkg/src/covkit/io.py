"""Body files (JSON) and CSV exports.

Polygon:  {"type": "polygon", "vertices": [[x, y], ...]}   (counterclockwise)
Smooth:   {"type": "smooth", "n": N, "R": [...], "base": [x, y]}

Floats are written with ``repr`` precision, so a write-then-read round trip
is bit exact.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .errors import CovkitError, ParseError
from .geometry import Polygon
from .smooth import CurvatureProfile, SmoothBody, body_from_curvature

# closure gap accepted without re-projection, relative to the perimeter
CLOSURE_TOL = 1e-9


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise ParseError(e.msg, f"byte {offset}, line {e.lineno}, column {e.colno}") from None


def _read_text(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError("file is not UTF-8", f"byte {e.start}") from None


def _float_array(value, field, shape_tail=()):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected numbers", f"field '{field}'") from None
    if a.ndim != 1 + len(shape_tail) or a.shape[1:] != tuple(shape_tail):
        raise ParseError(f"unexpected shape {a.shape}", f"field '{field}'")
    if not np.all(np.isfinite(a)):
        raise ParseError("non-finite value", f"field '{field}'")
    return a


def _require(doc, key):
    if key not in doc:
        raise ParseError("missing field", f"field '{key}'")
    return doc[key]


def body_to_dict(B):
    if isinstance(B, Polygon):
        return {"type": "polygon", "vertices": B.vertices.tolist()}
    if isinstance(B, SmoothBody):
        return {"type": "smooth", "n": B.n, "R": B.R.tolist(), "base": B.base.tolist()}
    raise TypeError(f"cannot serialise {type(B).__name__}")


def body_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "field '<root>'")
    kind = _require(doc, "type")
    if kind == "polygon":
        v = _float_array(_require(doc, "vertices"), "vertices", (2,))
        try:
            return Polygon(v)
        except CovkitError as e:
            raise ParseError(str(e), "field 'vertices'") from None
    if kind == "smooth":
        R = _float_array(_require(doc, "R"), "R")
        n = _require(doc, "n")
        if not isinstance(n, int) or n != len(R):
            raise ParseError(f"n = {n!r} does not match len(R) = {len(R)}", "field 'n'")
        base = _float_array(doc.get("base", [0.0, 0.0]), "base")
        if base.shape != (2,):
            raise ParseError("base must be [x, y]", "field 'base'")
        if np.any(R <= 0) or n < 8:
            raise ParseError("R must be positive with at least 8 samples", "field 'R'")
        prof = CurvatureProfile(R)
        if prof.closure_residual() <= CLOSURE_TOL * np.sum(R) * 2 * np.pi / n:
            return SmoothBody(prof, base)
        return body_from_curvature(R, base)
    raise ParseError(f"unknown body type {kind!r}", "field 'type'")


def loads_body(text):
    return body_from_dict(_loads(text))


def read_body(path):
    return loads_body(_read_text(path))


def dumps_body(B):
    return json.dumps(body_to_dict(B))


def write_body(B, path):
    with open(path, "w") as fh:
        fh.write(dumps_body(B))
        fh.write("\n")


def read_profile(path):
    """Curvature profile file: {"R": [...], "base": [x, y]} or a bare list."""
    doc = _loads(_read_text(path))
    if isinstance(doc, list):
        doc = {"R": doc}
    if not isinstance(doc, dict):
        raise ParseError("expected an object or a list", "field '<root>'")
    R = _float_array(_require(doc, "R"), "R")
    base = _float_array(doc.get("base", [0.0, 0.0]), "base")
    if base.shape != (2,):
        raise ParseError("base must be [x, y]", "field 'base'")
    return R, base


def export_field(fld, path):
    fld.to_csv(path)


def read_field_csv(path):
    """Rows of (x, y, g) from a field CSV as an (N, 3) array."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["x", "y", "g"]:
        raise ParseError("bad header", "line 1")
    return np.array(rows[1:], dtype=float).reshape(-1, 3)


def export_histogram(hist, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["length_lo", "length_hi", "mass"])
        for lo, hi, m in zip(hist.edges[:-1], hist.edges[1:], hist.mass):
            w.writerow([f"{lo:.17g}", f"{hi:.17g}", f"{m:.17g}"])


def write_json(obj, path):
    """Deterministic JSON (sorted keys, fixed indent)."""
    with open(path, "w") as fh:
        json.dump(_plain(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    return obj
