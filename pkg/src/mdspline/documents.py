"""JSON documents for spaces and curves, shared by the CLI and the service.

Space document:
    {"domain": [a, b], "breakpoints": [...], "degrees": [...],
     "continuities": [...], "connections": [...]?, "control_points": [[x, y], ...]?}

Connection matrices are flat row-major squares of size (k_i+1)^2; nested rows
and null (identity) are also accepted on input.  All numbers are 64-bit floats
and must be finite.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .curve import MDCurve, make_curve
from .space import ConnectionMatrix, InvalidSpaceError, SplineSpace


class DocumentError(ValueError):
    """A document failed schema or content validation."""


def _finite_list(doc, key, required=True):
    if key not in doc:
        if required:
            raise DocumentError(f"missing field {key!r}")
        return None
    vals = doc[key]
    if not isinstance(vals, list):
        raise DocumentError(f"field {key!r} must be a list")
    flat = np.asarray(vals, dtype=float).ravel()
    if flat.size and not np.all(np.isfinite(flat)):
        raise DocumentError(f"field {key!r} contains non-finite numbers")
    return vals


def _parse_connection(raw, order: int, where: str) -> ConnectionMatrix:
    if raw is None:
        return ConnectionMatrix.identity(order)
    arr = np.asarray(raw, dtype=float)
    if arr.ndim == 1:
        n = math.isqrt(arr.size)
        if n * n != arr.size:
            raise DocumentError(f"connection at {where}: flat length {arr.size} is not square")
        arr = arr.reshape(n, n)
    try:
        return ConnectionMatrix(arr)
    except InvalidSpaceError as exc:
        raise DocumentError(f"connection at {where}: {exc}") from exc


def space_from_document(doc: dict) -> SplineSpace:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    domain = _finite_list(doc, "domain")
    if len(domain) != 2:
        raise DocumentError("domain must be [a, b]")
    breakpoints = _finite_list(doc, "breakpoints")
    degrees = doc.get("degrees")
    continuities = doc.get("continuities")
    if degrees is None or continuities is None:
        raise DocumentError("missing field 'degrees' or 'continuities'")
    connections = None
    if doc.get("connections") is not None:
        raw = doc["connections"]
        if not isinstance(raw, list) or len(raw) != len(continuities):
            raise DocumentError(
                f"connections must list one matrix per interior break-point "
                f"({len(continuities)} expected)"
            )
        connections = [
            _parse_connection(m, int(k) + 1, f"break-point {i + 1}")
            for i, (m, k) in enumerate(zip(raw, continuities))
        ]
    try:
        return SplineSpace(domain, breakpoints, degrees, continuities, connections)
    except (InvalidSpaceError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidSpaceError):
            raise
        raise DocumentError(str(exc)) from exc


def curve_from_document(doc: dict) -> MDCurve:
    space = space_from_document(doc)
    points = _finite_list(doc, "control_points", required=False)
    if points is None:
        points = default_control_points(space)
    return make_curve(space, points)


def default_control_points(space: SplineSpace) -> np.ndarray:
    """Support midpoints on the x-axis; a deterministic valid placeholder polygon."""
    from .space import extended_partitions

    parts = extended_partitions(space)
    mid = (parts.starts + parts.ends) / 2.0
    return np.column_stack([mid, np.zeros_like(mid)])


def space_to_document(space: SplineSpace) -> dict:
    doc = {
        "domain": list(space.domain),
        "breakpoints": space.breakpoints.tolist(),
        "degrees": space.degrees.tolist(),
        "continuities": space.continuities.tolist(),
    }
    if space.connections is not None:
        doc["connections"] = [m.entries.ravel().tolist() for m in space.connections]
    return doc


def curve_to_document(curve: MDCurve) -> dict:
    doc = space_to_document(curve.space)
    doc["control_points"] = curve.control_points.tolist()
    return doc


def bezier_to_document(segments) -> dict:
    return {
        "segments": [
            {
                "interval": [seg.lo, seg.hi],
                "degree": seg.degree,
                "points": seg.points.tolist(),
            }
            for seg in segments
        ]
    }


def transitions_to_document(ts) -> dict:
    functions = []
    for f in ts.functions:
        functions.append(
            {
                "index": f.index,
                "constant_one": f.is_constant_one,
                "start_order": f.start_order,
                "end_order": f.end_order,
                "first_interval": f.poly.first_interval if f.poly.pieces else None,
                "pieces": [
                    {"interval": [p.lo, p.hi], "degree": p.degree, "coeffs": p.coeffs.tolist()}
                    for p in f.poly.pieces
                ],
            }
        )
    return {"dimension": len(ts.functions), "functions": functions}


def load_document(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top-level value must be an object")
    return doc


def save_document(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
