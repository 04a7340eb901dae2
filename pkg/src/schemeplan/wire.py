"""Structured wire format for plans (JSON-shaped dicts).

Versioned, lossless mirror of the DSL including annotations.  Unknown fields
are accepted and ignored for forward compatibility; schema violations carry a
JSON-pointer-style path.  Unlike the DSL parser, :func:`from_wire` performs
schema checking only, so drafts that fail plan validation can still travel
over the wire (the service reports their violations separately).
"""

from __future__ import annotations

from typing import Any

from .model import (
    LinearUnit,
    Marker,
    Path,
    PointUnit,
    ReleaseEntry,
    Route,
    SchemePlan,
    UnitPathPair,
    Violation,
)

FORMAT_VERSION = 1


class WireFormatError(ValueError):
    """Schema violation at a JSON-pointer-style path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require(doc: dict, key: str, typ: type, path: str = "") -> Any:
    if key not in doc:
        raise WireFormatError(f"{path}/{key}", "missing required field")
    value = doc[key]
    if not isinstance(value, typ):
        raise WireFormatError(f"{path}/{key}", f"expected {typ.__name__}, got {type(value).__name__}")
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise WireFormatError(path, f"expected string, got {type(value).__name__}")
    return value


def _string_list(value: Any, path: str) -> list[str]:
    if not isinstance(value, list):
        raise WireFormatError(path, f"expected array, got {type(value).__name__}")
    return [_string(v, f"{path}/{i}") for i, v in enumerate(value)]


def to_wire(plan: SchemePlan) -> dict:
    """Plan as a JSON-serialisable document (deterministic field order)."""
    units = []
    for unit in plan.units.values():
        if isinstance(unit, LinearUnit):
            units.append({"id": unit.id, "kind": "linear", "endA": unit.end_a, "endB": unit.end_b})
        else:
            units.append(
                {"id": unit.id, "kind": "point", "stem": unit.stem, "left": unit.left, "right": unit.right}
            )
    doc: dict[str, Any] = {
        "formatVersion": FORMAT_VERSION,
        "name": plan.name,
        "units": units,
        "markers": [{"name": m.name, "kind": m.kind, "at": m.at} for m in plan.markers.values()],
        "routes": [
            {
                "id": r.id,
                "steps": [{"unit": s.unit, "from": s.path.frm, "to": s.path.to} for s in r.steps],
            }
            for r in plan.routes.values()
        ],
        "clear": {rid: sorted(units_) for rid, units_ in sorted(plan.clear.items())},
        "release": {
            rid: [{"point": e.point, "clearedBy": e.cleared_by} for e in entries]
            for rid, entries in sorted(plan.release.items())
            if entries
        },
    }
    ext = dict(plan.ext)
    if plan.point_positions:
        ext["pointPositions"] = {
            rid: {col: list(units_) for col, units_ in cols.items()}
            for rid, cols in sorted(plan.point_positions.items())
        }
    if ext:
        doc["ext"] = ext
    return doc


def from_wire(doc: Any) -> SchemePlan:
    """Build a plan from a wire document, checking the schema only."""
    if not isinstance(doc, dict):
        raise WireFormatError("", "document must be an object")
    version = _require(doc, "formatVersion", int)
    if version != FORMAT_VERSION:
        raise WireFormatError("/formatVersion", f"unsupported version {version}")
    name = _require(doc, "name", str)
    units: dict[str, LinearUnit | PointUnit] = {}
    for i, u in enumerate(_require(doc, "units", list)):
        path = f"/units/{i}"
        if not isinstance(u, dict):
            raise WireFormatError(path, "expected object")
        kind = _string(u.get("kind"), f"{path}/kind")
        uid = _string(u.get("id"), f"{path}/id")
        if kind == "linear":
            unit: LinearUnit | PointUnit = LinearUnit(
                uid, _string(u.get("endA"), f"{path}/endA"), _string(u.get("endB"), f"{path}/endB")
            )
        elif kind == "point":
            unit = PointUnit(
                uid,
                _string(u.get("stem"), f"{path}/stem"),
                _string(u.get("left"), f"{path}/left"),
                _string(u.get("right"), f"{path}/right"),
            )
        else:
            raise WireFormatError(f"{path}/kind", f"unknown unit kind {kind!r}")
        if uid in units:
            raise WireFormatError(f"{path}/id", f"duplicate unit id {uid}")
        units[uid] = unit
    markers: dict[str, Marker] = {}
    for i, m in enumerate(doc.get("markers", [])):
        path = f"/markers/{i}"
        if not isinstance(m, dict):
            raise WireFormatError(path, "expected object")
        marker = Marker(
            _string(m.get("name"), f"{path}/name"),
            _string(m.get("kind"), f"{path}/kind"),
            _string(m.get("at"), f"{path}/at"),
        )
        if marker.name in markers:
            raise WireFormatError(f"{path}/name", f"duplicate marker name {marker.name}")
        markers[marker.name] = marker
    routes: dict[str, Route] = {}
    for i, r in enumerate(doc.get("routes", [])):
        path = f"/routes/{i}"
        if not isinstance(r, dict):
            raise WireFormatError(path, "expected object")
        rid = _string(r.get("id"), f"{path}/id")
        steps = []
        raw_steps = r.get("steps")
        if not isinstance(raw_steps, list):
            raise WireFormatError(f"{path}/steps", "expected array")
        for j, s in enumerate(raw_steps):
            spath = f"{path}/steps/{j}"
            if not isinstance(s, dict):
                raise WireFormatError(spath, "expected object")
            steps.append(
                UnitPathPair(
                    _string(s.get("unit"), f"{spath}/unit"),
                    Path(_string(s.get("from"), f"{spath}/from"), _string(s.get("to"), f"{spath}/to")),
                )
            )
        if rid in routes:
            raise WireFormatError(f"{path}/id", f"duplicate route id {rid}")
        routes[rid] = Route(rid, tuple(steps))
    clear: dict[str, frozenset[str]] = {}
    raw_clear = doc.get("clear", {})
    if not isinstance(raw_clear, dict):
        raise WireFormatError("/clear", "expected object")
    for rid, lst in raw_clear.items():
        clear[rid] = frozenset(_string_list(lst, f"/clear/{rid}"))
    release: dict[str, tuple[ReleaseEntry, ...]] = {}
    raw_release = doc.get("release", {})
    if not isinstance(raw_release, dict):
        raise WireFormatError("/release", "expected object")
    for rid, lst in raw_release.items():
        path = f"/release/{rid}"
        if not isinstance(lst, list):
            raise WireFormatError(path, "expected array")
        entries = []
        for j, e in enumerate(lst):
            epath = f"{path}/{j}"
            if not isinstance(e, dict):
                raise WireFormatError(epath, "expected object")
            entries.append(
                ReleaseEntry(
                    _string(e.get("point"), f"{epath}/point"),
                    _string(e.get("clearedBy"), f"{epath}/clearedBy"),
                )
            )
        release[rid] = tuple(entries)
    point_positions: dict[str, dict[str, tuple[str, ...]]] = {}
    ext_in = doc.get("ext", {})
    ext: dict = {}
    if ext_in:
        if not isinstance(ext_in, dict):
            raise WireFormatError("/ext", "expected object")
        ext = dict(ext_in)
        raw_pp = ext.pop("pointPositions", {})
        if not isinstance(raw_pp, dict):
            raise WireFormatError("/ext/pointPositions", "expected object")
        for rid, cols in raw_pp.items():
            if not isinstance(cols, dict):
                raise WireFormatError(f"/ext/pointPositions/{rid}", "expected object")
            point_positions[rid] = {
                col: tuple(_string_list(lst, f"/ext/pointPositions/{rid}/{col}")) for col, lst in cols.items()
            }
    return SchemePlan(
        name=name,
        units=units,
        markers=markers,
        routes=routes,
        clear=clear,
        point_positions=point_positions,
        release=release,
        ext=ext,
    )


def violation_to_dict(v: Violation) -> dict:
    return {"code": v.code, "message": v.message, "location": v.location}
