"""Domain model for railway scheme plans.

A scheme plan is a track topology (linear units and points joined at
connectors), a set of routes (chained unit/path steps), and the control and
release tables that govern route availability.  All values are immutable
after construction; validation is a separate pass that reports violations
instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

ConnectorId = str
UnitId = str
RouteId = str
MarkerName = str


@dataclass(frozen=True)
class Path:
    """Directed traversal of a unit from one of its connectors to another."""

    frm: ConnectorId
    to: ConnectorId


@dataclass(frozen=True)
class LinearUnit:
    id: UnitId
    end_a: ConnectorId
    end_b: ConnectorId

    @property
    def connectors(self) -> tuple[ConnectorId, ...]:
        return (self.end_a, self.end_b)


@dataclass(frozen=True)
class PointUnit:
    """A switch: one stem end and two diverging legs (left/right)."""

    id: UnitId
    stem: ConnectorId
    left: ConnectorId
    right: ConnectorId

    @property
    def connectors(self) -> tuple[ConnectorId, ...]:
        return (self.stem, self.left, self.right)


Unit = Union[LinearUnit, PointUnit]


@dataclass(frozen=True)
class UnitPathPair:
    unit: UnitId
    path: Path


@dataclass(frozen=True)
class Route:
    id: RouteId
    steps: tuple[UnitPathPair, ...]


MARKER_KINDS = ("entry", "exit", "boundary")


@dataclass(frozen=True)
class Marker:
    name: MarkerName
    kind: str
    at: ConnectorId


@dataclass(frozen=True)
class ReleaseEntry:
    point: UnitId
    cleared_by: UnitId


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    location: str


@dataclass(frozen=True, eq=True)
class SchemePlan:
    """Track plan plus control/release tables.

    ``clear`` maps a route to the units that must be unoccupied for the route
    to be open.  ``point_positions`` carries the normal/reverse columns of a
    printed control table as opaque annotations; they are round-tripped but
    never interpreted.  ``ext`` is an opaque extension payload (e.g. editor
    layout) that the core ignores.
    """

    name: str
    units: dict[UnitId, Unit] = field(default_factory=dict)
    markers: dict[MarkerName, Marker] = field(default_factory=dict)
    routes: dict[RouteId, Route] = field(default_factory=dict)
    clear: dict[RouteId, frozenset[UnitId]] = field(default_factory=dict)
    point_positions: dict[RouteId, dict[str, tuple[UnitId, ...]]] = field(default_factory=dict)
    release: dict[RouteId, tuple[ReleaseEntry, ...]] = field(default_factory=dict)
    ext: dict = field(default_factory=dict)

    __hash__ = None  # plans are compared, never hashed


def legal_paths(unit: Unit) -> frozenset[Path]:
    """All traversals a train may make across ``unit``.

    Linears are traversable both ways; points only between the stem and a
    leg, never leg to leg.
    """
    if isinstance(unit, LinearUnit):
        return frozenset({Path(unit.end_a, unit.end_b), Path(unit.end_b, unit.end_a)})
    return frozenset(
        {
            Path(unit.stem, unit.left),
            Path(unit.stem, unit.right),
            Path(unit.left, unit.stem),
            Path(unit.right, unit.stem),
        }
    )


def route_units(route: Route) -> tuple[UnitId, ...]:
    """The ordered unit list of a route (step order preserved)."""
    return tuple(step.unit for step in route.steps)


def attached_units(plan: SchemePlan, connector: ConnectorId) -> tuple[Unit, ...]:
    """Units with an end at ``connector``, in declaration order."""
    return tuple(u for u in plan.units.values() if connector in u.connectors)


def plan_connectors(plan: SchemePlan) -> set[ConnectorId]:
    out: set[ConnectorId] = set()
    for unit in plan.units.values():
        out.update(unit.connectors)
    return out


def _check_ident(token: str, what: str, location: str) -> Iterator[Violation]:
    if not IDENT_RE.match(token):
        yield Violation("ident.syntax", f"{what} {token!r} is not a valid identifier", location)


def _unit_violations(unit: Unit) -> Iterator[Violation]:
    loc = f"unit:{unit.id}"
    yield from _check_ident(unit.id, "unit id", loc)
    for c in unit.connectors:
        yield from _check_ident(c, "connector", loc)
    if isinstance(unit, LinearUnit):
        if unit.end_a == unit.end_b:
            yield Violation("unit.connectors.distinct", f"linear {unit.id} joins {unit.end_a} to itself", loc)
    else:
        if len(set(unit.connectors)) != 3:
            yield Violation("unit.connectors.distinct", f"point {unit.id} connectors must be pairwise distinct", loc)


def _route_violations(plan: SchemePlan, route: Route) -> Iterator[Violation]:
    loc = f"route:{route.id}"
    yield from _check_ident(route.id, "route id", loc)
    if not route.steps:
        yield Violation("route.empty", f"route {route.id} has no steps", loc)
        return
    seen_units: set[UnitId] = set()
    for i, step in enumerate(route.steps, start=1):
        sloc = f"{loc}:step:{i}"
        unit = plan.units.get(step.unit)
        if unit is None:
            yield Violation("ref.unknown", f"route {route.id} references unknown unit {step.unit}", sloc)
            continue
        if step.path.frm == step.path.to or step.path not in legal_paths(unit):
            yield Violation(
                "path.illegal",
                f"({step.path.frm},{step.path.to}) is not a legal path across {step.unit}",
                sloc,
            )
        if step.unit in seen_units:
            yield Violation("route.unit.repeated", f"unit {step.unit} occurs twice in route {route.id}", sloc)
        seen_units.add(step.unit)
        if i > 1:
            prev = route.steps[i - 2]
            if prev.path.to != step.path.frm:
                yield Violation(
                    "route.chain",
                    f"step {i} starts at {step.path.frm} but step {i - 1} ends at {prev.path.to}",
                    sloc,
                )


def _marker_violations(plan: SchemePlan, marker: Marker) -> Iterator[Violation]:
    loc = f"marker:{marker.name}"
    yield from _check_ident(marker.name, "marker name", loc)
    if marker.kind not in MARKER_KINDS:
        yield Violation("marker.kind", f"unknown marker kind {marker.kind!r}", loc)
        return
    attached = attached_units(plan, marker.at)
    if not attached:
        yield Violation("ref.unknown", f"marker {marker.name} sits at unattached connector {marker.at}", loc)
    elif marker.kind in ("entry", "exit") and len(attached) != 1:
        yield Violation(
            "marker.attach",
            f"{marker.kind} marker {marker.name} must attach to exactly one unit, found {len(attached)}",
            loc,
        )


def _table_violations(plan: SchemePlan) -> Iterator[Violation]:
    for rid in plan.routes:
        if rid not in plan.clear:
            yield Violation("clear.missing.route", f"route {rid} has no clear entry", f"clear:{rid}")
    for rid, units in plan.clear.items():
        loc = f"clear:{rid}"
        if rid not in plan.routes:
            yield Violation("ref.unknown", f"clear entry for unknown route {rid}", loc)
        for u in sorted(units):
            if u not in plan.units:
                yield Violation("ref.unknown", f"clear entry for {rid} names unknown unit {u}", loc)
    for rid, entries in plan.release.items():
        if rid not in plan.routes:
            yield Violation("ref.unknown", f"release entry for unknown route {rid}", f"release:{rid}")
            continue
        on_route = route_units(plan.routes[rid])
        positions: list[int] = []
        seen_cleared: set[UnitId] = set()
        for i, entry in enumerate(entries, start=1):
            loc = f"release:{rid}:{i}"
            point = plan.units.get(entry.point)
            if entry.point not in on_route or not isinstance(point, PointUnit):
                yield Violation(
                    "release.point.not.on.route",
                    f"release point {entry.point} is not a point on route {rid}",
                    loc,
                )
            if entry.cleared_by not in on_route:
                yield Violation(
                    "release.clearedby.not.on.route",
                    f"release unit {entry.cleared_by} is not on route {rid}",
                    loc,
                )
                continue
            if entry.cleared_by in seen_cleared:
                yield Violation("release.clearedby.duplicate", f"{entry.cleared_by} releases twice on {rid}", loc)
            seen_cleared.add(entry.cleared_by)
            positions.append(on_route.index(entry.cleared_by))
        if positions != sorted(positions):
            yield Violation("release.order", f"release units of {rid} are not in route order", f"release:{rid}")


def validate_plan(plan: SchemePlan) -> list[Violation]:
    """Check every structural invariant; empty result means the plan is valid.

    Deterministic and order-stable: violations are sorted by location then
    code, so repeated runs (and reordered declarations) report identically.
    """
    out: list[Violation] = []
    for unit in plan.units.values():
        out.extend(_unit_violations(unit))
    # connector degree: a connector joins at most two unit ends
    degree: dict[ConnectorId, list[UnitId]] = {}
    for unit in plan.units.values():
        for c in unit.connectors:
            degree.setdefault(c, []).append(unit.id)
    for c, owners in degree.items():
        if len(owners) > 2:
            out.append(
                Violation(
                    "connector.degree",
                    f"connector {c} joins {len(owners)} units ({', '.join(sorted(owners))}); at most 2 allowed",
                    f"connector:{c}",
                )
            )
    for marker in plan.markers.values():
        out.extend(_marker_violations(plan, marker))
    for route in plan.routes.values():
        out.extend(_route_violations(plan, route))
    out.extend(_table_violations(plan))
    return sorted(out, key=lambda v: (v.location, v.code))
