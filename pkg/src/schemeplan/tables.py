"""Derive routes and control/release tables from topology and markers.

Routes run from an entry or boundary connector to the next boundary or exit
connector, branching at facing points.  Control tables are generated with
clear = all units of the route, which guarantees the static safety condition
by construction.  Release tables free a facing point as soon as the point
itself clears, and a trailing point only once the parts shared with the
other routes through it have cleared.
"""

from __future__ import annotations

from dataclasses import replace

from .model import (
    ConnectorId,
    LinearUnit,
    Path,
    PointUnit,
    ReleaseEntry,
    Route,
    SchemePlan,
    UnitPathPair,
    Violation,
    attached_units,
    route_units,
    validate_plan,
)


class CyclicPathError(ValueError):
    """Route traversal revisited a unit; the plan contains a loop."""

    def __init__(self, cycles: list[tuple[ConnectorId, str]]):
        self.cycles = cycles
        spots = ", ".join(f"{unit} (from {start})" for start, unit in cycles)
        super().__init__(f"cyclic path while tracing routes: {spots}")


def _exits(unit: LinearUnit | PointUnit, entered_at: ConnectorId) -> list[ConnectorId]:
    """Connectors reachable across ``unit`` when entering at ``entered_at``."""
    if isinstance(unit, LinearUnit):
        return [unit.end_b if entered_at == unit.end_a else unit.end_a]
    if entered_at == unit.stem:
        return [unit.left, unit.right]  # facing: branch
    return [unit.stem]  # trailing: merge back


def _marker_kinds(plan: SchemePlan) -> dict[ConnectorId, set[str]]:
    kinds: dict[ConnectorId, set[str]] = {}
    for m in plan.markers.values():
        kinds.setdefault(m.at, set()).add(m.kind)
    return kinds


def extract_routes(plan: SchemePlan) -> list[Route]:
    """All maximal routes between markers, with deterministic ids.

    Ids reuse the plan's route names where the step lists match, otherwise
    ``R<n>`` numbered in lexicographic order of (start connector, unit list).
    Output is independent of unit declaration order.
    """
    kinds = _marker_kinds(plan)
    starts = sorted(c for c, ks in kinds.items() if ks & {"entry", "boundary"})
    found: list[tuple[ConnectorId, tuple[UnitPathPair, ...]]] = []
    cycles: list[tuple[ConnectorId, str]] = []

    def walk(start: ConnectorId, steps: list[UnitPathPair], at: ConnectorId) -> None:
        if steps and {"exit", "boundary"} & kinds.get(at, set()):
            found.append((start, tuple(steps)))
            return
        for unit in attached_units(plan, at):
            if steps and unit.id == steps[-1].unit:
                continue  # no doubling back over the unit just crossed
            if unit.id in {s.unit for s in steps}:
                cycles.append((start, unit.id))
                continue
            for out in _exits(unit, at):
                walk(start, steps + [UnitPathPair(unit.id, Path(at, out))], out)

    for start in starts:
        walk(start, [], start)
    if cycles:
        raise CyclicPathError(sorted(set(cycles)))

    found.sort(key=lambda item: (item[0], tuple(s.unit for s in item[1])))
    by_steps = {r.steps: r.id for r in plan.routes.values()}
    taken = set(by_steps.values())
    routes = []
    n = 0
    for _, steps in found:
        rid = by_steps.get(steps)
        if rid is None:
            n += 1
            while f"R{n}" in taken:
                n += 1
            rid = f"R{n}"
        routes.append(Route(rid, steps))
    return routes


def generate_control_table(plan: SchemePlan, routes: list[Route]) -> dict[str, frozenset[str]]:
    """clear(r) = all units of r."""
    return {r.id: frozenset(route_units(r)) for r in routes}


def generate_point_positions(plan: SchemePlan, routes: list[Route]) -> dict[str, dict[str, tuple[str, ...]]]:
    """Normal/reverse annotation columns: right leg = normal, left leg = reverse."""
    out: dict[str, dict[str, tuple[str, ...]]] = {}
    for r in routes:
        normal: list[str] = []
        reverse: list[str] = []
        for step in r.steps:
            unit = plan.units[step.unit]
            if isinstance(unit, PointUnit):
                leg = step.path.to if step.path.frm == unit.stem else step.path.frm
                (normal if leg == unit.right else reverse).append(unit.id)
        cols = {}
        if normal:
            cols["normal"] = tuple(normal)
        if reverse:
            cols["reverse"] = tuple(reverse)
        if cols:
            out[r.id] = cols
    return out


def _common_suffix(unit_lists: list[tuple[str, ...]]) -> tuple[str, ...]:
    if not unit_lists:
        return ()
    suffix = unit_lists[0]
    for other in unit_lists[1:]:
        keep = 0
        while keep < min(len(suffix), len(other)) and suffix[-1 - keep] == other[-1 - keep]:
            keep += 1
        suffix = suffix[len(suffix) - keep:]
    return suffix


def generate_release_table(plan: SchemePlan, routes: list[Route]) -> dict[str, tuple[ReleaseEntry, ...]]:
    """Release each point of each route.

    Facing points (entered at the stem) release on the point itself; trailing
    points release on the last unit of the longest common suffix of the
    routes through the point, falling back to the last unit of the route.
    A backward pass keeps release units strictly in route order.
    """
    out: dict[str, tuple[ReleaseEntry, ...]] = {}
    for r in routes:
        units = route_units(r)
        candidates: list[tuple[str, int]] = []  # (point id, release position)
        for pos, step in enumerate(r.steps):
            unit = plan.units[step.unit]
            if not isinstance(unit, PointUnit):
                continue
            if step.path.frm == unit.stem:
                candidates.append((unit.id, pos))
            else:
                through = [route_units(o) for o in routes if unit.id in route_units(o)]
                suffix = _common_suffix(through)
                cleared_by = suffix[-1] if suffix and suffix[-1] in units else units[-1]
                candidates.append((unit.id, units.index(cleared_by)))
        # strictly increasing positions, resolved from the end backwards
        ceiling = len(units)
        fixed: list[tuple[str, int]] = []
        for point, pos in reversed(candidates):
            pos = min(pos, ceiling - 1)
            fixed.append((point, pos))
            ceiling = pos
        fixed.reverse()
        if fixed:
            out[r.id] = tuple(ReleaseEntry(point, units[pos]) for point, pos in fixed)
    return out


def generate_tables(plan: SchemePlan) -> SchemePlan:
    """Plan with routes (extracted if absent) and generated tables."""
    routes = list(plan.routes.values()) if plan.routes else extract_routes(plan)
    return replace(
        plan,
        routes={r.id: r for r in routes},
        clear=generate_control_table(plan, routes),
        point_positions=generate_point_positions(plan, routes),
        release=generate_release_table(plan, routes),
    )


def validate_tables(plan: SchemePlan) -> list[Violation]:
    """Control/release-table violations, plus warning-class oddities.

    Warnings carry a ``warn.`` code prefix; a clear unit that exists but sits
    on no route is suspicious rather than wrong.
    """
    out = [v for v in validate_plan(plan) if v.location.startswith(("clear:", "release:"))]
    on_any_route = {u for r in plan.routes.values() for u in route_units(r)}
    for rid, units in plan.clear.items():
        for u in sorted(units):
            if u in plan.units and u not in on_any_route:
                out.append(
                    Violation(
                        "warn.clear.unit.offroute",
                        f"clear entry for {rid} names {u}, which is on no route",
                        f"clear:{rid}",
                    )
                )
    return sorted(out, key=lambda v: (v.location, v.code))
