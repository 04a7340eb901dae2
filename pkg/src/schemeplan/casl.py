"""CASL specification text for a concrete scheme plan.

The output is write-only text validated by golden tests; it is never parsed
back.  Identifier policy: plan identifiers are emitted verbatim.  CASL allows
uppercase-leading operation names, and keeping the printed table names intact
makes the clear/release axioms directly comparable with the source plan.

Layout: a fixed static preamble (time, generic pairs, the signature of the
track domain and its dynamic extension), then the plan-specific free types,
control-table facts, region definitions and release facts, then an implied
block with one lemma per route, and finally the plan-independent safety goal.
"""

from __future__ import annotations

from .model import SchemePlan, route_units
from .regions import build_catalog

STATIC_PREAMBLE = """\
spec Time =
     sort Time
     ops 0 : Time;
         suc : Time -> Time;
         pre : Time ->? Time
     pred __<=__ : Time * Time
     forall n : Time . 0 <= n
end

spec Pair [sort S] [sort T] =
     sort Pair[S,T]
     ops first : Pair[S,T] -> S;
         second : Pair[S,T] -> T;
         pair : S * T -> Pair[S,T]
end

spec List [sort Elem] =
     free type List[Elem] ::= [] | __::__(head : Elem; tail : List[Elem])
     pred __eps__ : Elem * List[Elem]
     op __++__ : List[Elem] * List[Elem] -> List[Elem]
end

spec StaticSignature =
     Time and List [sort Unit] and List [sort Region]
then
     sorts Net, Station, Line, Track, Unit, Connector
     sorts Linear, Switch < Unit
     sort Path = Pair[Connector,Connector]
     sort UnitPathPair = Pair[Unit,Path]
     sorts Route < List[UnitPathPair]
     sorts Region < List[Unit]
     sorts MA < List[Region]
     preds __hasLine__ : Net * Line;
           __has__ : Station * Unit;
           __has__ : Connector * Unit
     pred __isOpenAt__ : Unit * Time
     pred __isOpenAt__ : Route * Time
     pred clear : Route * Unit
     pred releasedBy : Route * Unit * Unit
     pred assigned : MA * Time
     pred canExtend : MA * Time
     pred canReduce : MA * Time
     pred ext : MA * Route * MA
     pred share : MA * MA
     op regions : Route -> MA
     forall m : MA . not m = [] => not assigned(m, 0)                %(no_ma_0)%
     forall t : Time . assigned([] as MA, t)                         %(empty_always_assigned)%
     forall r : Route; t : Time
     . r isOpenAt t <=> forall u : Unit . clear(r, u) => u isOpenAt t
end
"""

SAFETY_GOAL = """\
then %implies
     %% safety goal (plan independent)
     forall t : Time; ma1, ma2 : MA
     . share(ma1, ma2)
       => ma1 = ma2 \\/ not (assigned(ma1, t) /\\ assigned(ma2, t))   %(safety)%
"""


def emit_safety_goal() -> str:
    """The overall safety goal; identical for every plan."""
    return SAFETY_GOAL


def _free_type(sort: str, constants: list[str]) -> str:
    return f"     free type {sort} ::= {' | '.join(constants)}"


def _constant_names(plan: SchemePlan) -> tuple[dict[str, str], dict[str, str], dict[str, str], list[str]]:
    """Emitted constant names for units, connectors and routes.

    Identifiers are verbatim; a name already taken by an earlier namespace
    is suffixed until free, and each rename is reported as a warning line.
    """
    taken: set[str] = set()
    warnings: list[str] = []

    def reserve(ids: list[str], suffix: str, what: str) -> dict[str, str]:
        out: dict[str, str] = {}
        for ident in ids:
            name = ident
            while name in taken:
                name += suffix
            if name != ident:
                warnings.append(f"%% warning: {what} {ident} emitted as {name} (name collision)")
            taken.add(name)
            out[ident] = name
        return out

    connectors: list[str] = []
    for unit in plan.units.values():
        for c in unit.connectors:
            if c not in connectors:
                connectors.append(c)
    unit_names = reserve(list(plan.units), "_u", "unit")
    conn_names = reserve(connectors, "_c", "connector")
    route_names = reserve(sorted(plan.routes), "_r", "route")
    return unit_names, conn_names, route_names, warnings


def _region_list(units: tuple[str, ...], sort: str) -> str:
    inner = " :: ".join(units)
    return f"({inner} :: []) as {sort}"


def emit_route_lemmas(plan: SchemePlan) -> str:
    """One implied lemma per route: the safety goal reduced to that route."""
    if not plan.routes:
        return ""
    _, _, route_names, _ = _constant_names(plan)
    lines = ["then %implies", "     %% per-route reduction lemmas"]
    for rid in sorted(plan.routes):
        name = route_names[rid]
        lines.append("     forall t : Time; rg : Region; ma : MA")
        lines.append(
            f"     . assigned(ma, t) /\\ rg eps ma /\\ rg eps regions({name})"
            f" => not {name} isOpenAt t   %(lemma_{name})%"
        )
    return "\n".join(lines) + "\n"


def emit_scheme_plan(plan: SchemePlan) -> str:
    """Complete CASL text for a plan; deterministic byte output."""
    unit_names, conn_names, route_names, warnings = _constant_names(plan)
    parts = [STATIC_PREAMBLE]
    body: list[str] = [f"spec SchemePlan_{plan.name} = StaticSignature", "then"]
    body.extend(f"     {w}" for w in warnings)
    if plan.units:
        body.append(_free_type("Unit", list(unit_names.values())))
        body.append(_free_type("Connector", list(conn_names.values())))
    if plan.routes:
        body.append(_free_type("Route", list(route_names.values())))
    if plan.clear:
        body.append("     %% control table (clear facts)")
        for rid in sorted(plan.clear):
            for unit in _clear_in_route_order(plan, rid):
                body.append(f"     . clear({route_names.get(rid, rid)}, {unit_names.get(unit, unit)})")
    catalog = build_catalog(plan) if plan.routes else None
    if catalog and catalog.names:
        body.append("     %% regions")
        names = list(catalog.names.values())
        body.append(f"     ops {', '.join(names)} : Region")
        for region, name in catalog.names.items():
            units = tuple(unit_names.get(u, u) for u in region)
            body.append(f"     . {name} = {_region_list(units, 'Region')}")
        for rid in sorted(plan.routes):
            regs = [catalog.names[r] for r in catalog.by_route[rid]]
            body.append(f"     . regions({route_names[rid]}) = {_region_list(tuple(regs), 'MA')}")
    if any(plan.release.values()):
        body.append("     %% release table")
        for rid in sorted(plan.release):
            for entry in plan.release[rid]:
                point = unit_names.get(entry.point, entry.point)
                cleared = unit_names.get(entry.cleared_by, entry.cleared_by)
                body.append(f"     . releasedBy({route_names.get(rid, rid)}, {point}, {cleared})")
    parts.append("\n".join(body) + "\n")
    lemmas = emit_route_lemmas(plan)
    if lemmas:
        parts.append(lemmas)
    parts.append(emit_safety_goal())
    parts.append("end\n")
    return "\n".join(parts)


def _clear_in_route_order(plan: SchemePlan, rid: str) -> list[str]:
    units = plan.clear[rid]
    order = [u for u in route_units(plan.routes[rid])] if rid in plan.routes else []
    on_route = [u for u in order if u in units]
    return on_route + sorted(units - set(on_route))


def scan_balance(text: str) -> bool:
    """Lightweight well-formedness scan: every ``spec`` has a matching ``end``."""
    opens = 0
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("spec "):
            opens += 1
        elif stripped == "end":
            opens -= 1
            if opens < 0:
                return False
    return opens == 0
