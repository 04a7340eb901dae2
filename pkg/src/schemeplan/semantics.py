"""Executable semantics of movement-authority assignment.

A movement authority (MA) is an ordered tuple of regions held by one train;
the interlocking state is the finite set of assigned non-empty MAs.  The
empty MA is implicitly always available for extension.  Exactly one event
fires per step: either one MA is extended by an open route's regions, or one
MA hands back its front region.

Occupancy is read deterministically: every unit inside an assigned region is
closed.  A route is open iff all units in its clear set are open.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .model import RouteId, SchemePlan, UnitId
from .regions import Region, regions_of_route

MovementAuthority = tuple[Region, ...]
InterlockingState = frozenset[MovementAuthority]

EMPTY_MA: MovementAuthority = ()


class MissingClearEntry(KeyError):
    """The route has no control-table entry."""


class EventNotEnabled(ValueError):
    """The event is not enabled in the given state."""


@dataclass(frozen=True)
class Extend:
    """Extend ``frm`` (possibly the empty MA) by the regions of ``route``."""

    frm: MovementAuthority
    route: RouteId


@dataclass(frozen=True)
class Reduce:
    """Release the front region of ``ma``."""

    ma: MovementAuthority


Event = Union[Extend, Reduce]


@dataclass(frozen=True)
class Trace:
    initial: InterlockingState
    events: tuple[Event, ...]


class ReplayError(ValueError):
    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"step {step}: {reason}")


def initial_state() -> InterlockingState:
    """No train holds an authority initially."""
    return frozenset()


def canonical_mas(state: InterlockingState) -> list[MovementAuthority]:
    """Assigned MAs in the canonical (lexicographic) order used everywhere."""
    return sorted(state)


def is_unit_open(state: InterlockingState, plan: SchemePlan, unit: UnitId) -> bool:
    return all(unit not in region for ma in state for region in ma)


def is_route_open(state: InterlockingState, plan: SchemePlan, route_id: RouteId) -> bool:
    if route_id not in plan.clear:
        raise MissingClearEntry(route_id)
    occupied = {u for ma in state for region in ma for u in region}
    return not (plan.clear[route_id] & occupied)


def _connects(plan: SchemePlan, ma: MovementAuthority, route_id: RouteId) -> bool:
    """Tail-to-head check: the route must begin at a connector of the MA's last unit."""
    last_unit = plan.units.get(ma[-1][-1])
    first_step = plan.routes[route_id].steps[0]
    return last_unit is not None and first_step.path.frm in last_unit.connectors


def can_extend(state: InterlockingState, plan: SchemePlan, frm: MovementAuthority, route_id: RouteId) -> bool:
    """True iff the route is open and concatenation keeps the MA contiguous."""
    if frm and frm not in state:
        return False
    if not is_route_open(state, plan, route_id):
        return False
    return not frm or _connects(plan, frm, route_id)


def enabled_events(state: InterlockingState, plan: SchemePlan) -> list[Event]:
    """All events that may fire, in canonical order (extends, then reduces)."""
    events: list[Event] = []
    sources = [EMPTY_MA] + canonical_mas(state)
    for route_id in sorted(plan.routes):
        for frm in sources:
            if can_extend(state, plan, frm, route_id):
                events.append(Extend(frm, route_id))
    for ma in canonical_mas(state):
        events.append(Reduce(ma))
    return events


def apply_event(state: InterlockingState, plan: SchemePlan, event: Event) -> InterlockingState:
    """Fire one enabled event; raises :class:`EventNotEnabled` otherwise."""
    if isinstance(event, Extend):
        if not can_extend(state, plan, event.frm, event.route):
            raise EventNotEnabled(f"extend by {event.route} is not enabled")
        extended = event.frm + tuple(regions_of_route(plan, event.route))
        return (state - {event.frm}) | {extended}
    if isinstance(event, Reduce):
        if event.ma not in state:
            raise EventNotEnabled("reduce of an unassigned movement authority")
        rest = event.ma[1:]
        out = state - {event.ma}
        return out | {rest} if rest else out
    raise EventNotEnabled(f"unknown event {event!r}")


def replay(plan: SchemePlan, trace: Trace) -> list[InterlockingState]:
    """States visited by a trace, failing fast on the first disabled event."""
    states = [trace.initial]
    for i, event in enumerate(trace.events, start=1):
        try:
            states.append(apply_event(states[-1], plan, event))
        except (EventNotEnabled, MissingClearEntry) as exc:
            raise ReplayError(i, str(exc)) from exc
    return states


# -- trace files: one event per line, MAs indexed by canonical pre-state order


def format_trace(plan: SchemePlan, trace: Trace) -> str:
    lines = []
    state = trace.initial
    for event in trace.events:
        mas = canonical_mas(state)
        if isinstance(event, Extend):
            idx = "-" if not event.frm else str(mas.index(event.frm))
            lines.append(f"extend {idx} {event.route}")
        else:
            lines.append(f"reduce {mas.index(event.ma)}")
        state = apply_event(state, plan, event)
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(plan: SchemePlan, text: str, initial: InterlockingState | None = None) -> Trace:
    """Resolve a trace file against the states it induces.

    Raises :class:`ReplayError` on malformed lines, out-of-range indices, or
    disabled events (indices are only meaningful relative to the pre-state).
    """
    state = initial if initial is not None else initial_state()
    events: list[Event] = []
    step = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        step += 1
        toks = line.split()
        mas = canonical_mas(state)
        try:
            if toks[0] == "extend" and len(toks) == 3:
                frm = EMPTY_MA if toks[1] == "-" else mas[int(toks[1])]
                event: Event = Extend(frm, toks[2])
            elif toks[0] == "reduce" and len(toks) == 2:
                event = Reduce(mas[int(toks[1])])
            else:
                raise ReplayError(step, f"malformed trace line {line!r}")
        except (ValueError, IndexError) as exc:
            raise ReplayError(step, f"bad movement-authority index in {line!r}") from exc
        try:
            state = apply_event(state, plan, event)
        except (EventNotEnabled, MissingClearEntry) as exc:
            raise ReplayError(step, str(exc)) from exc
        events.append(event)
    return Trace(initial if initial is not None else initial_state(), tuple(events))


def state_to_lists(state: InterlockingState) -> list[list[list[UnitId]]]:
    """JSON-friendly view: canonical list of MAs, each a list of regions."""
    return [[list(region) for region in ma] for ma in canonical_mas(state)]


def events_to_dicts(state: InterlockingState, events: Iterable[Event]) -> list[dict]:
    """JSON-friendly events, indexed against the canonical order of ``state``.

    Only valid for events enabled in ``state`` (used for enabled-event lists).
    """
    mas = canonical_mas(state)
    out = []
    for event in events:
        if isinstance(event, Extend):
            out.append(
                {
                    "type": "extend",
                    "from": None if not event.frm else mas.index(event.frm),
                    "route": event.route,
                }
            )
        else:
            out.append({"type": "reduce", "ma": mas.index(event.ma)})
    return out


def trace_to_dicts(plan: SchemePlan, trace: Trace) -> list[dict]:
    """JSON-friendly whole trace (each event indexed against its pre-state)."""
    out = []
    state = trace.initial
    for event in trace.events:
        out.extend(events_to_dicts(state, [event]))
        state = apply_event(state, plan, event)
    return out
