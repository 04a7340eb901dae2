"""Safety verification: static route check, explicit-state oracle, and the
route-reduction equivalence harness.

Two properties are checked over the reachable states:

* safety -- no two distinct assigned movement authorities share a region;
* route condition -- a route is never open while one of its regions sits
  inside an assigned movement authority.

The static check (``units(r)`` contained in ``clear(r)``) is a sufficient
syntactic condition for both.  The equivalence harness confirms empirically,
instance by instance, that the two dynamic checks agree on every untruncated
state space.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional

from .model import RouteId, SchemePlan, UnitId, route_units
from .regions import Region, build_catalog, regions_of_route
from .semantics import (
    Event,
    InterlockingState,
    MovementAuthority,
    Trace,
    apply_event,
    canonical_mas,
    enabled_events,
    initial_state,
    is_route_open,
)

DEFAULT_MAX_STATES = 10**6


def share(ma1: MovementAuthority, ma2: MovementAuthority) -> bool:
    """True iff some region value belongs to both movement authorities."""
    return bool(set(ma1) & set(ma2))


@dataclass(frozen=True)
class RouteCheck:
    route_id: RouteId
    passed: bool
    missing: frozenset[UnitId]


def check_routes_static(plan: SchemePlan, mode: str = "subset") -> list[RouteCheck]:
    """Per-route static safety condition.

    ``subset`` (default, sound for the loose occupancy reading): every unit
    of the route must appear in its clear set.  ``region-overlap`` (weaker,
    sound only for the deterministic occupancy used by the explorer): every
    region of the route must intersect the clear set.
    """
    if mode not in ("subset", "region-overlap"):
        raise ValueError(f"unknown static check mode {mode!r}")
    out = []
    for rid in sorted(plan.routes):
        clear = plan.clear.get(rid, frozenset())
        units = route_units(plan.routes[rid])
        if mode == "subset":
            missing = frozenset(units) - clear
        else:
            missing = frozenset(
                u for region in regions_of_route(plan, rid) if not (set(region) & clear) for u in region
            )
        out.append(RouteCheck(rid, not missing, missing))
    return out


@dataclass
class SearchBound:
    max_total_regions: Optional[int] = None  # None: 2 x |region catalog|
    max_states: int = DEFAULT_MAX_STATES

    def resolved(self, plan: SchemePlan) -> "SearchBound":
        if self.max_total_regions is not None:
            return self
        catalog = build_catalog(plan)
        return SearchBound(max_total_regions=2 * len(catalog.names), max_states=self.max_states)


@dataclass
class SpaceStats:
    state_count: int = 0
    transition_count: int = 0
    max_ma_length: int = 0
    depth: int = 0


@dataclass
class StateSpace:
    initial: InterlockingState
    order: list[InterlockingState]  # breadth-first discovery order
    transitions: dict[InterlockingState, list[tuple[Event, InterlockingState]]]
    parent: dict[InterlockingState, tuple[InterlockingState, Event]]
    truncated: bool
    stats: SpaceStats = field(default_factory=SpaceStats)

    @property
    def states(self) -> set[InterlockingState]:
        return set(self.order)

    def trace_to(self, state: InterlockingState) -> Trace:
        events: list[Event] = []
        cur = state
        while cur in self.parent:
            prev, event = self.parent[cur]
            events.append(event)
            cur = prev
        return Trace(self.initial, tuple(reversed(events)))


def _total_regions(state: InterlockingState) -> int:
    return sum(len(ma) for ma in state)


def explore(plan: SchemePlan, bound: SearchBound | None = None) -> StateSpace:
    """Breadth-first closure of the initial state under enabled events.

    States whose total assigned-region count exceeds the bound are pruned
    (and the space marked truncated); likewise expansion stops at the state
    cap.  Event ordering is canonical, so the result is deterministic.
    """
    bound = (bound or SearchBound()).resolved(plan)
    init = initial_state()
    space = StateSpace(initial=init, order=[init], transitions={}, parent={}, truncated=False)
    depth = {init: 0}
    queue: deque[InterlockingState] = deque([init])
    while queue:
        state = queue.popleft()
        succs: list[tuple[Event, InterlockingState]] = []
        for event in enabled_events(state, plan):
            nxt = apply_event(state, plan, event)
            if _total_regions(nxt) > bound.max_total_regions:
                space.truncated = True
                continue
            succs.append((event, nxt))
            if nxt not in depth:
                if len(depth) >= bound.max_states:
                    space.truncated = True
                    continue
                depth[nxt] = depth[state] + 1
                space.parent[nxt] = (state, event)
                space.order.append(nxt)
                queue.append(nxt)
        space.transitions[state] = succs
    space.stats = SpaceStats(
        state_count=len(space.order),
        transition_count=sum(len(s) for s in space.transitions.values()),
        max_ma_length=max((len(ma) for st in space.order for ma in st), default=0),
        depth=max(depth.values(), default=0),
    )
    return space


@dataclass(frozen=True)
class Verdict:
    kind: str  # Safe | Unsafe | Inconclusive
    counterexample: Optional[Trace] = None
    witness: Optional[tuple] = None
    reason: Optional[str] = None

    @property
    def safe(self) -> bool:
        return self.kind == "Safe"


def _safety_witness(state: InterlockingState) -> Optional[tuple[MovementAuthority, MovementAuthority]]:
    mas = canonical_mas(state)
    for i, ma1 in enumerate(mas):
        for ma2 in mas[i + 1:]:
            if share(ma1, ma2):
                return (ma1, ma2)
    return None


def _route_condition_witness(plan: SchemePlan, regions_by_route: dict[RouteId, tuple[Region, ...]], state: InterlockingState) -> Optional[tuple]:
    assigned_regions = {region for ma in state for region in ma}
    for rid in sorted(plan.routes):
        if not (assigned_regions & set(regions_by_route[rid])):
            continue
        if is_route_open(state, plan, rid):
            region = min(assigned_regions & set(regions_by_route[rid]))
            return (rid, region)
    return None


def _scan(plan: SchemePlan, space: StateSpace, witness_of: Callable[[InterlockingState], Optional[tuple]]) -> Verdict:
    for state in space.order:  # BFS order: first hit is a shortest counterexample
        witness = witness_of(state)
        if witness is not None:
            return Verdict("Unsafe", counterexample=space.trace_to(state), witness=witness)
    if space.truncated:
        return Verdict(
            "Inconclusive",
            reason=f"state space truncated ({space.stats.state_count} states explored)",
        )
    return Verdict("Safe")


def check_safety(plan: SchemePlan, bound: SearchBound | None = None, space: StateSpace | None = None) -> Verdict:
    """No reachable state assigns two distinct overlapping movement authorities."""
    space = space if space is not None else explore(plan, bound)
    return _scan(plan, space, _safety_witness)


def check_route_condition(plan: SchemePlan, bound: SearchBound | None = None, space: StateSpace | None = None) -> Verdict:
    """No reachable state keeps a route open while one of its regions is assigned."""
    space = space if space is not None else explore(plan, bound)
    catalog = build_catalog(plan)
    return _scan(plan, space, lambda st: _route_condition_witness(plan, catalog.by_route, st))


@dataclass(frozen=True)
class EquivalenceReport:
    agree: bool
    safety: Verdict
    route_condition: Verdict
    inconclusive: bool


def check_lemma_equivalence(plan: SchemePlan, bound: SearchBound | None = None) -> EquivalenceReport:
    """Run both dynamic checks over one untruncated space and compare verdicts."""
    space = explore(plan, bound)
    safety = check_safety(plan, space=space)
    route_cond = check_route_condition(plan, space=space)
    inconclusive = space.truncated and not (safety.kind == "Unsafe" and route_cond.kind == "Unsafe")
    agree = (not inconclusive) and (safety.kind == route_cond.kind)
    return EquivalenceReport(agree=agree, safety=safety, route_condition=route_cond, inconclusive=inconclusive)


def clear_table_mutants(plan: SchemePlan) -> Iterator[tuple[str, SchemePlan]]:
    """One mutant per (route, clear unit) pair with that unit removed.

    Yields ``(label, plan)`` lazily, routes and units in sorted order.
    """
    for rid in sorted(plan.clear):
        for unit in sorted(plan.clear[rid]):
            mutated = dict(plan.clear)
            mutated[rid] = plan.clear[rid] - {unit}
            yield f"{rid}-{unit}", replace(plan, clear=mutated)


# -- JSON report assembly (shared verbatim by CLI --json and the service)


def verdict_to_dict(plan: SchemePlan, verdict: Verdict) -> dict:
    from .semantics import trace_to_dicts

    out: dict = {"verdict": verdict.kind}
    if verdict.kind == "Unsafe":
        assert verdict.counterexample is not None and verdict.witness is not None
        out["counterexample"] = trace_to_dicts(plan, verdict.counterexample)
        if isinstance(verdict.witness[0], str):  # (route id, region)
            rid, region = verdict.witness
            out["witness"] = {"kind": "openRoute", "route": rid, "region": list(region)}
        else:  # pair of overlapping movement authorities
            out["witness"] = {
                "kind": "overlap",
                "mas": [[list(r) for r in ma] for ma in verdict.witness],
            }
    if verdict.kind == "Inconclusive":
        out["reason"] = verdict.reason
    return out


def static_report(plan: SchemePlan, mode: str = "subset") -> dict:
    checks = check_routes_static(plan, mode)
    return {
        "allPass": all(c.passed for c in checks),
        "mode": mode,
        "routes": [
            {"route": c.route_id, "pass": c.passed, "missing": sorted(c.missing)} for c in checks
        ],
    }


def lemma_report(plan: SchemePlan, bound: SearchBound | None = None) -> dict:
    """Equivalence harness over the plan and all its clear-table mutants."""
    instances = [("plan", plan)] + [(f"mutant:{label}", p) for label, p in clear_table_mutants(plan)]
    rows = []
    for label, instance in instances:
        report = check_lemma_equivalence(instance, bound)
        rows.append(
            {
                "instance": label,
                "agree": report.agree,
                "inconclusive": report.inconclusive,
                "safety": report.safety.kind,
                "routeCondition": report.route_condition.kind,
            }
        )
    return {
        "allAgree": all(r["agree"] for r in rows),
        "anyInconclusive": any(r["inconclusive"] for r in rows),
        "instances": rows,
    }


def verify_report(plan: SchemePlan, mode: str, bound: SearchBound | None = None, static_mode: str = "subset") -> dict:
    """The structured verification result used by both the CLI and the service."""
    results: dict = {}
    if mode in ("static", "both"):
        results["static"] = static_report(plan, static_mode)
    if mode in ("explore", "both"):
        space = explore(plan, bound)
        results["explore"] = verdict_to_dict(plan, check_safety(plan, space=space))
        results["explore"]["stats"] = {
            "states": space.stats.state_count,
            "transitions": space.stats.transition_count,
            "truncated": space.truncated,
        }
    if mode == "lemma":
        results["lemma"] = lemma_report(plan, bound)
    return {"plan": plan.name, "mode": mode, "results": results}
