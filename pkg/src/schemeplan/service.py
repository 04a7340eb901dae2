"""HTTP/JSON API for plan storage, table generation, verification and
stepwise simulation sessions.

Plans are stored as wire-format documents in a directory keyed by id, with
optimistic concurrency through a version counter.  Simulation sessions live
in memory, are single-writer, and expire after a configurable idle period.
All endpoints sit under ``/v1``; verification responses are byte-identical
to the CLI's ``--json`` output.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Query, Response
from fastapi.responses import JSONResponse

from .model import SchemePlan, validate_plan
from .regions import ReleaseNotOnRoute, build_catalog
from .semantics import (
    Event,
    EventNotEnabled,
    Extend,
    InterlockingState,
    Reduce,
    apply_event,
    canonical_mas,
    enabled_events,
    events_to_dicts,
    initial_state,
    state_to_lists,
)
from .tables import CyclicPathError, generate_tables
from .verify import SearchBound, verify_report
from .wire import WireFormatError, from_wire, to_wire, violation_to_dict

DEFAULT_SESSION_TTL = 3600.0


def _json(doc: dict, status: int = 200) -> Response:
    # stable rendering shared with the CLI so verdicts compare byte-for-byte
    return Response(content=json.dumps(doc, indent=2, sort_keys=True), status_code=status, media_type="application/json")


def _error(status: int, message: str, **extra) -> Response:
    return _json({"error": message, **extra}, status=status)


class PlanStore:
    """Directory-backed store of wire documents with version counters."""

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, plan_id: str) -> str:
        return os.path.join(self.root, f"{plan_id}.json")

    def load(self, plan_id: str) -> dict | None:
        try:
            with open(self._path(plan_id), encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None

    def save(self, plan_id: str, version: int, doc: dict) -> None:
        record = {"id": plan_id, "version": version, "plan": doc}
        tmp = self._path(plan_id) + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
        os.replace(tmp, self._path(plan_id))

    def delete(self, plan_id: str) -> bool:
        try:
            os.remove(self._path(plan_id))
            return True
        except FileNotFoundError:
            return False

    def create(self, doc: dict) -> tuple[str, int]:
        with self._lock:
            plan_id = uuid.uuid4().hex[:12]
            while os.path.exists(self._path(plan_id)):
                plan_id = uuid.uuid4().hex[:12]
            self.save(plan_id, 1, doc)
            return plan_id, 1

    def ids(self) -> list[str]:
        return sorted(p[:-5] for p in os.listdir(self.root) if p.endswith(".json"))


@dataclass
class Session:
    plan_id: str
    plan: SchemePlan
    states: list[InterlockingState] = field(default_factory=lambda: [initial_state()])
    events: list[Event] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)

    @property
    def state(self) -> InterlockingState:
        return self.states[-1]


def _event_from_dict(state: InterlockingState, body: dict) -> Event:
    mas = canonical_mas(state)
    etype = body.get("type")
    if etype == "extend":
        frm_idx = body.get("from")
        route = body.get("route")
        if not isinstance(route, str):
            raise EventNotEnabled("extend event needs a route id")
        if frm_idx is None:
            return Extend((), route)
        if not isinstance(frm_idx, int) or not 0 <= frm_idx < len(mas):
            raise EventNotEnabled(f"no movement authority at index {frm_idx}")
        return Extend(mas[frm_idx], route)
    if etype == "reduce":
        idx = body.get("ma")
        if not isinstance(idx, int) or not 0 <= idx < len(mas):
            raise EventNotEnabled(f"no movement authority at index {idx}")
        return Reduce(mas[idx])
    raise EventNotEnabled(f"unknown event type {etype!r}")


def create_app(data_dir: str | None = None, session_ttl: float = DEFAULT_SESSION_TTL) -> FastAPI:
    store = PlanStore(data_dir or tempfile.mkdtemp(prefix="schemeplan-"))
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()
    write_locks: dict[str, threading.Lock] = {}

    app = FastAPI(title="schemeplan service")
    app.state.store = store
    app.state.sessions = sessions

    def plan_lock(plan_id: str) -> threading.Lock:
        with sessions_lock:
            return write_locks.setdefault(plan_id, threading.Lock())

    def expire_sessions() -> None:
        now = time.monotonic()
        with sessions_lock:
            dead = [sid for sid, s in sessions.items() if now - s.last_access > session_ttl]
            for sid in dead:
                del sessions[sid]

    def parse_body(doc) -> SchemePlan | Response:
        try:
            return from_wire(doc)
        except WireFormatError as exc:
            return _error(400, str(exc), path=exc.path)

    def load_valid_plan(plan_id: str) -> tuple[dict, SchemePlan] | Response:
        record = store.load(plan_id)
        if record is None:
            return _error(404, f"no plan {plan_id}")
        plan = from_wire(record["plan"])
        violations = validate_plan(plan)
        if violations:
            return _error(
                422,
                "plan is not valid",
                violations=[violation_to_dict(v) for v in violations],
            )
        return record, plan

    @app.get("/healthz")
    def healthz():
        return JSONResponse({"status": "ok"})

    @app.get("/v1/plans")
    def list_plans():
        return _json({"plans": store.ids()})

    @app.post("/v1/plans")
    def create_plan(doc: dict = Body(...), force: bool = Query(False)):
        plan = parse_body(doc)
        if isinstance(plan, Response):
            return plan
        violations = validate_plan(plan)
        if violations and not force:
            return _error(422, "plan is not valid", violations=[violation_to_dict(v) for v in violations])
        plan_id, version = store.create(to_wire(plan))
        return _json(
            {"id": plan_id, "version": version, "violations": [violation_to_dict(v) for v in violations]},
            status=201,
        )

    @app.get("/v1/plans/{plan_id}")
    def get_plan(plan_id: str):
        record = store.load(plan_id)
        if record is None:
            return _error(404, f"no plan {plan_id}")
        return _json(record)

    @app.put("/v1/plans/{plan_id}")
    def put_plan(plan_id: str, doc: dict = Body(...), force: bool = Query(False)):
        with plan_lock(plan_id):
            record = store.load(plan_id)
            if record is None:
                return _error(404, f"no plan {plan_id}")
            body = dict(doc)
            version = body.pop("version", None)
            if version != record["version"]:
                return _error(409, f"version mismatch: store has {record['version']}, request sent {version}")
            plan = parse_body(body.get("plan", body))
            if isinstance(plan, Response):
                return plan
            violations = validate_plan(plan)
            if violations and not force:
                return _error(422, "plan is not valid", violations=[violation_to_dict(v) for v in violations])
            new_version = record["version"] + 1
            store.save(plan_id, new_version, to_wire(plan))
            return _json(
                {"id": plan_id, "version": new_version, "violations": [violation_to_dict(v) for v in violations]}
            )

    @app.delete("/v1/plans/{plan_id}")
    def delete_plan(plan_id: str):
        if not store.delete(plan_id):
            return _error(404, f"no plan {plan_id}")
        return Response(status_code=204)

    @app.post("/v1/plans/{plan_id}/tables:generate")
    def tables_generate(plan_id: str):
        with plan_lock(plan_id):
            loaded = load_valid_plan(plan_id)
            if isinstance(loaded, Response):
                return loaded
            record, plan = loaded
            try:
                generated = generate_tables(plan)
            except CyclicPathError as exc:
                return _error(422, str(exc))
            new_version = record["version"] + 1
            store.save(plan_id, new_version, to_wire(generated))
            return _json({"id": plan_id, "version": new_version, "plan": to_wire(generated)})

    @app.post("/v1/plans/{plan_id}/verify")
    def verify_plan(plan_id: str, body: dict = Body(default={})):
        loaded = load_valid_plan(plan_id)
        if isinstance(loaded, Response):
            return loaded
        _, plan = loaded
        mode = body.get("mode", "both")
        if mode not in ("static", "explore", "both", "lemma"):
            return _error(400, f"unknown mode {mode!r}")
        bound = SearchBound(max_total_regions=body.get("bound"))
        return _json(verify_report(plan, mode, bound))

    @app.get("/v1/plans/{plan_id}/regions")
    def plan_regions(plan_id: str):
        loaded = load_valid_plan(plan_id)
        if isinstance(loaded, Response):
            return loaded
        _, plan = loaded
        try:
            catalog = build_catalog(plan)
        except ReleaseNotOnRoute as exc:
            return _error(422, str(exc))
        return _json(
            {
                "plan": plan.name,
                "regions": [{"name": name, "units": list(region)} for region, name in catalog.names.items()],
                "byRoute": {rid: [catalog.names[r] for r in regs] for rid, regs in catalog.by_route.items()},
            }
        )

    def session_doc(sid: str, session: Session) -> dict:
        state = session.state
        return {
            "session": sid,
            "plan": session.plan_id,
            "step": len(session.events),
            "state": state_to_lists(state),
            "enabledEvents": events_to_dicts(state, enabled_events(state, session.plan)),
        }

    @app.post("/v1/plans/{plan_id}/sim")
    def create_session(plan_id: str):
        expire_sessions()
        loaded = load_valid_plan(plan_id)
        if isinstance(loaded, Response):
            return loaded
        _, plan = loaded
        sid = uuid.uuid4().hex[:12]
        with sessions_lock:
            sessions[sid] = Session(plan_id=plan_id, plan=plan)
        return _json(session_doc(sid, sessions[sid]), status=201)

    def get_session(sid: str) -> Session | Response:
        expire_sessions()
        with sessions_lock:
            session = sessions.get(sid)
        if session is None:
            return _error(404, f"no session {sid}")
        session.last_access = time.monotonic()
        return session

    @app.get("/v1/plans/{plan_id}/sim/{sid}")
    def read_session(plan_id: str, sid: str):
        session = get_session(sid)
        if isinstance(session, Response):
            return session
        return _json(session_doc(sid, session))

    @app.post("/v1/plans/{plan_id}/sim/{sid}/step")
    def step_session(plan_id: str, sid: str, body: dict = Body(...)):
        session = get_session(sid)
        if isinstance(session, Response):
            return session
        if not session.lock.acquire(blocking=False):
            return _error(409, "session is busy")
        try:
            try:
                event = _event_from_dict(session.state, body.get("event", {}))
                nxt = apply_event(session.state, session.plan, event)
            except EventNotEnabled as exc:
                return _error(409, f"event not enabled: {exc}")
            session.states.append(nxt)
            session.events.append(event)
            return _json(session_doc(sid, session))
        finally:
            session.lock.release()

    @app.post("/v1/plans/{plan_id}/sim/{sid}/undo")
    def undo_session(plan_id: str, sid: str):
        session = get_session(sid)
        if isinstance(session, Response):
            return session
        if not session.lock.acquire(blocking=False):
            return _error(409, "session is busy")
        try:
            if not session.events:
                return _error(409, "nothing to undo")
            session.states.pop()
            session.events.pop()
            return _json(session_doc(sid, session))
        finally:
            session.lock.release()

    @app.get("/v1/plans/{plan_id}/sim/{sid}/log")
    def session_log(plan_id: str, sid: str):
        session = get_session(sid)
        if isinstance(session, Response):
            return session
        log = []
        for state, event in zip(session.states, session.events):
            log.extend(events_to_dicts(state, [event]))
        return _json({"session": sid, "events": log})

    return app
