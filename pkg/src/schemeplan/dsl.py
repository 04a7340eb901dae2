"""Textual scheme-plan DSL: one statement per line, ``#`` comments.

Grammar (whitespace-separated tokens)::

    plan <Name>
    unit linear <id> <cA> <cB>
    unit point <id> stem <c> left <c> right <c>
    marker entry <name> at <connector>
    marker exit <name> at <connector>
    marker boundary at <connector>
    route <id> : <unit>(<cFrom>,<cTo>) <unit>(<cFrom>,<cTo>) ...
    clear <routeId> : <unitId> ...
    release <routeId> : <pointId> by <unitId> [, <pointId> by <unitId>]...
    normal <routeId> : <unitId> ...     # opaque point-position annotation
    reverse <routeId> : <unitId> ...    # opaque point-position annotation

The ``normal``/``reverse`` statements carry the point-position columns of a
printed control table; they round-trip but are never interpreted.  Boundary
markers are unnamed in the text and get deterministic names B1, B2, ... in
line order.  Printing is canonical (sections in fixed order, sorted by
identifier) so a plan prints byte-identically every time.
"""

from __future__ import annotations

import re

from .model import (
    LinearUnit,
    Marker,
    Path,
    PointUnit,
    ReleaseEntry,
    Route,
    SchemePlan,
    UnitPathPair,
    route_units,
    validate_plan,
)

STEP_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\(([A-Za-z][A-Za-z0-9_]*),([A-Za-z][A-Za-z0-9_]*)\)\Z")
IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class PlanParseError(Exception):
    """Parse failure with a 1-based source position."""

    def __init__(self, line: int, column: int, message: str, expected: str | None = None):
        self.line = line
        self.column = column
        self.message = message
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{line}:{column}: {message}{hint}")


def _tokens(text_line: str) -> list[tuple[str, int]]:
    """Tokens of a line with their 1-based column, comments stripped."""
    code = text_line.split("#", 1)[0]
    out = []
    for m in re.finditer(r"\S+", code):
        out.append((m.group(), m.start() + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.name: str | None = None
        self.units: dict[str, LinearUnit | PointUnit] = {}
        self.markers: dict[str, Marker] = {}
        self.routes: dict[str, Route] = {}
        self.clear: dict[str, frozenset[str]] = {}
        self.point_positions: dict[str, dict[str, tuple[str, ...]]] = {}
        self.release: dict[str, tuple[ReleaseEntry, ...]] = {}
        self.decl_lines: dict[str, int] = {}  # violation-location prefix -> line
        self.boundary_count = 0

    def fail(self, line: int, col: int, message: str, expected: str | None = None) -> None:
        raise PlanParseError(line, col, message, expected)

    def ident(self, tok: tuple[str, int], line: int, what: str) -> str:
        text, col = tok
        if not IDENT_RE.match(text):
            self.fail(line, col, f"{what} {text!r} is not a valid identifier", "identifier")
        return text

    def parse(self) -> SchemePlan:
        for lineno, raw in enumerate(self.lines, start=1):
            toks = _tokens(raw)
            if not toks:
                continue
            head, col = toks[0]
            handler = getattr(self, f"_stmt_{head}", None)
            if handler is None:
                self.fail(lineno, col, f"unknown statement {head!r}", "plan/unit/marker/route/clear/release/normal/reverse")
            handler(toks, lineno)
        if self.name is None:
            self.fail(1, 1, "missing plan header", "plan <Name>")
        plan = SchemePlan(
            name=self.name,
            units=self.units,
            markers=self.markers,
            routes=self.routes,
            clear=self.clear,
            point_positions=self.point_positions,
            release=self.release,
        )
        violations = validate_plan(plan)
        if violations:
            first = violations[0]
            line = self._line_for(first.location)
            raise PlanParseError(line, 1, f"semantic error: {first.message}")
        return plan

    def _line_for(self, location: str) -> int:
        probe = location
        while probe:
            if probe in self.decl_lines:
                return self.decl_lines[probe]
            probe = probe.rpartition(":")[0]
        return 1

    def _expect_len(self, toks: list[tuple[str, int]], n: int, lineno: int, usage: str) -> None:
        if len(toks) != n:
            col = toks[-1][1] if len(toks) > n else (toks[-1][1] + len(toks[-1][0]) if toks else 1)
            self.fail(lineno, col, "malformed statement", usage)

    def _stmt_plan(self, toks, lineno) -> None:
        self._expect_len(toks, 2, lineno, "plan <Name>")
        if self.name is not None:
            self.fail(lineno, toks[0][1], "duplicate plan header")
        self.name = self.ident(toks[1], lineno, "plan name")

    def _stmt_unit(self, toks, lineno) -> None:
        if len(toks) < 2:
            self.fail(lineno, toks[0][1], "malformed statement", "unit linear|point ...")
        kind = toks[1][0]
        if kind == "linear":
            self._expect_len(toks, 5, lineno, "unit linear <id> <cA> <cB>")
            uid = self.ident(toks[2], lineno, "unit id")
            unit = LinearUnit(uid, self.ident(toks[3], lineno, "connector"), self.ident(toks[4], lineno, "connector"))
        elif kind == "point":
            self._expect_len(toks, 9, lineno, "unit point <id> stem <c> left <c> right <c>")
            for pos, kw in ((3, "stem"), (5, "left"), (7, "right")):
                if toks[pos][0] != kw:
                    self.fail(lineno, toks[pos][1], f"expected keyword {kw!r}", kw)
            uid = self.ident(toks[2], lineno, "unit id")
            unit = PointUnit(
                uid,
                self.ident(toks[4], lineno, "connector"),
                self.ident(toks[6], lineno, "connector"),
                self.ident(toks[8], lineno, "connector"),
            )
        else:
            self.fail(lineno, toks[1][1], f"unknown unit kind {kind!r}", "linear or point")
        if uid in self.units:
            self.fail(lineno, toks[2][1], f"duplicate unit id {uid}")
        self.units[uid] = unit
        self.decl_lines[f"unit:{uid}"] = lineno

    def _stmt_marker(self, toks, lineno) -> None:
        if len(toks) < 2:
            self.fail(lineno, toks[0][1], "malformed statement", "marker entry|exit|boundary ...")
        kind = toks[1][0]
        if kind in ("entry", "exit"):
            self._expect_len(toks, 5, lineno, f"marker {kind} <name> at <connector>")
            if toks[3][0] != "at":
                self.fail(lineno, toks[3][1], "expected keyword 'at'", "at")
            name = self.ident(toks[2], lineno, "marker name")
            at = self.ident(toks[4], lineno, "connector")
        elif kind == "boundary":
            self._expect_len(toks, 4, lineno, "marker boundary at <connector>")
            if toks[2][0] != "at":
                self.fail(lineno, toks[2][1], "expected keyword 'at'", "at")
            self.boundary_count += 1
            name = f"B{self.boundary_count}"
            at = self.ident(toks[3], lineno, "connector")
        else:
            self.fail(lineno, toks[1][1], f"unknown marker kind {kind!r}", "entry, exit or boundary")
        if name in self.markers:
            self.fail(lineno, toks[2][1], f"duplicate marker name {name}")
        self.markers[name] = Marker(name, kind, at)
        self.decl_lines[f"marker:{name}"] = lineno

    def _split_colon(self, toks, lineno, usage) -> tuple[str, list[tuple[str, int]]]:
        if len(toks) < 3 or toks[2][0] != ":":
            self.fail(lineno, toks[-1][1], "malformed statement", usage)
        head = self.ident(toks[1], lineno, "route id")
        return head, toks[3:]

    def _stmt_route(self, toks, lineno) -> None:
        rid, rest = self._split_colon(toks, lineno, "route <id> : <unit>(<from>,<to>) ...")
        if not rest:
            self.fail(lineno, toks[-1][1] + len(toks[-1][0]), "route needs at least one step", "<unit>(<from>,<to>)")
        steps = []
        for text, col in rest:
            m = STEP_RE.match(text)
            if not m:
                self.fail(lineno, col, f"malformed route step {text!r}", "<unit>(<from>,<to>)")
            steps.append(UnitPathPair(m.group(1), Path(m.group(2), m.group(3))))
        if rid in self.routes:
            self.fail(lineno, toks[1][1], f"duplicate route id {rid}")
        self.routes[rid] = Route(rid, tuple(steps))
        self.decl_lines[f"route:{rid}"] = lineno

    def _stmt_clear(self, toks, lineno) -> None:
        rid, rest = self._split_colon(toks, lineno, "clear <routeId> : <unitId> ...")
        if rid in self.clear:
            self.fail(lineno, toks[1][1], f"duplicate clear entry for {rid}")
        self.clear[rid] = frozenset(self.ident(t, lineno, "unit id") for t in rest)
        self.decl_lines[f"clear:{rid}"] = lineno

    def _positions(self, toks, lineno, column: str) -> None:
        rid, rest = self._split_colon(toks, lineno, f"{column} <routeId> : <unitId> ...")
        entry = self.point_positions.setdefault(rid, {})
        if column in entry:
            self.fail(lineno, toks[1][1], f"duplicate {column} entry for {rid}")
        entry[column] = tuple(self.ident(t, lineno, "unit id") for t in rest)

    def _stmt_normal(self, toks, lineno) -> None:
        self._positions(toks, lineno, "normal")

    def _stmt_reverse(self, toks, lineno) -> None:
        self._positions(toks, lineno, "reverse")

    def _stmt_release(self, toks, lineno) -> None:
        rid, rest = self._split_colon(toks, lineno, "release <routeId> : <pointId> by <unitId>[, ...]")
        if rid in self.release:
            self.fail(lineno, toks[1][1], f"duplicate release entry for {rid}")
        # commas separate point/by/unit triples; they may stick to tokens
        groups: list[list[tuple[str, int]]] = [[]]
        for text, col in rest:
            while "," in text:
                pre, _, text = text.partition(",")
                if pre:
                    groups[-1].append((pre, col))
                groups.append([])
                col += len(pre) + 1
            if text:
                groups[-1].append((text, col))
        entries = []
        for group in groups:
            if len(group) != 3 or group[1][0] != "by":
                at = group[0][1] if group else (rest[0][1] if rest else toks[-1][1])
                self.fail(lineno, at, "malformed release entry", "<pointId> by <unitId>")
            entries.append(
                ReleaseEntry(self.ident(group[0], lineno, "point id"), self.ident(group[2], lineno, "unit id"))
            )
        self.release[rid] = tuple(entries)
        self.decl_lines[f"release:{rid}"] = lineno


def parse_plan(text: str) -> SchemePlan:
    """Parse DSL text; raises :class:`PlanParseError` with an exact position.

    A parsed plan always passes :func:`validate_plan`; structural violations
    surface as semantic parse errors at the offending declaration line.
    """
    return _Parser(text).parse()


def _clear_order(plan: SchemePlan, rid: str, units: frozenset[str]) -> list[str]:
    """Clear units in route order where possible, stragglers alphabetically."""
    order: list[str] = []
    if rid in plan.routes:
        order = [u for u in route_units(plan.routes[rid]) if u in units]
    return order + sorted(units - set(order))


def print_plan(plan: SchemePlan) -> str:
    """Canonical text for a plan; ``parse_plan(print_plan(p))`` equals ``p``."""
    out = [f"plan {plan.name}"]
    for uid in sorted(plan.units):
        unit = plan.units[uid]
        if isinstance(unit, LinearUnit):
            out.append(f"unit linear {uid} {unit.end_a} {unit.end_b}")
        else:
            out.append(f"unit point {uid} stem {unit.stem} left {unit.left} right {unit.right}")
    markers = sorted(plan.markers.values(), key=lambda m: (MARKER_ORDER[m.kind], m.name))
    for m in markers:
        if m.kind == "boundary":
            out.append(f"marker boundary at {m.at}")
        else:
            out.append(f"marker {m.kind} {m.name} at {m.at}")
    for rid in sorted(plan.routes):
        steps = " ".join(f"{s.unit}({s.path.frm},{s.path.to})" for s in plan.routes[rid].steps)
        out.append(f"route {rid} : {steps}")
    for rid in sorted(plan.clear):
        out.append(f"clear {rid} : {' '.join(_clear_order(plan, rid, plan.clear[rid]))}")
    for rid in sorted(plan.point_positions):
        for column in ("normal", "reverse"):
            units = plan.point_positions[rid].get(column)
            if units is not None:
                out.append(f"{column} {rid} : {' '.join(units)}")
    for rid in sorted(plan.release):
        if plan.release[rid]:
            body = ", ".join(f"{e.point} by {e.cleared_by}" for e in plan.release[rid])
            out.append(f"release {rid} : {body}")
    return "\n".join(out) + "\n"


MARKER_ORDER = {"entry": 0, "exit": 1, "boundary": 2}
