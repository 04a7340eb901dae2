from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schemeplan.model import (
    LinearUnit,
    Marker,
    Path,
    PointUnit,
    Route,
    SchemePlan,
    UnitPathPair,
    legal_paths,
    plan_connectors,
    route_units,
    validate_plan,
)

from .plangen import random_plan


def test_station_plan_is_valid(station):
    assert validate_plan(station) == []
    assert len(station.units) == 6
    assert len(plan_connectors(station)) == 8
    assert len(station.routes) == 4


def test_empty_plan_is_valid():
    assert validate_plan(SchemePlan(name="Empty")) == []


def test_chain_violation_location(station):
    broken_steps = list(station.routes["RX1"].steps)
    broken_steps[1] = UnitPathPair("P1", Path("c3", "c2"))
    routes = dict(station.routes)
    routes["RX1"] = Route("RX1", tuple(broken_steps))
    violations = validate_plan(replace(station, routes=routes))
    assert {v.code for v in violations} == {"route.chain"}  # broken on both sides
    assert violations[0].location == "route:RX1:step:2"


def test_legal_paths_linear():
    unit = LinearUnit("LA1", "c1", "c2")
    assert legal_paths(unit) == {Path("c1", "c2"), Path("c2", "c1")}


def test_legal_paths_point_never_leg_to_leg():
    unit = PointUnit("P1", "c2", "c3", "c5")
    paths = legal_paths(unit)
    assert len(paths) == 4
    assert Path("c3", "c5") not in paths and Path("c5", "c3") not in paths
    assert all("c2" in (p.frm, p.to) for p in paths)


@given(st.sampled_from(["linear", "point"]), st.permutations(["x", "y", "z"]))
def test_legal_paths_closed_under_reversal(kind, conns):
    unit = LinearUnit("u", conns[0], conns[1]) if kind == "linear" else PointUnit("u", *conns)
    paths = legal_paths(unit)
    assert {Path(p.to, p.frm) for p in paths} == paths


def test_degenerate_units_rejected():
    plan = SchemePlan(name="Bad", units={"L": LinearUnit("L", "c1", "c1"), "P": PointUnit("P", "a", "a", "b")})
    codes = [v.code for v in validate_plan(plan)]
    assert codes.count("unit.connectors.distinct") == 2


def test_route_units(station):
    assert route_units(station.routes["RX1"]) == ("LA1", "P1", "PLAT1")
    assert route_units(station.routes["R1Y"]) == ("P2", "LA2")
    single = Route("R", (UnitPathPair("LA1", Path("c1", "c2")),))
    assert route_units(single) == ("LA1",)


def test_connector_degree_capped():
    units = {
        "A": LinearUnit("A", "c1", "cx"),
        "B": LinearUnit("B", "c2", "cx"),
        "C": LinearUnit("C", "c3", "cx"),
    }
    violations = validate_plan(SchemePlan(name="Tri", units=units))
    assert any(v.code == "connector.degree" and "cx" in v.message for v in violations)


def test_entry_marker_must_attach_single_unit(station):
    markers = dict(station.markers)
    markers["Z"] = Marker("Z", "entry", "c2")  # c2 joins LA1 and P1
    violations = validate_plan(replace(station, markers=markers))
    assert [v.code for v in violations] == ["marker.attach"]


def test_missing_clear_entry_flagged(station):
    clear = dict(station.clear)
    del clear["RX1"]
    violations = validate_plan(replace(station, clear=clear))
    assert [v.code for v in violations] == ["clear.missing.route"]


def test_release_order_flagged(station):
    release = dict(station.release)
    release["RX1"] = (station.release["RX1"][0], station.release["R1Y"][0])
    violations = validate_plan(replace(station, release=release))
    codes = {v.code for v in violations}
    assert "release.point.not.on.route" in codes and "release.clearedby.not.on.route" in codes


def test_release_out_of_route_order_flagged():
    from schemeplan.model import ReleaseEntry
    from schemeplan.dsl import parse_plan

    src = (
        "plan P\n"
        "unit linear A c0 c1\n"
        "unit point P1 stem c1 left c2 right c9\n"
        "unit linear B c2 c3\n"
        "unit point P2 stem c3 left c4 right c8\n"
        "unit linear C c4 c5\n"
        "route R1 : A(c0,c1) P1(c1,c2) B(c2,c3) P2(c3,c4) C(c4,c5)\n"
        "clear R1 : A P1 B P2 C\n"
    )
    plan = parse_plan(src)
    disordered = replace(plan, release={"R1": (ReleaseEntry("P1", "C"), ReleaseEntry("P2", "P2"))})
    assert "release.order" in {v.code for v in validate_plan(disordered)}
    ordered = replace(plan, release={"R1": (ReleaseEntry("P1", "P1"), ReleaseEntry("P2", "P2"))})
    assert validate_plan(ordered) == []


def test_validation_is_order_stable(station):
    units_rev = dict(reversed(list(station.units.items())))
    shuffled = replace(station, units=units_rev)
    assert validate_plan(shuffled) == validate_plan(station)


@pytest.mark.parametrize("seed", range(25))
def test_generated_plans_validate(seed):
    assert validate_plan(random_plan(seed)) == []
