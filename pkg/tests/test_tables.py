from dataclasses import replace

import pytest

from schemeplan.dsl import parse_plan
from schemeplan.model import route_units, validate_plan
from schemeplan.tables import (
    CyclicPathError,
    extract_routes,
    generate_control_table,
    generate_release_table,
    generate_tables,
    validate_tables,
)

from .plangen import random_plan


def test_extract_station_routes(station):
    routes = extract_routes(station)
    by_id = {r.id: route_units(r) for r in routes}
    assert by_id == {
        "RX1": ("LA1", "P1", "PLAT1"),
        "RX2": ("LA1", "P1", "PLAT2"),
        "R1Y": ("P2", "LA2"),
        "R2Y": ("P2", "LA2"),
    }
    # the two P2 routes are distinguished by their entry path
    steps = {r.id: r.steps[0].path.frm for r in routes}
    assert steps["R1Y"] == "c4" and steps["R2Y"] == "c6"


def test_extract_single_linear():
    plan = parse_plan("plan P\nunit linear A c1 c2\nmarker entry E at c1\nmarker exit X at c2\n")
    routes = extract_routes(plan)
    assert len(routes) == 1 and route_units(routes[0]) == ("A",)
    assert routes[0].id == "R1"


def test_extract_tp_b_matches_hand_enumeration(benchmarks):
    routes = {route_units(r) for r in extract_routes(benchmarks["tp_b"])}
    assert routes == {
        ("la1", "la2", "la3", "P1", "bu1"),
        ("la1", "la2", "la3", "P1", "P2", "P3", "la4", "la5"),
        ("lb7", "lb6", "lb5", "lb4", "P4", "lb3", "lb2", "lb1"),
        ("bu2", "P3", "P2", "P4", "lb3", "lb2", "lb1"),
    }


def test_extraction_independent_of_declaration_order(station):
    shuffled = replace(station, units=dict(reversed(list(station.units.items()))), routes={})
    ours = [(r.id, r.steps) for r in extract_routes(shuffled)]
    base = [(r.id, r.steps) for r in extract_routes(replace(station, routes={}))]
    assert ours == base


def test_fresh_ids_in_lexicographic_order(station):
    routes = extract_routes(replace(station, routes={}))
    # numbered over (start connector, unit list): c1 routes first, then c4, c6
    assert [r.id for r in routes] == ["R1", "R2", "R3", "R4"]
    assert route_units(routes[0])[0] == "LA1"


def test_cyclic_plan_reports_start_point():
    src = (
        "plan Loop\n"
        "unit linear L0 c0 c1\n"
        "unit point P stem c1 left c2 right c5\n"
        "unit linear A c2 c3\n"
        "unit linear B c3 c4\n"
        "unit linear C c4 c5\n"
        "marker entry E at c0\n"
    )
    plan = parse_plan(src)
    with pytest.raises(CyclicPathError) as err:
        extract_routes(plan)
    assert any(start == "c0" for start, _ in err.value.cycles)


def test_generated_control_table_matches_station(station):
    routes = extract_routes(station)
    assert generate_control_table(station, routes) == dict(station.clear)


def test_generated_release_table_matches_station(station):
    routes = extract_routes(station)
    generated = generate_release_table(station, routes)
    assert generated == dict(station.release)
    assert [(e.point, e.cleared_by) for e in generated["RX1"]] == [("P1", "P1")]
    assert [(e.point, e.cleared_by) for e in generated["R1Y"]] == [("P2", "LA2")]


def test_route_without_points_has_no_release_entry():
    plan = parse_plan("plan P\nunit linear A c1 c2\nmarker entry E at c1\nmarker exit X at c2\n")
    generated = generate_tables(plan)
    assert generated.release == {}


def test_generated_point_positions_match_station(station):
    generated = generate_tables(replace(station, clear={}, point_positions={}, release={}))
    assert generated.point_positions == station.point_positions


def test_generated_tables_validate(station, benchmarks):
    plans = [replace(station, clear={}, point_positions={}, release={})] + list(benchmarks.values())
    for plan in plans:
        generated = generate_tables(plan)
        assert validate_plan(generated) == []
        assert validate_tables(generated) == []


@pytest.mark.parametrize("seed", range(40))
def test_generated_tables_validate_on_random_plans(seed):
    generated = generate_tables(random_plan(seed))
    assert validate_plan(generated) == []
    assert validate_tables(generated) == []
    for rid, route in generated.routes.items():
        assert frozenset(route_units(route)) <= generated.clear[rid]


def test_offroute_clear_unit_is_warning(station):
    clear = dict(station.clear)
    clear["RX1"] = clear["RX1"] | {"LA2"}  # exists, but not on RX1; LA2 is on other routes
    assert validate_tables(replace(station, clear=clear)) == []
    # a unit on no route at all warns
    lonely = replace(
        station,
        units={**station.units, "SPUR": station.units["LA1"].__class__("SPUR", "z1", "z2")},
        clear={**station.clear, "RX1": station.clear["RX1"] | {"SPUR"}},
    )
    warnings = validate_tables(lonely)
    assert [v.code for v in warnings] == ["warn.clear.unit.offroute"]
    assert validate_plan(lonely) == []  # warning-class only


def test_release_clearedby_off_route_is_error(station):
    release = dict(station.release)
    release["RX1"] = (release["RX1"][0].__class__("P1", "LA2"),)
    violations = validate_tables(replace(station, release=release))
    assert [v.code for v in violations] == ["release.clearedby.not.on.route"]
