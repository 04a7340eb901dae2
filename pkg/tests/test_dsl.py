import pytest

from schemeplan.dsl import PlanParseError, parse_plan, print_plan
from schemeplan.model import plan_connectors, validate_plan
from schemeplan.tables import generate_tables

from .plangen import random_plan


def test_parse_station(station):
    assert station.name == "SimpleStation"
    assert set(station.routes) == {"RX1", "RX2", "R1Y", "R2Y"}
    assert station.clear["RX1"] == frozenset({"LA1", "P1", "PLAT1"})
    assert station.release["R1Y"][0].cleared_by == "LA2"
    assert station.point_positions["RX1"] == {"reverse": ("P1",)}
    assert len(plan_connectors(station)) == 8


def test_header_only_plan():
    plan = parse_plan("plan Empty\n")
    assert plan.name == "Empty" and not plan.units and not plan.routes


def test_degenerate_linear_is_semantic_error():
    src = "plan P\nunit linear LA1 c1 c1\n"
    with pytest.raises(PlanParseError) as err:
        parse_plan(src)
    assert err.value.line == 2
    assert "semantic" in str(err.value)
    assert "LA1" in str(err.value)


def test_round_trip_station(station, station_text):
    printed = print_plan(station)
    assert parse_plan(printed) == station
    # canonical: printing twice is byte-identical
    assert print_plan(parse_plan(printed)) == printed


@pytest.mark.parametrize("seed", range(40))
def test_round_trip_generated(seed):
    plan = generate_tables(random_plan(seed))
    printed = print_plan(plan)
    assert parse_plan(printed) == plan
    assert print_plan(parse_plan(printed)) == printed


def test_unknown_statement_position():
    with pytest.raises(PlanParseError) as err:
        parse_plan("plan P\n  wibble x\n")
    assert (err.value.line, err.value.column) == (2, 3)
    assert err.value.expected


def test_malformed_route_step_position():
    src = "plan P\nunit linear A c1 c2\nroute R1 : A(c1 c2)\n"
    with pytest.raises(PlanParseError) as err:
        parse_plan(src)
    assert err.value.line == 3
    assert err.value.column >= 12


def test_deleting_offending_line_fixes_or_moves_error():
    src = "plan P\nunit linear A c1 c2\nunit linear A c3 c4\n"
    with pytest.raises(PlanParseError) as err:
        parse_plan(src)
    bad_line = err.value.line
    remaining = "\n".join(line for i, line in enumerate(src.splitlines(), 1) if i != bad_line)
    parse_plan(remaining)  # now clean


def test_parser_rejects_what_validation_rejects():
    src = "plan P\nunit linear A c1 c2\nroute R1 : A(c1,c2) B(c2,c3)\nclear R1 : A\n"
    with pytest.raises(PlanParseError) as err:
        parse_plan(src)
    assert "unknown unit" in str(err.value)


def test_comments_and_blanks_ignored():
    src = "# heading\nplan P\n\n   # indented comment\nunit linear A c1 c2  # trailing\n"
    plan = parse_plan(src)
    assert list(plan.units) == ["A"]


def test_release_multi_entry_round_trip():
    src = (
        "plan P\n"
        "unit linear A c0 c1\n"
        "unit point P1 stem c1 left c2 right c9\n"
        "unit linear B c2 c3\n"
        "unit point P2 stem c3 left c4 right c8\n"
        "unit linear C c4 c5\n"
        "route R1 : A(c0,c1) P1(c1,c2) B(c2,c3) P2(c3,c4) C(c4,c5)\n"
        "clear R1 : A P1 B P2 C\n"
        "release R1 : P1 by P1, P2 by P2\n"
    )
    plan = parse_plan(src)
    assert [e.point for e in plan.release["R1"]] == ["P1", "P2"]
    assert parse_plan(print_plan(plan)) == plan


def test_boundary_markers_autonamed(station):
    boundaries = [m for m in station.markers.values() if m.kind == "boundary"]
    assert {m.name for m in boundaries} == {"B1", "B2"}
    assert {m.at for m in boundaries} == {"c4", "c6"}


def test_parsed_plans_always_validate(station):
    assert validate_plan(station) == []
