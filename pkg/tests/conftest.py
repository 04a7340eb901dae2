import pathlib

import pytest

from schemeplan.dsl import parse_plan

PLANS = pathlib.Path(__file__).resolve().parents[1] / "plans"
GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"

# region values of the simple station, shared across many tests
RG_HEAD = ("LA1", "P1")
RG_P1 = ("PLAT1",)
RG_P2 = ("PLAT2",)
RG_EXIT = ("P2", "LA2")


def plan_path(name: str) -> pathlib.Path:
    return PLANS / name


@pytest.fixture(scope="session")
def station_text() -> str:
    return plan_path("station.plan").read_text()


@pytest.fixture(scope="session")
def station(station_text):
    return parse_plan(station_text)


@pytest.fixture(scope="session")
def benchmarks():
    return {name: parse_plan(plan_path(f"{name}.plan").read_text()) for name in ("tp_a", "tp_b", "tp_c", "tp_d")}
