#!/usr/bin/env python3
"""Verify every plan in plans/ and print a result table.

Topology-only plans get their tables generated first.  Reports route and
region counts, explored state-space size, and the three verdicts (static,
safety, route condition) with wall-clock times.
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from schemeplan.dsl import parse_plan
from schemeplan.regions import build_catalog
from schemeplan.tables import generate_tables
from schemeplan.verify import check_route_condition, check_routes_static, check_safety, explore

PLANS = pathlib.Path(__file__).resolve().parents[1] / "plans"


def main() -> int:
    rows = []
    for path in sorted(PLANS.glob("*.plan")):
        plan = parse_plan(path.read_text())
        if not plan.routes:
            plan = generate_tables(plan)
        static_ok = all(c.passed for c in check_routes_static(plan))
        t0 = time.perf_counter()
        space = explore(plan)
        elapsed = time.perf_counter() - t0
        safety = check_safety(plan, space=space)
        route_cond = check_route_condition(plan, space=space)
        rows.append(
            (
                path.stem,
                len(plan.routes),
                len(build_catalog(plan).names),
                space.stats.state_count,
                "yes" if static_ok else "NO",
                safety.kind,
                route_cond.kind,
                f"{elapsed:.3f}s",
            )
        )
    header = ("plan", "routes", "regions", "states", "static", "safety", "route-cond", "explore")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    for row in [header] + rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(row, widths)))
    return 0 if all(r[5] == "Safe" for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
