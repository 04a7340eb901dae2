"""Region decomposition of routes.

A region is the stretch of a route between release points: the granularity
at which track is reserved by a movement authority and handed back.  Regions
are plain tuples of unit ids so that value equality makes regions shared
between routes (the common prefix of two diverging routes is one region).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import RouteId, SchemePlan, UnitId, route_units

Region = tuple[UnitId, ...]


class ReleaseNotOnRoute(ValueError):
    """Release units must be a duplicate-free subsequence of the route."""


def split_regions(units: list[UnitId] | tuple[UnitId, ...], release_points: list[UnitId] | tuple[UnitId, ...]) -> list[Region]:
    """Cut ``units`` after each release unit, dropping empty fragments.

    With no release points the whole list is one region.  Otherwise the first
    fragment runs up to and including the first release unit and the rest is
    split recursively.  A release unit in final position would leave an empty
    tail, which is dropped.
    """
    units = list(units)
    release = list(release_points)
    idx = 0
    for r in release:
        try:
            idx = units.index(r, idx)
        except ValueError:
            raise ReleaseNotOnRoute(f"release unit {r} does not occur (in order) on the route") from None
        idx += 1
    if len(set(release)) != len(release):
        raise ReleaseNotOnRoute("release units must be distinct")

    def rec(us: list[UnitId], rs: list[UnitId]) -> list[Region]:
        if not us:
            return []
        if not rs:
            return [tuple(us)]
        k = us.index(rs[0]) + 1
        return [tuple(us[:k])] + rec(us[k:], rs[1:])

    return rec(units, release)


def regions_of_route(plan: SchemePlan, route_id: RouteId) -> list[Region]:
    """Regions of one route: its unit list split at the release-table units."""
    route = plan.routes[route_id]
    release = [entry.cleared_by for entry in plan.release.get(route_id, ())]
    return split_regions(route_units(route), release)


@dataclass(frozen=True)
class RegionCatalog:
    """Display names for the distinct regions of a plan.

    Numbering is deterministic: routes in id order, regions in route
    position order, first appearance wins.
    """

    names: dict[Region, str]
    by_route: dict[RouteId, tuple[Region, ...]]

    def name_of(self, region: Region) -> str:
        return self.names[region]

    @property
    def regions(self) -> list[Region]:
        return list(self.names)


def build_catalog(plan: SchemePlan) -> RegionCatalog:
    names: dict[Region, str] = {}
    by_route: dict[RouteId, tuple[Region, ...]] = {}
    for rid in sorted(plan.routes):
        regs = tuple(regions_of_route(plan, rid))
        by_route[rid] = regs
        for region in regs:
            if region not in names:
                names[region] = f"RG{len(names) + 1}"
    return RegionCatalog(names=names, by_route=by_route)
