"""Shared test helpers: the independent distance oracle and point builders.

The spherical-law-of-cosines oracle deliberately uses a different
formula than the implementation under test and must stay that way.
"""

from __future__ import annotations

import math

from geoquest.geo import EARTH_RADIUS_M, GeoPoint, haversine_distance

# Bari old town; the box tests sample around this center.
BARI_CENTER = GeoPoint(41.125, 16.866)


def slc_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Spherical law of cosines distance in meters (independent oracle)."""

    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    d_lambda = math.radians(b.lon - a.lon)
    arg = (math.sin(phi1) * math.sin(phi2)
           + math.cos(phi1) * math.cos(phi2) * math.cos(d_lambda))
    return EARTH_RADIUS_M * math.acos(max(-1.0, min(1.0, arg)))


def point_north(center: GeoPoint, meters: float) -> GeoPoint:
    """A point due north of ``center`` by the given arc length."""

    return GeoPoint(center.lat + math.degrees(meters / EARTH_RADIUS_M), center.lon)


def straddle_boundary(center: GeoPoint, radius_m: float) -> tuple[GeoPoint, GeoPoint]:
    """Two points bracketing the radius on the float lattice.

    Returns ``(just_inside, at_or_beyond)``: the computed haversine
    distance of the first is the largest value strictly below
    ``radius_m`` reachable by stepping latitude ulps; the second is the
    smallest value at or beyond it. Both sit within a few nanometers of
    the boundary.
    """

    lat = center.lat + math.degrees(radius_m / EARTH_RADIUS_M)
    while haversine_distance(GeoPoint(lat, center.lon), center) >= radius_m:
        lat = math.nextafter(lat, -math.inf)
    inside_lat = lat
    while haversine_distance(GeoPoint(lat, center.lon), center) < radius_m:
        inside_lat = lat
        lat = math.nextafter(lat, math.inf)
    return GeoPoint(inside_lat, center.lon), GeoPoint(lat, center.lon)


def box_point(rng, center: GeoPoint = BARI_CENTER, half_width_m: float = 25_000.0) -> GeoPoint:
    """A uniform random point inside a square box around ``center``."""

    dlat = math.degrees(half_width_m / EARTH_RADIUS_M)
    dlon = dlat / math.cos(math.radians(center.lat))
    return GeoPoint(center.lat + rng.uniform(-dlat, dlat),
                    center.lon + rng.uniform(-dlon, dlon))
