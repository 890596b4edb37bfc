"""Great-circle geometry on a spherical Earth.

All distances are meters on a sphere of radius 6,371,000 m, which is
accurate to well under a meter at the few-hundred-meter scales the
trigger logic cares about. Functions here are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Tuple

from .errors import ValidationError

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .content import PointOfInterest

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate in decimal degrees.

    Latitude must lie in [-90, +90]; longitude accepts any finite value
    and is normalized into [-180, +180) at construction, so distances
    near the antimeridian come out right.
    """

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValidationError("coordinates must be finite", field="lat/lon")
        if not -90.0 <= self.lat <= 90.0:
            raise ValidationError(
                f"latitude {self.lat} outside [-90, +90]", field="lat"
            )
        if not -180.0 <= self.lon < 180.0:  # keep in-range values bit-exact
            lon = ((self.lon + 180.0) % 360.0) - 180.0
            if lon == 180.0:  # float modulo can land exactly on the open bound
                lon = -180.0
            object.__setattr__(self, "lon", lon)


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters between two points.

    Symmetric in its arguments and exactly zero for identical points.
    """

    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    d_phi = math.radians(b.lat - a.lat)
    d_lambda = math.radians(b.lon - a.lon)

    h = (
        math.sin(d_phi / 2.0) ** 2
        + math.cos(phi1) * math.cos(phi2) * math.sin(d_lambda / 2.0) ** 2
    )
    h = min(1.0, h)  # float rounding can exceed 1 for near-antipodal pairs
    return EARTH_RADIUS_M * 2.0 * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def within_radius(user: GeoPoint, center: GeoPoint, radius_m: float) -> bool:
    """True iff ``user`` is strictly inside the circle around ``center``.

    The boundary is excluded: a point at exactly ``radius_m`` meters is
    outside. Raises ValidationError for a non-positive radius.
    """

    if not radius_m > 0.0:
        raise ValidationError(f"radius must be positive, got {radius_m}", field="radius")
    return haversine_distance(user, center) < radius_m


def nearest_poi(
    user: GeoPoint, pois: Iterable["PointOfInterest"]
) -> Optional[Tuple[str, float]]:
    """Return ``(poi_id, distance_m)`` for the closest POI, or None if empty.

    Equidistant POIs tie-break on the lexicographically smallest id so
    results are deterministic.
    """

    best: Optional[Tuple[float, str]] = None
    for poi in pois:
        d = haversine_distance(user, poi.position)
        key = (d, poi.id)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return best[1], best[0]
