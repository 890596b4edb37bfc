"""geoquest: a location-based serious game for light electro-mobility.

Geofenced points of interest trigger topic-tagged quizzes from live GPS
positions; scores land in per-user wallets behind an HTTP API, and a
deterministic trip simulator replays routes against a brute-force
trigger oracle.
"""

from .content import ContentPack, load_content_pack, parse_content_pack
from .engine import Session, start_session
from .geo import GeoPoint, haversine_distance, within_radius
from .storage import Store

__version__ = "0.1.0"

__all__ = [
    "ContentPack",
    "GeoPoint",
    "Session",
    "Store",
    "__version__",
    "haversine_distance",
    "load_content_pack",
    "parse_content_pack",
    "start_session",
    "within_radius",
]
