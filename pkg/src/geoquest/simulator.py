"""Deterministic GPS-trace generation and replay against engine or API.

Traces are great-circle interpolations through waypoints at constant
speed, optionally jittered with seeded Gaussian noise in the local
tangent plane. Replay drives a full game session from a trace and
compares the engine's triggers against a brute-force oracle that simply
scans every trace point, so the stateful trigger logic is checked
against a stateless restatement of the rule.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import httpx

from . import engine
from .content import ContentPack, PointOfInterest
from .errors import StorageError, ValidationError
from .geo import EARTH_RADIUS_M, GeoPoint, haversine_distance
from .storage import Store

ANSWER_POLICIES = ("always-correct", "always-first", "seeded-random")


@dataclass(frozen=True)
class TimedPoint:
    point: GeoPoint
    t: float


@dataclass(frozen=True)
class Scenario:
    difficulty: str = "easy"
    answer_policy: str = "always-correct"
    seed: int = 0

    def __post_init__(self):
        if self.answer_policy not in ANSWER_POLICIES:
            raise ValidationError(
                f"answer policy must be one of {ANSWER_POLICIES}, got {self.answer_policy!r}",
                field="answer_policy")


@dataclass
class SimulationReport:
    triggers_fired: list[str] = field(default_factory=list)
    quizzes_completed: int = 0
    total_score: int = 0
    oracle_triggers: set[str] = field(default_factory=set)
    match: bool = False

    def finalize(self) -> "SimulationReport":
        self.match = set(self.triggers_fired) == self.oracle_triggers
        return self

    def to_json(self) -> str:
        """Canonical JSON: identical inputs yield byte-identical reports."""

        payload = {
            "triggers_fired": self.triggers_fired,
            "quizzes_completed": self.quizzes_completed,
            "total_score": self.total_score,
            "oracle_triggers": sorted(self.oracle_triggers),
            "match": self.match,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Trace generation
# ---------------------------------------------------------------------------

def _to_unit(p: GeoPoint) -> tuple[float, float, float]:
    phi = math.radians(p.lat)
    lam = math.radians(p.lon)
    return (math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi))


def _from_unit(v: tuple[float, float, float]) -> GeoPoint:
    x, y, z = v
    return GeoPoint(math.degrees(math.asin(max(-1.0, min(1.0, z)))),
                    math.degrees(math.atan2(y, x)))


def _slerp(a: tuple, b: tuple, fraction: float) -> tuple:
    dot = max(-1.0, min(1.0, a[0] * b[0] + a[1] * b[1] + a[2] * b[2]))
    theta = math.acos(dot)
    if theta < 1e-12:
        return a
    w_a = math.sin((1.0 - fraction) * theta) / math.sin(theta)
    w_b = math.sin(fraction * theta) / math.sin(theta)
    return tuple(w_a * x + w_b * y for x, y in zip(a, b))


def generate_trace(waypoints: Sequence[GeoPoint], speed_mps: float,
                   sample_period_s: float, noise_sigma_m: float = 0.0,
                   seed: int = 0) -> list[TimedPoint]:
    """Sample a constant-speed ride through the waypoints.

    Points are spaced ``speed * period`` meters along the great-circle
    path; the terminal waypoint is always included even when the route
    length is not an exact multiple of that spacing. Noise displaces
    each sample isotropically in the local tangent plane using the
    seeded generator, so a fixed seed reproduces the trace exactly.
    """

    if len(waypoints) < 2:
        raise ValidationError("a route needs at least two waypoints", field="waypoints")
    if speed_mps <= 0:
        raise ValidationError("speed must be positive", field="speed_mps")
    if sample_period_s <= 0:
        raise ValidationError("sample period must be positive", field="sample_period_s")
    if noise_sigma_m < 0:
        raise ValidationError("noise sigma must be >= 0", field="noise_sigma_m")

    legs = []  # (start unit vector, end unit vector, length m), zero legs skipped
    total = 0.0
    for a, b in zip(waypoints, waypoints[1:]):
        length = haversine_distance(a, b)
        if length == 0.0:
            continue
        legs.append((_to_unit(a), _to_unit(b), length))
        total += length
    if not legs:
        raise ValidationError("waypoints describe a zero-length route", field="waypoints")

    def position_at(distance: float) -> GeoPoint:
        remaining = distance
        for start, end, length in legs:
            if remaining <= length:
                return _from_unit(_slerp(start, end, remaining / length))
            remaining -= length
        return _from_unit(legs[-1][1])

    rng = random.Random(seed)
    duration = total / speed_mps
    times = [k * sample_period_s for k in range(int(duration / sample_period_s) + 1)]
    if duration - times[-1] > 1e-6 * sample_period_s:
        times.append(duration)

    trace = []
    for t in times:
        point = position_at(min(t * speed_mps, total))
        if noise_sigma_m > 0:
            east = rng.gauss(0.0, noise_sigma_m)
            north = rng.gauss(0.0, noise_sigma_m)
            lat = point.lat + math.degrees(north / EARTH_RADIUS_M)
            lon = point.lon + math.degrees(
                east / (EARTH_RADIUS_M * math.cos(math.radians(point.lat))))
            point = GeoPoint(lat, lon)
        trace.append(TimedPoint(point, t))
    return trace


# ---------------------------------------------------------------------------
# Oracle and replay
# ---------------------------------------------------------------------------

def oracle_triggers(trace: Sequence[TimedPoint],
                    pois: Sequence[PointOfInterest]) -> set[str]:
    """Brute force: a POI is expected iff any trace point is strictly inside."""

    expected = set()
    for poi in pois:
        for sample in trace:
            if haversine_distance(sample.point, poi.position) < poi.trigger_radius_m:
                expected.add(poi.id)
                break
    return expected


def simulation_credentials(seed: int) -> tuple[str, str, str]:
    """Deterministic (email, username, password) for API-mode replays."""

    return f"sim-{seed}@geoquest.local", f"sim-{seed}", f"sim-secret-{seed:08d}"


def _pick_answer(question, policy: str, rng: random.Random) -> int:
    if policy == "always-correct":
        return question.correct_index
    if policy == "always-first":
        return 0
    return rng.randrange(len(question.options))


def _replay_engine(trace, scenario: Scenario, pack: ContentPack,
                   report: SimulationReport) -> None:
    store = Store(None)
    _, username, _ = simulation_credentials(scenario.seed)
    session = engine.start_session(username, scenario.difficulty,
                                   engine.DEFAULT_VEHICLES[0],
                                   pack.settings.languages[0], pack)
    rng = random.Random(scenario.seed)
    for sample in trace:
        engine.update_position(session, sample.point, sample.t)
        while (event := engine.next_trigger(session)) is not None:
            quiz = engine.begin_quiz(session, event)
            report.triggers_fired.append(event.poi_id)
            for index, question in enumerate(quiz.questions):
                engine.answer_question(quiz, index, _pick_answer(question, scenario.answer_policy, rng))
            result = engine.complete_quiz(session, quiz)
            engine.save_result(username, result, overwrite=True, store=store)
            report.quizzes_completed += 1
            report.total_score += result.score


def _replay_api(trace, scenario: Scenario, pack: ContentPack, api_url: str,
                report: SimulationReport) -> None:
    email, username, password = simulation_credentials(scenario.seed)
    rng = random.Random(scenario.seed)
    quizzes = pack.messages.quizzes

    try:
        with httpx.Client(base_url=api_url, timeout=30.0) as client:
            registered = client.post("/api/register", json={
                "email": email, "username": username, "password": password})
            if registered.status_code not in (201, 422):
                raise StorageError(f"register failed: HTTP {registered.status_code}")
            login = client.post("/api/login", json={
                "identifier": username, "password": password})
            if login.status_code != 200:
                raise StorageError(f"login failed: HTTP {login.status_code}")
            headers = {"Authorization": f"Bearer {login.json()['token']}"}

            opened = client.post("/api/session", headers=headers, json={
                "difficulty": scenario.difficulty,
                "vehicle_id": engine.DEFAULT_VEHICLES[0].id,
                "language": pack.settings.languages[0],
            })
            if opened.status_code != 201:
                raise StorageError(f"session failed: HTTP {opened.status_code}")
            session_id = opened.json()["session_id"]

            def play(view: dict) -> None:
                questionnaire = view["questionnaire"]
                ordered = tuple(q for q in quizzes[questionnaire]
                                if q.difficulty == scenario.difficulty)
                while True:
                    index = view["question_index"]
                    answered = client.post(
                        f"/api/session/{session_id}/quiz/{questionnaire}/answer",
                        headers=headers,
                        json={"question_index": index,
                              "choice_index": _pick_answer(ordered[index],
                                                           scenario.answer_policy, rng)})
                    answered.raise_for_status()
                    data = answered.json()
                    if data["done"]:
                        report.quizzes_completed += 1
                        report.total_score += data["result"]["score"]
                        saved = client.post(f"/api/results/{questionnaire}",
                                            headers=headers, json={"overwrite": True})
                        saved.raise_for_status()
                        return
                    view = {"questionnaire": questionnaire, "question_index": index + 1}

            for sample in trace:
                while True:
                    posted = client.post(
                        f"/api/session/{session_id}/position", headers=headers,
                        json={"lat": sample.point.lat, "lon": sample.point.lon,
                              "t": sample.t})
                    posted.raise_for_status()
                    data = posted.json()
                    report.triggers_fired.extend(
                        trigger["poi_id"] for trigger in data["triggers"])
                    if data["active_quiz"] is None:
                        break
                    play(data["active_quiz"])  # drain deferred quizzes, same point
    except httpx.HTTPError as exc:
        raise StorageError(f"API target unreachable or failing: {exc}") from exc


def replay(trace: Sequence[TimedPoint], scenario: Scenario, pack: ContentPack,
           api_url: Optional[str] = None) -> SimulationReport:
    """Run the scenario over a trace and check triggers against the oracle.

    With ``api_url`` the session is played through the HTTP service;
    otherwise the engine is driven directly. Quizzes are always played
    to completion before the next trace point, so deferral can never
    push a trigger past the end of the trace.
    """

    report = SimulationReport()
    report.oracle_triggers = oracle_triggers(trace, pack.pois)
    if api_url is None:
        _replay_engine(trace, scenario, pack, report)
    else:
        _replay_api(trace, scenario, pack, api_url, report)
    return report.finalize()
