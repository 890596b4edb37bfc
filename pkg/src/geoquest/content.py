"""Content packs: the four XML documents that define a city's game.

A pack joins geometry (``Geolocation.xml``), game semantics
(``LocationList.xml``), customization (``GameSettings.xml``) and quiz
material (``MessagesList.xml``) into one immutable :class:`ContentPack`.
Parsing never stops at the first problem: every violation is collected
into a :class:`ValidationReport` so authors can fix a pack in one pass.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Optional, Sequence

from .errors import ValidationError
from .geo import GeoPoint

GEOLOCATION_DOC = "Geolocation.xml"
LOCATION_LIST_DOC = "LocationList.xml"
GAME_SETTINGS_DOC = "GameSettings.xml"
MESSAGES_DOC = "MessagesList.xml"
PACK_DOCUMENTS = (GEOLOCATION_DOC, LOCATION_LIST_DOC, GAME_SETTINGS_DOC, MESSAGES_DOC)

DIFFICULTIES = ("easy", "hard")
ACHIEVEMENT_KINDS = ("total_points", "quizzes_completed", "topic_points")

DEFAULT_TRIGGER_RADIUS_M = 200.0
DEFAULT_POINTS_PER_QUESTION = {"easy": 10, "hard": 20}


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointOfInterest:
    """A geofenced city location carrying a quiz, a topic, and points."""

    id: str
    name: str
    position: GeoPoint
    trigger_radius_m: float
    message_id: str
    topic: str
    points_per_question: Mapping[str, int]


@dataclass(frozen=True)
class Achievement:
    """A one-time bonus granted when a play-total crosses a threshold."""

    id: str
    description: Mapping[str, str]
    kind: str  # one of ACHIEVEMENT_KINDS
    threshold: int
    incentive_points: int
    topic: Optional[str] = None  # required when kind == "topic_points"


@dataclass(frozen=True)
class GameSettings:
    languages: tuple[str, ...]
    topics: tuple[str, ...]
    achievements: tuple[Achievement, ...]


@dataclass(frozen=True)
class QuizQuestion:
    id: str
    text: Mapping[str, str]
    options: tuple[Mapping[str, str], ...]
    correct_index: int
    difficulty: str
    topic: str


@dataclass(frozen=True)
class EndMessageBand:
    """One closing-message band: applies from ``min_fraction`` upward."""

    min_fraction: float
    text: Mapping[str, str]


DEFAULT_END_BANDS = (
    EndMessageBand(0.0, {"en": "Keep exploring and try again!", "it": "Continua a esplorare e riprova!"}),
    EndMessageBand(0.5, {"en": "Well done, you know this place.", "it": "Ben fatto, conosci questo posto."}),
    EndMessageBand(1.0, {"en": "Perfect score!", "it": "Punteggio perfetto!"}),
)


@dataclass(frozen=True)
class MessageCatalog:
    """Quizzes and end-of-quiz messages, keyed by message id."""

    quizzes: Mapping[str, tuple[QuizQuestion, ...]]
    end_messages: Mapping[str, tuple[EndMessageBand, ...]]

    def bands_for(self, message_id: str) -> tuple[EndMessageBand, ...]:
        return self.end_messages.get(message_id, DEFAULT_END_BANDS)


@dataclass(frozen=True)
class ParkingSpot:
    id: str
    position: GeoPoint


@dataclass(frozen=True)
class ContentPack:
    pois: tuple[PointOfInterest, ...]
    settings: GameSettings
    messages: MessageCatalog
    parking_spots: tuple[ParkingSpot, ...]

    @property
    def questionnaires(self) -> tuple[str, ...]:
        """Quiz ids in messages-document order; the canonical result order."""
        return tuple(self.messages.quizzes.keys())

    def poi_for_questionnaire(self, message_id: str) -> Optional[PointOfInterest]:
        for poi in self.pois:
            if poi.message_id == message_id:
                return poi
        return None


# ---------------------------------------------------------------------------
# Validation reporting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    document: str
    path: str
    rule: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    def add(self, document: str, path: str, rule: str, message: str) -> None:
        self.issues.append(ValidationIssue(document, path, rule, message))

    def extend(self, other: "ValidationReport") -> None:
        self.issues.extend(other.issues)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __len__(self) -> int:
        return len(self.issues)

    def __iter__(self) -> Iterator[ValidationIssue]:
        return iter(self.issues)


class PackParseError(Exception):
    """A document is not well-formed XML."""

    def __init__(self, document: str, line: int, column: int, detail: str):
        super().__init__(f"{document}: malformed XML at line {line}, column {column}: {detail}")
        self.document = document
        self.line = line
        self.column = column


class PackValidationError(Exception):
    """The documents parsed but violate pack rules; see ``report``."""

    def __init__(self, report: ValidationReport):
        lines = [f"{i.document} {i.path}: [{i.rule}] {i.message}" for i in report]
        super().__init__("invalid content pack:\n" + "\n".join(lines))
        self.report = report


# ---------------------------------------------------------------------------
# Localization
# ---------------------------------------------------------------------------

def localize(text: Mapping[str, str], lang: str, settings: GameSettings) -> str:
    """Pick the ``lang`` variant of a localized string.

    Falls back to the pack's first declared language when the variant is
    missing, then to any available variant. Asking for an undeclared
    language is a caller bug and raises.
    """

    if lang not in settings.languages:
        raise ValidationError(f"language {lang!r} not declared in pack settings", field="language")
    if lang in text:
        return text[lang]
    if settings.languages and settings.languages[0] in text:
        return text[settings.languages[0]]
    return next(iter(text.values()), "")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _parse_xml(document: str, text: str) -> ET.Element:
    try:
        return ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise PackParseError(document, line, column, exc.msg.split(":")[0]) from exc


def _attr(elem: ET.Element, name: str, document: str, path: str,
          report: ValidationReport) -> Optional[str]:
    value = elem.get(name)
    if value is None:
        report.add(document, path, "missing-attribute", f"required attribute {name!r} is missing")
    return value


def _number(raw: Optional[str], kind, name: str, document: str, path: str,
            report: ValidationReport):
    if raw is None:
        return None
    try:
        return kind(raw)
    except ValueError:
        report.add(document, path, "bad-number", f"attribute {name}={raw!r} is not a valid number")
        return None


def _localized_texts(elem: ET.Element, document: str, path: str,
                     report: ValidationReport) -> dict[str, str]:
    texts: dict[str, str] = {}
    for t in elem.findall("t"):
        lang = t.get("lang")
        if lang is None:
            report.add(document, path, "missing-attribute", "t element without lang attribute")
            continue
        texts[lang] = t.text or ""
    return texts


def _parse_geolocation(text: str, report: ValidationReport):
    """Geometry: POIs (id, name, position, radius, message id) and parking."""

    root = _parse_xml(GEOLOCATION_DOC, text)
    pois: list[dict] = []
    parking: list[ParkingSpot] = []
    ghost_ids: set[str] = set()  # ids of POIs skipped for structural reasons

    for index, elem in enumerate(root.findall("poi")):
        path = f"poi[{elem.get('id', f'#{index}')}]"
        before = len(report)
        poi_id = _attr(elem, "id", GEOLOCATION_DOC, path, report)
        name = _attr(elem, "name", GEOLOCATION_DOC, path, report)
        lat = _number(_attr(elem, "lat", GEOLOCATION_DOC, path, report), float, "lat",
                      GEOLOCATION_DOC, path, report)
        lon = _number(_attr(elem, "lon", GEOLOCATION_DOC, path, report), float, "lon",
                      GEOLOCATION_DOC, path, report)
        radius = _number(elem.get("trigger_m", str(DEFAULT_TRIGGER_RADIUS_M)), float, "trigger_m",
                         GEOLOCATION_DOC, path, report)
        msg = _attr(elem, "msg", GEOLOCATION_DOC, path, report)
        position = None
        if lat is not None and lon is not None:
            try:
                position = GeoPoint(lat, lon)
            except ValidationError as exc:
                report.add(GEOLOCATION_DOC, path, "invalid-coordinate", exc.message)
        if len(report) > before or position is None:
            if poi_id is not None:
                ghost_ids.add(poi_id)
            continue
        pois.append({"id": poi_id, "name": name, "position": position,
                     "trigger_radius_m": radius, "message_id": msg})

    for index, elem in enumerate(root.findall("parking")):
        path = f"parking[{elem.get('id', f'#{index}')}]"
        before = len(report)
        spot_id = _attr(elem, "id", GEOLOCATION_DOC, path, report)
        lat = _number(_attr(elem, "lat", GEOLOCATION_DOC, path, report), float, "lat",
                      GEOLOCATION_DOC, path, report)
        lon = _number(_attr(elem, "lon", GEOLOCATION_DOC, path, report), float, "lon",
                      GEOLOCATION_DOC, path, report)
        if len(report) > before:
            continue
        try:
            parking.append(ParkingSpot(spot_id, GeoPoint(lat, lon)))
        except ValidationError as exc:
            report.add(GEOLOCATION_DOC, path, "invalid-coordinate", exc.message)

    return pois, parking, ghost_ids


def _parse_location_list(text: str, report: ValidationReport):
    """Game semantics per POI: topic and per-difficulty points, joined on id."""

    root = _parse_xml(LOCATION_LIST_DOC, text)
    by_ref: dict[str, dict] = {}
    ghost_refs: set[str] = set()  # refs whose loc entry was skipped structurally

    for index, elem in enumerate(root.findall("loc")):
        path = f"loc[{elem.get('ref', f'#{index}')}]"
        before = len(report)
        ref = _attr(elem, "ref", LOCATION_LIST_DOC, path, report)
        topic = _attr(elem, "topic", LOCATION_LIST_DOC, path, report)
        easy = _number(elem.get("easy_pts", str(DEFAULT_POINTS_PER_QUESTION["easy"])), int,
                       "easy_pts", LOCATION_LIST_DOC, path, report)
        hard = _number(elem.get("hard_pts", str(DEFAULT_POINTS_PER_QUESTION["hard"])), int,
                       "hard_pts", LOCATION_LIST_DOC, path, report)
        if len(report) > before:
            if ref is not None:
                ghost_refs.add(ref)
            continue
        if ref in by_ref:
            report.add(LOCATION_LIST_DOC, path, "duplicate-loc-ref",
                       f"ref {ref!r} appears more than once")
            continue
        by_ref[ref] = {"topic": topic, "points": {"easy": easy, "hard": hard}}

    return by_ref, ghost_refs


def _parse_settings(text: str, report: ValidationReport) -> GameSettings:
    root = _parse_xml(GAME_SETTINGS_DOC, text)

    languages = []
    languages_elem = root.find("languages")
    for index, elem in enumerate(languages_elem.findall("lang") if languages_elem is not None else ()):
        code = _attr(elem, "code", GAME_SETTINGS_DOC, f"lang[#{index}]", report)
        if code is not None:
            languages.append(code)

    topics = []
    topics_elem = root.find("topics")
    for index, elem in enumerate(topics_elem.findall("topic") if topics_elem is not None else ()):
        topic_id = _attr(elem, "id", GAME_SETTINGS_DOC, f"topic[#{index}]", report)
        if topic_id is not None:
            topics.append(topic_id)

    achievements = []
    ach_elem = root.find("achievements")
    for index, elem in enumerate(ach_elem.findall("ach") if ach_elem is not None else ()):
        path = f"ach[{elem.get('id', f'#{index}')}]"
        before = len(report)
        ach_id = _attr(elem, "id", GAME_SETTINGS_DOC, path, report)
        kind = _attr(elem, "kind", GAME_SETTINGS_DOC, path, report)
        threshold = _number(_attr(elem, "threshold", GAME_SETTINGS_DOC, path, report), int,
                            "threshold", GAME_SETTINGS_DOC, path, report)
        bonus = _number(_attr(elem, "bonus", GAME_SETTINGS_DOC, path, report), int,
                        "bonus", GAME_SETTINGS_DOC, path, report)
        if len(report) > before:
            continue
        achievements.append(Achievement(
            id=ach_id,
            description=_localized_texts(elem, GAME_SETTINGS_DOC, path, report),
            kind=kind,
            threshold=threshold,
            incentive_points=bonus,
            topic=elem.get("topic"),
        ))

    return GameSettings(tuple(languages), tuple(topics), tuple(achievements))


def _parse_messages(text: str, report: ValidationReport) -> MessageCatalog:
    root = _parse_xml(MESSAGES_DOC, text)

    quizzes: dict[str, list[QuizQuestion]] = {}
    for index, elem in enumerate(root.findall("quiz")):
        path = f"quiz[{elem.get('id', f'#{index}')}]"
        before = len(report)
        quiz_id = _attr(elem, "id", MESSAGES_DOC, path, report)
        difficulty = _attr(elem, "difficulty", MESSAGES_DOC, path, report)
        topic = _attr(elem, "topic", MESSAGES_DOC, path, report)
        if len(report) > before:
            continue
        questions = quizzes.setdefault(quiz_id, [])
        for q_elem in elem.findall("q"):
            q_path = f"{path}/q[#{len(questions)}]"
            correct = _number(_attr(q_elem, "correct", MESSAGES_DOC, q_path, report), int,
                              "correct", MESSAGES_DOC, q_path, report)
            if correct is None:
                continue
            # options repeat per language; a repeated language code starts a new option
            options: list[dict[str, str]] = []
            current: dict[str, str] = {}
            for opt in q_elem.findall("opt"):
                lang = opt.get("lang")
                if lang is None:
                    report.add(MESSAGES_DOC, q_path, "missing-attribute",
                               "opt element without lang attribute")
                    continue
                if lang in current:
                    options.append(current)
                    current = {}
                current[lang] = opt.text or ""
            if current:
                options.append(current)
            questions.append(QuizQuestion(
                id=f"{quiz_id}:{len(questions)}",
                text=_localized_texts(q_elem, MESSAGES_DOC, q_path, report),
                options=tuple(options),
                correct_index=correct,
                difficulty=difficulty,
                topic=topic,
            ))

    end_messages: dict[str, tuple[EndMessageBand, ...]] = {}
    for index, elem in enumerate(root.findall("end")):
        path = f"end[{elem.get('id', f'#{index}')}]"
        end_id = _attr(elem, "id", MESSAGES_DOC, path, report)
        if end_id is None:
            continue
        if end_id in end_messages:
            report.add(MESSAGES_DOC, path, "duplicate-end-id",
                       f"end messages for {end_id!r} defined more than once")
            continue
        bands = []
        for b_index, band in enumerate(elem.findall("band")):
            b_path = f"{path}/band[#{b_index}]"
            minimum = _number(_attr(band, "min", MESSAGES_DOC, b_path, report), float,
                              "min", MESSAGES_DOC, b_path, report)
            if minimum is None:
                continue
            bands.append(EndMessageBand(minimum, _localized_texts(band, MESSAGES_DOC, b_path, report)))
        end_messages[end_id] = tuple(bands)

    return MessageCatalog(
        quizzes={k: tuple(v) for k, v in quizzes.items()},
        end_messages=end_messages,
    )


def parse_content_pack(location_list_doc: str, geolocation_doc: str,
                       game_settings_doc: str, messages_doc: str) -> ContentPack:
    """Parse and fully validate the four documents into a ContentPack.

    Raises PackParseError for malformed XML and PackValidationError
    (carrying the complete ValidationReport) when any rule is violated.
    """

    report = ValidationReport()
    raw_pois, parking, ghost_ids = _parse_geolocation(geolocation_doc, report)
    locs, ghost_refs = _parse_location_list(location_list_doc, report)
    settings = _parse_settings(game_settings_doc, report)
    messages = _parse_messages(messages_doc, report)

    pois = []
    poi_ids = {raw["id"] for raw in raw_pois}
    for raw in raw_pois:
        loc = locs.get(raw["id"])
        if loc is None:
            if raw["id"] not in ghost_refs:
                report.add(LOCATION_LIST_DOC, f"loc[{raw['id']}]", "missing-location-data",
                           f"POI {raw['id']!r} has no loc entry (topic/points unknown)")
            continue
        pois.append(PointOfInterest(
            id=raw["id"],
            name=raw["name"],
            position=raw["position"],
            trigger_radius_m=raw["trigger_radius_m"],
            message_id=raw["message_id"],
            topic=loc["topic"],
            points_per_question=dict(loc["points"]),
        ))
    for ref in locs:
        if ref not in poi_ids and ref not in ghost_ids:
            report.add(LOCATION_LIST_DOC, f"loc[{ref}]", "dangling-loc-ref",
                       f"ref {ref!r} matches no POI id")

    pack = ContentPack(
        pois=tuple(pois),
        settings=settings,
        messages=messages,
        parking_spots=tuple(parking),
    )
    report.extend(validate_cross_references(pack))
    if not report.ok:
        raise PackValidationError(report)
    return pack


# ---------------------------------------------------------------------------
# Cross-reference validation
# ---------------------------------------------------------------------------

def _check_languages(text: Mapping[str, str], declared: set[str], document: str,
                     path: str, report: ValidationReport) -> None:
    for lang in text:
        if lang not in declared:
            report.add(document, path, "undeclared-language",
                       f"language {lang!r} is not declared in GameSettings")


def validate_cross_references(pack: ContentPack) -> ValidationReport:
    """Check every pack invariant; the report is empty iff the pack is valid."""

    report = ValidationReport()
    settings = pack.settings
    langs = set(settings.languages)
    topics = set(settings.topics)

    if not settings.languages:
        report.add(GAME_SETTINGS_DOC, "languages", "no-languages",
                   "at least one language must be declared")
    if not settings.topics:
        report.add(GAME_SETTINGS_DOC, "topics", "no-topics",
                   "at least one topic must be declared")

    seen_pois: set[str] = set()
    for poi in pack.pois:
        path = f"poi[{poi.id}]"
        if poi.id in seen_pois:
            report.add(GEOLOCATION_DOC, path, "duplicate-poi-id",
                       f"POI id {poi.id!r} appears more than once")
        seen_pois.add(poi.id)
        if not poi.trigger_radius_m > 0:
            report.add(GEOLOCATION_DOC, path, "nonpositive-radius",
                       f"trigger_m must be > 0, got {poi.trigger_radius_m}")
        if poi.message_id not in pack.messages.quizzes:
            report.add(GEOLOCATION_DOC, path, "dangling-message-ref",
                       f"msg {poi.message_id!r} matches no quiz in MessagesList")
        if poi.topic not in topics:
            report.add(LOCATION_LIST_DOC, f"loc[{poi.id}]", "unknown-topic",
                       f"topic {poi.topic!r} is not declared in GameSettings")
        for difficulty, points in poi.points_per_question.items():
            if difficulty not in DIFFICULTIES:
                report.add(LOCATION_LIST_DOC, f"loc[{poi.id}]", "unknown-difficulty",
                           f"points keyed by unknown difficulty {difficulty!r}")
            elif points < 0:
                report.add(LOCATION_LIST_DOC, f"loc[{poi.id}]", "negative-points",
                           f"{difficulty} points must be >= 0, got {points}")

    seen_ach: set[str] = set()
    for ach in settings.achievements:
        path = f"ach[{ach.id}]"
        if ach.id in seen_ach:
            report.add(GAME_SETTINGS_DOC, path, "duplicate-achievement-id",
                       f"achievement id {ach.id!r} appears more than once")
        seen_ach.add(ach.id)
        if ach.kind not in ACHIEVEMENT_KINDS:
            report.add(GAME_SETTINGS_DOC, path, "unknown-achievement-kind",
                       f"kind must be one of {ACHIEVEMENT_KINDS}, got {ach.kind!r}")
        if ach.threshold < 1:
            report.add(GAME_SETTINGS_DOC, path, "threshold-out-of-range",
                       f"threshold must be >= 1, got {ach.threshold}")
        if ach.incentive_points < 0:
            report.add(GAME_SETTINGS_DOC, path, "negative-incentive",
                       f"bonus must be >= 0, got {ach.incentive_points}")
        if ach.kind == "topic_points":
            if ach.topic is None:
                report.add(GAME_SETTINGS_DOC, path, "missing-achievement-topic",
                           "topic_points achievements need a topic attribute")
            elif ach.topic not in topics:
                report.add(GAME_SETTINGS_DOC, path, "unknown-topic",
                           f"topic {ach.topic!r} is not declared in GameSettings")
        _check_languages(ach.description, langs, GAME_SETTINGS_DOC, path, report)

    for quiz_id, questions in pack.messages.quizzes.items():
        path = f"quiz[{quiz_id}]"
        if not questions:
            report.add(MESSAGES_DOC, path, "empty-quiz",
                       f"quiz {quiz_id!r} has no questions")
        for q in questions:
            q_path = f"{path}/q[{q.id}]"
            if not 2 <= len(q.options) <= 3:
                report.add(MESSAGES_DOC, q_path, "bad-option-count",
                           f"questions need 2 or 3 options, got {len(q.options)}")
            if not 0 <= q.correct_index < len(q.options):
                report.add(MESSAGES_DOC, q_path, "bad-correct-index",
                           f"correct={q.correct_index} does not index {len(q.options)} options")
            if q.difficulty not in DIFFICULTIES:
                report.add(MESSAGES_DOC, q_path, "unknown-difficulty",
                           f"difficulty must be one of {DIFFICULTIES}, got {q.difficulty!r}")
            if q.topic not in topics:
                report.add(MESSAGES_DOC, path, "unknown-topic",
                           f"topic {q.topic!r} is not declared in GameSettings")
            _check_languages(q.text, langs, MESSAGES_DOC, q_path, report)
            for option in q.options:
                _check_languages(option, langs, MESSAGES_DOC, q_path, report)

    for end_id, bands in pack.messages.end_messages.items():
        path = f"end[{end_id}]"
        if not bands or bands[0].min_fraction != 0.0:
            report.add(MESSAGES_DOC, path, "bands-not-covering",
                       "end-message bands must start at min=0 to cover [0, 1]")
        mins = [band.min_fraction for band in bands]
        if any(m < 0.0 or m > 1.0 for m in mins) or \
                any(b >= a for b, a in zip(mins, mins[1:])):
            report.add(MESSAGES_DOC, path, "bands-not-ascending",
                       "band thresholds must be strictly ascending within [0, 1]")
        for band in bands:
            _check_languages(band.text, langs, MESSAGES_DOC, path, report)

    seen_parking: set[str] = set()
    for spot in pack.parking_spots:
        if spot.id in seen_parking:
            report.add(GEOLOCATION_DOC, f"parking[{spot.id}]", "duplicate-parking-id",
                       f"parking id {spot.id!r} appears more than once")
        seen_parking.add(spot.id)

    return report


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------

def _set_texts(parent: ET.Element, texts: Mapping[str, str], languages: Sequence[str],
               tag: str = "t") -> None:
    ordered = [lang for lang in languages if lang in texts]
    ordered += [lang for lang in texts if lang not in ordered]
    for lang in ordered:
        t = ET.SubElement(parent, tag, {"lang": lang})
        t.text = texts[lang]


def _doc_text(root: ET.Element) -> str:
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def serialize_content_pack(pack: ContentPack) -> dict[str, str]:
    """Render a pack back to its four documents in canonical form.

    Canonical means: pack order preserved, attributes in grammar order,
    localized variants in declared-language order. Re-parsing the output
    yields a pack equal to the input.
    """

    languages = pack.settings.languages

    geo_root = ET.Element("geolocations")
    for poi in pack.pois:
        ET.SubElement(geo_root, "poi", {
            "id": poi.id,
            "name": poi.name,
            "lat": repr(poi.position.lat),
            "lon": repr(poi.position.lon),
            "trigger_m": repr(poi.trigger_radius_m),
            "msg": poi.message_id,
        })
    for spot in pack.parking_spots:
        ET.SubElement(geo_root, "parking", {
            "id": spot.id,
            "lat": repr(spot.position.lat),
            "lon": repr(spot.position.lon),
        })

    loc_root = ET.Element("locations")
    for poi in pack.pois:
        ET.SubElement(loc_root, "loc", {
            "ref": poi.id,
            "topic": poi.topic,
            "easy_pts": str(poi.points_per_question.get("easy", DEFAULT_POINTS_PER_QUESTION["easy"])),
            "hard_pts": str(poi.points_per_question.get("hard", DEFAULT_POINTS_PER_QUESTION["hard"])),
        })

    settings_root = ET.Element("settings")
    langs_elem = ET.SubElement(settings_root, "languages")
    for code in languages:
        ET.SubElement(langs_elem, "lang", {"code": code})
    topics_elem = ET.SubElement(settings_root, "topics")
    for topic in pack.settings.topics:
        ET.SubElement(topics_elem, "topic", {"id": topic})
    ach_root = ET.SubElement(settings_root, "achievements")
    for ach in pack.settings.achievements:
        attrs = {"id": ach.id, "kind": ach.kind,
                 "threshold": str(ach.threshold), "bonus": str(ach.incentive_points)}
        if ach.topic is not None:
            attrs["topic"] = ach.topic
        elem = ET.SubElement(ach_root, "ach", attrs)
        _set_texts(elem, ach.description, languages)

    msg_root = ET.Element("messages")
    for quiz_id, questions in pack.messages.quizzes.items():
        block: Optional[ET.Element] = None
        block_key = None
        for q in questions:
            if block is None or block_key != (q.difficulty, q.topic):
                block_key = (q.difficulty, q.topic)
                block = ET.SubElement(msg_root, "quiz", {
                    "id": quiz_id, "difficulty": q.difficulty, "topic": q.topic,
                })
            q_elem = ET.SubElement(block, "q", {"correct": str(q.correct_index)})
            _set_texts(q_elem, q.text, languages)
            for option in q.options:
                _set_texts(q_elem, option, languages, tag="opt")
    for end_id, bands in pack.messages.end_messages.items():
        end_elem = ET.SubElement(msg_root, "end", {"id": end_id})
        for band in bands:
            band_elem = ET.SubElement(end_elem, "band", {"min": repr(band.min_fraction)})
            _set_texts(band_elem, band.text, languages)

    return {
        GEOLOCATION_DOC: _doc_text(geo_root),
        LOCATION_LIST_DOC: _doc_text(loc_root),
        GAME_SETTINGS_DOC: _doc_text(settings_root),
        MESSAGES_DOC: _doc_text(msg_root),
    }


# ---------------------------------------------------------------------------
# File helpers
# ---------------------------------------------------------------------------

def load_content_pack(pack_dir: str | Path) -> ContentPack:
    """Load the four canonical documents from a directory."""

    pack_dir = Path(pack_dir)
    docs = {}
    for name in PACK_DOCUMENTS:
        path = pack_dir / name
        if not path.is_file():
            raise FileNotFoundError(f"content pack document missing: {path}")
        docs[name] = path.read_text(encoding="utf-8")
    return parse_content_pack(
        location_list_doc=docs[LOCATION_LIST_DOC],
        geolocation_doc=docs[GEOLOCATION_DOC],
        game_settings_doc=docs[GAME_SETTINGS_DOC],
        messages_doc=docs[MESSAGES_DOC],
    )


def write_content_pack(pack: ContentPack, pack_dir: str | Path) -> None:
    """Write a pack's canonical documents into a directory."""

    pack_dir = Path(pack_dir)
    pack_dir.mkdir(parents=True, exist_ok=True)
    for name, text in serialize_content_pack(pack).items():
        (pack_dir / name).write_text(text, encoding="utf-8")
