"""Session state machine: triggers, quizzes, scoring, results.

A session consumes timestamped positions, fires each POI's geofence at
most once, runs one quiz at a time, and turns answers into banded end
messages and wallet points. Sessions are single-owner: callers must not
mutate one session from two threads at once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Protocol

from .content import DIFFICULTIES, ContentPack, QuizQuestion, localize
from .errors import (
    ConflictError,
    ContentError,
    SequenceError,
    ValidationError,
)
from .geo import GeoPoint, haversine_distance

VEHICLE_CATEGORIES = ("el_v", "bicycle", "public_transport", "other")


@dataclass(frozen=True)
class VehicleProfile:
    id: str
    category: str
    label: str

    def __post_init__(self):
        if self.category not in VEHICLE_CATEGORIES:
            raise ValidationError(
                f"vehicle category must be one of {VEHICLE_CATEGORIES}, got {self.category!r}",
                field="category",
            )


DEFAULT_VEHICLES = (
    VehicleProfile("elv", "el_v", "Electric light vehicle"),
    VehicleProfile("bicycle", "bicycle", "Bicycle"),
    VehicleProfile("bus", "public_transport", "Public transport"),
    VehicleProfile("other", "other", "Other vehicle"),
)


@dataclass(frozen=True)
class TriggerEvent:
    """Enter-edge detection of an unfired POI's geofence."""

    poi_id: str
    distance_at_fire: float
    fired_at: float


@dataclass
class QuizInstance:
    """An in-flight questionnaire; answers grow strictly in order."""

    questionnaire_name: str
    poi_id: str
    questions: tuple[QuizQuestion, ...]
    answers: list[int] = field(default_factory=list)
    started_at: float = 0.0


@dataclass(frozen=True)
class QuizResult:
    questionnaire_name: str
    correct_count: int
    total_count: int
    score: int
    end_message: str
    topic_points: Mapping[str, int]


@dataclass(frozen=True)
class AchievementAward:
    achievement_id: str
    incentive_points: int


@dataclass(frozen=True)
class UserTotals:
    """Aggregates over a user's stored results, for achievement checks."""

    total_points: int = 0
    quizzes_completed: int = 0
    topic_points: Mapping[str, int] = field(default_factory=dict)
    awarded: frozenset[str] = frozenset()


class SaveOutcome(Enum):
    STORED = "stored"
    REJECTED_EXISTS = "rejected_exists"


class ResultStore(Protocol):
    """What the engine needs from persistence: an atomic conditional put."""

    def put_result(self, key: str, record: dict, overwrite: bool) -> bool: ...

    def get_result(self, key: str) -> Optional[dict]: ...


@dataclass
class Session:
    user_id: str
    difficulty: str
    vehicle: VehicleProfile
    language: str
    pack: ContentPack
    fired: set[str] = field(default_factory=set)
    inside: set[str] = field(default_factory=set)
    active_quiz: Optional[QuizInstance] = None
    wallet_delta: int = 0
    pending: deque[TriggerEvent] = field(default_factory=deque)
    last_t: Optional[float] = None


def start_session(user_id: str, difficulty: str, vehicle: VehicleProfile,
                  language: str, pack: ContentPack) -> Session:
    """Open a fresh session: nothing fired, no quiz, empty wallet delta."""

    if difficulty not in DIFFICULTIES:
        raise ValidationError(
            f"difficulty must be one of {DIFFICULTIES}, got {difficulty!r}", field="difficulty")
    if language not in pack.settings.languages:
        raise ValidationError(
            f"language {language!r} not declared in pack settings", field="language")
    return Session(user_id=user_id, difficulty=difficulty, vehicle=vehicle,
                   language=language, pack=pack)


def update_position(session: Session, point: GeoPoint, at: float) -> list[TriggerEvent]:
    """Feed one position fix; returns the trigger events it emits.

    A POI fires on entering its radius (strict less-than) at most once
    per session; staying inside never re-fires. While a quiz is active
    nothing is emitted: new events are queued and surface through
    :func:`next_trigger` once the quiz completes.
    """

    if session.last_t is not None and at < session.last_t:
        raise SequenceError(f"time went backwards: {at} < {session.last_t}", field="t")
    session.last_t = at

    membership: set[str] = set()
    events: list[TriggerEvent] = []
    for poi in session.pack.pois:
        distance = haversine_distance(point, poi.position)
        if distance < poi.trigger_radius_m:
            membership.add(poi.id)
            if poi.id not in session.fired and poi.id not in session.inside:
                events.append(TriggerEvent(poi.id, distance, at))

    session.inside = membership
    for event in events:
        session.fired.add(event.poi_id)
        session.pending.append(event)
    if session.active_quiz is not None:
        return []
    return events


def next_trigger(session: Session) -> Optional[TriggerEvent]:
    """Peek the next fired POI awaiting its quiz; None while a quiz runs."""

    if session.active_quiz is not None or not session.pending:
        return None
    return session.pending[0]


def begin_quiz(session: Session, event: TriggerEvent) -> QuizInstance:
    """Start the questionnaire for a fired POI, filtered to the session difficulty."""

    if session.active_quiz is not None:
        raise ConflictError("a quiz is already active")
    if event.poi_id not in session.fired:
        raise ValidationError(f"POI {event.poi_id!r} has not fired this session", field="poi_id")
    poi = next(p for p in session.pack.pois if p.id == event.poi_id)
    all_questions = session.pack.messages.quizzes[poi.message_id]
    questions = tuple(q for q in all_questions if q.difficulty == session.difficulty)
    if not questions:
        raise ContentError(
            f"quiz {poi.message_id!r} has no {session.difficulty} questions")
    instance = QuizInstance(
        questionnaire_name=poi.message_id,
        poi_id=poi.id,
        questions=questions,
        started_at=event.fired_at,
    )
    session.active_quiz = instance
    try:
        session.pending.remove(event)
    except ValueError:
        pass
    return instance


def answer_question(quiz: QuizInstance, question_index: int, choice_index: int) -> bool:
    """Record the answer to the next question; True when it is correct."""

    if question_index != len(quiz.answers):
        raise SequenceError(
            f"expected answer to question {len(quiz.answers)}, got {question_index}",
            field="question_index")
    if question_index >= len(quiz.questions):
        raise SequenceError("quiz already has all its answers", field="question_index")
    question = quiz.questions[question_index]
    if not 0 <= choice_index < len(question.options):
        raise ValidationError(
            f"choice {choice_index} does not index {len(question.options)} options",
            field="choice_index")
    quiz.answers.append(choice_index)
    return choice_index == question.correct_index


def complete_quiz(session: Session, quiz: QuizInstance) -> QuizResult:
    """Score a fully answered quiz, band its end message, credit the wallet."""

    if quiz is not session.active_quiz:
        raise ConflictError("quiz is not this session's active quiz")
    if len(quiz.answers) != len(quiz.questions):
        raise ConflictError(
            f"quiz incomplete: {len(quiz.answers)} of {len(quiz.questions)} answers")

    poi = next(p for p in session.pack.pois if p.id == quiz.poi_id)
    points_each = poi.points_per_question.get(session.difficulty, 0)
    correct = sum(
        1 for q, a in zip(quiz.questions, quiz.answers) if a == q.correct_index)
    score = correct * points_each

    fraction = correct / len(quiz.questions)
    bands = session.pack.messages.bands_for(quiz.questionnaire_name)
    band = max((b for b in bands if b.min_fraction <= fraction),
               key=lambda b: b.min_fraction)
    end_message = localize(band.text, session.language, session.pack.settings)

    result = QuizResult(
        questionnaire_name=quiz.questionnaire_name,
        correct_count=correct,
        total_count=len(quiz.questions),
        score=score,
        end_message=end_message,
        topic_points={poi.topic: score},
    )
    session.wallet_delta += score
    session.active_quiz = None
    return result


RESULT_KEY_SEPARATOR = "::"


def make_result_key(questionnaire_name: str, user_id: str) -> str:
    """Stored-result key: questionnaire and user joined unambiguously."""

    return f"{questionnaire_name}{RESULT_KEY_SEPARATOR}{user_id}"


def split_result_key(key: str) -> tuple[str, str]:
    questionnaire_name, _, user_id = key.rpartition(RESULT_KEY_SEPARATOR)
    return questionnaire_name, user_id


def save_result(user_id: str, result: QuizResult, overwrite: bool,
                store: ResultStore) -> SaveOutcome:
    """Persist a result under questionnaire::user; never clobbers silently."""

    record = {
        "questionnaire_name": result.questionnaire_name,
        "user_id": user_id,
        "correct_count": result.correct_count,
        "total_count": result.total_count,
        "score": result.score,
        "end_message": result.end_message,
        "topic_points": dict(result.topic_points),
    }
    key = make_result_key(result.questionnaire_name, user_id)
    if store.put_result(key, record, overwrite):
        return SaveOutcome.STORED
    return SaveOutcome.REJECTED_EXISTS


def evaluate_achievements(user_totals: UserTotals,
                          settings) -> list[AchievementAward]:
    """Every achievement newly satisfied by the totals; awarded once only."""

    awards: list[AchievementAward] = []
    for ach in settings.achievements:
        if ach.id in user_totals.awarded:
            continue
        if ach.kind == "total_points":
            satisfied = user_totals.total_points >= ach.threshold
        elif ach.kind == "quizzes_completed":
            satisfied = user_totals.quizzes_completed >= ach.threshold
        elif ach.kind == "topic_points":
            satisfied = user_totals.topic_points.get(ach.topic, 0) >= ach.threshold
        else:
            continue
        if satisfied:
            awards.append(AchievementAward(ach.id, ach.incentive_points))
    return awards


def get_results(user_id: str, pack: ContentPack,
                store: ResultStore) -> list[tuple[str, Optional[int]]]:
    """One row per questionnaire in pack order; score is None until saved."""

    rows: list[tuple[str, Optional[int]]] = []
    for questionnaire_name in pack.questionnaires:
        record = store.get_result(make_result_key(questionnaire_name, user_id))
        rows.append((questionnaire_name, record["score"] if record else None))
    return rows
