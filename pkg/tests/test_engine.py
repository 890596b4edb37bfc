from __future__ import annotations

import copy
import math

import pytest
from hypothesis import given, settings, strategies as st

from geoquest import engine
from geoquest.content import (
    ContentPack,
    EndMessageBand,
    GameSettings,
    MessageCatalog,
    PointOfInterest,
    QuizQuestion,
    validate_cross_references,
)
from geoquest.engine import (
    DEFAULT_VEHICLES,
    SaveOutcome,
    UserTotals,
    answer_question,
    begin_quiz,
    complete_quiz,
    evaluate_achievements,
    get_results,
    make_result_key,
    next_trigger,
    save_result,
    split_result_key,
    start_session,
    update_position,
)
from geoquest.errors import ConflictError, ContentError, SequenceError, ValidationError
from geoquest.geo import GeoPoint, haversine_distance
from geoquest.storage import Store

from .support import BARI_CENTER, point_north

VEHICLE = DEFAULT_VEHICLES[0]


def question(quiz_id: str, n: int, difficulty: str, correct: int = 0,
             topic: str = "history", option_count: int = 3) -> QuizQuestion:
    options = tuple({"en": f"option {i}"} for i in range(option_count))
    return QuizQuestion(id=f"{quiz_id}:{n}", text={"en": f"question {n}?"},
                        options=options, correct_index=correct,
                        difficulty=difficulty, topic=topic)


def make_pack() -> ContentPack:
    """Three POIs north of the Bari center plus one overlapping the first."""

    pois = (
        PointOfInterest("alpha", "Alpha", BARI_CENTER, 200.0, "qa", "history",
                        {"easy": 10, "hard": 20}),
        PointOfInterest("bravo", "Bravo", point_north(BARI_CENTER, 600.0), 200.0,
                        "qb", "history", {"easy": 10, "hard": 20}),
        PointOfInterest("charlie", "Charlie", point_north(BARI_CENTER, 1200.0), 150.0,
                        "qc", "elv", {"easy": 10, "hard": 20}),
        PointOfInterest("delta", "Delta", point_north(BARI_CENTER, 100.0), 300.0,
                        "qd", "elv", {"easy": 5, "hard": 15}),
    )
    quizzes = {
        "qa": (question("qa", 0, "easy", correct=0),
               question("qa", 1, "easy", correct=1),
               question("qa", 2, "easy", correct=2),
               question("qa", 3, "hard", correct=0)),
        "qb": (question("qb", 0, "easy", correct=1, option_count=2),
               question("qb", 1, "easy", correct=0)),
        "qc": (question("qc", 0, "hard", correct=0, topic="elv"),),
        "qd": (question("qd", 0, "easy", correct=0, topic="elv"),),
    }
    end_messages = {
        "qa": (EndMessageBand(0.0, {"en": "low"}),
               EndMessageBand(0.5, {"en": "mid"}),
               EndMessageBand(1.0, {"en": "perfect"})),
    }
    pack = ContentPack(
        pois=pois,
        settings=GameSettings(("en", "it"), ("history", "elv"), ()),
        messages=MessageCatalog(quizzes=quizzes, end_messages=end_messages),
        parking_spots=(),
    )
    assert validate_cross_references(pack).ok
    return pack


@pytest.fixture
def pack():
    return make_pack()


@pytest.fixture
def session(pack):
    return start_session("u1", "easy", VEHICLE, "en", pack)


FAR_AWAY = point_north(BARI_CENTER, 50_000.0)


class TestStartSession:
    def test_fresh_session_is_empty(self, session):
        assert session.fired == set()
        assert session.inside == set()
        assert session.active_quiz is None
        assert session.wallet_delta == 0

    def test_undeclared_language_rejected(self, pack):
        with pytest.raises(ValidationError):
            start_session("u1", "easy", VEHICLE, "fr", pack)

    def test_unknown_difficulty_rejected(self, pack):
        with pytest.raises(ValidationError):
            start_session("u1", "medium", VEHICLE, "en", pack)


class TestUpdatePosition:
    def test_entering_unfired_radius_triggers(self, session):
        events = update_position(session, point_north(BARI_CENTER, 450.0), 0.0)
        assert [e.poi_id for e in events] == ["bravo"]
        assert events[0].distance_at_fire < 200.0
        assert session.fired == {"bravo"}
        assert session.inside == {"bravo"}

    def test_staying_inside_does_not_refire(self, session):
        point = point_north(BARI_CENTER, 450.0)
        update_position(session, point, 0.0)
        assert update_position(session, point, 1.0) == []
        assert update_position(session, point_north(BARI_CENTER, 460.0), 2.0) == []

    def test_far_away_triggers_nothing(self, session):
        assert update_position(session, FAR_AWAY, 0.0) == []

    def test_exit_and_reenter_fires_once_per_session(self, session):
        inside = point_north(BARI_CENTER, 450.0)
        assert len(update_position(session, inside, 0.0)) == 1
        update_position(session, FAR_AWAY, 1.0)
        assert session.inside == set()
        assert update_position(session, inside, 2.0) == []

    def test_simultaneous_entry_fires_in_pack_order(self, session):
        # the center sits inside both alpha (r=200) and delta (r=300)
        events = update_position(session, BARI_CENTER, 0.0)
        assert [e.poi_id for e in events] == ["alpha", "delta"]

    def test_time_regression_rejected(self, session):
        update_position(session, FAR_AWAY, 10.0)
        with pytest.raises(SequenceError):
            update_position(session, FAR_AWAY, 9.0)

    def test_equal_timestamps_allowed(self, session):
        update_position(session, FAR_AWAY, 10.0)
        assert update_position(session, FAR_AWAY, 10.0) == []

    def test_events_deferred_while_quiz_active(self, session):
        [event] = update_position(session, point_north(BARI_CENTER, 450.0), 0.0)
        begin_quiz(session, event)
        assert update_position(session, point_north(BARI_CENTER, 1150.0), 1.0) == []
        assert session.fired == {"bravo", "charlie"}
        quiz = session.active_quiz
        for i in range(len(quiz.questions)):
            answer_question(quiz, i, 0)
        complete_quiz(session, quiz)
        deferred = next_trigger(session)
        assert deferred is not None and deferred.poi_id == "charlie"


class TestQuizFlow:
    def trigger(self, session, poi="bravo", meters=450.0, t=0.0):
        [event] = update_position(session, point_north(BARI_CENTER, meters), t)
        assert event.poi_id == poi
        return event

    def test_begin_filters_by_difficulty_in_pack_order(self, pack):
        session = start_session("u1", "easy", VEHICLE, "en", pack)
        event = update_position(session, BARI_CENTER, 0.0)[0]
        quiz = begin_quiz(session, event)
        assert quiz.questionnaire_name == "qa"
        assert [q.id for q in quiz.questions] == ["qa:0", "qa:1", "qa:2"]
        assert all(q.difficulty == "easy" for q in quiz.questions)

    def test_hard_session_selects_hard_questions(self, pack):
        session = start_session("u1", "hard", VEHICLE, "en", pack)
        event = update_position(session, BARI_CENTER, 0.0)[0]
        quiz = begin_quiz(session, event)
        assert [q.id for q in quiz.questions] == ["qa:3"]

    def test_second_begin_conflicts(self, session):
        event = self.trigger(session)
        begin_quiz(session, event)
        with pytest.raises(ConflictError):
            begin_quiz(session, event)

    def test_difficulty_filter_empty_is_content_error(self, session):
        # charlie's quiz only has hard questions
        [event] = update_position(session, point_north(BARI_CENTER, 1150.0), 0.0)
        assert event.poi_id == "charlie"
        with pytest.raises(ContentError):
            begin_quiz(session, event)

    def test_unfired_poi_rejected(self, session):
        fake = engine.TriggerEvent("bravo", 10.0, 0.0)
        with pytest.raises(ValidationError):
            begin_quiz(session, fake)

    def test_answers_judged_against_correct_index(self, session):
        quiz = begin_quiz(session, self.trigger(session))
        assert answer_question(quiz, 0, 1) is True   # qb:0 correct=1
        assert answer_question(quiz, 1, 1) is False  # qb:1 correct=0

    def test_out_of_order_answer_rejected(self, session):
        quiz = begin_quiz(session, self.trigger(session))
        with pytest.raises(SequenceError):
            answer_question(quiz, 1, 0)

    def test_invalid_choice_rejected(self, session):
        quiz = begin_quiz(session, self.trigger(session))
        with pytest.raises(ValidationError):
            answer_question(quiz, 0, 5)

    def test_complete_requires_all_answers(self, session):
        quiz = begin_quiz(session, self.trigger(session))
        answer_question(quiz, 0, 1)
        with pytest.raises(ConflictError):
            complete_quiz(session, quiz)


class TestScoring:
    def play(self, pack, answers, quiz_poi=BARI_CENTER):
        session = start_session("u1", "easy", VEHICLE, "en", pack)
        event = update_position(session, quiz_poi, 0.0)[0]
        quiz = begin_quiz(session, event)
        for i, choice in enumerate(answers):
            answer_question(quiz, i, choice)
        return session, complete_quiz(session, quiz)

    def test_all_correct_hits_perfect_band(self, pack):
        session, result = self.play(pack, [0, 1, 2])
        assert result.correct_count == 3
        assert result.score == 30
        assert result.end_message == "perfect"
        assert result.topic_points == {"history": 30}
        assert session.wallet_delta == 30
        assert session.active_quiz is None

    def test_none_correct_hits_low_band(self, pack):
        _, result = self.play(pack, [1, 0, 0])
        assert result.correct_count == 0
        assert result.score == 0
        assert result.end_message == "low"

    def test_two_of_three_hits_mid_band(self, pack):
        _, result = self.play(pack, [0, 1, 0])
        assert result.correct_count == 2
        assert math.isclose(result.correct_count / result.total_count, 2 / 3)
        assert result.end_message == "mid"

    def test_default_bands_apply_when_no_end_entry(self, pack):
        session = start_session("u1", "easy", VEHICLE, "en", pack)
        [event] = update_position(session, point_north(BARI_CENTER, 450.0), 0.0)
        quiz = begin_quiz(session, event)
        answer_question(quiz, 0, 1)
        answer_question(quiz, 1, 0)
        result = complete_quiz(session, quiz)
        assert result.end_message == "Perfect score!"

    def test_wallet_accumulates_over_quizzes(self, pack):
        session = start_session("u1", "easy", VEHICLE, "en", pack)
        for event in update_position(session, BARI_CENTER, 0.0):
            quiz = begin_quiz(session, event)
            for i in range(len(quiz.questions)):
                answer_question(quiz, i, quiz.questions[i].correct_index)
            complete_quiz(session, quiz)
        # alpha: 3 x 10, delta: 1 x 5
        assert session.wallet_delta == 35

    def test_identical_inputs_identical_results(self, pack):
        _, first = self.play(pack, [0, 1, 0])
        _, second = self.play(pack, [0, 1, 0])
        assert first == second

    def test_engine_never_mutates_the_pack(self, pack):
        snapshot = copy.deepcopy(pack)
        self.play(pack, [0, 1, 2])
        assert pack == snapshot


class TestBandSelection:
    @given(st.lists(st.floats(min_value=0.001, max_value=1.0), min_size=0, max_size=5,
                    unique=True),
           st.integers(min_value=0, max_value=12), st.integers(min_value=1, max_value=12))
    def test_every_fraction_maps_to_exactly_one_band(self, extra_mins, correct, total):
        if correct > total:
            correct, total = total, correct
        mins = [0.0] + sorted(extra_mins)
        bands = tuple(EndMessageBand(m, {"en": f"band {m}"}) for m in mins)
        fraction = correct / total
        eligible = [b for b in bands if b.min_fraction <= fraction]
        assert eligible, "zero-min band always matches"
        chosen = max(eligible, key=lambda b: b.min_fraction)
        hits = [b for b in bands
                if b.min_fraction <= fraction
                and all(o.min_fraction <= b.min_fraction or o.min_fraction > fraction
                        for o in bands)]
        assert chosen in hits


class TestResultPersistence:
    def result(self, score=30, name="qa"):
        return engine.QuizResult(questionnaire_name=name, correct_count=3,
                                 total_count=3, score=score, end_message="perfect",
                                 topic_points={"history": score})

    def test_save_reject_overwrite_triple(self):
        store = Store(None)
        assert save_result("u1", self.result(score=30), False, store) is SaveOutcome.STORED
        stored = store.get_result("qa::u1")
        assert stored["score"] == 30

        assert save_result("u1", self.result(score=10), False, store) is \
            SaveOutcome.REJECTED_EXISTS
        assert store.get_result("qa::u1") == stored  # read-back unchanged

        assert save_result("u1", self.result(score=10), True, store) is SaveOutcome.STORED
        assert store.get_result("qa::u1")["score"] == 10

    def test_key_is_questionnaire_and_user(self):
        store = Store(None)
        save_result("user-7", self.result(name="castello"), False, store)
        assert store.get_result("castello::user-7") is not None

    @given(st.text(min_size=1, max_size=30),
           st.text(alphabet=st.characters(blacklist_characters=":"), min_size=1, max_size=20))
    def test_result_key_round_trips(self, questionnaire, user_id):
        key = make_result_key(questionnaire, user_id)
        assert split_result_key(key) == (questionnaire, user_id)

    def test_get_results_fresh_user_all_empty_in_pack_order(self, pack):
        store = Store(None)
        rows = get_results("u1", pack, store)
        assert rows == [("qa", None), ("qb", None), ("qc", None), ("qd", None)]

    def test_get_results_reflects_saves_and_overwrites(self, pack):
        store = Store(None)
        save_result("u1", self.result(score=30), False, store)
        assert get_results("u1", pack, store)[0] == ("qa", 30)
        save_result("u1", self.result(score=20), True, store)
        assert get_results("u1", pack, store)[0] == ("qa", 20)
        assert get_results("u2", pack, store)[0] == ("qa", None)


trace_points = st.lists(
    st.builds(GeoPoint,
              st.floats(min_value=BARI_CENTER.lat - 0.02, max_value=BARI_CENTER.lat + 0.02),
              st.floats(min_value=BARI_CENTER.lon - 0.02, max_value=BARI_CENTER.lon + 0.02)),
    min_size=0, max_size=40)


class TestTriggerProperties:
    """The stateful trigger machine against the stateless rule."""

    @settings(max_examples=150, deadline=None)
    @given(trace_points)
    def test_single_fire_soundness_and_oracle_completeness(self, points):
        pack = make_pack()
        session = start_session("prop", "easy", VEHICLE, "en", pack)
        seen: list[tuple[GeoPoint, engine.TriggerEvent]] = []
        for t, point in enumerate(points):
            for event in update_position(session, point, float(t)):
                seen.append((point, event))

        fired_ids = [event.poi_id for _, event in seen]
        assert len(fired_ids) == len(set(fired_ids))  # at most once per POI

        radii = {poi.id: poi.trigger_radius_m for poi in pack.pois}
        positions = {poi.id: poi.position for poi in pack.pois}
        for point, event in seen:
            distance = haversine_distance(point, positions[event.poi_id])
            assert event.distance_at_fire == distance
            assert distance < radii[event.poi_id]

        expected = {poi.id for poi in pack.pois
                    if any(haversine_distance(p, poi.position) < poi.trigger_radius_m
                           for p in points)}
        assert set(fired_ids) == expected
        assert session.fired == expected


class TestAchievements:
    def setup_method(self):
        from geoquest.content import Achievement
        self.settings = GameSettings(
            languages=("en",), topics=("history", "elv"),
            achievements=(
                Achievement("fifty", {"en": "fifty points"}, "total_points", 50, 5),
                Achievement("grinder", {"en": "three quizzes"}, "quizzes_completed", 3, 7),
                Achievement("historian", {"en": "history buff"}, "topic_points", 40, 9,
                            topic="history"),
            ))

    def test_zero_totals_award_nothing(self):
        assert evaluate_achievements(UserTotals(), self.settings) == []

    def test_threshold_met_awards_once(self):
        totals = UserTotals(total_points=60)
        awards = evaluate_achievements(totals, self.settings)
        assert [(a.achievement_id, a.incentive_points) for a in awards] == [("fifty", 5)]

        already = UserTotals(total_points=60, awarded=frozenset({"fifty"}))
        assert evaluate_achievements(already, self.settings) == []

    def test_topic_and_count_conditions(self):
        totals = UserTotals(total_points=45, quizzes_completed=3,
                            topic_points={"history": 45})
        awards = evaluate_achievements(totals, self.settings)
        assert sorted(a.achievement_id for a in awards) == ["grinder", "historian"]
