from __future__ import annotations

import json
import math
import random

import pytest

from geoquest.cli import main as simulate_main
from geoquest.errors import ValidationError
from geoquest.geo import EARTH_RADIUS_M, GeoPoint, haversine_distance
from geoquest.simulator import (
    Scenario,
    SimulationReport,
    TimedPoint,
    generate_trace,
    oracle_triggers,
    replay,
    simulation_credentials,
)

from .conftest import PACK_DIR, ROUTE_FILE
from .support import BARI_CENTER, point_north, straddle_boundary
from .test_engine import make_pack

START = BARI_CENTER
END_1KM = point_north(BARI_CENTER, 1000.0)

BARI_ROUTE = [
    GeoPoint(41.12400, 16.86300),
    GeoPoint(41.12584, 16.86713),
    GeoPoint(41.12890, 16.86831),
    GeoPoint(41.13053, 16.87021),
    GeoPoint(41.13200, 16.87000),
]
BARI_ROUTE_POIS = ["castello_svevo", "cattedrale_san_sabino", "basilica_san_nicola"]


def cross_track_m(start: GeoPoint, end: GeoPoint, p: GeoPoint) -> float:
    """Distance from p to the start->end great circle (independent check)."""

    def unit(g):
        phi, lam = math.radians(g.lat), math.radians(g.lon)
        return (math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi))

    a, b, v = unit(start), unit(end), unit(p)
    n = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    norm = math.sqrt(sum(x * x for x in n))
    dot = sum(x * y for x, y in zip(n, v)) / norm
    return abs(math.asin(max(-1.0, min(1.0, dot)))) * EARTH_RADIUS_M


class TestGenerateTrace:
    def test_1000m_at_5mps_gives_201_points_spaced_5m(self):
        trace = generate_trace([START, END_1KM], speed_mps=5.0, sample_period_s=1.0)
        assert len(trace) == 201
        for a, b in zip(trace, trace[1:]):
            assert haversine_distance(a.point, b.point) == pytest.approx(5.0, abs=0.01)
            assert b.t - a.t == pytest.approx(1.0)

    def test_zero_noise_stays_on_great_circle(self):
        trace = generate_trace([START, END_1KM], speed_mps=5.0, sample_period_s=1.0)
        for sample in trace:
            assert cross_track_m(START, END_1KM, sample.point) < 1e-6

    def test_same_seed_same_trace(self):
        kwargs = dict(speed_mps=5.0, sample_period_s=1.0, noise_sigma_m=3.0, seed=42)
        assert generate_trace([START, END_1KM], **kwargs) == \
            generate_trace([START, END_1KM], **kwargs)

    def test_different_seed_different_noise(self):
        kwargs = dict(speed_mps=5.0, sample_period_s=1.0, noise_sigma_m=3.0)
        assert generate_trace([START, END_1KM], seed=1, **kwargs) != \
            generate_trace([START, END_1KM], seed=2, **kwargs)

    def test_terminal_waypoint_included_for_non_multiples(self):
        end = point_north(BARI_CENTER, 1003.0)
        trace = generate_trace([START, end], speed_mps=5.0, sample_period_s=1.0)
        assert haversine_distance(trace[-1].point, end) < 1e-6
        assert trace[-1].t == pytest.approx(1003.0 / 5.0)

    def test_timestamps_strictly_increasing(self):
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0,
                               noise_sigma_m=2.0, seed=9)
        assert all(b.t > a.t for a, b in zip(trace, trace[1:]))

    def test_multi_leg_routes_cover_every_waypoint(self):
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0)
        for waypoint in BARI_ROUTE:
            assert min(haversine_distance(s.point, waypoint) for s in trace) < 8.0

    def test_fewer_than_two_waypoints_rejected(self):
        with pytest.raises(ValidationError):
            generate_trace([START], speed_mps=5.0, sample_period_s=1.0)

    @pytest.mark.parametrize("kwargs", [
        {"speed_mps": 0.0, "sample_period_s": 1.0},
        {"speed_mps": 5.0, "sample_period_s": 0.0},
        {"speed_mps": 5.0, "sample_period_s": 1.0, "noise_sigma_m": -1.0},
    ])
    def test_bad_parameters_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            generate_trace([START, END_1KM], **kwargs)


class TestOracle:
    def test_pass_within_radius_detected(self, demo_pack):
        castello = next(p for p in demo_pack.pois if p.id == "castello_svevo")
        trace = [TimedPoint(point_north(castello.position, 150.0), 0.0)]
        assert oracle_triggers(trace, demo_pack.pois) == {"castello_svevo"}

    def test_never_nearer_than_radius_is_empty(self, demo_pack):
        castello = next(p for p in demo_pack.pois if p.id == "castello_svevo")
        trace = [TimedPoint(point_north(castello.position, 250.0), 0.0)]
        assert oracle_triggers(trace, [castello]) == set()

    def test_exact_boundary_excluded(self, demo_pack):
        castello = next(p for p in demo_pack.pois if p.id == "castello_svevo")
        just_inside, at_boundary = straddle_boundary(castello.position, 200.0)
        assert oracle_triggers([TimedPoint(at_boundary, 0.0)], [castello]) == set()
        assert oracle_triggers([TimedPoint(just_inside, 0.0)], [castello]) == \
            {"castello_svevo"}


class TestReplay:
    def test_bari_route_always_correct(self, demo_pack):
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0)
        report = replay(trace, Scenario("easy", "always-correct", 7), demo_pack)
        assert report.triggers_fired == BARI_ROUTE_POIS
        assert report.quizzes_completed == 3
        assert report.total_score == 90  # 3 quizzes x 3 easy questions x 10 points
        assert report.match is True

    def test_always_first_scores_only_first_option_questions(self, demo_pack):
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0)
        report = replay(trace, Scenario("easy", "always-first", 7), demo_pack)
        # one first-option answer is correct in each of the three quizzes
        assert report.total_score == 30
        assert report.match is True

    def test_empty_trace_matches_trivially(self, demo_pack):
        report = replay([], Scenario("easy", "always-correct", 7), demo_pack)
        assert report.triggers_fired == []
        assert report.quizzes_completed == 0
        assert report.total_score == 0
        assert report.oracle_triggers == set()
        assert report.match is True

    def test_seeded_run_repeats_byte_identically(self, demo_pack):
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0,
                               noise_sigma_m=3.0, seed=11)
        scenario = Scenario("easy", "seeded-random", 11)
        first = replay(trace, scenario, demo_pack).to_json()
        second = replay(trace, scenario, demo_pack).to_json()
        assert first == second

    def test_random_traces_match_oracle(self, demo_pack):
        rng = random.Random(4242)
        for _ in range(20):
            waypoints = [GeoPoint(41.118 + rng.random() * 0.016,
                                  16.860 + rng.random() * 0.016)
                         for _ in range(rng.randint(2, 4))]
            trace = generate_trace(waypoints, speed_mps=rng.uniform(4, 15),
                                   sample_period_s=1.0,
                                   noise_sigma_m=rng.uniform(0, 4),
                                   seed=rng.randrange(1 << 16))
            report = replay(trace, Scenario("easy", "always-first", 5), demo_pack)
            assert report.match is True, report.to_json()

    def test_bad_policy_rejected(self):
        with pytest.raises(ValidationError):
            Scenario("easy", "cheat-mode", 1)

    def test_replay_never_mutates_the_pack(self, demo_pack):
        import copy

        snapshot = copy.deepcopy(demo_pack)
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0)
        replay(trace, Scenario("easy", "always-correct", 7), demo_pack)
        assert demo_pack == snapshot

    def test_engine_and_api_replays_agree(self, demo_pack, live_api):
        base_url, _ = live_api
        trace = generate_trace(BARI_ROUTE, speed_mps=8.0, sample_period_s=1.0)
        scenario = Scenario("easy", "always-first", 3)
        direct = replay(trace, scenario, demo_pack)
        via_api = replay(trace, scenario, demo_pack, api_url=base_url)
        assert direct.triggers_fired == via_api.triggers_fired
        assert direct.total_score == via_api.total_score
        assert direct.quizzes_completed == via_api.quizzes_completed
        assert via_api.match is True


class TestCli:
    def test_match_run_writes_report_and_exits_zero(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code = simulate_main([
            "--pack", str(PACK_DIR), "--route", str(ROUTE_FILE),
            "--speed", "8", "--period", "1", "--noise", "0", "--seed", "7",
            "--difficulty", "easy", "--policy", "always-correct",
            "--report", str(report_path)])
        assert code == 0
        on_disk = json.loads(report_path.read_text())
        assert on_disk["match"] is True
        assert on_disk["quizzes_completed"] == 3
        assert on_disk["total_score"] == 90
        assert json.loads(capsys.readouterr().out) == on_disk

    def test_missing_pack_is_usage_error(self, tmp_path):
        code = simulate_main([
            "--pack", str(tmp_path / "nowhere"), "--route", str(ROUTE_FILE)])
        assert code == 2

    def test_bad_route_line_is_usage_error(self, tmp_path):
        route = tmp_path / "route.txt"
        route.write_text("41.1,16.8\nnot-a-point\n")
        code = simulate_main(["--pack", str(PACK_DIR), "--route", str(route)])
        assert code == 2

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as excinfo:
            simulate_main(["--bogus"])
        assert excinfo.value.code == 2

    def test_credentials_derive_from_seed(self):
        email, username, password = simulation_credentials(7)
        assert username == "sim-7"
        assert email.startswith("sim-7@")
        assert len(password) >= 8


class TestReportShape:
    def test_report_json_is_canonical(self):
        report = SimulationReport(triggers_fired=["b", "a"], quizzes_completed=2,
                                  total_score=40, oracle_triggers={"b", "a"})
        report.finalize()
        assert report.match is True
        data = json.loads(report.to_json())
        assert data["oracle_triggers"] == ["a", "b"]
        assert data["triggers_fired"] == ["b", "a"]

    def test_mismatch_detected(self):
        report = SimulationReport(triggers_fired=["a"], oracle_triggers={"a", "b"})
        assert report.finalize().match is False
