"""HTTP facade: auth, content, position stream, quiz flow, results.

Every error body carries the same shape: ``{"code", "message", "field"}``
with ``code`` drawn from the module error taxonomy. Quiz answers are
judged server-side only; ``correct_index`` never appears in a response.
"""

from __future__ import annotations

import logging
import threading
import uuid
from typing import Optional

from fastapi import Body, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import engine
from .config import ServiceConfig
from .content import ContentPack, load_content_pack, localize
from .engine import DEFAULT_VEHICLES, QuizInstance, QuizResult, SaveOutcome, Session
from .errors import (
    AuthError,
    ConflictError,
    ContentError,
    GameError,
    NotFoundError,
    SequenceError,
    ValidationError,
)
from .geo import GeoPoint
from .storage import Store

log = logging.getLogger("geoquest.api")

_STATUS_BY_CODE = {
    "validation": 422,
    "auth": 401,
    "conflict": 409,
    "sequence": 409,
    "not_found": 404,
    "content": 422,
    "io": 500,
}

_CODE_BY_HTTP_STATUS = {401: "auth", 404: "not_found", 409: "conflict", 422: "validation"}


def _error_body(code: str, message: str, field: Optional[str] = None) -> dict:
    body = {"code": code, "message": message}
    if field is not None:
        body["field"] = field
    return body


class _SessionBox:
    """One live session plus the lock that serializes its requests."""

    def __init__(self, session: Session, user_id: str):
        self.session = session
        self.user_id = user_id
        self.lock = threading.Lock()


def create_app(pack: ContentPack, store: Store,
               default_language: str = "en") -> FastAPI:
    app = FastAPI(title="geoquest", docs_url=None, redoc_url=None, openapi_url=None)
    # the web UI may run on another origin (its API base URL is configurable)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.pack = pack
    app.state.store = store

    sessions: dict[str, _SessionBox] = {}
    session_by_user: dict[str, str] = {}
    registry_lock = threading.Lock()
    # latest completed-but-unsaved result per (user, questionnaire)
    completed: dict[tuple[str, str], QuizResult] = {}

    vehicles = {vehicle.id: vehicle for vehicle in DEFAULT_VEHICLES}

    # -- error handling ------------------------------------------------------

    @app.exception_handler(GameError)
    async def _game_error(request: Request, exc: GameError):
        return JSONResponse(status_code=_STATUS_BY_CODE[exc.code],
                            content=_error_body(exc.code, exc.message, exc.field))

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content=_error_body("validation", "malformed request body"))

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        code = _CODE_BY_HTTP_STATUS.get(exc.status_code, "io")
        return JSONResponse(status_code=exc.status_code,
                            content=_error_body(code, str(exc.detail)))

    @app.exception_handler(Exception)
    async def _unexpected_error(request: Request, exc: Exception):
        log.exception("unhandled error on %s", request.url.path)
        return JSONResponse(status_code=500,
                            content=_error_body("io", "internal error"))

    # -- helpers ---------------------------------------------------------------

    def require_user(authorization: Optional[str]) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise AuthError("missing bearer token")
        return store.authenticate(authorization[len("Bearer "):])

    def require_field(payload: dict, name: str, kind, label: str):
        value = payload.get(name)
        if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
            raise ValidationError(f"{name} must be a {label}", field=name)
        return value

    def session_box(session_id: str, user_id: str) -> _SessionBox:
        with registry_lock:
            box = sessions.get(session_id)
        if box is None or box.user_id != user_id:
            raise NotFoundError(f"no such session {session_id!r}", field="session_id")
        return box

    def quiz_view(session: Session, quiz: QuizInstance) -> dict:
        poi = next(p for p in pack.pois if p.id == quiz.poi_id)
        lang = session.language
        return {
            "questionnaire": quiz.questionnaire_name,
            "poi_id": poi.id,
            "poi_name": poi.name,
            "question_index": len(quiz.answers),  # the server-side cursor
            "question_count": len(quiz.questions),
            "questions": [{
                "text": localize(question.text, lang, pack.settings),
                "options": [localize(option, lang, pack.settings)
                            for option in question.options],
            } for question in quiz.questions],
        }

    def result_view(result: QuizResult) -> dict:
        return {
            "questionnaire": result.questionnaire_name,
            "correct_count": result.correct_count,
            "total_count": result.total_count,
            "score": result.score,
            "end_message": result.end_message,
            "topic_points": dict(result.topic_points),
        }

    def auto_begin(session: Session) -> None:
        """Start the next queued quiz; skip content that cannot run."""

        while session.active_quiz is None:
            event = engine.next_trigger(session)
            if event is None:
                return
            try:
                engine.begin_quiz(session, event)
            except ContentError as exc:
                log.warning("skipping quiz for %s: %s", event.poi_id, exc.message)
                session.pending.remove(event)

    # -- auth ------------------------------------------------------------------

    @app.post("/api/register", status_code=201)
    def register(payload: dict = Body(...)):
        email = require_field(payload, "email", str, "string")
        username = require_field(payload, "username", str, "string")
        password = require_field(payload, "password", str, "string")
        return {"user_id": store.register(email, username, password)}

    @app.post("/api/login")
    def login(payload: dict = Body(...)):
        identifier = require_field(payload, "identifier", str, "string")
        password = require_field(payload, "password", str, "string")
        return {"token": store.login(identifier, password).token}

    @app.post("/api/logout")
    def logout(authorization: Optional[str] = Header(None)):
        require_user(authorization)
        store.logout(authorization[len("Bearer "):])
        return {"status": "logged_out"}

    # -- content -----------------------------------------------------------------

    @app.get("/api/pack")
    def pack_view():
        return {
            "pois": [{
                "id": poi.id,
                "name": poi.name,
                "lat": poi.position.lat,
                "lon": poi.position.lon,
                "trigger_radius_m": poi.trigger_radius_m,
                "topic": poi.topic,
            } for poi in pack.pois],
            "parking": [{"id": spot.id, "lat": spot.position.lat, "lon": spot.position.lon}
                        for spot in pack.parking_spots],
            "topics": list(pack.settings.topics),
            "languages": list(pack.settings.languages),
        }

    # -- session and play ----------------------------------------------------------

    @app.post("/api/session", status_code=201)
    def open_session(payload: dict = Body(...),
                     authorization: Optional[str] = Header(None)):
        user_id = require_user(authorization)
        difficulty = require_field(payload, "difficulty", str, "string")
        vehicle_id = payload.get("vehicle_id", DEFAULT_VEHICLES[0].id)
        language = payload.get("language", default_language)
        if not isinstance(language, str):
            raise ValidationError("language must be a string", field="language")
        vehicle = vehicles.get(vehicle_id)
        if vehicle is None:
            raise ValidationError(f"unknown vehicle {vehicle_id!r}", field="vehicle_id")

        session = engine.start_session(user_id, difficulty, vehicle, language, pack)
        session_id = uuid.uuid4().hex
        with registry_lock:
            stale = session_by_user.pop(user_id, None)
            if stale is not None:
                sessions.pop(stale, None)  # a new session supersedes the old
            sessions[session_id] = _SessionBox(session, user_id)
            session_by_user[user_id] = session_id
        store.set_vehicle(user_id, vehicle.id)
        return {"session_id": session_id}

    @app.post("/api/session/{session_id}/position")
    def post_position(session_id: str, payload: dict = Body(...),
                      authorization: Optional[str] = Header(None)):
        user_id = require_user(authorization)
        lat = require_field(payload, "lat", (int, float), "number")
        lon = require_field(payload, "lon", (int, float), "number")
        t = require_field(payload, "t", (int, float), "number")
        box = session_box(session_id, user_id)
        with box.lock:
            try:
                events = engine.update_position(box.session, GeoPoint(lat, lon), float(t))
            except SequenceError as exc:
                # time regression is a malformed update, not a state conflict
                return JSONResponse(status_code=422,
                                    content=_error_body(exc.code, exc.message, exc.field))
            auto_begin(box.session)
            active = box.session.active_quiz
            return {
                "triggers": [{"poi_id": event.poi_id, "distance": event.distance_at_fire}
                             for event in events],
                "active_quiz": quiz_view(box.session, active) if active else None,
            }

    @app.post("/api/session/{session_id}/quiz/{questionnaire}/answer")
    def post_answer(session_id: str, questionnaire: str, payload: dict = Body(...),
                    authorization: Optional[str] = Header(None)):
        user_id = require_user(authorization)
        question_index = require_field(payload, "question_index", int, "integer")
        choice_index = require_field(payload, "choice_index", int, "integer")
        box = session_box(session_id, user_id)
        with box.lock:
            quiz = box.session.active_quiz
            if quiz is None or quiz.questionnaire_name != questionnaire:
                raise ConflictError(f"no active quiz named {questionnaire!r}")
            correct = engine.answer_question(quiz, question_index, choice_index)
            done = len(quiz.answers) == len(quiz.questions)
            response = {"correct": correct, "done": done}
            if done:
                result = engine.complete_quiz(box.session, quiz)
                completed[(user_id, result.questionnaire_name)] = result
                response["result"] = result_view(result)
            return response

    # -- results and ranking -----------------------------------------------------

    @app.post("/api/results/{questionnaire}")
    def save_result(questionnaire: str, payload: dict = Body(...),
                    authorization: Optional[str] = Header(None)):
        user_id = require_user(authorization)
        overwrite = payload.get("overwrite", False)
        if not isinstance(overwrite, bool):
            raise ValidationError("overwrite must be a boolean", field="overwrite")
        result = completed.get((user_id, questionnaire))
        if result is None:
            raise NotFoundError(
                f"no completed quiz {questionnaire!r} to save", field="questionnaire")
        outcome = engine.save_result(user_id, result, overwrite, store)
        if outcome is SaveOutcome.REJECTED_EXISTS:
            body = _error_body("conflict", "a result for this questionnaire already exists")
            body["status"] = "rejected_exists"
            return JSONResponse(status_code=409, content=body)
        for award in engine.evaluate_achievements(store.user_totals(user_id), pack.settings):
            store.record_award(user_id, award.achievement_id, award.incentive_points)
        return {"status": "stored"}

    @app.get("/api/results")
    def results(authorization: Optional[str] = Header(None)):
        user_id = require_user(authorization)
        rows = engine.get_results(user_id, pack, store)
        return {"results": [{"questionnaire": name, "score": score}
                            for name, score in rows]}

    @app.get("/api/leaderboard")
    def leaderboard(n: int = 10, authorization: Optional[str] = Header(None)):
        require_user(authorization)
        return {"leaderboard": [{"username": username, "points": points}
                                for username, points in store.leaderboard(n)]}

    return app


def app_from_config(config: ServiceConfig) -> FastAPI:
    """Build the application a deployment actually runs."""

    pack = load_content_pack(config.pack_dir)
    store = Store(config.store_path)
    app = create_app(pack, store, default_language=config.default_language)
    if config.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")
    return app
