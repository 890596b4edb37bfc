"""Accounts, tokens, stored results, and leaderboard aggregation.

A single-node embedded store: one JSON document persisted with the
write-temp-then-atomic-rename pattern, so a reader (or a restart) always
sees some fully committed state. All mutations are serialized by one
lock; that is plenty at the desk scale this service targets.

Passwords are salted and hashed with scrypt (memory-hard); plaintext
never touches the file. Tokens are 256-bit random values that stay
valid until an explicit logout.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import os
import re
import secrets
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .engine import UserTotals
from .errors import AuthError, StorageError, ValidationError

_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
_MIN_PASSWORD_CHARS = 8

_SCRYPT_N = 2 ** 14
_SCRYPT_R = 8
_SCRYPT_P = 1


def _hash_password(password: str, salt: bytes) -> bytes:
    return hashlib.scrypt(password.encode("utf-8"), salt=salt,
                          n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P, dklen=32)


@dataclass(frozen=True)
class SessionToken:
    token: str
    user_id: str
    issued_at: float


class Store:
    """Embedded key-value store for users, tokens, results, and awards."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._lock = threading.RLock()
        self._state: dict = {"seq": 0, "users": {}, "tokens": {}, "results": {}, "awards": {}}
        if self._path is not None and self._path.exists():
            try:
                self._state = json.loads(self._path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise StorageError(f"cannot read store file {self._path}: {exc}") from exc

    def _persist(self) -> None:
        if self._path is None:
            return
        data = json.dumps(self._state, ensure_ascii=False, indent=1)
        tmp = self._path.with_name(self._path.name + ".tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, self._path)
        except OSError as exc:
            raise StorageError(f"cannot write store file {self._path}: {exc}") from exc

    # -- accounts ----------------------------------------------------------

    def register(self, email: str, username: str, password: str) -> str:
        """Create an account; returns the new opaque user id."""

        if not _EMAIL_RE.match(email or ""):
            raise ValidationError(f"email {email!r} is not a valid address", field="email")
        if not 3 <= len(username or "") <= 32:
            raise ValidationError("username must be 3 to 32 characters", field="username")
        if len(password or "") < _MIN_PASSWORD_CHARS:
            raise ValidationError(
                f"password must be at least {_MIN_PASSWORD_CHARS} characters", field="password")
        with self._lock:
            users = self._state["users"]
            for user in users.values():
                if user["email"] == email:
                    raise ValidationError("email already registered", field="email")
                if user["username"] == username:
                    raise ValidationError("username already taken", field="username")
            user_id = uuid.uuid4().hex
            salt = secrets.token_bytes(16)
            self._state["seq"] += 1
            users[user_id] = {
                "user_id": user_id,
                "email": email,
                "username": username,
                "password_salt": salt.hex(),
                "password_hash": _hash_password(password, salt).hex(),
                "vehicle_id": None,
                "registered_seq": self._state["seq"],
            }
            self._persist()
            return user_id

    def login(self, identifier: str, password: str) -> SessionToken:
        """Exchange email-or-username plus password for a fresh token.

        Every failure is the same undifferentiated error, and a dummy
        hash runs for unknown identifiers, so callers cannot probe which
        accounts exist.
        """

        with self._lock:
            found = None
            for user in self._state["users"].values():
                if user["email"] == identifier or user["username"] == identifier:
                    found = user
                    break
            if found is None:
                _hash_password(password or "", b"\x00" * 16)
                raise AuthError("unknown identifier or wrong password")
            expected = bytes.fromhex(found["password_hash"])
            computed = _hash_password(password or "", bytes.fromhex(found["password_salt"]))
            if not hmac.compare_digest(expected, computed):
                raise AuthError("unknown identifier or wrong password")
            token = SessionToken(secrets.token_hex(32), found["user_id"], time.time())
            self._state["tokens"][token.token] = {
                "user_id": token.user_id, "issued_at": token.issued_at}
            self._persist()
            return token

    def authenticate(self, token: str) -> str:
        with self._lock:
            entry = self._state["tokens"].get(token)
            if entry is None:
                raise AuthError("unknown or revoked token")
            return entry["user_id"]

    def logout(self, token: str) -> None:
        with self._lock:
            if token not in self._state["tokens"]:
                raise AuthError("unknown or revoked token")
            del self._state["tokens"][token]
            self._persist()

    def get_user(self, user_id: str) -> dict:
        with self._lock:
            user = self._state["users"].get(user_id)
            if user is None:
                raise AuthError(f"no such user {user_id!r}")
            return dict(user)

    def set_vehicle(self, user_id: str, vehicle_id: str) -> None:
        with self._lock:
            self.get_user(user_id)
            self._state["users"][user_id]["vehicle_id"] = vehicle_id
            self._persist()

    # -- results -----------------------------------------------------------

    def put_result(self, key: str, record: dict, overwrite: bool) -> bool:
        """Atomic conditional write; False means the key existed and was kept."""

        with self._lock:
            if key in self._state["results"] and not overwrite:
                return False
            self._state["results"][key] = dict(record)
            self._persist()
            return True

    def get_result(self, key: str) -> Optional[dict]:
        with self._lock:
            record = self._state["results"].get(key)
            return dict(record) if record is not None else None

    def fetch_results(self, user_id: str) -> dict[str, dict]:
        """Every stored record belonging to a user, keyed by result key."""

        suffix = f"::{user_id}"
        with self._lock:
            return {key: dict(record) for key, record in self._state["results"].items()
                    if key.endswith(suffix)}

    # -- achievements ------------------------------------------------------

    def record_award(self, user_id: str, achievement_id: str, incentive_points: int) -> None:
        with self._lock:
            awards = self._state["awards"].setdefault(user_id, {})
            if achievement_id in awards:
                return
            awards[achievement_id] = incentive_points
            self._persist()

    def user_totals(self, user_id: str) -> UserTotals:
        """Aggregate stored results and awards into achievement inputs."""

        with self._lock:
            records = self.fetch_results(user_id)
            topic_points: dict[str, int] = {}
            for record in records.values():
                for topic, points in record.get("topic_points", {}).items():
                    topic_points[topic] = topic_points.get(topic, 0) + points
            awards = self._state["awards"].get(user_id, {})
            return UserTotals(
                total_points=sum(r["score"] for r in records.values()),
                quizzes_completed=len(records),
                topic_points=topic_points,
                awarded=frozenset(awards),
            )

    def wallet(self, user_id: str) -> int:
        """Total points: stored result scores plus awarded incentives."""

        with self._lock:
            totals = self.user_totals(user_id)
            return totals.total_points + sum(self._state["awards"].get(user_id, {}).values())

    # -- leaderboard ---------------------------------------------------------

    def leaderboard(self, top_n: int) -> list[tuple[str, int]]:
        """Top users by wallet, ties broken by earlier registration.

        Zero-point users only pad the tail when there are fewer than
        ``top_n`` users with points.
        """

        if top_n < 1:
            raise ValidationError("top_n must be >= 1", field="top_n")
        with self._lock:
            scored = [(user["username"], self.wallet(user_id), user["registered_seq"])
                      for user_id, user in self._state["users"].items()]
        ranked = [(name, points) for name, points, seq in
                  sorted(scored, key=lambda row: (-row[1], row[2])) if points > 0]
        if len(ranked) < top_n:
            zeros = sorted((row for row in scored if row[1] == 0), key=lambda row: row[2])
            ranked += [(name, points) for name, points, _ in zeros]
        return ranked[:top_n]
