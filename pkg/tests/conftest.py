from __future__ import annotations

import threading
import time
from pathlib import Path

import pytest
import uvicorn
from fastapi.testclient import TestClient

from geoquest.api import create_app
from geoquest.content import load_content_pack
from geoquest.storage import Store

REPO_ROOT = Path(__file__).resolve().parents[1]
PACK_DIR = REPO_ROOT / "packs" / "bari"
ROUTE_FILE = REPO_ROOT / "scripts" / "routes" / "bari_old_town.txt"


@pytest.fixture(scope="session")
def demo_pack():
    return load_content_pack(PACK_DIR)


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "store.json")


@pytest.fixture
def client(demo_pack, store):
    app = create_app(demo_pack, store, default_language="en")
    with TestClient(app, raise_server_exceptions=False) as test_client:
        yield test_client


@pytest.fixture
def player(client):
    """A registered, logged-in user: (client, auth headers, user_id)."""

    registered = client.post("/api/register", json={
        "email": "anna@example.it", "username": "anna", "password": "s3cretpw!"})
    assert registered.status_code == 201
    token = client.post("/api/login", json={
        "identifier": "anna", "password": "s3cretpw!"}).json()["token"]
    return client, {"Authorization": f"Bearer {token}"}, registered.json()["user_id"]


@pytest.fixture
def live_api(demo_pack, tmp_path):
    """A real uvicorn server on a random port; yields (base_url, store)."""

    store = Store(tmp_path / "live-store.json")
    app = create_app(demo_pack, store, default_language="en")
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("uvicorn did not start in time")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}", store
    server.should_exit = True
    thread.join(timeout=5)
