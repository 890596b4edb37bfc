"""Service configuration from environment variables and flags."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    store_path: Optional[Path] = None  # None keeps state in memory
    pack_dir: Path = Path("packs/bari")
    default_language: str = "en"
    ui_dir: Optional[Path] = None  # serve a built web UI from here when set

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        cfg = cls()
        cfg.host = os.environ.get("GEOQUEST_HOST", cfg.host)
        cfg.port = int(os.environ.get("GEOQUEST_PORT", cfg.port))
        if os.environ.get("GEOQUEST_STORE"):
            cfg.store_path = Path(os.environ["GEOQUEST_STORE"])
        if os.environ.get("GEOQUEST_PACK"):
            cfg.pack_dir = Path(os.environ["GEOQUEST_PACK"])
        cfg.default_language = os.environ.get("GEOQUEST_LANGUAGE", cfg.default_language)
        if os.environ.get("GEOQUEST_UI"):
            cfg.ui_dir = Path(os.environ["GEOQUEST_UI"])
        return cfg
