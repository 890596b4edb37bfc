"""The ``geoquest-serve`` command: run the HTTP service."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import uvicorn

from .api import app_from_config
from .config import ServiceConfig


def main(argv: list[str] | None = None) -> int:
    config = ServiceConfig.from_env()
    parser = argparse.ArgumentParser(
        prog="geoquest-serve", description="Run the geoquest HTTP service.")
    parser.add_argument("--host", default=config.host)
    parser.add_argument("--port", type=int, default=config.port)
    parser.add_argument("--store", default=config.store_path,
                        help="store file path (default: in-memory)")
    parser.add_argument("--pack", default=config.pack_dir, help="content pack directory")
    parser.add_argument("--language", default=config.default_language,
                        help="default session language")
    parser.add_argument("--ui", default=config.ui_dir,
                        help="serve a built web UI from this directory")
    args = parser.parse_args(argv)

    config.host = args.host
    config.port = args.port
    config.store_path = Path(args.store) if args.store else None
    config.pack_dir = Path(args.pack)
    config.default_language = args.language
    config.ui_dir = Path(args.ui) if args.ui else None

    uvicorn.run(app_from_config(config), host=config.host, port=config.port,
                log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
