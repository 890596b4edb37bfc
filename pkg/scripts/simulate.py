#!/usr/bin/env python3
"""Run the trip simulator CLI (same as the `simulate` entry point)."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from geoquest.cli import main

if __name__ == "__main__":
    sys.exit(main())
