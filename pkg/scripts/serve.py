#!/usr/bin/env python3
"""Run the HTTP service with the bundled Bari pack.

Equivalent to `geoquest-serve`; kept as a script so the repo runs
without installing console entry points.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from geoquest.serve import main

if __name__ == "__main__":
    sys.exit(main())
