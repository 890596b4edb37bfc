"""The ``simulate`` command: replay a waypoint route and check the oracle.

Exit codes: 0 when the engine matches the brute-force oracle, 1 on
mismatch, 2 for usage or configuration problems.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .content import PackParseError, PackValidationError, load_content_pack
from .errors import GameError
from .geo import GeoPoint
from .simulator import ANSWER_POLICIES, Scenario, generate_trace, replay

EXIT_MATCH = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def read_waypoints(path: Path) -> list[GeoPoint]:
    """Parse a route file: one ``lat,lon`` pair per line."""

    waypoints = []
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{number}: expected 'lat,lon', got {raw!r}")
        waypoints.append(GeoPoint(float(parts[0]), float(parts[1])))
    return waypoints


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Replay a simulated trip through a content pack and "
                    "verify triggers against a brute-force oracle.")
    parser.add_argument("--pack", required=True, help="content pack directory")
    parser.add_argument("--route", required=True, help="waypoints file, one lat,lon per line")
    parser.add_argument("--speed", type=float, default=5.0, help="speed in m/s (default 5)")
    parser.add_argument("--period", type=float, default=1.0, help="sample period in s (default 1)")
    parser.add_argument("--noise", type=float, default=0.0, help="GPS noise sigma in m (default 0)")
    parser.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    parser.add_argument("--difficulty", choices=("easy", "hard"), default="easy")
    parser.add_argument("--policy", choices=ANSWER_POLICIES, default="always-correct")
    parser.add_argument("--api", default=None, help="replay through a live API at this base URL")
    parser.add_argument("--report", default=None, help="write the JSON report here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        pack = load_content_pack(args.pack)
        waypoints = read_waypoints(Path(args.route))
        trace = generate_trace(waypoints, speed_mps=args.speed,
                               sample_period_s=args.period,
                               noise_sigma_m=args.noise, seed=args.seed)
        scenario = Scenario(difficulty=args.difficulty, answer_policy=args.policy,
                            seed=args.seed)
        report = replay(trace, scenario, pack, api_url=args.api)
    except (GameError, PackParseError, PackValidationError,
            FileNotFoundError, ValueError) as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_MATCH if report.match else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
