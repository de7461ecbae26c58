#!/usr/bin/env python3
"""Measure event throughput for an interactive program.

Replays a storm of random taps against the counter sample and reports
events per second, split into the update pass and the re-render pass.

Usage:
    python3 scripts/bench_events.py [--events 2000] [--seed 0]
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from shapelab.compiler import compile_source
from shapelab.runtime import Session

COUNTER = Path(__file__).resolve().parent.parent / "tests" / "corpus" / "counter.shp"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    result = compile_source(COUNTER.read_text(encoding="utf-8"))
    if not result.ok:
        for d in result.diagnostics:
            print(d.render(), file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    events = [
        {"type": "tap", "x": rng.choice([0.0, 90.0]), "y": rng.choice([0.0, 90.0])}
        for _ in range(args.events)
    ]

    session = Session(result.compiled.typed)
    started = time.perf_counter()
    fired = 0
    for event in events:
        fired += len(session.handle_event(event)["fired"])
    update_seconds = time.perf_counter() - started

    started = time.perf_counter()
    svg = session.view_svg()
    render_seconds = time.perf_counter() - started

    print(f"events          {args.events}")
    print(f"messages fired  {fired}")
    print(f"update pass     {update_seconds:.3f}s  ({args.events / update_seconds:,.0f} events/s)")
    print(f"final render    {render_seconds * 1000:.2f}ms  ({len(svg)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
