#!/usr/bin/env python3
"""Print an ASCII map of a program's tappable regions.

Samples the collage on a character grid and marks each cell with the
index of the topmost shape that would receive a tap there, or '.' when
a tap would fall through. Useful for eyeballing hit areas without a
browser.

Usage:
    python3 scripts/hit_map.py tests/corpus/counter.shp [--cols 72]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from shapelab.compiler import compile_source
from shapelab.evaluator import Evaluator
from shapelab.runtime import shape_hit
from shapelab.scene import flatten_scene

MARKS = "0123456789abcdefghijklmnopqrstuvwxyz"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("file", help="program to map")
    parser.add_argument("--cols", type=int, default=72, help="map width in characters")
    args = parser.parse_args()

    result = compile_source(Path(args.file).read_text(encoding="utf-8"))
    if not result.ok:
        for d in result.diagnostics:
            print(d.render(), file=sys.stderr)
        return 1

    evaluator = Evaluator(result.compiled.typed)
    collage = evaluator.run_budgeted(
        lambda: evaluator.build_collage(evaluator.initial_model())
    )
    flats = flatten_scene(collage.root)
    tappable = [
        f for f in flats if any(h.kind in ("tap", "tapAt") for _, h in f.handlers)
    ]
    if not tappable:
        print("(no tap handlers in this program)")
        return 0

    cols = max(args.cols, 8)
    # character cells are about twice as tall as they are wide
    rows = max(int(cols * collage.height / collage.width / 2), 4)
    for row in range(rows):
        y = collage.height / 2 - (row + 0.5) * collage.height / rows
        line = []
        for col in range(cols):
            x = (col + 0.5) * collage.width / cols - collage.width / 2
            mark = "."
            for index, flat in enumerate(reversed(tappable)):
                if shape_hit(flat, x, y):
                    mark = MARKS[(len(tappable) - 1 - index) % len(MARKS)]
                    break
            line.append(mark)
        print("".join(line))

    print()
    for index, flat in enumerate(tappable):
        kinds = ",".join(h.kind for _, h in flat.handlers)
        print(f"{MARKS[index % len(MARKS)]}: {type(flat.geometry).__name__} ({kinds})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
