#!/usr/bin/env python3
"""Render every sample program's initial view to an SVG gallery.

Usage:
    python3 scripts/render_gallery.py [--corpus tests/corpus] [--out out/gallery]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from shapelab.compiler import compile_source
from shapelab.evaluator import Evaluator
from shapelab.svg import emit_svg


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default="tests/corpus", help="directory of .shp files")
    parser.add_argument("--out", default="out/gallery", help="directory for the SVGs")
    args = parser.parse_args()

    corpus = Path(args.corpus)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    sources = sorted(corpus.glob("*.shp"))
    if not sources:
        print(f"no .shp files under {corpus}", file=sys.stderr)
        return 2

    failures = 0
    for path in sources:
        result = compile_source(path.read_text(encoding="utf-8"))
        if not result.ok:
            failures += 1
            print(f"{path.name:24} FAILED")
            for d in result.diagnostics:
                print(f"    {d.render()}")
            continue
        evaluator = Evaluator(result.compiled.typed)
        svg = evaluator.run_budgeted(
            lambda: emit_svg(evaluator.build_collage(evaluator.initial_model()))
        )
        target = out_dir / (path.stem + ".svg")
        target.write_text(svg, encoding="utf-8")
        print(f"{path.name:24} -> {target}  ({len(svg)} bytes)")

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
