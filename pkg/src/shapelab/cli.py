"""Command line entry points.

Exit codes: 0 success, 1 the program has errors, 2 bad usage or I/O.
Diagnostics always go to stderr, one per line, as line:col: severity: text.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .compiler import CompiledProgram, compile_source
from .errors import BadRange, EvalError
from .evaluator import Evaluator
from .runtime import Session
from .svg import bind_time, emit_svg, frame_name, frame_times

DEFAULT_PORT = 8642


def _print_diagnostics(diagnostics) -> None:
    for d in diagnostics:
        print(d.render(), file=sys.stderr)


def _read_source(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        print(f"error: cannot read {path}: {err}", file=sys.stderr)
        return None


def _compile_file(path: str) -> CompiledProgram | int:
    source = _read_source(path)
    if source is None:
        return 2
    result = compile_source(source)
    _print_diagnostics(result.diagnostics)
    if result.compiled is None:
        return 1
    return result.compiled


def _cmd_check(args) -> int:
    compiled = _compile_file(args.file)
    if isinstance(compiled, int):
        return compiled
    return 0


def _cmd_render(args) -> int:
    compiled = _compile_file(args.file)
    if isinstance(compiled, int):
        return compiled
    evaluator = Evaluator(compiled.typed)
    try:
        svg = evaluator.run_budgeted(
            lambda: emit_svg(evaluator.build_collage(evaluator.initial_model()))
        )
    except EvalError as err:
        _print_diagnostics([err.diagnostic()])
        return 1
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return 0


def _cmd_animate(args) -> int:
    compiled = _compile_file(args.file)
    if isinstance(compiled, int):
        return compiled
    try:
        times = frame_times(args.t_from, args.t_to, args.fps)
    except BadRange as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    evaluator = Evaluator(compiled.typed)
    try:
        base = evaluator.run_budgeted(evaluator.initial_model)
        frames = []
        for index, t in enumerate(times):
            model = bind_time(base, t)
            svg = evaluator.run_budgeted(lambda: emit_svg(evaluator.build_collage(model)))
            name = frame_name(index)
            (out_dir / name).write_text(svg, encoding="utf-8")
            frames.append({"index": index, "time": t, "file": name})
    except EvalError as err:
        _print_diagnostics([err.diagnostic()])
        return 1
    manifest = {"fps": args.fps, "frames": frames}
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def _cmd_run(args) -> int:
    compiled = _compile_file(args.file)
    if isinstance(compiled, int):
        return compiled
    try:
        events = json.loads(Path(args.script).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read events from {args.script}: {err}", file=sys.stderr)
        return 2
    if not isinstance(events, list) or not all(isinstance(e, dict) for e in events):
        print("error: events file must hold a JSON list of event objects", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        session = Session(compiled.typed)
        for event in events:
            session.handle_event(event)
        svg = session.view_svg()
    except EvalError as err:
        _print_diagnostics([err.diagnostic()])
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    (out_dir / "final.svg").write_text(svg, encoding="utf-8")
    (out_dir / "trace.json").write_text(
        json.dumps(session.trace(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(allow_origins=args.allow_origin or None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shapelab", description="Shape language tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="compile a program and report diagnostics")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("render", help="render the initial view to SVG")
    p.add_argument("file")
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("animate", help="render animation frames and a manifest")
    p.add_argument("file")
    p.add_argument("--from", dest="t_from", type=float, default=0.0,
                   help="start time in seconds")
    p.add_argument("--to", dest="t_to", type=float, required=True,
                   help="end time in seconds")
    p.add_argument("--fps", type=float, required=True, help="frames per second")
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_animate)

    p = sub.add_parser("run", help="replay an event script and write the trace")
    p.add_argument("file")
    p.add_argument("--script", required=True, help="JSON file with a list of events")
    p.add_argument("-o", "--out", default=".", help="output directory")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument(
        "--allow-origin",
        action="append",
        help="origin allowed to call the service (repeatable)",
    )
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
