"""End to end checks across the whole stack.

Each test here exercises one externally visible guarantee, from source text
down to SVG bytes or wire responses. They are intentionally coarse; the
per-module suites pin the fine-grained behavior.
"""

from __future__ import annotations

import json
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from fastapi.testclient import TestClient

from shapelab.cli import main as cli_main
from shapelab.compiler import compile_source
from shapelab.evaluator import Evaluator
from shapelab.runtime import Session, shape_hit
from shapelab.scene import (
    Circle,
    FlatShape,
    Oval,
    Rect,
    RoundedRect,
    Square,
    Text,
    Triangle,
)
from shapelab.service import create_app
from shapelab.svg import emit_svg
from shapelab.transform import AffineTransform
from shapelab.values import dump_value

from conftest import CORPUS, compile_errors, compile_ok, corpus_source
from oracles import (
    contains_points,
    sample_far_points,
    to_matrix,
    transformed_polygon,
)


def render_initial(name: str) -> str:
    program = compile_ok(corpus_source(name))
    ev = Evaluator(program.typed)
    return ev.run_budgeted(lambda: emit_svg(ev.build_collage(ev.initial_model())))


# --- a small composed scene renders correctly, fast ---------------------------


def test_flower_scene_renders_two_mirrored_groups():
    started = time.perf_counter()
    svg = render_initial("flower.shp")
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"render took {elapsed:.3f}s"
    assert svg.count('<g transform="matrix') == 2
    assert 'matrix(1,0,0,1,-50,0)' in svg
    assert 'matrix(1,0,0,1,50,0)' in svg
    assert set(re.findall(r'fill="([^"]+)"', svg)) == {"#008000", "#0000FF"}
    assert svg.count('<ellipse rx="25" ry="15"') + svg.count(
        '<ellipse rx="25" ry="15" '
    ) >= 3  # petals keep their stencil proportions


# --- the two flagship diagnostics ---------------------------------------------------


def test_flagship_diagnostics_name_the_problem():
    (d,) = compile_errors(
        "main = graphicsApp { view = collage 9 9 [ circle 5 |> move (1, 2) ] }"
    )
    assert d.severity == "error"
    assert "Stencil" in d.message and "Shape" in d.message

    diags = compile_errors(
        "type Msg = Go | Reset\n"
        "\n"
        "model = { n = 0 }\n"
        "\n"
        "view m = collage 9 9 []\n"
        "\n"
        "update msg m = case msg of\n"
        "  Go -> m\n"
        "\n"
        "main = notificationsApp { model = model, view = view, update = update }\n"
    )
    assert any("Reset" in d.message and "missing" in d.message for d in diags)


# --- the pipe operator is exactly reversed application ---------------------------


PIPE_PRELUDE = (
    "type Probe = At (Float, Float) | Mark Float\n"
    "\n"
    "half n = n / 2\n"
    "\n"
)
PIPE_MAIN = "\nmain = graphicsApp { view = collage 10 10 [] }\n"


def _num(rng, lo: float, hi: float) -> str:
    v = round(float(rng.uniform(lo, hi)), 3)
    return f"({v})" if v < 0 else f"{v}"


def _pipe_builders():
    def n(rng):
        return _num(rng, -50, 50)

    def pos(rng):
        return _num(rng, 0.5, 40)

    return [
        lambda r: (n(r), "sin"),
        lambda r: (n(r), "cos"),
        lambda r: (n(r), "degrees"),
        lambda r: (n(r), "half"),
        lambda r: (_num(r, 0, 255), f"rgb {_num(r, 0, 255)} {_num(r, 0, 255)}"),
        lambda r: (pos(r), "solid"),
        lambda r: (pos(r), "dotted"),
        lambda r: (pos(r), "dashed"),
        lambda r: (pos(r), "circle"),
        lambda r: (pos(r), "square"),
        lambda r: (pos(r), "triangle"),
        lambda r: (pos(r), f"rect {pos(r)}"),
        lambda r: (pos(r), f"oval {pos(r)}"),
        lambda r: (pos(r), f"roundedRect {pos(r)} {pos(r)}"),
        lambda r: ('"hello"', "text"),
        lambda r: ('text "hi"', f"size {_num(r, 6, 48)}"),
        lambda r: (f"circle {pos(r)}", "filled red"),
        lambda r: (
            f"rect {pos(r)} {pos(r)}",
            f"filled (rgb {_num(r, 0, 255)} {_num(r, 0, 255)} {_num(r, 0, 255)})",
        ),
        lambda r: (f"oval {pos(r)} {pos(r)}", f"outlined (dashed {_num(r, 0.5, 4)})"),
        lambda r: (f"square {pos(r)}", f"outlined (solid {_num(r, 0.5, 4)})"),
        lambda r: (f"triangle {pos(r)}", f"outlined (dotted {_num(r, 0.5, 4)})"),
        lambda r: (f"circle {pos(r)} |> filled blue", f"move ({n(r)}, {n(r)})"),
        lambda r: (f"square {pos(r)} |> filled green", f"scale {_num(r, 0.2, 4)}"),
        lambda r: (f"oval {pos(r)} {pos(r)} |> outlined (solid 1)", f"rotate {n(r)}"),
        lambda r: (f"circle {pos(r)} |> filled red", f"notifyTap (Mark {n(r)})"),
        lambda r: (f"circle {pos(r)} |> filled red", "notifyTapAt At"),
        lambda r: (f"square {pos(r)} |> filled blue", f"notifyEnter (Mark {n(r)})"),
        lambda r: (f"square {pos(r)} |> filled blue", f"notifyLeave (Mark {n(r)})"),
        lambda r: (
            f"[ circle {pos(r)} |> filled green, square {pos(r)} |> outlined (solid 1) ]",
            "group",
        ),
        lambda r: (f"[ rect {pos(r)} {pos(r)} |> filled yellow ]", "collage 40 40"),
        lambda r: (n(r), "Mark"),
        lambda r: (f"({n(r)}, {n(r)})", "At"),
    ]


def test_piping_into_a_function_equals_applying_it():
    rng = np.random.default_rng(20260817)
    builders = _pipe_builders()
    checked = 0
    for i in range(500):
        x_src, f_src = builders[i % len(builders)](rng)
        source = (
            PIPE_PRELUDE
            + f"left = {x_src} |> {f_src}\n\nright = ({f_src}) ({x_src})\n"
            + PIPE_MAIN
        )
        result = compile_source(source)
        assert result.ok, (x_src, f_src, [d.render() for d in result.diagnostics])
        ev = Evaluator(result.compiled.typed)
        left = ev.run_budgeted(lambda: dump_value(ev.global_value("left", (1, 1))))
        right = ev.run_budgeted(lambda: dump_value(ev.global_value("right", (1, 1))))
        assert left == right, (x_src, f_src, left, right)
        checked += 1
    assert checked == 500


# --- transform algebra against homogeneous matrices -------------------------------


def _random_transform(rng) -> AffineTransform:
    while True:
        a, b, c, d = rng.uniform(-10, 10, 4)
        if abs(a * d - b * c) > 1e-3:
            return AffineTransform(a, b, c, d, *rng.uniform(-10, 10, 2))


def _assert_matches(t: AffineTransform, m: np.ndarray) -> None:
    got = np.array([t.a, t.b, t.c, t.d, t.tx, t.ty])
    want = np.array([m[0, 0], m[1, 0], m[0, 1], m[1, 1], m[0, 2], m[1, 2]])
    assert np.max(np.abs(got - want)) <= 1e-9, (t, m)


def test_transform_algebra_matches_the_matrix_oracle():
    from shapelab.transform import apply_point, compose, invert

    rng = np.random.default_rng(404)
    started = time.perf_counter()
    for _ in range(1000):
        t1 = _random_transform(rng)
        t2 = _random_transform(rng)
        m1, m2 = to_matrix(t1), to_matrix(t2)

        _assert_matches(compose(t1, t2), m1 @ m2)
        _assert_matches(invert(t1), np.linalg.inv(m1))
        _assert_matches(compose(t1, invert(t1)), np.eye(3))
        _assert_matches(
            compose(compose(t1, t2), t1), m1 @ m2 @ m1
        )

        px, py = rng.uniform(-100, 100, 2)
        gx, gy = apply_point(t1, (px, py))
        wx, wy, _ = m1 @ np.array([px, py, 1.0])
        assert abs(gx - wx) <= 1e-9 and abs(gy - wy) <= 1e-9
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"algebra check took {elapsed:.3f}s"


# --- hit testing against a dense sampled-area oracle ---------------------------------


_GEOMETRY_MAKERS = [
    lambda rng: Circle(float(rng.uniform(5, 40))),
    lambda rng: Square(float(rng.uniform(5, 60))),
    lambda rng: Rect(float(rng.uniform(5, 80)), float(rng.uniform(5, 50))),
    lambda rng: Oval(float(rng.uniform(5, 80)), float(rng.uniform(5, 50))),
    lambda rng: Triangle(float(rng.uniform(5, 50))),
    lambda rng: RoundedRect(
        w := float(rng.uniform(10, 80)),
        h := float(rng.uniform(10, 50)),
        float(rng.uniform(1, min(w, h) / 2)),
    ),
    lambda rng: Text("specimen", float(rng.uniform(8, 40))),
]

def test_hit_testing_agrees_with_the_sampled_area_oracle():
    from shapelab.colors import PALETTE
    from shapelab.scene import Filled

    style = Filled(PALETTE["red"])
    rng = np.random.default_rng(77)
    started = time.perf_counter()
    total = 0
    agree = 0
    for i in range(100):
        geom = _GEOMETRY_MAKERS[i % len(_GEOMETRY_MAKERS)](rng)
        while True:
            a, b, c, d = rng.uniform(-2, 2, 4)
            if abs(a * d - b * c) > 1e-3:
                break
        t = AffineTransform(a, b, c, d, *rng.uniform(-50, 50, 2))
        flat = FlatShape((), t, geom, style, ())
        poly = transformed_polygon(geom, t)
        xs, ys = sample_far_points(poly, rng, 1000, margin=1.0, grid=0.05)
        want = contains_points(poly, xs, ys)
        got = np.fromiter(
            (shape_hit(flat, float(x), float(y)) for x, y in zip(xs, ys)),
            dtype=bool,
            count=len(xs),
        )
        agree += int((got == want).sum())
        total += len(xs)
    elapsed = time.perf_counter() - started
    assert total == 100_000
    assert agree / total >= 0.999, f"agreement {agree / total:.5f}"
    assert elapsed < 60.0, f"hit testing took {elapsed:.3f}s"


# --- tap replay is deterministic across process, CLI, and HTTP paths ------------------


COUNTER_TAPS = [
    {"type": "tap", "x": 0, "y": 0},
    {"type": "tap", "x": 90, "y": 90},
    {"type": "tap", "x": 0, "y": 0},
]


def test_tap_replay_is_deterministic_everywhere(tmp_path):
    source = corpus_source("counter.shp")
    program = compile_ok(source)

    svgs = set()
    for _ in range(10):
        session = Session(program.typed)
        fired = [session.handle_event(dict(e))["fired"] for e in COUNTER_TAPS]
        assert [m for step in fired for m in step] == ["MoreRed", "MoreRed"]
        svgs.add(session.view_svg())
    assert len(svgs) == 1
    in_process_svg = svgs.pop()

    script = tmp_path / "taps.json"
    script.write_text(json.dumps(COUNTER_TAPS), encoding="utf-8")
    out_dir = tmp_path / "out"
    code = cli_main(
        ["run", str(CORPUS / "counter.shp"), "--script", str(script), "-o", str(out_dir)]
    )
    assert code == 0
    cli_svg = (out_dir / "final.svg").read_text(encoding="utf-8")

    client = TestClient(create_app())
    pid = client.post("/compile", json={"source": source}).json()["programId"]
    sid = client.post("/sessions", json={"programId": pid}).json()["sessionId"]
    http_svg = ""
    http_fired = []
    for event in COUNTER_TAPS:
        body = client.post(f"/sessions/{sid}/events", json=event).json()
        http_fired.extend(body["firedMessages"])
        http_svg = body["svg"]
    assert http_fired == ["MoreRed", "MoreRed"]

    assert in_process_svg == cli_svg == http_svg
    assert 'fill="#B40000"' in in_process_svg


# --- time-lapse rendering: a full period loops, static scenes do not move -------------


def test_animation_frames_loop_and_static_scenes_stand_still(tmp_path):
    slider_dir = tmp_path / "slider"
    code = cli_main(
        [
            "animate", str(CORPUS / "slider.shp"),
            "--from", "0", "--to", "2", "--fps", "10",
            "-o", str(slider_dir),
        ]
    )
    assert code == 0
    frames = sorted(slider_dir.glob("frame_*.svg"))
    assert len(frames) == 21
    first = frames[0].read_bytes()
    last = frames[-1].read_bytes()
    assert first == last  # one full period
    assert frames[5].read_bytes() != first  # but the dot does move in between

    flower_dir = tmp_path / "flower"
    code = cli_main(
        [
            "animate", str(CORPUS / "flower.shp"),
            "--from", "0", "--to", "1", "--fps", "10",
            "-o", str(flower_dir),
        ]
    )
    assert code == 0
    stills = {p.read_bytes() for p in flower_dir.glob("frame_*.svg")}
    assert len(stills) == 1


# --- keyboard-driven game loop --------------------------------------------------------


def test_game_loop_sees_held_keys_and_elapsed_time():
    program = compile_ok(corpus_source("walker.shp"))
    session = Session(program.typed)
    steps = [
        session.handle_event({"type": "keydown", "key": "ArrowLeft"}),
        session.handle_event({"type": "tick", "dt": 0.5}),
        session.handle_event({"type": "tick", "dt": 0.5}),
    ]
    assert steps[0]["fired"] == []
    assert steps[1]["fired"] == ["Tick 0.5 keys [ArrowLeft]"]
    assert steps[2]["fired"] == ["Tick 1 keys [ArrowLeft]"]
    trace = session.trace()
    assert trace["elapsed"] == 1.0
    assert trace["finalModel"] == {
        "record": {"left": True, "t": 1.0, "x": -20.0}
    }


# --- fifty concurrent sessions behave like fifty serial ones ---------------------------


def _storm(index: int) -> list[dict]:
    rng = np.random.default_rng(1000 + index)
    events = []
    for _ in range(8 + index % 5):
        if rng.uniform() < 0.6:
            events.append({"type": "tap", "x": 0, "y": 0})
        else:
            events.append({"type": "tap", "x": 90, "y": 90})
    return events


def test_concurrent_sessions_match_their_serial_replays():
    source = corpus_source("counter.shp")
    program = compile_ok(source)

    expected = []
    for i in range(50):
        session = Session(program.typed)
        fired = [session.handle_event(dict(e))["fired"] for e in _storm(i)]
        expected.append((fired, session.trace()["finalModel"]))

    app = create_app()
    setup = TestClient(app)
    pid = setup.post("/compile", json={"source": source}).json()["programId"]
    sids = [
        setup.post("/sessions", json={"programId": pid}).json()["sessionId"]
        for _ in range(50)
    ]

    barrier = threading.Barrier(50)

    def drive(index: int):
        client = TestClient(app)
        barrier.wait(timeout=30)
        fired = []
        for event in _storm(index):
            body = client.post(f"/sessions/{sids[index]}/events", json=event).json()
            fired.append(body["firedMessages"])
        final = client.get(f"/sessions/{sids[index]}").json()["modelDump"]
        return fired, final

    with ThreadPoolExecutor(max_workers=50) as pool:
        results = list(pool.map(drive, range(50)))

    for i, (got, want) in enumerate(zip(results, expected)):
        assert got[0] == want[0], f"session {i} fired lists diverged"
        assert got[1] == want[1], f"session {i} final model diverged"
