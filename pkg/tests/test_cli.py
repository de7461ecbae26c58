import json

import pytest

from shapelab.cli import main
from conftest import CORPUS


def corpus_path(name: str) -> str:
    return str(CORPUS / name)


def write(tmp_path, name: str, text: str) -> str:
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# --- check ---------------------------------------------------------------


def test_check_clean_program(capsys):
    assert main(["check", corpus_path("flower.shp")]) == 0
    out = capsys.readouterr()
    assert out.out == "" and out.err == ""


def test_check_reports_errors_on_stderr(tmp_path, capsys):
    src = "main = graphicsApp { view = collage 9 9 [ circle 5 |> move (1, 2) ] }\n"
    path = write(tmp_path, "bad.shp", src)
    assert main(["check", path]) == 1
    err = capsys.readouterr().err
    assert "1:" in err and ": error: " in err


def test_check_warnings_do_not_fail(tmp_path, capsys):
    src = "x = circle 5 |> size 9\n\nmain = graphicsApp { view = collage 9 9 [] }\n"
    path = write(tmp_path, "warn.shp", src)
    assert main(["check", path]) == 0
    assert ": warning: " in capsys.readouterr().err


def test_unreadable_file_is_usage_error(tmp_path, capsys):
    assert main(["check", str(tmp_path / "missing.shp")]) == 2
    assert "cannot read" in capsys.readouterr().err


# --- render ---------------------------------------------------------------


def test_render_writes_svg_to_stdout(capsys):
    assert main(["render", corpus_path("flower.shp")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("<svg ") and out.endswith("</svg>\n")


def test_render_writes_svg_to_a_file(tmp_path, capsys):
    out_file = tmp_path / "flower.svg"
    assert main(["render", corpus_path("flower.shp"), "-o", str(out_file)]) == 0
    assert capsys.readouterr().out == ""
    assert out_file.read_text(encoding="utf-8").startswith("<svg ")


def test_render_reports_evaluation_failures(tmp_path, capsys):
    src = (
        "type Msg = Go\n\n"
        "model = { n = 1 / 0 }\n\n"
        "view m = collage 9 9 []\n\n"
        "update msg m = case msg of\n"
        "  Go -> m\n\n"
        "main = notificationsApp { model = model, view = view, update = update }\n"
    )
    path = write(tmp_path, "boom.shp", src)
    assert main(["render", path]) == 1
    assert "Cannot divide by zero." in capsys.readouterr().err


# --- animate ---------------------------------------------------------------


def test_animate_writes_frames_and_manifest(tmp_path):
    out_dir = tmp_path / "frames"
    code = main(
        [
            "animate", corpus_path("slider.shp"),
            "--from", "0", "--to", "1", "--fps", "4",
            "-o", str(out_dir),
        ]
    )
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "frame_000000.svg",
        "frame_000001.svg",
        "frame_000002.svg",
        "frame_000003.svg",
        "frame_000004.svg",
        "manifest.json",
    ]
    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["fps"] == 4.0
    assert [f["index"] for f in manifest["frames"]] == [0, 1, 2, 3, 4]
    assert [f["time"] for f in manifest["frames"]] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert manifest["frames"][2]["file"] == "frame_000002.svg"
    for f in manifest["frames"]:
        body = (out_dir / f["file"]).read_text(encoding="utf-8")
        assert body.startswith("<svg ")


def test_animate_rejects_an_empty_time_range(tmp_path, capsys):
    code = main(
        [
            "animate", corpus_path("slider.shp"),
            "--from", "1", "--to", "1", "--fps", "10",
            "-o", str(tmp_path / "x"),
        ]
    )
    assert code == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_animate_requires_a_target_time(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["animate", corpus_path("slider.shp"), "--fps", "10", "-o", str(tmp_path)])
    assert exc.value.code == 2


# --- run --------------------------------------------------------------------


def test_run_replays_a_script(tmp_path):
    script = write(
        tmp_path,
        "events.json",
        json.dumps(
            [
                {"type": "tap", "x": 0, "y": 0},
                {"type": "tap", "x": 90, "y": 90},
                {"type": "tap", "x": 0, "y": 0},
            ]
        ),
    )
    out_dir = tmp_path / "out"
    code = main(["run", corpus_path("counter.shp"), "--script", script, "-o", str(out_dir)])
    assert code == 0
    svg = (out_dir / "final.svg").read_text(encoding="utf-8")
    assert 'fill="#B40000"' in svg
    trace = json.loads((out_dir / "trace.json").read_text(encoding="utf-8"))
    assert [s["fired"] for s in trace["steps"]] == [["MoreRed"], [], ["MoreRed"]]
    assert trace["finalModel"] == {"record": {"red": 180.0}}


def test_run_records_update_failures_in_the_trace(tmp_path):
    script = write(tmp_path, "events.json", json.dumps([{"type": "tick", "dt": 1}]))
    out_dir = tmp_path / "out"
    code = main(["run", corpus_path("counter.shp"), "--script", script, "-o", str(out_dir)])
    assert code == 0
    trace = json.loads((out_dir / "trace.json").read_text(encoding="utf-8"))
    assert trace["steps"][0]["error"] == "Only gameApp programs receive tick events."


def test_run_rejects_malformed_scripts(tmp_path, capsys):
    bad_json = write(tmp_path, "bad.json", "{nope")
    code = main(["run", corpus_path("counter.shp"), "--script", bad_json, "-o", str(tmp_path)])
    assert code == 2
    assert "cannot read events" in capsys.readouterr().err

    not_a_list = write(tmp_path, "obj.json", "{}")
    code = main(["run", corpus_path("counter.shp"), "--script", not_a_list, "-o", str(tmp_path)])
    assert code == 2
    assert "JSON list" in capsys.readouterr().err


def test_run_rejects_invalid_event_values(tmp_path, capsys):
    script = write(tmp_path, "events.json", json.dumps([{"type": "tap", "x": "a", "y": 0}]))
    code = main(["run", corpus_path("counter.shp"), "--script", script, "-o", str(tmp_path)])
    assert code == 2
    assert "must be a number" in capsys.readouterr().err
