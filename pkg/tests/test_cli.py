import json
import subprocess
import sys

import pytest

import dvc
from dvc.cli import main


@pytest.fixture
def script(tmp_path):
    def write(name, text=None):
        path = tmp_path / f"{name}.dvs"
        path.write_text(dvc.bundled_script(name) if text is None else text, encoding="utf-8")
        return str(path)
    return write


def test_check_bundled_covid_is_silent(script, capsys):
    assert main(["check", script("covid")]) == 0
    out, err = capsys.readouterr()
    assert out == "" and err == ""


def test_check_reports_errors_on_stderr(script, capsys):
    bad = script("bad", 'video "t" fps=30 height=54 width=96\nclip a -> b {\n}\n')
    assert main(["check", bad]) == 1
    out, err = capsys.readouterr()
    assert out == ""
    assert f"{bad}:2:" in err and "error[" in err


def test_render_minimal(script, tmp_path, capsys):
    out_dir = tmp_path / "frames"
    assert main(["render", script("minimal"), "--out", str(out_dir)]) == 0
    assert capsys.readouterr().out.startswith("31 frames written")
    assert len(list(out_dir.glob("frame_*.svg"))) == 31
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["clips"][0]["last_frame"] == 30


def test_fmt_write_is_idempotent(script, capsys):
    path = script("global_wealth")
    assert main(["fmt", "--write", path]) == 0
    once = open(path, encoding="utf-8").read()
    assert main(["fmt", "--write", path]) == 0
    assert open(path, encoding="utf-8").read() == once
    assert main(["fmt", path]) == 0
    assert capsys.readouterr().out == once


def test_classify_json(script, capsys):
    assert main(["classify", script("global_wealth"), "--clip", "3", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["clip"] == 3
    assert doc["labels"] == ["narrative_agent.merging", "narrative_agent.splitting"]


def test_classify_clip_out_of_range_is_usage(script, capsys):
    assert main(["classify", script("minimal"), "--clip", "2"]) == 2
    assert "--clip" in capsys.readouterr().err


def test_recommend_json(capsys):
    assert main(["recommend", "--from-form", "vis->vis", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["transition"] for r in doc][:3] == [
        "preserving_guide.rst_guide", "preserving_guide.staying_guide",
        "narrative_agent.updating_content"]
    assert set(doc[0]) == {"rank", "transition", "score", "rationale"}


def test_recommend_text(capsys):
    assert main(["recommend", "--relation", "whole_part", "--vis", "pie"]) == 0
    first = capsys.readouterr().out.splitlines()[0].split()
    assert first[0] == "1" and first[2] == "2"


def test_stats_from_a_labels_file(tmp_path, capsys):
    labels = tmp_path / "labels.tsv"
    labels.write_text("vis-vis\tpreserving_guide.rst_guide\nvis-others\trefresh.fade\n")
    assert main(["stats", str(labels), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["total"] == 2 and doc["agreement"] == []


def test_stats_paper_fixture_table(capsys):
    assert main(["stats", "--paper-fixture"]) == 0
    assert capsys.readouterr().out.startswith("clips: ")


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["recommend"], ["recommend", "--relation", "x"],
                                  ["stats"], ["classify", "x.dvs"]])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_missing_file_exits_3(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.dvs")]) == 3
    assert "absent.dvs" in capsys.readouterr().err


def test_console_entry_point(script):
    proc = subprocess.run([sys.executable, "-m", "dvc.cli", "check", script("minimal")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
