"""The command-line surface, driven through main()."""

import json

import pytest

from chessarm.cli import main


def test_collect_writes_outputs(tmp_path, capsys):
    out = tmp_path / "plan"
    assert main(["collect", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "images: 160" in printed
    assert "crop set D: 2048" in printed
    assert "crop set S: 8192" in printed
    assert (out / "manifest.json").exists()
    assert (out / "shift_plans.json").exists()


def test_collect_custom_base(tmp_path, capsys):
    base = tmp_path / "base.fen"
    base.write_text("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR\n")
    out = tmp_path / "plan"
    assert main(["collect", "--base", str(base), "--out", str(out)]) == 0
    data = json.loads((out / "manifest.json").read_text())
    assert data["base_fen"].startswith("rnbqkbnr/")


def test_calibrate_synthetic(capsys):
    assert main(["calibrate", "--synthetic"]) == 0
    printed = capsys.readouterr().out
    assert "residual:" in printed
    assert "a1 center:" in printed


def test_calibrate_markers_file(tmp_path, capsys):
    import numpy as np

    from chessarm.geometry import (
        BoardGeometry,
        CameraModel,
        Pose,
        marker_corners_3d,
        project,
    )

    camera = CameraModel(fx=1200.0, fy=1200.0, cx=960.0, cy=540.0)
    geometry = BoardGeometry()
    markers = []
    for i, anchor in enumerate(geometry.marker_anchors):
        pose = Pose(np.eye(3), np.asarray(anchor) + np.array([0.0, 0.0, 0.7]))
        corners = [list(project(camera, pose, p)) for p in marker_corners_3d(0.05)]
        markers.append({"marker_id": i, "corners_px": corners, "marker_length": 0.05})
    path = tmp_path / "markers.json"
    path.write_text(json.dumps({"markers": markers}))
    assert main(["calibrate", "--markers", str(path)]) == 0
    printed = capsys.readouterr().out
    assert "residual:" in printed


def test_simulate_perception(capsys):
    assert main(["--seed", "5", "simulate-perception", "--noise", "0.02", "--turns", "25"]) == 0
    printed = capsys.readouterr().out
    assert "resolved:" in printed and "turns: 25" in printed


def test_grasp_sim(capsys):
    assert main(["--seed", "3", "grasp-sim", "--piece", "pawn", "--offsets", "0,0.02"]) == 0
    printed = capsys.readouterr().out
    assert "-> accurate" in printed or "-> remedied" in printed
    assert "-> missed" in printed


def test_play_scripted(capsys, tmp_path):
    assert main(
        ["--seed", "2", "--log", str(tmp_path), "play", "--moves", "e7e5,d7d5"]
    ) == 0
    printed = capsys.readouterr().out
    assert "result:" in printed
    assert "phase" in printed  # the timing report table
    assert (tmp_path / "events.ndjson").exists()
    assert (tmp_path / "game.pgn").exists()


def test_replay_pgn(tmp_path, capsys):
    pgn = tmp_path / "game.pgn"
    pgn.write_text(
        '[Event "mini"]\n[Result "1-0"]\n\n'
        "1. e4 e5 2. Bc4 Nc6 3. Qh5 Nf6 4. Qxf7# 1-0\n"
    )
    assert main(["replay", "--pgn", str(pgn)]) == 0
    printed = capsys.readouterr().out
    assert "result: 1-0" in printed
    assert "replayed 7 plies" in printed


def test_bad_config_rejected(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text('{"nonsense_key": 1}')
    from chessarm.orchestrator import ConfigError

    with pytest.raises(ConfigError):
        main(["--config", str(config), "calibrate", "--synthetic"])
