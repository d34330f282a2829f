from gameflow.flow import iof, select_delta
from gameflow.report import render_player_table, render_replay


def test_render_replay_deterministic(tmp_path, ryukyu_path):
    res = iof(ryukyu_path, select_delta(ryukyu_path))
    p1, p2 = tmp_path / "a.png", tmp_path / "b.png"
    render_replay(ryukyu_path, res, p1, title="vs Ryukyu", epsilon=0.1)
    render_replay(ryukyu_path, res, p2, title="vs Ryukyu", epsilon=0.1)
    data = p1.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 5000
    assert data == p2.read_bytes()


def test_render_player_table(tmp_path):
    totals = {"A": 0.31, "B": 0.12, "C": -0.05}
    out = tmp_path / "totals.png"
    render_player_table(totals, out, title="season totals")
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
