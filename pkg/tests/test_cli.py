import numpy as np
import pytest

from asmcsim.cli import main, parse_seed_range
from asmcsim.scenario import ScenarioError
from asmcsim.traceio import CSV_COLUMNS

FAST_SCENARIO = """
[vibration]
seed = 0

[sim]
duration = 1
step = 5e-4
"""


@pytest.fixture
def fast_scenario(tmp_path):
    path = tmp_path / "fast.ini"
    path.write_text(FAST_SCENARIO)
    return path


def test_run_writes_outputs(fast_scenario, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["run", str(fast_scenario), "--out", str(out), "--kv"])
    assert rc == 0
    for name in ("trace.csv", "summary.txt", "summary.kv"):
        text = (out / name).read_text()
        assert text.startswith("# asmcsim=")
        assert "seed=0" in text.splitlines()[0]
        assert "rng=pcg64" in text.splitlines()[0]
    assert "dq_rms" in capsys.readouterr().out


def test_run_twice_is_byte_identical(fast_scenario, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(fast_scenario), "--seed", "7", "--out", str(out1)]) == 0
    assert main(["run", str(fast_scenario), "--seed", "7", "--out", str(out2)]) == 0
    assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()


def test_metrics_matches_run_summary(fast_scenario, tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", str(fast_scenario), "--out", str(out)])
    capsys.readouterr()
    rc = main(["metrics", str(out / "trace.csv")])
    assert rc == 0
    printed = capsys.readouterr().out.strip()
    stored = (out / "summary.txt").read_text().splitlines()[1:]
    assert printed.splitlines() == stored


def test_metrics_hand_written_csv(tmp_path, capsys):
    rows = []
    for t, e in ((0.0, 0.0), (1.0, 3.0), (2.0, -4.0)):
        row = [0.0] * 19
        row[0] = t
        row[5] = e
        rows.append(",".join(repr(v) for v in row))
    path = tmp_path / "toy.csv"
    path.write_text(CSV_COLUMNS + "\n" + "\n".join(rows) + "\n")
    assert main(["metrics", str(path)]) == 0
    out = capsys.readouterr().out
    line = next(l for l in out.splitlines() if l.startswith("dq_max"))
    assert float(line.split()[1]) == 4.0
    line = next(l for l in out.splitlines() if l.startswith("dq_rms"))
    np.testing.assert_allclose(float(line.split()[1]), np.sqrt(25.0 / 3.0), atol=1e-4)


def test_metrics_empty_csv_exits_2(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("")
    assert main(["metrics", str(path)]) == 2
    path.write_text(CSV_COLUMNS + "\n")
    assert main(["metrics", str(path)]) == 2


def test_metrics_malformed_csv_exits_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(CSV_COLUMNS + "\n1.0,2.0\n")
    assert main(["metrics", str(path)]) == 2


def test_bad_scenario_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[gains]\nk1 = -80, 60\n")
    assert main(["run", str(path)]) == 2
    assert "k1" in capsys.readouterr().err


def test_divergence_exits_3(tmp_path):
    path = tmp_path / "diverge.ini"
    path.write_text("[gains]\nk1 = 1e9, 1e9\n[sim]\nduration = 1\nstep = 5e-4\n")
    assert main(["run", str(path), "--out", str(tmp_path / "o")]) == 3


def test_plot_renders_figures(fast_scenario, tmp_path):
    out = tmp_path / "out"
    rc = main(["run", str(fast_scenario), "--out", str(out), "--plot", "--decimation", "4"])
    assert rc == 0
    for name in ("tracking.svg", "error.svg", "torque.svg", "disturbance.svg"):
        text = (out / name).read_text()
        assert "asmcsim=" in text.splitlines()[1]


def test_parse_seed_range():
    assert parse_seed_range("0..4") == [0, 1, 2, 3, 4]
    assert parse_seed_range("3") == [3]
    with pytest.raises(ScenarioError):
        parse_seed_range("5..4")
    with pytest.raises(ScenarioError):
        parse_seed_range("a..b")


def test_compare_single_seed_zero_stddev(fast_scenario, capsys):
    rc = main(["compare", str(fast_scenario), "--seeds", "3..3"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "asmc" in out and "pd" in out
    assert "±0.0000" in out


def test_compare_empty_range_exits_2(fast_scenario):
    assert main(["compare", str(fast_scenario), "--seeds", "5..4"]) == 2
