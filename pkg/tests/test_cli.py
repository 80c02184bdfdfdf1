import json

import pytest

from mvaut import cli
from mvaut.pipeline import Report


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_signflip_example(capsys):
    code, out = run(capsys, "desk", "--check", "signflip-det", "--r", "3", "--trials", "100", "--seed", "7")
    rep = json.loads(out.out)
    assert code == 0 and rep["pass"] and rep["schema"] == 1 and rep["seed"] == 7
    assert rep["checks"][0]["computed"] == 100
    assert rep["checks"][0]["elapsed_ms"] is None
    assert out.out.endswith("\n")


def test_report_is_deterministic(capsys):
    args = ("desk", "--check", "voldet-scale", "--trials", "20", "--seed", "3")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a.out == b.out


def test_timings_flag(capsys):
    _, out = run(capsys, "desk", "--check", "voldet-scale", "--trials", "2", "--timings")
    rep = json.loads(out.out)
    assert all(c["elapsed_ms"] is None for c in rep["checks"])  # desk checks are untimed
    assert rep["pass"]


def test_arrangement_dot(capsys, tmp_path):
    path = tmp_path / "delta.dot"
    code, _ = run(capsys, "arrangement", "--emit", "dot", "--out", str(path))
    text = path.read_text()
    assert code == 0 and text.count("shape=") == 106 and text.count(" -- ") == 60 * 7


def test_arrangement_json(capsys):
    code, out = run(capsys, "arrangement")
    data = json.loads(out.out)
    assert len(data["flats"]) == 60 and len(data["lines"]) == 46


def test_fano(capsys):
    code, out = run(capsys, "fano", "--emit", "text")
    assert code == 0 and "overall: PASS" in out.out


def test_group_small(capsys):
    code, out = run(capsys, "group", "--which", "l13")
    data = json.loads(out.out)
    assert code == 0 and data["order"] == 24 and len(data["elements"]) == 24


def test_safety_bound_aborts(capsys, monkeypatch):
    monkeypatch.setenv("MVAUT_SAFETY_BOUND", "10")
    code, out = run(capsys, "group", "--which", "expected")
    assert code == 1 and "safety bound" in out.err


def test_failure_exit_code(capsys, monkeypatch):
    def broken(seed, samples):
        r = Report("fano", seed)
        r.add("always_wrong", 1, 2)
        return r

    monkeypatch.setattr(cli, "run_fano", broken)
    code, out = run(capsys, "fano")
    rep = json.loads(out.out)
    assert code == 1 and rep["pass"] is False and rep["checks"][0]["name"] == "always_wrong"


@pytest.mark.parametrize("argv", [["nope"], ["desk"], ["desk", "--check", "bogus"], ["verify-all", "--wat"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_bad_desk_values(capsys):
    code, out = run(capsys, "desk", "--check", "simplex", "--d", "2", "--n", "3")
    assert code == 2 and "--n" in out.err
