import json
import subprocess
import sys

import pytest

from bayes_kalman.cli import EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from bayes_kalman.state_model import dump_model, unit_model

UNIT = """mu0 = 0.0
sigma0 = 1.0
n = 1

[defaults]
a = 1.0
b = 0.0
r = 1.0
c = 1.0
d = 0.0
q = 1.0
"""


@pytest.fixture
def files(tmp_path):
    model = tmp_path / "unit.toml"
    model.write_text(UNIT)
    obs = tmp_path / "obs.csv"
    obs.write_text("t,x\n0,1\n1,1\n")
    return tmp_path, str(model), str(obs)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_filter(files, capsys):
    _, model, obs = files
    code, out, _ = run(["filter", "--model", model, "--obs", obs], capsys)
    assert code == EXIT_OK
    assert out == "t,mean,variance\n0,0.5,0.5\n1,0.8,0.6\n"


def test_smooth_all_and_single(files, capsys):
    _, model, obs = files
    code, out, _ = run(["smooth", "--model", model, "--obs", obs], capsys)
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert code == EXIT_OK and len(rows) == 2
    assert float(rows[0][1]) == pytest.approx(0.6) and float(rows[0][2]) == pytest.approx(0.4)
    code, out, _ = run(["smooth", "--model", model, "--obs", obs, "--s", "0"], capsys)
    assert out.splitlines()[1].split(",")[0] == "0" and len(out.splitlines()) == 2


def test_smooth_s_out_of_range(files, capsys):
    _, model, obs = files
    code, _, err = run(["smooth", "--model", model, "--obs", obs, "--s", "5"], capsys)
    assert code == EXIT_USAGE
    assert err.startswith("error:") and len(err.splitlines()) == 1


def test_predict(files, capsys):
    tmp, _, _ = files
    model = tmp / "pred.toml"
    model.write_text(dump_model(unit_model(3, unobserved=[2, 3])))
    obs = tmp / "pobs.csv"
    obs.write_text("t,x\n0,1\n1,1\n")
    code, out, _ = run(["predict", "--model", str(model), "--obs", str(obs)], capsys)
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "t,mean,variance,mode"
    assert [ln.split(",")[-1] for ln in lines[1:]] == ["smoothing"] * 3 + ["prediction"]


def test_predict_needs_unobserved(files, capsys):
    _, model, obs = files
    assert run(["predict", "--model", model, "--obs", obs], capsys)[0] == EXIT_USAGE


def test_missing_flag_and_unknown_command(capsys):
    assert run(["filter"], capsys)[0] == EXIT_USAGE
    assert run(["frobnicate"], capsys)[0] == EXIT_USAGE
    assert run([], capsys)[0] == EXIT_USAGE


def test_invalid_model(files, capsys):
    tmp, _, obs = files
    bad = tmp / "bad.toml"
    bad.write_text(UNIT.replace("q = 1.0", "q = 0.0"))
    code, _, err = run(["filter", "--model", str(bad), "--obs", obs], capsys)
    assert code == EXIT_INVALID
    assert "nonpositive observation noise" in err and len(err.splitlines()) == 1


def test_observation_mismatch(files, capsys):
    tmp, model, _ = files
    obs = tmp / "short.csv"
    obs.write_text("t,x\n0,1\n")
    assert run(["filter", "--model", model, "--obs", str(obs)], capsys)[0] == EXIT_INVALID


def test_numeric_failure(files, capsys):
    tmp, _, _ = files
    model = tmp / "sharp.toml"
    model.write_text(UNIT.replace("q = 1.0", "q = 0.001"))
    obs = tmp / "far.csv"
    obs.write_text("t,x\n0,1000\n1,-1000\n")
    code, _, err = run(["validate", "--model", str(model), "--obs", str(obs), "--grid-points", "257"], capsys)
    assert code == EXIT_NUMERIC
    assert err.strip().startswith("error:")


def test_simulate_then_filter_round_trip(files, capsys):
    tmp, model, _ = files
    obs = tmp / "sim.csv"
    states = tmp / "states.csv"
    code, _, _ = run(["simulate", "--model", model, "--seed", "4", "--out", str(obs), "--states-out", str(states)], capsys)
    assert code == EXIT_OK
    assert obs.read_text().startswith("t,x\n")
    assert states.read_text().startswith("t,w\n")
    first = run(["filter", "--model", model, "--obs", str(obs)], capsys)[1]
    obs2 = tmp / "sim2.csv"
    obs2.write_text(obs.read_text())
    assert run(["filter", "--model", model, "--obs", str(obs2)], capsys)[1] == first


def test_validate_random_models(tmp_path, capsys):
    out = tmp_path / "val.json"
    code, _, err = run(["validate", "--samples", "5", "--seed", "3", "--grid-points", "1025",
                        "--format", "json", "--out", str(out)], capsys)
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["max_abs_diff"] < 1e-6
    assert {r["model"] for r in doc["rows"]} == set(range(5))
    assert err.startswith("max_abs_diff=")


def test_bertrand(capsys):
    code, out, _ = run(["bertrand", "--samples", "100000", "--seed", "1"], capsys)
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0] == "param,length,exact,estimate,stderr"
    exact = {ln.split(",")[0]: float(ln.split(",")[2]) for ln in lines[1:]}
    assert exact["first"] == pytest.approx(2 / 3, abs=1e-12)
    assert exact["second"] == pytest.approx(3 / 4, abs=1e-12)


def test_bertrand_bad_length(capsys):
    assert run(["bertrand", "--length", "3"], capsys)[0] == EXIT_USAGE


def test_json_filter(files, capsys):
    _, model, obs = files
    doc = json.loads(run(["filter", "--model", model, "--obs", obs, "--format", "json"], capsys)[1])
    assert doc["rows"] == [{"t": 0, "mean": 0.5, "variance": 0.5}, {"t": 1, "mean": 0.8, "variance": 0.6}]


def test_module_entry_point(files):
    _, model, obs = files
    proc = subprocess.run([sys.executable, "-m", "bayes_kalman", "filter", "--model", model, "--obs", obs],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "0,0.5,0.5"
