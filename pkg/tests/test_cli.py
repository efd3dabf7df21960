import json
import subprocess
import sys

import pytest

from holimits.cli import (EXIT_APPROX, EXIT_CHECK, EXIT_CONFIG, EXIT_OK, ConfigError, dumps,
                          load_config, main)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def report(out):
    return json.loads((out / "report.json").read_text())


def test_dumps_deterministic_floats():
    s = dumps({"b": 1.0, "a": [0.1, 2, float("inf")]})
    assert s == '{\n  "b": 1.0,\n  "a": [0.10000000000000001, 2, null]\n}'
    assert json.loads(s)["a"][0] == 0.1


def test_load_config_defaults_and_overrides(tmp_path):
    cfg = load_config("realanalytic", write(tmp_path, "c.json", {"K": 3.0}))
    assert cfg["K"] == 3.0 and cfg["family"] == "exp-partial-sum"


@pytest.mark.parametrize("payload", [
    {"nonsense": 1},
    {"j_max": 0},
    {"j_max": True},
    {"L": 9},
    {"tail_pairs": []},
    {"tail_pairs": [[1, 2, 3]]},
    "[1, 2]",
    "{not json",
])
def test_load_config_rejects(tmp_path, payload):
    with pytest.raises(ConfigError):
        load_config("harmonic", write(tmp_path, "c.json", payload))


def test_verify_suite_selection(tmp_path):
    with pytest.raises(ConfigError):
        load_config("verify", None, {"suites": []})
    with pytest.raises(ConfigError):
        load_config("verify", None, {"suites": ["cauchy", "nope"]})
    with pytest.raises(ConfigError):
        load_config("example-build", None, {"symmetry": 3})


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", ","],
    ["verify", "--suite", "bogus"],
    ["realanalytic", "--seed", "-1"],
    ["scv", "--parallel", "0"],
    ["analyze"],                       # family example without a sequence directory
])
def test_config_exit_code(tmp_path, argv, capsys):
    assert main(argv + ["--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["scv", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_realanalytic_command(tmp_path):
    out = tmp_path / "ra"
    cfg = write(tmp_path, "c.json", {"K": 3.0})
    assert main(["realanalytic", "--config", cfg, "--out", str(out)]) == EXIT_OK
    rows = (out / "derivatives.csv").read_text().splitlines()
    assert rows[0] == "j,x,order,value" and len(rows) == 1 + 12 * 21 * 5
    assert report(out)["passed"] is True


def test_realanalytic_failing_bound(tmp_path):
    out = tmp_path / "sq"
    cfg = write(tmp_path, "c.json", {"family": "sqrt-shift", "j_max": 64, "K": 2.0, "L": 2})
    assert main(["realanalytic", "--config", cfg, "--out", str(out)]) == EXIT_CHECK
    r = report(out)
    fb = next(c for c in r["checks"] if c["name"] == "realanalytic.factorial_bound")
    assert not fb["passed"] and r["details"]["minimal_K"] == pytest.approx(4.0)


def test_realanalytic_polynomial_needs_coefficients(tmp_path):
    cfg = write(tmp_path, "c.json", {"family": "polynomial"})
    assert main(["realanalytic", "--config", cfg, "--out", str(tmp_path / "p")]) == EXIT_CONFIG
    cfg = write(tmp_path, "d.json", {"family": "polynomial", "coefficients": [1, 0, 2]})
    assert main(["realanalytic", "--config", cfg, "--out", str(tmp_path / "p")]) == EXIT_OK


def test_harmonic_command(tmp_path):
    out = tmp_path / "h"
    assert main(["harmonic", "--out", str(out)]) == EXIT_OK
    assert (out / "map.csv").exists() and (out / "map.pgm").read_bytes().startswith(b"P2")


def test_scv_command(tmp_path):
    out = tmp_path / "s"
    assert main(["scv", "--out", str(out), "--seed", "11"]) == EXIT_OK
    r = report(out)
    assert r["config"]["seed"] == 11 and r["passed"]


def test_example_build_and_analyze(tmp_path):
    seq_out = tmp_path / "eb"
    assert main(["example-build", "--config", write(tmp_path, "c.json", {"j_max": 2}),
                 "--out", str(seq_out)]) == EXIT_OK
    assert (seq_out / "sequence" / "manifest.json").exists()
    cfg = write(tmp_path, "a.json", {"sequence": str(seq_out / "sequence"), "grid_cells": 16})
    # two terms are far from the limit, so the map checks fail but the run completes
    assert main(["analyze", "--config", cfg, "--out", str(tmp_path / "an")]) == EXIT_CHECK
    names = {c["name"]: c["passed"] for c in report(tmp_path / "an")["checks"]}
    assert names["analyze.input_certified"] is True


def test_example_build_uncertified_exit(tmp_path, capsys):
    out = tmp_path / "eb"
    cfg = write(tmp_path, "c.json", {"j_max": 3, "degree_cap": 16})
    assert main(["example-build", "--config", cfg, "--out", str(out)]) == EXIT_APPROX
    assert "f_3" in capsys.readouterr().err
    r = report(out)
    assert [c["passed"] for c in r["checks"]] == [True, True, False]
    cfg = write(tmp_path, "a.json", {"sequence": str(out / "sequence"), "grid_cells": 8})
    assert main(["analyze", "--config", cfg, "--out", str(tmp_path / "an")]) == EXIT_CHECK


def test_analyze_builtin_family(tmp_path):
    cfg = write(tmp_path, "a.json", {"family": "koebe", "grid_half_width": 0.55,
                                     "grid_cells": 16})
    assert main(["analyze", "--config", cfg, "--out", str(tmp_path / "k")]) == EXIT_OK
    cfg = write(tmp_path, "b.json", {"family": "no-such-family"})
    assert main(["analyze", "--config", cfg, "--out", str(tmp_path / "k")]) == EXIT_CONFIG


def test_verify_report_is_deterministic(tmp_path):
    outs = [tmp_path / "r1", tmp_path / "r2"]
    for o in outs:
        assert main(["verify", "--suite", "cauchy,schlicht,scv", "--out", str(o)]) == EXIT_OK
    assert (outs[0] / "report.json").read_bytes() == (outs[1] / "report.json").read_bytes()
    timing = json.loads((outs[0] / "timing.json").read_text())
    assert timing["wall_time_s"] > 0
    assert "wall_time" not in (outs[0] / "report.json").read_text()


def test_verify_failing_suite_exit(tmp_path):
    assert main(["verify", "--suite", "pompeiu", "--out", str(tmp_path / "p")]) == EXIT_CHECK
    r = report(tmp_path / "p")
    status = {c["name"]: c["passed"] for c in r["checks"]}
    assert status["pompeiu.reproduction"] and not status["pompeiu.refinement_halves"]


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "holimits", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
