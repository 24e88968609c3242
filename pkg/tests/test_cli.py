import json
from pathlib import Path

import pytest

from fraclmi.cli import AnalysisConfig, main, run_analysis
from fraclmi.errors import DimensionError, InvalidInput, ParseError
from fraclmi.reporting import read_plot_data

from conftest import EXAMPLE1, EXAMPLE2

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _config(system, norm="linf", frange=None, mode=None, **extra):
    d = {"system": dict(system),
         "analysis": {"norm": norm, "frequency_range": frange or {"kind": "entire"},
                      "mode": mode or {"kind": "compute", "tol": 1e-3}}}
    d.update(extra)
    return d


def _write(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _strip_timing(text):
    d = json.loads(text)
    d.pop("timing")
    return d


def test_shipped_configs_parse():
    for p in CONFIGS.glob("*.json"):
        AnalysisConfig.from_file(p)


def test_check_report_and_plot(tmp_path, capsys):
    cfg = str(CONFIGS / "example1_check.json")
    code, out, err = _run(capsys, ["check", "--config", cfg, "--plot", str(tmp_path / "p.csv")])
    assert code == 0 and err == ""
    rep = json.loads(out)
    assert rep["verdict"] == "holds" and rep["lmi"]["verdict"] == "feasible"
    header, data = read_plot_data(tmp_path / "p.csv")
    assert header == "omega,sigma_max"
    # the claimed peak is exactly the column maximum after a text round trip
    assert rep["oracle"]["peak_sigma"] == data[:, 1].max()
    assert (tmp_path / "p.png").stat().st_size > 0


def test_reports_are_byte_identical_apart_from_timing(tmp_path, capsys):
    cfg = str(CONFIGS / "example1_check.json")
    a = _run(capsys, ["check", "--config", cfg, "--seed", "3"])[1]
    b = _run(capsys, ["check", "--config", cfg, "--seed", "3"])[1]
    assert _strip_timing(a) == _strip_timing(b)
    strip = lambda t: [l for l in t.splitlines() if '"seconds"' not in l]
    assert strip(a) == strip(b)


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = _run(capsys, ["stability", "--config", str(CONFIGS / "example2_check.json"),
                                    "--out", str(out), "--plot", str(tmp_path / "e.csv")])
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["stability"]["stable"] is True
    assert read_plot_data(tmp_path / "e.csv")[0] == "re,im"
    assert (tmp_path / "e.png").exists()


def test_violated_verdict(tmp_path, capsys):
    d = _config(EXAMPLE2, "hinf", mode={"kind": "check", "delta": 1.6})
    code, out, _ = _run(capsys, ["check", "--config", _write(tmp_path, d)])
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "violated" and rep["oracle"]["peak_sigma"] >= 1.6


def test_undetermined_exit_code(tmp_path, capsys):
    # between the frequency-response peak and the LMI threshold for this order
    d = _config(EXAMPLE1, frange={"kind": "low", "omega_l": 100.0},
                mode={"kind": "check", "delta": 0.8}, solver={"max_iter": 300, "restarts": 0})
    code, out, _ = _run(capsys, ["check", "--config", _write(tmp_path, d)])
    rep = json.loads(out)
    assert code == 3 and rep["verdict"] == "undetermined"
    assert rep["oracle"]["peak_sigma"] < 0.8 < rep["oracle"]["curve_peak_sigma"]


def test_sweep_and_norm(tmp_path, capsys):
    d = _config(EXAMPLE2, "hinf", solver={"seed": 1})
    cfg = _write(tmp_path, d)
    code, out, _ = _run(capsys, ["sweep", "--config", cfg])
    assert code == 0 and json.loads(out)["verdict"] == "completed"
    code, out, _ = _run(capsys, ["norm", "--config", cfg])
    b = json.loads(out)["bracket"]
    assert code == 0 and b["lower"] <= b["upper"]


@pytest.mark.parametrize("mutate,code", [
    (lambda d: d["system"].update(B=[[1.0], [2.0], [3.0]]), "dimension_error"),
    (lambda d: d["system"].update(nu=2.5), "invalid_input"),
    (lambda d: d["system"].pop("A"), "parse_error"),
    (lambda d: d.update(extra=1), "parse_error"),
    (lambda d: d["analysis"].update(frequency_range={"kind": "low", "omega_l": 1.0}), "invalid_input"),
    (lambda d: d["analysis"].update(mode={"kind": "check", "delta": -1.0}), "invalid_input"),
    (lambda d: d["system"].update(A=[[1.0, 0.0], [0.0, -1.0]]), "unstable_system"),
    (lambda d: d["system"].update(A="x"), "parse_error"),
])
def test_error_paths(tmp_path, capsys, mutate, code):
    d = _config(EXAMPLE2, "hinf", mode={"kind": "check", "delta": 9.2})
    mutate(d)
    rc, out, err = _run(capsys, ["check", "--config", _write(tmp_path, d)])
    assert rc == 2 and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["error"] == code


def test_malformed_json_and_missing_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    for path in (str(p), str(tmp_path / "absent.json")):
        rc, _, err = _run(capsys, ["check", "--config", path])
        assert rc == 2 and json.loads(err)["error"] == "parse_error"


def test_usage_errors_are_single_line(capsys):
    for argv in (["check"], ["bogus", "--config", "x"], ["check", "--config", "x", "--seed", "z"]):
        rc, _, err = _run(capsys, argv)
        assert rc == 2 and json.loads(err)["error"] == "usage_error"


def test_unwritable_output(tmp_path, capsys):
    rc, _, err = _run(capsys, ["sweep", "--config", str(CONFIGS / "example2_check.json"),
                               "--plot", str(tmp_path / "no" / "p.csv")])
    assert rc == 2 and json.loads(err)["error"] == "unwritable_destination"


def test_seed_override():
    cfg = AnalysisConfig.from_file(CONFIGS / "example1_check.json").with_seed(9)
    assert cfg.solver.seed == 9


def test_config_errors_are_typed():
    with pytest.raises(ParseError):
        AnalysisConfig.from_json("[]")
    with pytest.raises(DimensionError):
        AnalysisConfig.from_dict(_config(dict(EXAMPLE1, D=[[1.0, 2.0]])))
    with pytest.raises(InvalidInput):
        AnalysisConfig.from_dict(_config(EXAMPLE1, mode={"kind": "check"}))


def test_run_analysis_defaults_to_mode():
    cfg = AnalysisConfig.from_dict(_config(EXAMPLE2, "hinf", mode={"kind": "check", "delta": 9.2}))
    rep = run_analysis(cfg)
    assert rep.command == "check" and rep.verdict == "holds" and rep.exit_code == 0
