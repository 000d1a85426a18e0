"""Tests for the scan runner and the command-line interface."""

import json
import math

import numpy as np
import pytest

from vacuum_sampler.cli import main
from vacuum_sampler.scan import (
    ConfigError,
    NumericalError,
    RunConfig,
    ScanResult,
    run_scenario,
)

SIGMA_P_ANGULAR_THZ = math.sqrt(2.0 * math.log(2.0)) / 5.8e-15 / 1e12


def eo_doc(points=6, start=190.4, stop=319.6, scenario="eo_scan"):
    return {
        "scenario": scenario,
        "crystal": {"length_um": 7.0, "r41_pm_per_v": 4.0, "radius_um": 3.0},
        "probe": {"omega_p_over_2pi_thz": 255.0,
                  "sigma_p_angular_thz": SIGMA_P_ANGULAR_THZ,
                  "t_p_fs": 0.0, "phi_p_rad": 0.0, "photon_number": 5.0e9},
        "partition": {"lambda_cut_over_2pi_thz": 100.0},
        "filter": {"delta_omega_over_2pi_thz": 1.0},
        "grid": {"start_over_2pi_thz": start, "stop_over_2pi_thz": stop,
                 "points": points},
    }


def subcycle_doc(points=10):
    return {"scenario": "subcycle",
            "grid": {"start_ratio": 0.05, "stop_ratio": 2.0, "points": points}}


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


# ------------------------------------------------------------ config layer

def test_config_validation_errors():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scenario": "bogus"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scenario": "subcycle", "grid": {"points": 1,
                             "start_ratio": 0.1, "stop_ratio": 1.0}})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scenario": "subcycle",
                             "grid": {"points": 5, "start_ratio": 2.0,
                                      "stop_ratio": 1.0}})
    bad = eo_doc()
    del bad["probe"]["photon_number"]
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_config_roundtrip_through_echo():
    cfg = RunConfig.from_dict(eo_doc())
    echoed = RunConfig.from_dict(json.loads(cfg.echo()))
    assert cfg == echoed


def test_scan_result_rejects_nan():
    with pytest.raises(NumericalError):
        ScanResult(columns={"x": np.array([1.0, np.nan])}, metadata={})


# ------------------------------------------------------------- scenarios

def test_subcycle_scan_matches_mode_algebra():
    cfg = RunConfig.from_dict({"scenario": "subcycle",
                               "grid": {"start_ratio": 0.05,
                                        "stop_ratio": 1.0, "points": 20}})
    res = run_scenario(cfg)
    assert res.n_rows == 20
    # monochromatic end: both variances at shot noise within 1e-3
    assert abs(res.columns["var_q"][0] - 1.0) < 1e-3
    assert abs(res.columns["var_p"][0] - 1.0) < 1e-3
    # unit-ratio end: frozen closed-form anchors
    assert res.columns["var_p"][-1] == pytest.approx(1.6505723902, abs=1e-6)
    assert res.columns["var_q"][-1] == pytest.approx(0.6826894921, abs=1e-6)
    assert np.allclose(res.columns["mus_q"], 1.0 / res.columns["var_p"])


def test_eo_scan_columns_and_zero_probe():
    doc = eo_doc(points=3, start=250.0, stop=260.0)
    doc["probe"]["photon_number"] = 0.0
    res = run_scenario(RunConfig.from_dict(doc), jobs=1)
    for key in ("var_q_1", "var_p_1", "var_q_2", "var_p_2",
                "var_q_pert", "var_p_pert"):
        assert np.allclose(res.columns[key], 1.0)
    assert np.allclose(res.columns["theta1"], 0.0)


def test_eo_scan_order_subset():
    res = run_scenario(RunConfig.from_dict(eo_doc(points=2, start=300.0,
                                                  stop=310.0)),
                       jobs=1, order_flag="1")
    assert "var_q_1" in res.columns
    assert "var_q_2" not in res.columns


def test_order_compare_differences():
    doc = eo_doc(points=3, start=300.0, stop=315.0, scenario="order_compare")
    res = run_scenario(RunConfig.from_dict(doc), jobs=1)
    assert np.allclose(res.columns["dvar_q"],
                       res.columns["var_q_2"] - res.columns["var_q_1"])


def test_waveform_scenario():
    doc = eo_doc(scenario="waveform")
    doc["filter"]["omega_tilde_over_2pi_thz"] = 303.46
    doc["grid"] = {"t_min_fs": -60.0, "t_max_fs": 60.0, "points": 256}
    res = run_scenario(RunConfig.from_dict(doc))
    assert res.n_rows == 256
    peak_t = res.columns["t_fs"][int(np.argmax(res.columns["probe_env"]))]
    assert abs(peak_t) < 1.0
    env = res.columns["probed_env"]
    assert np.allclose(env, np.hypot(res.columns["probed_re"],
                                     res.columns["probed_im"]))


def test_dispersion_dump_scenario():
    cfg = RunConfig.from_dict({"scenario": "dispersion_dump",
                               "grid": {"start_over_2pi_thz": 1.0,
                                        "stop_over_2pi_thz": 60.0,
                                        "points": 50}})
    res = run_scenario(cfg)
    n = res.columns["n"]
    assert np.all((n >= 2.55) & (n <= 2.59))


# -------------------------------------------------------------------- CLI

def run_cli(tmp_path, doc, scenario=None, extra=()):
    cfg_path = write_config(tmp_path, doc)
    out_dir = tmp_path / "out"
    argv = [scenario or doc["scenario"], "--config", str(cfg_path),
            "--out", str(out_dir), *extra]
    return main(argv), out_dir


def test_cli_subcycle_writes_outputs(tmp_path):
    code, out_dir = run_cli(tmp_path, subcycle_doc())
    assert code == 0
    csv_path = out_dir / "subcycle.csv"
    meta_path = out_dir / "subcycle.meta.json"
    assert csv_path.exists() and meta_path.exists()
    lines = csv_path.read_text().splitlines()
    meta_lines = [l for l in lines if l.startswith("# ")]
    assert any(l.startswith("# config = ") for l in meta_lines)
    header = lines[len(meta_lines)]
    assert header.split(",")[0] == "sigma_over_omega0"
    meta = json.loads(meta_path.read_text())
    assert meta["scenario"] == "subcycle"


def test_cli_deterministic_output(tmp_path):
    doc = subcycle_doc(points=8)
    cfg_path = write_config(tmp_path, doc)
    outs = []
    for name in ("a", "b"):
        out_dir = tmp_path / name
        assert main(["subcycle", "--config", str(cfg_path),
                     "--out", str(out_dir)]) == 0
        outs.append((out_dir / "subcycle.csv").read_bytes())
    assert outs[0] == outs[1]


def test_cli_jobs_do_not_change_bytes(tmp_path):
    doc = eo_doc(points=5, start=300.0, stop=315.0)
    cfg_path = write_config(tmp_path, doc)
    blobs = []
    for jobs, name in (("1", "j1"), ("2", "j2")):
        out_dir = tmp_path / name
        assert main(["eo_scan", "--config", str(cfg_path), "--out",
                     str(out_dir), "--jobs", jobs]) == 0
        blobs.append((out_dir / "eo_scan.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_cli_exit_code_config_error(tmp_path, capsys):
    code, _ = run_cli(tmp_path, subcycle_doc(), scenario="eo_scan")
    assert code == 2
    assert "configuration error" in capsys.readouterr().err
    assert main(["subcycle", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path)]) == 2


def test_cli_rejects_bad_jobs(tmp_path):
    code, _ = run_cli(tmp_path, subcycle_doc(), extra=("--jobs", "0"))
    assert code == 2


def test_cli_exit_code_numerical_failure(tmp_path, monkeypatch):
    import vacuum_sampler.cli as cli_mod

    def boom(*args, **kwargs):
        raise NumericalError("scan point failed")

    monkeypatch.setattr(cli_mod, "run_scenario", boom)
    code, _ = run_cli(tmp_path, subcycle_doc(points=4))
    assert code == 3


def test_cli_tolerance_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("VACUUM_SAMPLER_TOL", "1e-6")
    code, out_dir = run_cli(tmp_path, subcycle_doc(points=4))
    assert code == 0
    meta = json.loads((out_dir / "subcycle.meta.json").read_text())
    assert meta["rel_tol"] == "1e-06"
    monkeypatch.setenv("VACUUM_SAMPLER_TOL", "not-a-number")
    code, _ = run_cli(tmp_path, subcycle_doc(points=4))
    assert code == 2
