"""End-to-end: fresh CSVs from the scan CLI rendered for all five kinds.

Exercises the figure pipeline against real vacuum-sampler outputs: every
kind renders with exit code 0, the inputs stay byte-identical, and the
regime marker sits at the sign change determined by the data.
"""

import hashlib
import json
import math
import shutil
import subprocess

import pytest

from render_figures import read_scan_csv, regime_flip_frequencies
from render_figures.cli import main as render_main

SAMPLER = shutil.which("vacuum-sampler")
pytestmark = pytest.mark.skipif(SAMPLER is None,
                                reason="vacuum-sampler CLI not installed")

SIGMA_P_ANGULAR_THZ = math.sqrt(2.0 * math.log(2.0)) / 5.8e-15 / 1e12

EO_BASE = {
    "crystal": {"length_um": 7.0, "r41_pm_per_v": 4.0, "radius_um": 3.0},
    "probe": {"omega_p_over_2pi_thz": 255.0,
              "sigma_p_angular_thz": SIGMA_P_ANGULAR_THZ,
              "t_p_fs": 0.0, "phi_p_rad": 0.0, "photon_number": 5.0e9},
    "partition": {"lambda_cut_over_2pi_thz": 100.0},
    "filter": {"delta_omega_over_2pi_thz": 1.0},
}


def scan_configs():
    return {
        "subcycle": {"scenario": "subcycle",
                     "grid": {"start_ratio": 0.05, "stop_ratio": 2.0,
                              "points": 10}},
        "eo_scan": {**EO_BASE, "scenario": "eo_scan",
                    "grid": {"start_over_2pi_thz": 250.0,
                             "stop_over_2pi_thz": 262.0, "points": 7}},
        "order_compare": {**EO_BASE, "scenario": "order_compare",
                          "grid": {"start_over_2pi_thz": 290.0,
                                   "stop_over_2pi_thz": 310.0, "points": 4}},
        "waveform": {**EO_BASE, "scenario": "waveform",
                     "filter": {**EO_BASE["filter"],
                                "omega_tilde_over_2pi_thz": 303.46},
                     "grid": {"t_min_fs": -60.0, "t_max_fs": 60.0,
                              "points": 128}},
        "dispersion_dump": {"scenario": "dispersion_dump",
                            "grid": {"start_over_2pi_thz": 1.0,
                                     "stop_over_2pi_thz": 500.0,
                                     "points": 60}},
    }


FIGURE_KIND = {"subcycle": "subcycle", "eo_scan": "eo_scan",
               "order_compare": "order_compare", "waveform": "waveform",
               "dispersion_dump": "dispersion"}


@pytest.fixture(scope="module")
def fresh_csvs(tmp_path_factory):
    base = tmp_path_factory.mktemp("scans")
    paths = {}
    for scenario, doc in scan_configs().items():
        cfg = base / f"{scenario}.json"
        cfg.write_text(json.dumps(doc))
        out_dir = base / scenario
        proc = subprocess.run(
            [SAMPLER, scenario, "--config", str(cfg), "--out", str(out_dir),
             "--jobs", "2"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        paths[scenario] = out_dir / f"{scenario}.csv"
    return paths


def test_render_all_five_kinds(fresh_csvs, tmp_path):
    for scenario, csv_path in fresh_csvs.items():
        before = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        out = tmp_path / f"{scenario}.svg"
        code = render_main(["--kind", FIGURE_KIND[scenario],
                            "--in", str(csv_path), "--out", str(out)])
        assert code == 0, scenario
        assert out.exists() and out.stat().st_size > 1000
        assert hashlib.sha256(csv_path.read_bytes()).hexdigest() == before


def test_regime_marker_from_fresh_scan(fresh_csvs, tmp_path):
    from render_figures import FigureSpec, render

    csv_path = fresh_csvs["eo_scan"]
    _, columns = read_scan_csv(csv_path)
    flips = regime_flip_frequencies(columns["omega_tilde_over_2pi_thz"],
                                    columns["comm_signed"])
    assert len(flips) == 1
    assert 250.0 < flips[0] < 262.0
    fig = render(FigureSpec("eo_scan", str(csv_path),
                            str(tmp_path / "marker.svg")))
    vlines = [ln for ln in fig.axes[0].lines
              if len(ln.get_xdata()) == 2
              and ln.get_xdata()[0] == ln.get_xdata()[1]]
    assert any(abs(ln.get_xdata()[0] - flips[0]) < 1e-9 for ln in vlines)
