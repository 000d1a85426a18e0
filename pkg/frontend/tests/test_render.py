"""Unit tests for the figure renderer on synthesized scan tables."""

import hashlib

import numpy as np
import pytest

from render_figures import (
    EmptyTableError,
    FigureSpec,
    MissingColumnError,
    read_scan_csv,
    regime_flip_frequencies,
    render,
)
from render_figures.cli import main


def write_csv(path, columns, metadata=("scenario = test",)):
    lines = [f"# {m}" for m in metadata]
    names = list(columns)
    lines.append(",".join(names))
    n = len(columns[names[0]])
    for i in range(n):
        lines.append(",".join(f"{columns[c][i]:.12g}" for c in names))
    path.write_text("\n".join(lines) + "\n")
    return path


def subcycle_csv(tmp_path):
    x = np.linspace(0.05, 2.0, 12)
    cols = {"sigma_over_omega0": x, "var_q": 1 - 0.2 * x, "var_p": 1 + 0.5 * x,
            "n_g": 0.1 * x, "a2_re": -0.1 * x, "a2_im": 0 * x,
            "mus_q": 1.0 / (1 + 0.5 * x)}
    return write_csv(tmp_path / "subcycle.csv", cols)


def eo_csv(tmp_path, with_pert=True):
    x = np.linspace(250.0, 262.0, 7)
    signed = np.linspace(-0.6, 0.6, 7)
    cols = {"omega_tilde_over_2pi_thz": x, "theta1": 0.02 + 0 * x,
            "comm_signed": signed,
            "var_q_1": 1 - 1e-4 * (x - 250), "var_p_1": 1 + 2e-4 * (x - 250)}
    if with_pert:
        cols["var_q_pert"] = 1 + 1e-4 * (x - 250)
        cols["var_p_pert"] = 1 + 3e-4 * (x - 250)
    return write_csv(tmp_path / "eo_scan.csv", cols)


def waveform_csv(tmp_path):
    t = np.linspace(-50.0, 50.0, 64)
    env = np.exp(-(t / 12.0) ** 2)
    cols = {"t_fs": t, "probed_re": env * np.cos(0.5 * t),
            "probed_im": env * np.sin(0.5 * t), "probed_env": env,
            "probe_re": env * np.cos(1.5 * t), "probe_im": env * np.sin(1.5 * t),
            "probe_env": env}
    return write_csv(tmp_path / "waveform.csv", cols)


def order_csv(tmp_path):
    x = np.linspace(250.0, 262.0, 7)
    cols = {"omega_tilde_over_2pi_thz": x,
            "var_q_1": 1 - 1e-4 * (x - 250), "var_p_1": 1 + 2e-4 * (x - 250),
            "var_q_2": 1 - 1.1e-4 * (x - 250), "var_p_2": 1 + 2.1e-4 * (x - 250)}
    return write_csv(tmp_path / "order_compare.csv", cols)


def dispersion_csv(tmp_path):
    x = np.linspace(1.0, 500.0, 30)
    return write_csv(tmp_path / "dispersion_dump.csv",
                     {"omega_over_2pi_thz": x, "n": 2.55 + 0.0005 * x})


def test_reader_parses_metadata_and_columns(tmp_path):
    path = subcycle_csv(tmp_path)
    metadata, columns = read_scan_csv(path)
    assert metadata["scenario"] == "test"
    assert set(columns) >= {"sigma_over_omega0", "var_q", "var_p", "mus_q"}
    assert len(columns["var_q"]) == 12


def test_reader_missing_file(tmp_path):
    from render_figures import RenderError
    with pytest.raises(RenderError):
        read_scan_csv(tmp_path / "nope.csv")


def test_missing_column_is_named(tmp_path):
    path = eo_csv(tmp_path)
    spec = FigureSpec("subcycle", str(path), str(tmp_path / "f.svg"))
    with pytest.raises(MissingColumnError) as exc:
        render(spec)
    assert "sigma_over_omega0" in str(exc.value)
    assert not (tmp_path / "f.svg").exists()


def test_empty_table_error(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# scenario = test\nvar_q,var_p\n")
    with pytest.raises(EmptyTableError):
        read_scan_csv(path)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(Exception):
        FigureSpec("bogus", "x.csv", "y.svg")


def test_regime_flip_interpolation():
    freqs = np.array([250.0, 252.0, 254.0, 256.0])
    signed = np.array([-0.3, -0.1, 0.1, 0.3])
    flips = regime_flip_frequencies(freqs, signed)
    assert flips == [pytest.approx(253.0)]
    assert regime_flip_frequencies(freqs, np.array([0.1, 0.2, 0.3, 0.4])) == []


@pytest.mark.parametrize("maker,kind", [
    (subcycle_csv, "subcycle"),
    (eo_csv, "eo_scan"),
    (waveform_csv, "waveform"),
    (order_csv, "order_compare"),
    (dispersion_csv, "dispersion"),
])
def test_render_all_kinds_read_only(tmp_path, maker, kind):
    path = maker(tmp_path)
    before = hashlib.sha256(path.read_bytes()).hexdigest()
    out = tmp_path / f"{kind}.svg"
    render(FigureSpec(kind, str(path), str(out)))
    assert out.exists() and out.stat().st_size > 500
    assert hashlib.sha256(path.read_bytes()).hexdigest() == before


def test_marker_placed_at_data_crossing(tmp_path):
    path = eo_csv(tmp_path)
    _, columns = read_scan_csv(path)
    expected = regime_flip_frequencies(columns["omega_tilde_over_2pi_thz"],
                                       columns["comm_signed"])
    assert len(expected) == 1
    fig = render(FigureSpec("eo_scan", str(path), str(tmp_path / "f.svg")))
    vlines = [ln for ln in fig.axes[0].lines
              if len(ln.get_xdata()) == 2
              and ln.get_xdata()[0] == ln.get_xdata()[1]]
    assert any(abs(ln.get_xdata()[0] - expected[0]) < 1e-9 for ln in vlines)


def test_render_deterministic_bytes(tmp_path):
    path = subcycle_csv(tmp_path)
    blobs = []
    for name in ("a.svg", "b.svg"):
        out = tmp_path / name
        render(FigureSpec("subcycle", str(path), str(out)))
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_cli_success_and_errors(tmp_path, capsys):
    path = subcycle_csv(tmp_path)
    out = tmp_path / "fig.svg"
    assert main(["--kind", "subcycle", "--in", str(path),
                 "--out", str(out)]) == 0
    assert out.exists()
    # wrong kind for the file: named missing-column error, nonzero exit
    assert main(["--kind", "eo_scan", "--in", str(path),
                 "--out", str(tmp_path / "g.svg")]) == 2
    assert "omega_tilde_over_2pi_thz" in capsys.readouterr().err
    # empty table
    empty = tmp_path / "empty.csv"
    empty.write_text("x,y\n")
    assert main(["--kind", "dispersion", "--in", str(empty),
                 "--out", str(tmp_path / "h.svg")]) == 2
    # extension mismatch
    assert main(["--kind", "subcycle", "--in", str(path),
                 "--out", str(tmp_path / "fig.png")]) == 2


def test_cli_png_output(tmp_path):
    path = dispersion_csv(tmp_path)
    out = tmp_path / "fig.png"
    assert main(["--kind", "dispersion", "--in", str(path),
                 "--out", str(out), "--png"]) == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
