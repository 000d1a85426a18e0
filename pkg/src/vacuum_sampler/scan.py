"""Scan scenarios: configuration loading, evaluation and CSV/JSON output.

Configurations are JSON documents.  Frequencies are given in THz with an
explicit convention suffix: `_over_2pi_thz` for cyclic frequencies (carrier
and cut frequencies, filter bandwidth) and `_angular_thz` for angular ones
(Gaussian spectral widths), removing any ambiguity between the two usages.

Scan outputs are column tables written as CSV with `#`-prefixed metadata
lines (a compact echo of the configuration among them, so a run can be
reproduced from its own output) followed by a single header row.  Floats
are formatted with 12 significant digits, making identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import TWO_PI_THZ, load_model, znte_model
from .eo import (
    EOSetup,
    CrystalParams,
    FilterParams,
    FrequencyPartition,
    ProbeParams,
    eo_variances,
    mir_moments,
    second_order_chain,
    temporal_waveform,
)
from .modes import (
    GaussianModeParams,
    gaussian_amplitude,
    mode_split,
    quadrature_variance,
    second_moments,
)
from .quadrature import DEFAULT_REL_TOL, QuadratureError

__all__ = ["ConfigError", "NumericalError", "RunConfig", "ScanResult",
           "run_scenario", "SCENARIOS"]

SCENARIOS = ("subcycle", "eo_scan", "waveform", "order_compare",
             "dispersion_dump")
ORDER_KEYS = ("1", "2", "pert")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class NumericalError(RuntimeError):
    """A scan point failed to evaluate."""


def _require(doc: dict, key: str, kind=dict):
    if key not in doc:
        raise ConfigError(f"missing config section {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise ConfigError(f"config section {key!r} must be a {kind.__name__}")
    return val


def _number(section: dict, key: str, default=None):
    if key not in section:
        if default is None:
            raise ConfigError(f"missing config field {key!r}")
        return float(default)
    val = section[key]
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"config field {key!r} must be a number")
    return float(val)


@dataclass(frozen=True)
class RunConfig:
    """Validated scan configuration: the scenario plus the canonicalized
    JSON document it was built from (used for the reproducibility echo)."""

    scenario: str
    doc: dict = field(compare=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        scenario = doc.get("scenario")
        if scenario not in SCENARIOS:
            raise ConfigError(
                f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
        cfg = cls(scenario, json.loads(json.dumps(doc)))
        # eager validation: building the scenario inputs surfaces errors now
        if scenario in ("eo_scan", "order_compare", "waveform"):
            build_eo_setup(cfg)
            _grid_spec(cfg)
        elif scenario == "subcycle":
            _grid_spec(cfg)
        else:
            _grid_spec(cfg)
        return cfg

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def echo(self) -> str:
        return json.dumps(self.doc, sort_keys=True, separators=(",", ":"))


def build_eo_setup(cfg: RunConfig) -> EOSetup:
    doc = cfg.doc
    cr = _require(doc, "crystal")
    pr = _require(doc, "probe")
    pt = _require(doc, "partition")
    dispersion_file = cr.get("dispersion_file")
    model = load_model(dispersion_file) if dispersion_file else znte_model()
    try:
        crystal = CrystalParams(
            length=_number(cr, "length_um") * 1e-6,
            r41=_number(cr, "r41_pm_per_v") * 1e-12,
            area=math.pi * (_number(cr, "radius_um") * 1e-6) ** 2,
            dispersion=model,
        )
        probe = ProbeParams(
            omega_p=_number(pr, "omega_p_over_2pi_thz") * TWO_PI_THZ,
            sigma_p=_number(pr, "sigma_p_angular_thz") * 1e12,
            t_p=_number(pr, "t_p_fs", 0.0) * 1e-15,
            phi_p=_number(pr, "phi_p_rad", 0.0),
            alpha=math.sqrt(_number(pr, "photon_number")),
        )
        partition = FrequencyPartition(
            _number(pt, "lambda_cut_over_2pi_thz") * TWO_PI_THZ)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return EOSetup(crystal, probe, partition)


def build_filter_width(cfg: RunConfig) -> float:
    f = _require(cfg.doc, "filter")
    width = _number(f, "delta_omega_over_2pi_thz") * TWO_PI_THZ
    if width <= 0:
        raise ConfigError("delta_omega_over_2pi_thz must be positive")
    return width


def _grid_spec(cfg: RunConfig):
    g = _require(cfg.doc, "grid")
    points = g.get("points")
    if not isinstance(points, int) or points < 2:
        raise ConfigError("grid.points must be an integer >= 2")
    if cfg.scenario == "subcycle":
        start = _number(g, "start_ratio")
        stop = _number(g, "stop_ratio")
        if not 0 < start < stop:
            raise ConfigError("subcycle grid needs 0 < start_ratio < stop_ratio")
    elif cfg.scenario == "waveform":
        start = _number(g, "t_min_fs")
        stop = _number(g, "t_max_fs")
        if not start < stop:
            raise ConfigError("waveform grid needs t_min_fs < t_max_fs")
    else:
        start = _number(g, "start_over_2pi_thz")
        stop = _number(g, "stop_over_2pi_thz")
        if not 0 <= start < stop:
            raise ConfigError("grid needs 0 <= start < stop (THz)")
    return start, stop, points


@dataclass
class ScanResult:
    columns: dict
    metadata: dict

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) != 1:
            raise ValueError("all columns must have equal length")
        for name, col in self.columns.items():
            arr = np.asarray(col, dtype=float)
            if np.any(~np.isfinite(arr)):
                raise NumericalError(f"column {name!r} contains non-finite values")

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))

    def write_csv(self, path):
        lines = []
        for key in sorted(self.metadata):
            lines.append(f"# {key} = {self.metadata[key]}")
        names = list(self.columns)
        lines.append(",".join(names))
        cols = [np.asarray(self.columns[n], dtype=float) for n in names]
        for i in range(self.n_rows):
            lines.append(",".join(f"{c[i]:.12g}" for c in cols))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def write_metadata_json(self, path):
        Path(path).write_text(
            json.dumps(self.metadata, sort_keys=True, indent=2) + "\n",
            encoding="utf-8")


def _base_metadata(cfg: RunConfig, rel_tol: float) -> dict:
    return {
        "config": cfg.echo(),
        "code_version": __version__,
        "rel_tol": f"{rel_tol:.6g}",
        "scenario": cfg.scenario,
    }


def run_subcycle(cfg: RunConfig, rel_tol: float) -> ScanResult:
    start, stop, points = _grid_spec(cfg)
    ratios = np.linspace(start, stop, points)
    var_q, var_p, n_g, a2_re, a2_im = [], [], [], [], []
    for r in ratios:
        f = gaussian_amplitude(GaussianModeParams(1.0, float(r)))
        m = second_moments(mode_split(f, rel_tol=rel_tol))
        var_q.append(quadrature_variance(m, 0.0))
        var_p.append(quadrature_variance(m, math.pi / 2))
        n_g.append(m.n)
        a2_re.append(m.a_sq.real)
        a2_im.append(m.a_sq.imag)
    var_p_arr = np.array(var_p)
    return ScanResult(
        columns={
            "sigma_over_omega0": ratios,
            "var_q": np.array(var_q),
            "var_p": var_p_arr,
            "n_g": np.array(n_g),
            "a2_re": np.array(a2_re),
            "a2_im": np.array(a2_im),
            # display-only comparison curve: the Q variance of a
            # minimum-uncertainty state with the same P variance
            "mus_q": 1.0 / var_p_arr,
        },
        metadata=_base_metadata(cfg, rel_tol),
    )


def _eo_point(args):
    """Worker for one filter frequency (module-level for process pools)."""
    cfg_doc, wt, width, orders, rel_tol = args
    cfg = RunConfig.from_dict(cfg_doc)
    setup = build_eo_setup(cfg)
    filt = FilterParams(wt, width)
    try:
        mom = mir_moments(setup, filt, rel_tol=rel_tol)
        row = {
            "theta1": math.sqrt(abs(mom.signed)),
            "comm_signed": mom.signed / mom.total if mom.total > 0 else 0.0,
        }
        chain = None
        if "2" in orders and mom.total > 0.0:
            chain = second_order_chain(setup, filt, rel_tol=rel_tol,
                                       moments=mom)
        for key in orders:
            order = {"1": 1, "2": 2, "pert": "perturbative"}[key]
            v = eo_variances(setup, filt, order, rel_tol=rel_tol,
                             moments=mom, chain=chain if key == "2" else None)
            row[f"var_q_{key}"] = v.var_q
            row[f"var_p_{key}"] = v.var_p
    except QuadratureError as exc:
        raise NumericalError(
            f"scan point omega_tilde = {wt / TWO_PI_THZ:.6g} THz failed: {exc}"
        ) from exc
    return row


def _selected_orders(cfg: RunConfig, order_flag: str | None):
    if order_flag in (None, "all"):
        selected = cfg.doc.get("orders", list(ORDER_KEYS))
    else:
        selected = [order_flag]
    for key in selected:
        if key not in ORDER_KEYS:
            raise ConfigError(f"unknown evolution order {key!r}")
    return tuple(selected)


def _run_eo_grid(cfg: RunConfig, rel_tol: float, jobs: int | None,
                 orders) -> dict:
    start, stop, points = _grid_spec(cfg)
    width = build_filter_width(cfg)
    grid = np.linspace(start, stop, points) * TWO_PI_THZ
    tasks = [(cfg.doc, float(wt), width, orders, rel_tol) for wt in grid]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and points > 4:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_eo_point, tasks, chunksize=4))
    else:
        rows = [_eo_point(t) for t in tasks]
    columns = {"omega_tilde_over_2pi_thz": grid / TWO_PI_THZ}
    for key in rows[0]:
        columns[key] = np.array([r[key] for r in rows])
    return columns


def run_eo_scan(cfg: RunConfig, rel_tol: float, jobs=None,
                order_flag=None) -> ScanResult:
    orders = _selected_orders(cfg, order_flag)
    columns = _run_eo_grid(cfg, rel_tol, jobs, orders)
    return ScanResult(columns, _base_metadata(cfg, rel_tol))


def run_order_compare(cfg: RunConfig, rel_tol: float, jobs=None,
                      order_flag=None) -> ScanResult:
    columns = _run_eo_grid(cfg, rel_tol, jobs, ("1", "2"))
    columns["dvar_q"] = columns["var_q_2"] - columns["var_q_1"]
    columns["dvar_p"] = columns["var_p_2"] - columns["var_p_1"]
    return ScanResult(columns, _base_metadata(cfg, rel_tol))


def run_waveform(cfg: RunConfig, rel_tol: float) -> ScanResult:
    start, stop, points = _grid_spec(cfg)
    setup = build_eo_setup(cfg)
    f = _require(cfg.doc, "filter")
    filt = FilterParams(
        _number(f, "omega_tilde_over_2pi_thz") * TWO_PI_THZ,
        build_filter_width(cfg))
    t = np.linspace(start, stop, points) * 1e-15
    try:
        wf = temporal_waveform(setup, filt, t)
    except QuadratureError as exc:
        raise NumericalError(f"waveform evaluation failed: {exc}") from exc
    return ScanResult(
        columns={
            "t_fs": t * 1e15,
            "probed_re": wf.probed.real,
            "probed_im": wf.probed.imag,
            "probed_env": wf.probed_envelope,
            "probe_re": wf.probe.real,
            "probe_im": wf.probe.imag,
            "probe_env": wf.probe_envelope,
        },
        metadata=_base_metadata(cfg, rel_tol),
    )


def run_dispersion_dump(cfg: RunConfig, rel_tol: float) -> ScanResult:
    start, stop, points = _grid_spec(cfg)
    cr = cfg.doc.get("crystal", {})
    dispersion_file = cr.get("dispersion_file") if isinstance(cr, dict) else None
    model = load_model(dispersion_file) if dispersion_file else znte_model()
    freqs = np.linspace(start, stop, points)
    n = model.n(freqs * TWO_PI_THZ)
    return ScanResult(
        columns={"omega_over_2pi_thz": freqs, "n": np.asarray(n)},
        metadata=_base_metadata(cfg, rel_tol),
    )


def run_scenario(cfg: RunConfig, rel_tol: float = DEFAULT_REL_TOL,
                 jobs: int | None = None,
                 order_flag: str | None = None) -> ScanResult:
    if cfg.scenario == "subcycle":
        return run_subcycle(cfg, rel_tol)
    if cfg.scenario == "eo_scan":
        return run_eo_scan(cfg, rel_tol, jobs, order_flag)
    if cfg.scenario == "order_compare":
        return run_order_compare(cfg, rel_tol, jobs, order_flag)
    if cfg.scenario == "waveform":
        return run_waveform(cfg, rel_tol)
    if cfg.scenario == "dispersion_dump":
        return run_dispersion_dump(cfg, rel_tol)
    raise ConfigError(f"unknown scenario {cfg.scenario!r}")
