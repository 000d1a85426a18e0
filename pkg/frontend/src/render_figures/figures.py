"""Figure construction for the five scan kinds.

Line conventions follow the source figures: solid lines for the unitary
results (red for the P quadrature, blue for Q), dashed lines for comparison
curves (the minimum-uncertainty reference, the perturbative baseline, the
second-order overlay), and a vertical dashed marker at the regime-flip
frequency located from the sign change of the signed-commutator column.
Output dimensions and axis ranges are deterministic given identical input.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import EmptyTableError, RenderError, read_scan_csv, require_columns

__all__ = ["FigureSpec", "FIGURE_KINDS", "regime_flip_frequencies", "render"]

FIGURE_KINDS = ("subcycle", "waveform", "eo_scan", "order_compare", "dispersion")

# stable ids inside the SVG output
matplotlib.rcParams["svg.hashsalt"] = "render-figures"

REQUIRED = {
    "subcycle": ("sigma_over_omega0", "var_q", "var_p", "mus_q"),
    "waveform": ("t_fs", "probed_re", "probed_env", "probe_re", "probe_env"),
    "eo_scan": ("omega_tilde_over_2pi_thz", "comm_signed", "var_q_1", "var_p_1"),
    "order_compare": ("omega_tilde_over_2pi_thz", "var_q_1", "var_p_1",
                      "var_q_2", "var_p_2"),
    "dispersion": ("omega_over_2pi_thz", "n"),
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure: scan kind, input CSV, output image path and optional
    axis-label overrides."""

    kind: str
    csv_path: str
    out_path: str
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}")


def regime_flip_frequencies(freqs, signed):
    """Zero crossings of the signed commutator, linearly interpolated.

    A grid point sitting exactly at zero counts as one flip at that
    frequency rather than two sign-change intervals around it.
    """
    freqs = np.asarray(freqs, dtype=float)
    signed = np.asarray(signed, dtype=float)
    flips = [float(freqs[i]) for i in np.where(signed == 0.0)[0]]
    for i in np.where(signed[:-1] * signed[1:] < 0.0)[0]:
        den = signed[i + 1] - signed[i]
        flips.append(float(freqs[i] - signed[i] * (freqs[i + 1] - freqs[i]) / den))
    return sorted(flips)


def _fig_subcycle(columns, ax):
    x = columns["sigma_over_omega0"]
    ax.plot(x, columns["var_p"], color="tab:red", label="P variance")
    ax.plot(x, columns["var_q"], color="tab:blue", label="Q variance")
    ax.plot(x, columns["mus_q"], color="tab:blue", linestyle="--",
            label="minimum-uncertainty Q")
    ax.axhline(1.0, color="gray", linewidth=0.6)
    return "inverse time extension sigma/omega0", "quadrature variance"


def _fig_waveform(columns, axes):
    ax_top, ax_bot = axes
    t = columns["t_fs"]
    ax_top.plot(t, columns["probed_env"], color="tab:green")
    ax_top.plot(t, -columns["probed_env"], color="tab:green")
    ax_top.plot(t, columns["probed_re"], color="tab:green", linestyle="--")
    ax_top.set_ylabel("probed mode field")
    ax_bot.plot(t, columns["probe_env"], color="tab:purple")
    ax_bot.plot(t, -columns["probe_env"], color="tab:purple")
    ax_bot.plot(t, columns["probe_re"], color="tab:purple", linestyle="--")
    ax_bot.set_ylabel("probe field")
    return "time (fs)", None


def _fig_eo_scan(columns, ax):
    x = columns["omega_tilde_over_2pi_thz"]
    ax.plot(x, columns["var_p_1"], color="tab:red", label="P variance")
    ax.plot(x, columns["var_q_1"], color="tab:blue", label="Q variance")
    if "var_p_pert" in columns:
        ax.plot(x, columns["var_p_pert"], color="tab:red", linestyle="--",
                label="P (perturbative)")
        ax.plot(x, columns["var_q_pert"], color="tab:blue", linestyle="--",
                label="Q (perturbative)")
    for flip in regime_flip_frequencies(x, columns["comm_signed"]):
        ax.axvline(flip, color="black", linestyle="--", linewidth=0.9)
    ax.axhline(1.0, color="gray", linewidth=0.6)
    return "filter frequency (THz)", "quadrature variance"


def _fig_order_compare(columns, ax):
    x = columns["omega_tilde_over_2pi_thz"]
    ax.plot(x, columns["var_p_1"], color="tab:red", label="P, first order")
    ax.plot(x, columns["var_q_1"], color="tab:blue", label="Q, first order")
    ax.plot(x, columns["var_p_2"], color="tab:red", linestyle=":",
            label="P, second order")
    ax.plot(x, columns["var_q_2"], color="tab:blue", linestyle=":",
            label="Q, second order")
    ax.axhline(1.0, color="gray", linewidth=0.6)
    return "filter frequency (THz)", "quadrature variance"


def _fig_dispersion(columns, ax):
    ax.plot(columns["omega_over_2pi_thz"], columns["n"], color="black")
    return "frequency (THz)", "refractive index"


def render(spec: FigureSpec):
    """Render one figure; returns the matplotlib Figure after saving.

    Raises RenderError subclasses before anything is written, so partial
    figures are never produced.
    """
    metadata, columns = read_scan_csv(spec.csv_path)
    require_columns(spec.csv_path, columns, REQUIRED[spec.kind])
    if len(next(iter(columns.values()))) < 2:
        raise EmptyTableError(spec.csv_path)

    if spec.kind == "waveform":
        fig, axes = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
        xlabel, ylabel = _fig_waveform(columns, axes)
        axes[1].set_xlabel(spec.xlabel or xlabel)
        target_axes = list(axes)
    else:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        builder = {"subcycle": _fig_subcycle, "eo_scan": _fig_eo_scan,
                   "order_compare": _fig_order_compare,
                   "dispersion": _fig_dispersion}[spec.kind]
        xlabel, ylabel = builder(columns, ax)
        ax.set_xlabel(spec.xlabel or xlabel)
        if ylabel or spec.ylabel:
            ax.set_ylabel(spec.ylabel or ylabel)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(loc="best", fontsize=8)
        target_axes = [ax]
    for ax in target_axes:
        ax.margins(x=0.0)
    fig.tight_layout()

    out = str(spec.out_path)
    save_kwargs = {}
    if out.lower().endswith(".svg"):
        save_kwargs["metadata"] = {"Date": None}
    fig.savefig(out, **save_kwargs)
    plt.close(fig)
    return fig
