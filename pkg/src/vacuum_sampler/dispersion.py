"""Refractive-index model of the electro-optic crystal.

Two branches joined smoothly: a mid-infrared plateau modeled by a low-order
rational fit constrained to the published 2.55-2.59 range below 60 THz, and
a near-infrared Sellmeier fit n^2 = A + B lam^2 / (lam^2 - C) (lam in um,
Marple-form coefficients for ZnTe).  A cubic Hermite smoothstep blends the
branch values across a configurable window so n is continuous and C^1.

n is even in frequency, n(w) = n(-w), and evaluation outside the declared
validity range raises a range error naming the bound.  Loading alternative
coefficient sets from a JSON file is supported so literature fits can be
dropped in without code changes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA

__all__ = ["DispersionRangeError", "RefractiveIndexModel", "znte_model",
           "load_model"]

TWO_PI_THZ = 2.0 * math.pi * 1e12


class DispersionRangeError(ValueError):
    """Frequency outside the declared validity range of the model."""


@dataclass(frozen=True)
class RefractiveIndexModel:
    """Piecewise dispersion model, all frequencies in rad/s.

    mir_n0, mir_amplitude, mir_omega_ref parametrize the MIR branch
        n(w) = n0 + amplitude * w^2 / (w^2 + omega_ref^2);
    nir_a, nir_b, nir_c_um2 parametrize the Sellmeier branch
        n^2 = a + b lam^2 / (lam^2 - c)  with lam the vacuum wavelength in um;
    the blend window [blend_lo, blend_hi] smoothly joins the two, and
    omega_max is the upper validity bound.
    """

    mir_n0: float
    mir_amplitude: float
    mir_omega_ref: float
    nir_a: float
    nir_b: float
    nir_c_um2: float
    blend_lo: float
    blend_hi: float
    omega_max: float

    def __post_init__(self):
        if not 0.0 < self.blend_lo < self.blend_hi < self.omega_max:
            raise ValueError("blend window must satisfy 0 < lo < hi < omega_max")

    def _mir(self, w):
        w2 = w * w
        return self.mir_n0 + self.mir_amplitude * w2 / (w2 + self.mir_omega_ref ** 2)

    def _nir(self, w):
        lam_um = 2.0 * math.pi * CODATA.c / np.maximum(w, 1e-300) * 1e6
        lam2 = lam_um * lam_um
        return np.sqrt(self.nir_a + self.nir_b * lam2 / (lam2 - self.nir_c_um2))

    def n(self, omega):
        """Refractive index at angular frequency omega (array-capable)."""
        w = np.abs(np.asarray(omega, dtype=float))
        scalar = w.ndim == 0
        w = np.atleast_1d(w)
        if np.any(w > self.omega_max * (1.0 + 1e-12)):
            bad = float(w[np.argmax(w)])
            raise DispersionRangeError(
                f"|omega| = {bad:.6e} rad/s exceeds the model validity bound "
                f"{self.omega_max:.6e} rad/s")
        out = np.empty_like(w)
        lo_mask = w <= self.blend_lo
        hi_mask = w >= self.blend_hi
        mid = ~(lo_mask | hi_mask)
        out[lo_mask] = self._mir(w[lo_mask])
        out[hi_mask] = self._nir(w[hi_mask])
        if np.any(mid):
            t = (w[mid] - self.blend_lo) / (self.blend_hi - self.blend_lo)
            h = t * t * (3.0 - 2.0 * t)  # cubic Hermite smoothstep
            out[mid] = (1.0 - h) * self._mir(w[mid]) + h * self._nir(w[mid])
        return float(out[0]) if scalar else out

    def __call__(self, omega):
        return self.n(omega)


def znte_model() -> RefractiveIndexModel:
    """Built-in ZnTe model.

    MIR plateau rises from 2.55 toward 2.59 with a 30 THz knee (stays inside
    [2.55, 2.59] through 60 THz); NIR branch uses the Marple-form Sellmeier
    fit n^2 = 4.27 + 3.01 lam^2/(lam^2 - 0.142) valid down to 0.55 um
    (545 THz); blend window 60-120 THz.
    """
    return RefractiveIndexModel(
        mir_n0=2.55,
        mir_amplitude=0.04,
        mir_omega_ref=30.0 * TWO_PI_THZ,
        nir_a=4.27,
        nir_b=3.01,
        nir_c_um2=0.142,
        blend_lo=60.0 * TWO_PI_THZ,
        blend_hi=120.0 * TWO_PI_THZ,
        omega_max=545.0 * TWO_PI_THZ,
    )


def load_model(path) -> RefractiveIndexModel:
    """Load a dispersion model from a JSON file.

    Schema (all frequencies cyclic THz)::

        {
          "mir":   {"n0": 2.55, "amplitude": 0.04, "omega_ref_thz": 30.0,
                     "valid_to_thz": 60.0},
          "nir":   {"a": 4.27, "b": 3.01, "c_um2": 0.142,
                     "valid_to_thz": 545.0},
          "blend": {"from_thz": 60.0, "to_thz": 120.0}
        }
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        mir, nir, blend = doc["mir"], doc["nir"], doc["blend"]
        model = RefractiveIndexModel(
            mir_n0=float(mir["n0"]),
            mir_amplitude=float(mir["amplitude"]),
            mir_omega_ref=float(mir["omega_ref_thz"]) * TWO_PI_THZ,
            nir_a=float(nir["a"]),
            nir_b=float(nir["b"]),
            nir_c_um2=float(nir["c_um2"]),
            blend_lo=float(blend["from_thz"]) * TWO_PI_THZ,
            blend_hi=float(blend["to_thz"]) * TWO_PI_THZ,
            omega_max=float(nir["valid_to_thz"]) * TWO_PI_THZ,
        )
    except KeyError as exc:
        raise ValueError(f"dispersion file {path} missing key {exc}") from exc
    return model
