"""Harmonic detector with a Gaussian switching profile.

A stationary harmonic-oscillator detector with energy gap hbar*omega_u is
coupled to the conjugate field through the time-dependent switching

    lambda(t) = eta * exp(-sigma_u^2 (t - t_u)^2).

For a switching matched to a Gaussian field mode (sigma_u = sigma,
t_u = t0, omega_u = omega0) the interaction reduces to a beam splitter
between the detector and that mode with effective strength

    theta_u = -(eta / 2) sqrt(omega_u / sigma_u) (pi / 2)^{1/4},

and the detector quadrature variance after the interaction is the
efficiency-scaled mode variance, 1 + 2 sin^2(theta_u) (n + Re[a_sq
e^{-2 i phi}]).  The stationary worldline (t, x) = (tau, 0) is assumed
throughout; mismatched switchings are handled by building the normalized
switching-derived mode and reusing the continuous-mode machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modes import (
    SecondMoments,
    SpectralAmplitude,
    _merge_segments,
    bosonic_norm,
    quadrature_variance,
)
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, IntegrationDomain, integrate

__all__ = [
    "SwitchingParams",
    "DetectorParams",
    "effective_theta_u",
    "overlap_theta_u",
    "switching_amplitude",
    "detector_variance",
    "expected_excitations",
]


@dataclass(frozen=True)
class SwitchingParams:
    """Coupling amplitude eta, inverse switching duration sigma_u [rad/s],
    switching center t_u [s]."""

    eta: float
    sigma_u: float
    t_u: float = 0.0

    def __post_init__(self):
        if not self.sigma_u > 0:
            raise ValueError("sigma_u must be positive")


@dataclass(frozen=True)
class DetectorParams:
    """Energy gap hbar * omega_u with omega_u in rad/s."""

    omega_u: float

    def __post_init__(self):
        if not self.omega_u > 0:
            raise ValueError("omega_u must be positive")


def effective_theta_u(s: SwitchingParams, d: DetectorParams) -> float:
    """Closed-form coupling for a switching matched to the Gaussian mode."""
    return -(s.eta / 2.0) * math.sqrt(d.omega_u / s.sigma_u) * (math.pi / 2.0) ** 0.25


def _raw_switching_coefficient(s: SwitchingParams, d: DetectorParams):
    """Unnormalized spectral coefficient generated by the switching,

        a(w) = -sign(w) (eta / (2 sigma_u)) sqrt(|w| / 2)
               * exp(-(w - omega_u)^2 / (4 sigma_u^2) - i (w - omega_u) t_u).
    """
    eta, su, tu, wu = s.eta, s.sigma_u, s.t_u, d.omega_u

    def fn(w):
        w = np.asarray(w, dtype=float)
        return (-np.sign(w) * (eta / (2.0 * su)) * np.sqrt(np.abs(w) / 2.0)
                * np.exp(-(w - wu) ** 2 / (4.0 * su * su) - 1j * (w - wu) * tu))

    return fn


def _switching_windows(s: SwitchingParams, d: DetectorParams):
    lo, hi = d.omega_u - 12.0 * s.sigma_u, d.omega_u + 12.0 * s.sigma_u
    return ((lo, hi), (-hi, -lo))


def overlap_theta_u(s: SwitchingParams, d: DetectorParams,
                    mode: SpectralAmplitude,
                    rel_tol: float = DEFAULT_REL_TOL,
                    abs_tol: float = DEFAULT_ABS_TOL) -> complex:
    """Signed overlap of the switching-derived coefficient with a mode,

        int sign(w) a(w) conj(f(w)) dw,

    which reproduces effective_theta_u when the mode is the matched
    Gaussian amplitude.
    """
    raw = _raw_switching_coefficient(s, d)
    total = 0.0 + 0.0j
    for lo, hi in _merge_segments(_switching_windows(s, d)):
        res = integrate(
            lambda w: np.sign(w) * raw(w) * np.conj(mode(w)),
            IntegrationDomain.finite(lo, hi), rel_tol=rel_tol, abs_tol=abs_tol)
        total += res.value
    return complex(total)


def switching_amplitude(s: SwitchingParams, d: DetectorParams) -> SpectralAmplitude:
    """Normalized mode addressed by an arbitrary (mismatched) switching.

    The raw coefficient is proportional to sign(w) sqrt(|w|) times the
    Gaussian spectral envelope of the switching; the bosonic norm is
    computed numerically and divided out.
    """
    raw = _raw_switching_coefficient(s, d)
    windows = _switching_windows(s, d)
    unnorm = SpectralAmplitude(fn=raw, windows=windows)
    norm = bosonic_norm(unnorm)
    if norm <= 0:
        raise ValueError("switching-derived mode has nonpositive signed norm")
    scale = 1.0 / math.sqrt(norm)
    return SpectralAmplitude(fn=lambda w: scale * raw(w), windows=windows)


def detector_variance(theta_u: float, m: SecondMoments, phi: float) -> float:
    """Detector quadrature variance: the mode variance at efficiency
    sin^2(theta_u); the first moment vanishes for vacuum input."""
    eff = math.sin(theta_u) ** 2
    return quadrature_variance(SecondMoments(eff * m.n, eff * m.a_sq), phi)


def expected_excitations(theta_u: float, m: SecondMoments) -> float:
    """Mean number of detector excitations, sin^2(theta_u) * n."""
    return math.sin(theta_u) ** 2 * m.n
