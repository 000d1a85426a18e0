"""Continuous-mode spectral algebra for broadband bosonic modes.

A nonmonochromatic mode is a coefficient function f(omega) over real angular
frequency with the convention a(-omega) = a(omega)^dagger, so negative
frequencies address creation operators and the commutator of the mode with
its conjugate is the signed integral  [a_f, a_f^dag] = int sign(w) |f(w)|^2 dw.

For a normalized mode the vacuum second moments follow from the split into
positive- and negative-frequency parts:

    <a^dag a> = sinh^2(theta_g),        cosh^2(theta_g) = int_0^inf |f|^2
    <a^2>     = int_0^inf f(w) f(-w) dw
              = cosh(theta_g) sinh(theta_g) sin(theta_perp) e^{i phi_perp}

and the variance of the quadrature X(phi) = a e^{-i phi} + h.c. is
1 + 2<a^dag a> + 2 Re[<a^2> e^{-2 i phi}].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    IntegrationDomain,
    integrate,
)

__all__ = [
    "GaussianModeParams",
    "SpectralAmplitude",
    "ModeSplit",
    "SecondMoments",
    "NormalizationError",
    "gaussian_amplitude",
    "bosonic_norm",
    "positive_norm",
    "theta_g",
    "pm_overlap",
    "mode_split",
    "second_moments",
    "quadrature_variance",
    "quadrature_correlation",
    "is_subcycle",
]

# arguments of arccosh in [1 - COSH_CLAMP, 1) are treated as exactly 1
COSH_CLAMP = 1e-9


class NormalizationError(ValueError):
    """A spectral amplitude failed a normalization precondition."""


@dataclass(frozen=True)
class GaussianModeParams:
    """Carrier omega0 [rad/s], inverse temporal extension sigma [rad/s],
    envelope peak time t0 [s]."""

    omega0: float
    sigma: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class SpectralAmplitude:
    """Coefficient function of a nonmonochromatic mode.

    fn must accept numpy arrays of angular frequencies and return complex
    values; windows are finite (lo, hi) intervals outside of which the
    amplitude is negligible, used for quadrature windowing.
    """

    fn: Callable
    windows: tuple = field(default_factory=tuple)

    def __call__(self, omega):
        return self.fn(np.asarray(omega, dtype=float))


def _merge_segments(segments):
    segs = sorted((lo, hi) for lo, hi in segments if hi > lo)
    merged = []
    for lo, hi in segs:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def _positive_segments(windows):
    """Clip windows to (0, inf), merging overlaps."""
    return _merge_segments(
        (max(lo, 0.0), hi) for lo, hi in windows if hi > 0.0
    )


def _negative_segments_mirrored(windows):
    """Reflections of the (lo, hi) < 0 parts of windows onto (0, inf)."""
    return _merge_segments(
        (max(-hi, 0.0), -lo) for lo, hi in windows if lo < 0.0
    )


def _sum_over_segments(fn, segments, rel_tol, abs_tol):
    total = 0.0 + 0.0j
    err = 0.0
    for lo, hi in segments:
        res = integrate(fn, IntegrationDomain.finite(lo, hi),
                        rel_tol=rel_tol, abs_tol=abs_tol)
        total += res.value
        err += res.abs_error_estimate
    return total, err


def gaussian_amplitude(p: GaussianModeParams) -> SpectralAmplitude:
    """Spectral amplitude of the normalized Gaussian-profile mode,

        f(w) = (2 pi)^{-1/4} sign(w) sqrt(|w| / (w0 sigma))
               * exp(-i t0 (w - w0) - (w - w0)^2 / (4 sigma^2)).

    The signed-measure norm equals 1 analytically for every (w0, sigma):
    the sign(w) weight turns the norm into the full-line first-moment
    integral of the Gaussian, which is w0 sigma sqrt(2 pi) exactly.
    """
    w0, sg, t0 = p.omega0, p.sigma, p.t0
    pref = (2.0 * math.pi) ** -0.25 / math.sqrt(w0 * sg)

    def fn(w):
        w = np.asarray(w, dtype=float)
        return (pref * np.sign(w) * np.sqrt(np.abs(w))
                * np.exp(-1j * t0 * (w - w0) - (w - w0) ** 2 / (4.0 * sg * sg)))

    # e^{-72} tail truncation at 12 sigma is below every tolerance in use
    win = [(w0 - 12.0 * sg, w0 + 12.0 * sg)]
    win.append((-w0 - 12.0 * sg, -w0 + 12.0 * sg))
    return SpectralAmplitude(fn=fn, windows=tuple(_merge_segments(win)))


def bosonic_norm(f: SpectralAmplitude, rel_tol: float = DEFAULT_REL_TOL,
                 abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """Signed-measure norm [a_f, a_f^dag] = int sign(w) |f(w)|^2 dw."""
    pos, _ = _sum_over_segments(
        lambda w: np.abs(f(w)) ** 2, _positive_segments(f.windows),
        rel_tol, abs_tol)
    neg, _ = _sum_over_segments(
        lambda w: np.abs(f(-w)) ** 2, _negative_segments_mirrored(f.windows),
        rel_tol, abs_tol)
    return float(pos.real - neg.real)


def positive_norm(f: SpectralAmplitude, rel_tol: float = DEFAULT_REL_TOL,
                  abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """int_0^inf |f(w)|^2 dw over the declared windows."""
    pos, _ = _sum_over_segments(
        lambda w: np.abs(f(w)) ** 2, _positive_segments(f.windows),
        rel_tol, abs_tol)
    return float(pos.real)


def theta_g(f: SpectralAmplitude, rel_tol: float = DEFAULT_REL_TOL,
            abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """Negative-frequency content theta with cosh^2(theta) = int_0^inf |f|^2.

    Normalization of the positive-frequency part of the mode fixes
    cosh(theta) as the square root of the integral; sinh^2(theta) is then
    the vacuum photon number of the mode.  Integral values in [1 - 1e-9, 1)
    are clamped to 1 (theta = 0); anything lower signals a non-normalized
    amplitude and raises.
    """
    val = positive_norm(f, rel_tol, abs_tol)
    if val < 1.0 - COSH_CLAMP:
        raise NormalizationError(
            f"int_0^inf |f|^2 = {val!r} < 1; amplitude is not normalized")
    if val < 1.0:
        return 0.0
    return math.acosh(math.sqrt(val))


def pm_overlap(f: SpectralAmplitude, rel_tol: float = DEFAULT_REL_TOL,
               abs_tol: float = DEFAULT_ABS_TOL) -> complex:
    """Unnormalized overlap int_0^inf f(w) f(-w) dw of the +/- parts.

    Equals the vacuum expectation <a_f^2> for a normalized amplitude.
    """
    segs = _merge_segments(
        _positive_segments(f.windows) + _negative_segments_mirrored(f.windows))
    val, _ = _sum_over_segments(lambda w: f(w) * f(-w), segs, rel_tol, abs_tol)
    return complex(val)


@dataclass(frozen=True)
class ModeSplit:
    """(theta_g, theta_perp, phi_perp) characterizing the +/- frequency split."""

    theta_g: float
    theta_perp: float
    phi_perp: float

    def __post_init__(self):
        if self.theta_g < 0:
            raise ValueError("theta_g must be nonnegative")
        if not 0.0 <= self.theta_perp <= math.pi / 2:
            raise ValueError("theta_perp out of [0, pi/2]")
        if not -math.pi < self.phi_perp <= math.pi:
            raise ValueError("phi_perp out of (-pi, pi]")


@dataclass(frozen=True)
class SecondMoments:
    """n = <a^dag a> and a_sq = <a^2> of a mode in vacuum."""

    n: float
    a_sq: complex

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        # purity bound |<a^2>|^2 <= n (n + 1), with numerical headroom
        if abs(self.a_sq) ** 2 > self.n * (self.n + 1.0) * (1.0 + 1e-6) + 1e-12:
            raise ValueError("moments violate |a_sq|^2 <= n (n + 1)")


def mode_split(f: SpectralAmplitude, rel_tol: float = DEFAULT_REL_TOL,
               abs_tol: float = DEFAULT_ABS_TOL) -> ModeSplit:
    """Split a normalized amplitude into (theta_g, theta_perp, phi_perp).

    The degenerate case theta_g = 0 (no negative-frequency content) returns
    (0, 0, 0) by convention; the moments are insensitive to the choice.
    """
    th = theta_g(f, rel_tol, abs_tol)
    if th == 0.0:
        return ModeSplit(0.0, 0.0, 0.0)
    overlap = pm_overlap(f, rel_tol, abs_tol)
    denom = math.cosh(th) * math.sinh(th)
    ratio = min(abs(overlap) / denom, 1.0)
    phi = float(np.angle(overlap)) if overlap != 0 else 0.0
    return ModeSplit(th, math.asin(ratio), phi)


def second_moments(ms: ModeSplit) -> SecondMoments:
    n = math.sinh(ms.theta_g) ** 2
    a_sq = (math.cosh(ms.theta_g) * math.sinh(ms.theta_g)
            * math.sin(ms.theta_perp) * np.exp(1j * ms.phi_perp))
    return SecondMoments(n, complex(a_sq))


def quadrature_variance(m: SecondMoments, phi: float) -> float:
    """Var X(phi) = 1 + 2 n + 2 Re[a_sq e^{-2 i phi}]; period pi in phi."""
    return float(1.0 + 2.0 * m.n + 2.0 * (m.a_sq * np.exp(-2j * phi)).real)


def quadrature_correlation(m: SecondMoments) -> float:
    """Maximum covariance between orthogonal quadratures, 2 |<a^2>|."""
    return 2.0 * abs(m.a_sq)


def is_subcycle(p: GaussianModeParams) -> bool:
    """True when one carrier period exceeds four envelope standard
    deviations: 2 pi / omega0 > sqrt(8) / sigma (boundary excluded)."""
    return 2.0 * math.pi / p.omega0 > math.sqrt(8.0) / p.sigma
