"""Tests for the switched-detector module."""

import math

import numpy as np
import pytest

from vacuum_sampler.modes import (
    GaussianModeParams,
    SecondMoments,
    bosonic_norm,
    gaussian_amplitude,
    mode_split,
    quadrature_variance,
    second_moments,
)
from vacuum_sampler.udw import (
    DetectorParams,
    SwitchingParams,
    detector_variance,
    effective_theta_u,
    expected_excitations,
    overlap_theta_u,
    switching_amplitude,
)

QUARTIC = (math.pi / 2.0) ** 0.25


def matched_mode(s: SwitchingParams, d: DetectorParams):
    return gaussian_amplitude(GaussianModeParams(d.omega_u, s.sigma_u, s.t_u))


def test_effective_theta_u_examples():
    assert effective_theta_u(SwitchingParams(0.0, 1.0), DetectorParams(1.0)) == 0.0
    th = effective_theta_u(SwitchingParams(0.1, 1.0), DetectorParams(1.0))
    assert th == pytest.approx(-0.05 * QUARTIC, rel=1e-12)
    th2 = effective_theta_u(SwitchingParams(2.0, 0.25), DetectorParams(1.0))
    assert th2 == pytest.approx(-2.0 * QUARTIC, rel=1e-12)


@pytest.mark.parametrize("eta", [0.01, 0.1, 1.0])
@pytest.mark.parametrize("ratio", [0.1, 0.5, 1.0, 2.0])
def test_closed_form_matches_overlap_integral(eta, ratio):
    # matched switching: sigma_u = sigma, omega_u = omega0, t_u = t0
    s = SwitchingParams(eta, ratio)
    d = DetectorParams(1.0)
    exact = effective_theta_u(s, d)
    numeric = overlap_theta_u(s, d, matched_mode(s, d))
    assert numeric.real == pytest.approx(exact, abs=1e-8)
    assert abs(numeric.imag) < 1e-10


def test_overlap_with_time_shift():
    s = SwitchingParams(0.5, 0.8, t_u=2.3)
    d = DetectorParams(1.0)
    numeric = overlap_theta_u(s, d, matched_mode(s, d))
    assert numeric.real == pytest.approx(effective_theta_u(s, d), abs=1e-8)


def test_detector_variance_decoupled():
    m = SecondMoments(0.5, 0.2 + 0.1j)
    for phi in (0.0, 0.3, 1.5):
        assert detector_variance(0.0, m, phi) == 1.0


def test_detector_variance_unit_efficiency_reproduces_mode():
    m = second_moments(mode_split(gaussian_amplitude(GaussianModeParams(1.0, 1.0))))
    var = detector_variance(math.pi / 2, m, 0.0)
    assert var == pytest.approx(0.6826894921, abs=1e-6)


def test_detector_variance_half_efficiency():
    m = SecondMoments(0.0833, -0.24197 + 0.0j)
    var = detector_variance(math.pi / 4, m, math.pi / 2)
    assert var == pytest.approx(1.0 + 0.0833 + 0.24197, abs=1e-10)


def test_expected_excitations():
    assert expected_excitations(0.0, SecondMoments(1.0, 0.0)) == 0.0
    assert expected_excitations(math.pi / 2, SecondMoments(0.0833, 0.0)) == pytest.approx(0.0833)
    assert expected_excitations(math.pi / 6, SecondMoments(1.0, 0.0)) == pytest.approx(0.25)


def test_consistency_with_mode_variance_on_grid():
    m = second_moments(mode_split(gaussian_amplitude(GaussianModeParams(1.0, 0.8))))
    for theta_u in (0.0, 0.2, 0.9, math.pi / 2, 2.0):
        eff = math.sin(theta_u) ** 2
        scaled = SecondMoments(eff * m.n, eff * m.a_sq)
        for phi in np.linspace(0.0, math.pi, 7):
            assert detector_variance(theta_u, m, phi) == pytest.approx(
                quadrature_variance(scaled, phi), rel=1e-12)


def test_efficiency_bounds():
    m = second_moments(mode_split(gaussian_amplitude(GaussianModeParams(1.0, 1.5))))
    for theta_u in np.linspace(0.0, math.pi, 9):
        eff = math.sin(theta_u) ** 2
        lo = 1.0 - eff * 2.0 * abs(m.a_sq)
        hi = 1.0 + 2.0 * eff * (m.n + abs(m.a_sq))
        for phi in np.linspace(0.0, math.pi, 5):
            var = detector_variance(theta_u, m, phi)
            assert lo - 1e-12 <= var <= hi + 1e-12
            assert var > 0.0


def test_switching_amplitude_normalized_and_matched():
    s = SwitchingParams(0.7, 1.3)
    d = DetectorParams(1.0)
    f = switching_amplitude(s, d)
    assert abs(bosonic_norm(f) - 1.0) < 1e-6
    # matched switching addresses the Gaussian mode: moments agree
    m_sw = second_moments(mode_split(f))
    m_g = second_moments(mode_split(matched_mode(s, d)))
    assert m_sw.n == pytest.approx(m_g.n, abs=1e-8)
    assert m_sw.a_sq == pytest.approx(m_g.a_sq, abs=1e-8)


def test_param_validation():
    with pytest.raises(ValueError):
        SwitchingParams(1.0, 0.0)
    with pytest.raises(ValueError):
        DetectorParams(-1.0)
