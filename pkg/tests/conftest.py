"""Shared fixtures: the reference electro-optic configuration.

Parameters follow the published ZnTe sampling experiments: 255 THz probe
carrier, 5.8 fs intensity FWHM (sigma_p ~ 2.03e14 rad/s), 7 um crystal,
r41 = 4 pm/V, 3 um beam radius, 5e9 probe photons, 1 THz detection band,
100 THz MIR/NIR transition.
"""

import math

import pytest

from vacuum_sampler.dispersion import TWO_PI_THZ, znte_model
from vacuum_sampler.eo import (
    CrystalParams,
    EOSetup,
    FilterParams,
    FrequencyPartition,
    ProbeParams,
)

OMEGA_P = 255.0 * TWO_PI_THZ
SIGMA_P = math.sqrt(2.0 * math.log(2.0)) / 5.8e-15


@pytest.fixture(scope="session")
def reference_setup() -> EOSetup:
    crystal = CrystalParams(length=7e-6, r41=4e-12,
                            area=math.pi * (3e-6) ** 2,
                            dispersion=znte_model())
    probe = ProbeParams(omega_p=OMEGA_P, sigma_p=SIGMA_P,
                        alpha=math.sqrt(5e9))
    return EOSetup(crystal, probe, FrequencyPartition(100.0 * TWO_PI_THZ))


@pytest.fixture(scope="session")
def reference_filter() -> FilterParams:
    return FilterParams(omega_tilde=OMEGA_P + 1.5 * SIGMA_P,
                        delta_omega=1.0 * TWO_PI_THZ)
