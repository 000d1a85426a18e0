"""Physical constants used throughout the package (CODATA 2018, exact SI)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units.

    hbar : reduced Planck constant [J s]
    c    : speed of light in vacuum [m / s]
    eps0 : vacuum permittivity [F / m]
    """

    hbar: float = 1.054571817e-34
    c: float = 299792458.0
    eps0: float = 8.8541878128e-12

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0 and self.eps0 > 0):
            raise ValueError("physical constants must be strictly positive")


CODATA = PhysicalConstants()
