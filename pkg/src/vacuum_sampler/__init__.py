"""Numerical toolkit for vacuum statistics of subcycle optical modes.

The package computes second moments and quadrature variances of broadband
(subcycle) bosonic modes of the electromagnetic vacuum, models their
detection with a harmonically switched detector, and simulates electro-optic
sampling in a zincblende crystal, including the beam-splitter / squeezer
regime classification of the filtered probe mode and an exact Bogoliubov
oracle for validating the approximate evolution methods.
"""

__version__ = "0.1.0"

from .constants import CODATA, PhysicalConstants
from .quadrature import (
    IntegrationDomain,
    QuadratureResult,
    QuadratureError,
    QuadratureConvergenceError,
    QuadratureEvaluationError,
    integrate,
    integrate_2d,
)

__all__ = [
    "CODATA",
    "PhysicalConstants",
    "IntegrationDomain",
    "QuadratureResult",
    "QuadratureError",
    "QuadratureConvergenceError",
    "QuadratureEvaluationError",
    "integrate",
    "integrate_2d",
    "__version__",
]
