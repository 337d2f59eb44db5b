"""Massive-MIMO uplink rates under hardware imperfections.

Closed-form MRC rates with phase drift, distortion noise and noise
amplification, a Monte Carlo oracle for them, and the circuit power
consequences of letting the imperfections grow with the array size.
"""

__version__ = "0.1.0"

from .model import (
    HardwareProfile,
    Oscillator,
    PilotBook,
    ScalingExponents,
    Scenario,
    SystemConfig,
    dbm_per_hz_to_linear,
    validate,
)
from .estimator import EstimatorCache, lmmse_estimate
from .closed_form import (
    apply_scaling,
    asymptotic_probe,
    mrc_moments,
    rate_report,
    scaling_law_satisfied,
    sinr,
)

__all__ = [
    "EstimatorCache",
    "HardwareProfile",
    "Oscillator",
    "PilotBook",
    "ScalingExponents",
    "Scenario",
    "SystemConfig",
    "apply_scaling",
    "asymptotic_probe",
    "dbm_per_hz_to_linear",
    "lmmse_estimate",
    "mrc_moments",
    "rate_report",
    "scaling_law_satisfied",
    "sinr",
    "validate",
]
