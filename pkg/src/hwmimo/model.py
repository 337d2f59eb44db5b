"""Shared domain types for the multicell uplink model.

All powers are linear mW/Hz. Indices are zero-based: cells ``0..L-1``,
users ``0..K-1``, pilot indices ``0..B-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Oscillator(str, enum.Enum):
    """Local oscillator layout at a base station."""

    CLO = "clo"  # one oscillator shared by all antennas
    SLO = "slo"  # independent oscillator per antenna

    @classmethod
    def parse(cls, value: "Oscillator | str") -> "Oscillator":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown oscillator mode {value!r}; expected 'clo' or 'slo'") from None


def dbm_per_hz_to_linear(x):
    """Convert dBm/Hz to mW/Hz."""
    if np.ndim(x):
        return 10.0 ** (np.asarray(x, dtype=float) / 10.0)
    return 10.0 ** (float(x) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class SystemConfig:
    """Cell/user/antenna counts, block lengths and thermal noise level.

    Parameters
    ----------
    L, K, N : int
        Cells, users per cell and antennas per base station.
    T : int
        Coherence block length in channel uses.
    B : int
        Pilot length in channel uses.
    sigma2 : float
        Thermal noise power in mW/Hz.
    """

    L: int
    K: int
    N: int
    T: int
    B: int
    sigma2: float

    def errors(self) -> list[str]:
        out = []
        for name in ("L", "K", "N"):
            if getattr(self, name) < 1:
                out.append(f"{name} >= 1 violated")
        if not 1 <= self.B < self.T:
            out.append("1 <= B < T violated")
        if self.K > self.B:
            out.append("K <= B violated")
        if not self.sigma2 > 0:
            out.append("sigma2 > 0 violated")
        return out

    def with_antennas(self, N: int) -> "SystemConfig":
        return SystemConfig(self.L, self.K, int(N), self.T, self.B, self.sigma2)


@dataclass(frozen=True)
class HardwareProfile:
    """Imperfection triple plus oscillator layout.

    ``kappa2`` is the squared distortion proportionality, which is the
    quantity every moment formula uses.
    """

    delta: float = 0.0
    kappa2: float = 0.0
    xi: float = 1.0
    oscillator: Oscillator = Oscillator.SLO

    def __post_init__(self):
        object.__setattr__(self, "oscillator", Oscillator.parse(self.oscillator))
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.kappa2 < 0:
            raise ValueError("kappa2 must be >= 0")
        if self.xi < 1:
            raise ValueError("xi must be >= 1")

    @classmethod
    def ideal(cls, oscillator="slo") -> "HardwareProfile":
        return cls(0.0, 0.0, 1.0, oscillator)

    def with_oscillator(self, oscillator) -> "HardwareProfile":
        return HardwareProfile(self.delta, self.kappa2, self.xi, oscillator)


@dataclass(frozen=True)
class ScalingExponents:
    """Growth exponents of the imperfections with the array size and their N=1 values."""

    tau1: float = 0.0
    tau2: float = 0.0
    tau3: float = 0.0
    kappa0_sq: float = 0.0
    xi0: float = 1.0
    delta0: float = 0.0

    def __post_init__(self):
        for name in ("tau1", "tau2", "tau3", "kappa0_sq", "delta0"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.xi0 < 1:
            raise ValueError("xi0 must be >= 1")


@dataclass(frozen=True)
class PilotBook:
    """Orthogonal unit-modulus pilot sequences (columns of a DFT matrix).

    ``sequences[b]`` is pilot ``b``; its entries are the symbols sent at
    channel uses ``1..B``.
    """

    sequences: np.ndarray

    @classmethod
    def dft(cls, B: int) -> "PilotBook":
        i = np.arange(B)
        seq = np.exp(-2j * np.pi * np.outer(i, i) / B)
        seq.setflags(write=False)
        return cls(seq)

    @property
    def B(self) -> int:
        return self.sequences.shape[1]

    def effective(self, scenario: "Scenario") -> np.ndarray:
        """Pilots scaled by sqrt(p_lk), shape (L, K, B)."""
        seq = self.sequences[scenario.pilot_assignment]
        return np.sqrt(scenario.power)[..., None] * seq


@dataclass(frozen=True)
class Scenario:
    """Large-scale attenuations, powers and pilot assignment.

    Attributes
    ----------
    lam : ndarray, shape (L, L, K)
        ``lam[j, l, k]`` is the attenuation from user k of cell l to BS j.
    power : ndarray, shape (L, K)
        Transmit powers in mW/Hz (used for both pilots and data).
    pilot_assignment : ndarray of int, shape (L, K)
        Pilot index of each user.
    """

    lam: np.ndarray
    power: np.ndarray
    pilot_assignment: np.ndarray = field(default=None)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        power = np.array(self.power, dtype=float)
        if self.pilot_assignment is None:
            pilots = np.broadcast_to(np.arange(power.shape[-1]), power.shape).copy()
        else:
            pilots = np.array(self.pilot_assignment, dtype=int)
        for a in (lam, power, pilots):
            a.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "pilot_assignment", pilots)

    @property
    def L(self) -> int:
        return self.lam.shape[0]

    @property
    def K(self) -> int:
        return self.lam.shape[2]


def validate(config: SystemConfig, scenario: Scenario) -> list[str]:
    """Return every violated invariant; an empty list means the pair is valid.

    Never raises on malformed input.
    """
    errors = list(config.errors())
    L, K = config.L, config.K
    lam = np.asarray(scenario.lam)
    power = np.asarray(scenario.power)
    pilots = np.asarray(scenario.pilot_assignment)
    if lam.shape != (L, L, K):
        errors.append(f"lambda shape {lam.shape} != {(L, L, K)}")
    elif not np.all(lam > 0):
        errors.append("lambda > 0 violated")
    if power.shape != (L, K):
        errors.append(f"power shape {power.shape} != {(L, K)}")
    elif not np.all(power > 0):
        errors.append("power > 0 violated")
    if pilots.shape != (L, K):
        errors.append(f"pilot_assignment shape {pilots.shape} != {(L, K)}")
    else:
        if np.any((pilots < 0) | (pilots >= config.B)):
            errors.append(f"pilot index outside 0..{config.B - 1}")
        for l in range(L):
            if len(set(pilots[l].tolist())) != K:
                errors.append(f"duplicate in-cell pilot in cell {l}")
    return errors
