"""Circuit-level view of the imperfections: ADC bits, LNA noise figure, LO quality.

Absolute power coefficients (``c_adc``, LNA gain and FoM, LO FoM) default to
1 in arbitrary units; only ratios across N are meaningful.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .model import Oscillator, ScalingExponents

MIN_ADC_BITS = 1.0


def adc_kappa(bits: float) -> float:
    """Distortion amplitude contributed by a ``bits``-bit ADC; kappa^2 gets its square."""
    return 2.0 ** (-bits)


def adc_bits_for_kappa2(kappa2: float) -> float:
    return -0.5 * math.log2(kappa2)


def adc_power(bits: float, c_adc: float = 1.0) -> float:
    return c_adc * 4.0 ** bits


def adc_scaled_bits(b0: float, N: float, tau1: float) -> float:
    """Resolution after giving up ``tau1/2 * log2(N)`` bits, floored at 1 bit."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return max(b0 - 0.5 * tau1 * math.log2(N), MIN_ADC_BITS)


def total_adc_power(N: float, b0: float, tau1: float, c_adc: float = 1.0) -> float:
    """Power of N per-antenna ADCs at the scaled resolution."""
    return N * adc_power(adc_scaled_bits(b0, N, tau1), c_adc)


def noise_figure_db(xi: float) -> float:
    return 10.0 * math.log10(xi)


def xi_from_noise_figure(nf_db: float) -> float:
    return 10.0 ** (nf_db / 10.0)


def lna_power(gain: float, xi: float, fom: float = 1.0) -> float:
    """LNA power from its figure of merit ``G / ((xi - 1) P)``."""
    if xi <= 1:
        raise ValueError("xi must exceed 1: a noiseless LNA needs infinite power")
    return gain / ((xi - 1.0) * fom)


def lna_scaled_nf(nf0_db: float, N: float, tau2: float) -> float:
    if N < 1:
        raise ValueError("N must be >= 1")
    return nf0_db + tau2 * 10.0 * math.log10(N)


def total_lna_power(N: float, xi0: float, tau2: float, gain: float = 1.0, fom: float = 1.0,
                    model: str = "scaling") -> float:
    """Power of N LNAs when the noise amplification grows as ``xi0 * N**tau2``.

    ``model="scaling"`` uses the per-LNA power law ``P(1) / N**tau2``;
    ``model="fom"`` evaluates the figure-of-merit relation at the scaled xi,
    which only approximately follows that law.
    """
    if model == "scaling":
        return N * lna_power(gain, xi0, fom) / N**tau2
    if model == "fom":
        return N * lna_power(gain, xi0 * N**tau2, fom)
    raise ValueError(f"unknown LNA power model {model!r}")


def lo_variance(f_c: float, T_s: float, zeta: float) -> float:
    """Wiener phase-innovation variance of a free-running oscillator."""
    if f_c <= 0 or T_s <= 0 or zeta < 0:
        raise ValueError("need f_c > 0, T_s > 0, zeta >= 0")
    return 4.0 * math.pi**2 * f_c**2 * T_s * zeta


def lo_zeta(delta: float, f_c: float, T_s: float) -> float:
    """Oscillator quality constant that yields innovation variance ``delta``."""
    return delta / (4.0 * math.pi**2 * f_c**2 * T_s)


def lo_power(zeta: float, fom_lo: float = 1.0) -> float:
    # P_LO * zeta ~ FoM_LO, taken as an equality
    if zeta <= 0:
        raise ValueError("zeta must be > 0")
    return fom_lo / zeta


def total_lo_power(N: float, zeta0: float, tau3: float, fom_lo: float = 1.0,
                   oscillator="slo") -> float:
    """Total oscillator power; one LO per antenna (SLO) or one per BS (CLO)."""
    if Oscillator.parse(oscillator) is Oscillator.CLO:
        if tau3 > 0:
            raise ValueError("a common oscillator admits no phase-drift scaling (tau3 must be 0)")
        return lo_power(zeta0, fom_lo)
    return N * lo_power(zeta0, fom_lo) / (1.0 + tau3 * math.log(N))


@dataclass(frozen=True)
class CircuitSpecs:
    """Baseline (N = 1) circuit parameters."""

    adc_bits: float = 8.0
    c_adc: float = 1.0
    lna_gain: float = 1.0
    lna_fom: float = 1.0
    xi0: float = 10**0.2
    zeta0: float = 1.0
    lo_fom: float = 1.0


def power_report(n_values, specs: CircuitSpecs, exponents: ScalingExponents,
                 oscillator="slo") -> list[dict]:
    """Total ADC, LNA and LO power for each array size."""
    osc = Oscillator.parse(oscillator)
    rows = []
    for N in n_values:
        rows.append({
            "N": N,
            "adc": total_adc_power(N, specs.adc_bits, exponents.tau1, specs.c_adc),
            "lna": total_lna_power(N, specs.xi0, exponents.tau2, specs.lna_gain, specs.lna_fom),
            "lo": total_lo_power(N, specs.zeta0, exponents.tau3, specs.lo_fom, osc),
            "mode": osc.value,
        })
    return rows


def write_power_csv(rows, path) -> None:
    """Long format: N, component, mode, total_power."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "component", "mode", "total_power"])
        for r in rows:
            for comp in ("adc", "lna", "lo"):
                w.writerow([r["N"], comp, r["mode"], repr(float(r[comp]))])
