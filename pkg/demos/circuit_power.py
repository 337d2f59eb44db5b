"""
What the hardware can give up as the array grows
================================================

The square-root law lets kappa^2 and xi grow like sqrt(N). In circuit terms
that means dropping ADC bits and accepting a noisier LNA on each antenna.
Total power then grows like sqrt(N) instead of N.
"""

from hwmimo.circuits import (
    CircuitSpecs,
    adc_scaled_bits,
    lna_scaled_nf,
    lo_zeta,
    power_report,
)
from hwmimo.model import ScalingExponents

specs = CircuitSpecs(adc_bits=8.0, xi0=10**0.2)
law = ScalingExponents(tau1=0.5, tau2=0.5, tau3=0.0)
antennas = [1, 16, 100, 256, 1000, 10_000]

print(f"{'N':>6} {'ADC bits':>9} {'LNA NF [dB]':>12}")
for N in antennas:
    print(f"{N:6d} {adc_scaled_bits(8.0, N, 0.5):9.2f} {lna_scaled_nf(2.0, N, 0.5):12.2f}")

# Powers are in arbitrary units; only the growth with N is meaningful.
fixed = power_report(antennas, specs, ScalingExponents(), "slo")
scaled = power_report(antennas, specs, law, "slo")
print(f"\n{'N':>6} {'ADC fixed':>11} {'ADC scaled':>11} {'LNA fixed':>11} {'LNA scaled':>11}")
for f, s in zip(fixed, scaled):
    f0, s0 = fixed[0], scaled[0]
    print(f"{f['N']:6d} {f['adc'] / f0['adc']:11.1f} {s['adc'] / s0['adc']:11.1f} "
          f"{f['lna'] / f0['lna']:11.1f} {s['lna'] / s0['lna']:11.1f}")

# Oscillators: with one LO per antenna only a logarithmic relaxation is
# allowed, so the LO budget still grows almost linearly.
drift = power_report(antennas, specs, ScalingExponents(tau3=3.0), "slo")
print("\nLO power, SLO with tau3 = 3 (relative to N = 1):")
print("  ", ", ".join(f"N={r['N']}: {r['lo'] / drift[0]['lo']:.0f}" for r in drift))

# The drift variance of the reference setup at a 2 GHz carrier and 100 ns
# symbols corresponds to this oscillator quality constant.
print(f"\nzeta for delta = 1.6e-4 at 2 GHz, Ts = 100 ns: {lo_zeta(1.6e-4, 2e9, 1e-7):.4e}")
