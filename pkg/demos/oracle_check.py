"""
Closed-form moments against a Monte Carlo oracle
================================================

Two cells, two users each, 20 antennas, a coherence block of 12 channel uses
with 2 pilot symbols. The hardware is badly impaired on purpose so that
every term of the moment expressions matters.

The simulation draws channels, Wiener phase trajectories, distortion and
noise, forms the LMMSE estimate from the received pilots, and averages the
MRC quantities. Each closed-form value should sit within a few standard
errors of its sample mean.
"""

import numpy as np

from hwmimo import EstimatorCache, mrc_moments
from hwmimo.instances import SMALL_IMPAIRED, small_instance
from hwmimo.montecarlo import estimate_moments

scenario, config = small_instance()
R = 50_000  # blocks; the acceptance suite uses 2e5
j, k = 0, 0

for osc in ("clo", "slo"):
    profile = SMALL_IMPAIRED.with_oscillator(osc)
    cache = EstimatorCache(scenario, profile, config.sigma2, config.B)
    times = (config.B + 1, config.T)
    em = estimate_moments(scenario, config, profile, times, R, seed=1, workers=4)

    print(f"\n{osc.upper()}  (delta={profile.delta}, kappa^2={profile.kappa2}, xi={profile.xi})")
    print(f"{'t':>3} {'quantity':>20} {'closed form':>13} {'Monte Carlo':>13} {'z':>7}")
    for t in times:
        ref = mrc_moments(cache, j, k, t, config.N)
        got = em.user(j, k, t)
        for name in ("filter_norm", "signal", "distortion"):
            mean, se = got[name]
            c = getattr(ref, name)
            print(f"{t:3d} {name:>20} {c:13.5f} {mean:13.5f} {(mean - c) / se:7.2f}")
        mean, se = got["interference"]
        for (l, m), c in np.ndenumerate(ref.interference):
            label = f"interference[{l},{m}]"
            print(f"{t:3d} {label:>20} {c:13.5f} {mean[l, m]:13.5f} "
                  f"{(mean[l, m] - c) / se[l, m]:7.2f}")
