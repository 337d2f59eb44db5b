"""Ready-made setups: a tiny instance for oracle checks and the 16-cell layout."""

import numpy as np

from .model import HardwareProfile, ScalingExponents, Scenario, SystemConfig, dbm_per_hz_to_linear
from .scenario import Geometry, ShadowFadingModel, build_scenario

REF_POWER_DBM = -47.0
REF_NOISE_DBM = -174.0
REF_T = 500
REF_B = 8
REF_KAPPA0 = 2.0**-8
REF_XI0 = 10.0**0.2
REF_DELTA0 = 1.6e-4


def small_instance(seed=2024, N=20):
    """Two cells, two users, B=2, T=12 with random attenuations and unit powers.

    Own-cell attenuations are drawn in [0.5, 1], cross-cell ones in
    [0.05, 0.3]; both cells reuse pilots 0 and 1.
    """
    rng = np.random.default_rng(seed)
    L, K = 2, 2
    lam = rng.uniform(0.05, 0.3, size=(L, L, K))
    for j in range(L):
        lam[j, j] = rng.uniform(0.5, 1.0, size=K)
    scenario = Scenario(lam, np.ones((L, K)), np.tile(np.arange(K), (L, 1)))
    config = SystemConfig(L=L, K=K, N=N, T=12, B=2, sigma2=0.1)
    return scenario, config


SMALL_IMPAIRED = HardwareProfile(delta=0.05, kappa2=0.05, xi=1.5)


def reference_config(N=100, grid=4) -> SystemConfig:
    return SystemConfig(L=grid * grid, K=REF_B, N=N, T=REF_T, B=REF_B,
                        sigma2=dbm_per_hz_to_linear(REF_NOISE_DBM))


def reference_scenario(seed=0, grid=4) -> Scenario:
    return build_scenario(Geometry(grid=grid), ShadowFadingModel(0.5), REF_POWER_DBM, seed)


def reference_fixed_profile(oscillator="slo") -> HardwareProfile:
    return HardwareProfile(REF_DELTA0, REF_KAPPA0**2, REF_XI0, oscillator)


def reference_exponents(tau1=0.5, tau2=0.5, tau3=0.0) -> ScalingExponents:
    return ScalingExponents(tau1, tau2, tau3, REF_KAPPA0**2, REF_XI0, REF_DELTA0)
