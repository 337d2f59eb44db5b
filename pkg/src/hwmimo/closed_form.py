"""Closed-form MRC moments, SINR, achievable rates and the imperfection scaling law.

The moments reduce to B x B quadratic forms; the antenna count only enters as
the scalar factors ``N`` and ``N (N - 1)``, so any N costs the same.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import EstimatorCache
from .model import HardwareProfile, Oscillator, ScalingExponents, Scenario, SystemConfig


@dataclass(frozen=True)
class MomentSet:
    """The four MRC expectations for one user (j, k) at one channel use.

    ``interference[l, m]`` is E|v^H h_jlm(t)|^2.
    """

    filter_norm: float
    signal: float
    interference: np.ndarray
    distortion: float


@dataclass(frozen=True)
class CellMoments:
    """Moments for every user of one cell over a grid of channel uses.

    Leading axes are (time, user). ``self_excess`` is
    ``E|v^H h_jjk|^2 - |E v^H h_jjk|^2`` evaluated without cancellation.
    """

    filter_norm: np.ndarray  # (nt, K)
    interference: np.ndarray  # (nt, K, L, K)
    distortion: np.ndarray  # (nt, K)
    self_excess: np.ndarray  # (nt, K)

    @property
    def signal(self) -> np.ndarray:
        return self.filter_norm


def _quad_forms(u: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Real parts of ``u^H M u`` for every vector in u (..., B) and matrix in mats (L, K, B, B)."""
    lead, B = u.shape[:-1], u.shape[-1]
    flat = u.reshape(-1, B)
    mu = np.tensordot(flat.conj(), mats, axes=([1], [2]))  # (P, L, K, B)
    out = np.einsum("plkb,pb->plk", mu, flat, optimize=True).real
    return out.reshape(lead + mats.shape[:2])


def cell_moments(cache: EstimatorCache, j: int, ts, N: int) -> CellMoments:
    """Evaluate the MRC moments at BS j for all its users and channel uses ``ts``."""
    ts = np.atleast_1d(np.asarray(ts))
    if np.any(ts < cache.B + 1):
        raise ValueError(f"channel use must be >= B+1={cache.B + 1}")
    scen, prof = cache.scenario, cache.profile
    lam_j = scen.lam[j]  # (L, K)
    lam_own = lam_j[j]  # (K,)
    d = cache.delay(ts)  # (nt, B)
    dx_all = d[:, None, None, :] * cache.pilots[None]  # (nt, L, K, B)
    dx_own = dx_all[:, j]  # (nt, K, B)
    u = np.einsum("ab,tkb->tka", cache.psi_inv[j], dx_own)
    uc = u.conj()
    q = np.einsum("tka,tka->tk", dx_own.conj(), u).real

    # u^H Xbar u and u^H X u per interferer
    q_bar = _quad_forms(u, cache.xbar)
    diag_w = np.einsum("tka,lma->tklm", np.abs(u) ** 2, np.abs(cache.pilots) ** 2)
    q_x = q_bar + prof.kappa2 * diag_w
    cross = np.einsum("tka,tlma->tklm", uc, dx_all, optimize=True)
    if prof.oscillator is Oscillator.CLO:
        coherent = q_bar
    else:
        coherent = np.abs(cross) ** 2

    gain = N * lam_own**2  # (K,)
    fn = gain * q
    lam2 = lam_j**2
    interference = (lam_j * fn[..., None, None]
                    + gain[:, None, None] * lam2 * q_x
                    + (N - 1) * gain[:, None, None] * lam2 * coherent)
    pw = scen.power * lam_j
    distortion = prof.kappa2 * (fn * pw.sum()
                                + gain * np.einsum("lm,tklm->tk", scen.power * lam2, q_x))

    # Own-user variance: coherent part minus |signal|^2, written so that the
    # N^2 terms cancel analytically.
    k_idx = np.arange(scen.K)
    own_qx = q_x[:, k_idx, j, k_idx]
    if prof.oscillator is Oscillator.CLO:
        own_excess = q_bar[:, k_idx, j, k_idx] - np.abs(cross[:, k_idx, j, k_idx]) ** 2
    else:
        own_excess = np.zeros_like(q)
    lam_kk = lam_own**2
    self_excess = (lam_own * fn
                   + gain * lam_kk * own_qx
                   + (N - 1) * gain * lam_kk * own_excess
                   - gain * lam_kk * q**2)
    return CellMoments(fn, interference, distortion, self_excess)


def mrc_moments(cache: EstimatorCache, j: int, k: int, t: int, N: int) -> MomentSet:
    """Closed-form MRC moments for user k of cell j at channel use t."""
    cm = cell_moments(cache, j, [t], N)
    return MomentSet(float(cm.filter_norm[0, k]), float(cm.filter_norm[0, k]),
                     np.array(cm.interference[0, k]), float(cm.distortion[0, k]))


def sinr(moments: MomentSet, scenario: Scenario, profile: HardwareProfile, sigma2: float,
         j: int, k: int) -> float:
    """Effective SINR from a set of moments (generic, any filter)."""
    p = scenario.power
    signal_power = p[j, k] * abs(moments.signal) ** 2
    terms = (p * moments.interference).ravel().tolist()
    terms += [-signal_power, moments.distortion, sigma2 * profile.xi * moments.filter_norm]
    denom = math.fsum(terms)
    if not denom > 0:
        raise ArithmeticError(f"non-positive SINR denominator {denom!r} for user ({j}, {k})")
    return signal_power / denom


def _cell_sinr(cm: CellMoments, cache: EstimatorCache, j: int) -> np.ndarray:
    p = cache.scenario.power
    K = cache.scenario.K
    weighted = (p * cm.interference).astype(np.longdouble)
    k_idx = np.arange(K)
    # drop the own-user term; it is replaced by the cancellation-free variance
    weighted[:, k_idx, j, k_idx] = 0
    other = weighted.sum(axis=(-2, -1))
    denom = (other + p[j] * cm.self_excess.astype(np.longdouble)
             + cm.distortion + cache.noise * cm.filter_norm)
    if np.any(denom <= 0):
        raise ArithmeticError(f"non-positive SINR denominator at BS {j}")
    return np.asarray(p[j] * cm.filter_norm**2 / denom, dtype=float)


def sinr_trajectory(cache: EstimatorCache, j: int, N: int, T: int, ts=None) -> np.ndarray:
    """SINR of every user in cell j over t = B+1..T, shape (K, T-B)."""
    if ts is None:
        ts = np.arange(cache.B + 1, T + 1)
    cm = cell_moments(cache, j, ts, N)
    return _cell_sinr(cm, cache, j).T


def rate(sinr_traj, T: int, B: int) -> float:
    """Average of log2(1 + SINR) over the data phase, normalized by T."""
    sinr_traj = np.asarray(sinr_traj, dtype=float)
    if sinr_traj.shape[-1] != T - B:
        raise ValueError(f"trajectory length {sinr_traj.shape[-1]} != T - B = {T - B}")
    return np.log2(1.0 + sinr_traj).sum(axis=-1) / T


@dataclass(frozen=True)
class RateReport:
    """Per-user SINR trajectories and rates in bit/channel use."""

    sinr: np.ndarray  # (L, K, T-B)
    rates: np.ndarray  # (L, K)
    T: int
    B: int

    @property
    def cell_sum(self) -> np.ndarray:
        return self.rates.sum(axis=1)

    @property
    def sum_rate(self) -> float:
        return float(self.rates.sum())


def rate_report(scenario: Scenario, config: SystemConfig, profile: HardwareProfile,
                cache: EstimatorCache | None = None) -> RateReport:
    if cache is None:
        cache = EstimatorCache(scenario, profile, config.sigma2, config.B)
    traj = np.stack([sinr_trajectory(cache, j, config.N, config.T) for j in range(scenario.L)])
    return RateReport(traj, rate(traj, config.T, config.B), config.T, config.B)


def apply_scaling(exponents: ScalingExponents, N: float, oscillator="slo") -> HardwareProfile:
    """Hardware profile after growing each imperfection with the array size."""
    if N < 1:
        raise ValueError("N must be >= 1")
    e = exponents
    return HardwareProfile(
        delta=e.delta0 * (1.0 + e.tau3 * math.log(N)),
        kappa2=e.kappa0_sq * N**e.tau1,
        xi=e.xi0 * N**e.tau2,
        oscillator=oscillator,
    )


def scaling_law_satisfied(exponents: ScalingExponents, t: int, B: int, oscillator) -> bool:
    """Sufficient condition for a non-vanishing SINR limit at channel use t."""
    e = exponents
    worst = max(e.tau1, e.tau2)
    if Oscillator.parse(oscillator) is Oscillator.CLO:
        return worst <= 0.5 and e.tau3 == 0
    return worst + e.delta0 * (t - B) / 2 * e.tau3 <= 0.5


def block_satisfies_scaling_law(exponents: ScalingExponents, T: int, B: int, oscillator) -> bool:
    # The separate-oscillator condition tightens with t, so t = T binds.
    return scaling_law_satisfied(exponents, T, B, oscillator)


@dataclass(frozen=True)
class ProbeResult:
    n_values: np.ndarray
    sinr: np.ndarray  # (len(n_values), L, K) at t = T

    @property
    def ratio(self) -> np.ndarray:
        """SINR at the last N divided by SINR at the second-to-last N."""
        return self.sinr[-1] / self.sinr[-2]

    def converged(self, tol: float = 0.05) -> np.ndarray:
        return np.abs(self.ratio - 1.0) <= tol


def asymptotic_probe(scenario: Scenario, config: SystemConfig, exponents: ScalingExponents,
                     oscillator, n_values) -> ProbeResult:
    """Closed-form SINR at t = T as the array grows with scaled imperfections."""
    n_values = np.asarray(n_values)
    if np.any(np.diff(n_values) <= 0):
        raise ValueError("n_values must be increasing")
    out = []
    for N in n_values:
        profile = apply_scaling(exponents, float(N), oscillator)
        cache = EstimatorCache(scenario, profile, config.sigma2, config.B)
        out.append([sinr_trajectory(cache, j, int(N), config.T, ts=[config.T])[:, 0]
                    for j in range(scenario.L)])
    return ProbeResult(n_values, np.array(out))
