"""Monte Carlo simulation of the impaired uplink, used to check the closed forms.

Random-number contract: blocks are grouped in batches whose size depends
only on the problem dimensions (see ``batch_size``), and batch ``b`` draws
from ``SeedSequence(seed, spawn_key=(b,))``. Batch statistics are merged in
batch order, so results do not depend on the number of workers.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .closed_form import RateReport, rate
from .estimator import EstimatorCache
from .model import HardwareProfile, Oscillator, Scenario, SystemConfig

BATCH_BLOCKS = 1000
BATCH_ELEMENTS = 2_000_000  # complex entries of y per batch


@dataclass(frozen=True)
class BlockRealization:
    """One or more coherence blocks; the leading axis indexes blocks.

    Time axes run over channel uses ``1..T`` (array index ``t - 1``).

    Attributes
    ----------
    h : (R, L, L, K, N)  channels ``h[j, l, k]`` to BS j.
    phase : (R, L, T, N) phase drift per BS antenna (identical over N for CLO).
    symbols : (R, L, K, T) transmitted symbols (pilots for t <= B).
    distortion_var : (R, L, N) diagonal of the distortion covariance.
    distortion : (R, L, T, N)
    noise : (R, L, T, N)
    y : (R, L, T, N) received signal.
    """

    h: np.ndarray
    phase: np.ndarray
    symbols: np.ndarray
    distortion_var: np.ndarray
    distortion: np.ndarray
    noise: np.ndarray
    y: np.ndarray
    B: int

    @property
    def pilot_rows(self) -> np.ndarray:
        """Pilot-phase observation, shape (R, L, B, N)."""
        return self.y[:, :, : self.B]

    def effective_channel(self, t: int) -> np.ndarray:
        """Drifted channels at channel use t, shape (R, L, L, K, N)."""
        rot = np.exp(1j * self.phase[:, :, t - 1])
        return rot[:, :, None, None, :] * self.h


def _cn(rng, shape, var=1.0):
    z = rng.standard_normal(shape + (2,))
    return np.sqrt(np.asarray(var) / 2) * (z[..., 0] + 1j * z[..., 1])


def simulate_blocks(scenario: Scenario, config: SystemConfig, profile: HardwareProfile,
                    rng: np.random.Generator, n_blocks: int = 1,
                    initial_phase=0.0, pilots: np.ndarray | None = None) -> BlockRealization:
    """Draw ``n_blocks`` independent coherence blocks of the impaired uplink."""
    L, K, N, T, B = config.L, config.K, config.N, config.T, config.B
    R = n_blocks
    if pilots is None:
        pilots = EstimatorCache(scenario, profile, config.sigma2, B).pilots
    h = _cn(rng, (R, L, L, K, N), scenario.lam[None, ..., None])

    sd = np.sqrt(profile.delta)
    if profile.oscillator is Oscillator.CLO:
        steps = sd * rng.standard_normal((R, L, T, 1))
    else:
        steps = sd * rng.standard_normal((R, L, T, N))
    phase = np.broadcast_to(initial_phase + np.cumsum(steps, axis=2), (R, L, T, N))

    data = _cn(rng, (R, L, K, T - B), scenario.power[None, ..., None])
    symbols = np.concatenate([np.broadcast_to(pilots, (R, L, K, B)), data], axis=-1)

    dvar = profile.kappa2 * np.einsum("lk,rjlkn->rjn", scenario.power, np.abs(h) ** 2)
    distortion = _cn(rng, (R, L, T, N), dvar[:, :, None, :])
    noise = _cn(rng, (R, L, T, N), config.sigma2 * profile.xi)

    clean = np.einsum("rjlkn,rlkt->rjtn", h, symbols)
    y = np.exp(1j * phase) * clean + distortion + noise
    return BlockRealization(h, phase, symbols, dvar, distortion, noise, y, B)


def simulate_block(scenario: Scenario, config: SystemConfig, profile: HardwareProfile,
                   seed, initial_phase=0.0) -> BlockRealization:
    """A single block, deterministic given ``seed``."""
    return simulate_blocks(scenario, config, profile, np.random.default_rng(seed), 1,
                           initial_phase)


def _batch_rng(seed, b: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))


def batch_size(config: SystemConfig) -> int:
    per_block = config.L * max(config.T * config.N, config.L * config.K * config.N)
    return int(max(1, min(BATCH_BLOCKS, BATCH_ELEMENTS // per_block)))


def _batches(R: int, size: int):
    return [(b, min(size, R - b * size)) for b in range(-(-R // size))]


def _run(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


class _Stats:
    """Mean and centered sum of squares, merged pairwise in a fixed order."""

    def __init__(self, n, mean, m2):
        self.n, self.mean, self.m2 = n, mean, m2

    @classmethod
    def of(cls, samples):
        mean = samples.mean(axis=0)
        return cls(samples.shape[0], mean, ((samples - mean) ** 2).sum(axis=0))

    def merge(self, other: "_Stats") -> "_Stats":
        n = self.n + other.n
        d = other.mean - self.mean
        mean = self.mean + d * (other.n / n)
        m2 = self.m2 + other.m2 + d**2 * (self.n * other.n / n)
        return _Stats(n, mean, m2)

    @property
    def stderr(self):
        return np.sqrt(self.m2 / (self.n - 1) / self.n)


def _merge(stats):
    out = stats[0]
    for s in stats[1:]:
        out = out.merge(s)
    return out


def _own_combiners(cache: EstimatorCache, ts) -> np.ndarray:
    """MRC weights on the pilot rows for every own-cell user: (L, K, nt, B)."""
    L, K = cache.scenario.L, cache.scenario.K
    return np.array([[cache.combiner(j, j, k, ts) for k in range(K)] for j in range(L)])


@dataclass(frozen=True)
class EmpiricalMoments:
    """Sample means and standard errors of the four MRC quantities.

    Leading axes are (t, L, K) for the target times and all users; the
    interference arrays carry two trailing (l, m) axes.
    """

    t: np.ndarray
    filter_norm: np.ndarray
    filter_norm_se: np.ndarray
    signal: np.ndarray
    signal_se: np.ndarray
    interference: np.ndarray
    interference_se: np.ndarray
    distortion: np.ndarray
    distortion_se: np.ndarray
    R: int

    def user(self, j: int, k: int, t: int) -> dict:
        """Means and standard errors for one user at one channel use."""
        i = int(np.flatnonzero(self.t == t)[0])
        return {name: (getattr(self, name)[i, j, k], getattr(self, name + "_se")[i, j, k])
                for name in ("filter_norm", "signal", "interference", "distortion")}


def _moment_samples(real: BlockRealization, coef: np.ndarray, ts) -> tuple:
    v = np.einsum("jktb,rjbn->rtjkn", coef, real.pilot_rows)
    vc = v.conj()
    fn = (np.abs(v) ** 2).sum(-1)
    h_t = np.stack([real.effective_channel(t) for t in ts], axis=1)  # (R, nt, j, l, m, N)
    vh = np.einsum("rtjkn,rtjlmn->rtjklm", vc, h_t)
    L, K = coef.shape[:2]
    own = vh[:, :, np.arange(L)[:, None], np.arange(K)[None, :],
             np.arange(L)[:, None], np.arange(K)[None, :]]
    ups = real.distortion[:, :, np.asarray(ts) - 1].transpose(0, 2, 1, 3)  # (R, nt, j, N)
    dist = np.abs(np.einsum("rtjkn,rtjn->rtjk", vc, ups)) ** 2
    return fn, own.real, np.abs(vh) ** 2, dist


def estimate_moments(scenario: Scenario, config: SystemConfig, profile: HardwareProfile,
                     t, R: int, seed=0, workers: int = 1) -> EmpiricalMoments:
    """Monte Carlo estimates of the MRC moments for every user at channel uses ``t``.

    Each block draws fresh channels, phase trajectories, distortion and
    noise; the receive filter is the LMMSE estimate of the user's own channel.
    """
    if R < 2:
        raise ValueError("R must be >= 2 for standard errors")
    ts = np.atleast_1d(np.asarray(t, dtype=int))
    if np.any(ts < config.B + 1) or np.any(ts > config.T):
        raise ValueError(f"t must lie in {config.B + 1}..{config.T}")
    cache = EstimatorCache(scenario, profile, config.sigma2, config.B)
    coef = _own_combiners(cache, ts)

    def one(b, n):
        real = simulate_blocks(scenario, config, profile, _batch_rng(seed, b), n,
                               pilots=cache.pilots)
        return [_Stats.of(s) for s in _moment_samples(real, coef, ts)]

    parts = _run(one, _batches(R, batch_size(config)), workers)
    merged = [_merge([p[i] for p in parts]) for i in range(4)]
    fields = {}
    for name, st in zip(("filter_norm", "signal", "interference", "distortion"), merged):
        fields[name] = st.mean
        fields[name + "_se"] = st.stderr
    return EmpiricalMoments(t=ts, R=R, **fields)


def write_moments_csv(em: EmpiricalMoments, path) -> None:
    """Flat dump of estimated moments: t, j, k, quantity, l, m, mean, stderr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "j", "k", "quantity", "l", "m", "mean", "stderr"])
        for i, t in enumerate(em.t):
            for (j, k), _ in np.ndenumerate(em.filter_norm[i]):
                for q in ("filter_norm", "signal", "distortion"):
                    w.writerow([t, j, k, q, "", "", repr(float(getattr(em, q)[i, j, k])),
                                repr(float(getattr(em, q + "_se")[i, j, k]))])
                for (l, m), val in np.ndenumerate(em.interference[i, j, k]):
                    w.writerow([t, j, k, "interference", l, m, repr(float(val)),
                                repr(float(em.interference_se[i, j, k, l, m]))])


def _rate_samples(real: BlockRealization, coef: np.ndarray, power: np.ndarray, ts,
                  t_chunk: int = 64):
    """Per-block fn, signal, power-weighted interference and distortion: (R, L, K, nt)."""
    R = real.h.shape[0]
    L, K, nt = coef.shape[:3]
    out = np.zeros((4, R, L, K, nt))
    ts = np.asarray(ts)
    for j in range(L):
        for lo in range(0, nt, t_chunk):
            sl = slice(lo, lo + t_chunk)
            tt = ts[sl]
            v = np.einsum("ktb,rbn->rktn", coef[j, :, sl], real.pilot_rows[:, j])
            rot = np.exp(1j * real.phase[:, j, tt - 1])  # (R, nt, N)
            # v^H D_phi h = (conj(v) * rot) @ h
            w = v.conj() * rot[:, None]
            h = real.h[:, j].reshape(R, L * K, -1)
            vh = np.einsum("rktn,rqn->rktq", w, h)
            out[0, :, j, :, sl] = (np.abs(v) ** 2).sum(-1)
            own = vh[:, np.arange(K), :, j * K + np.arange(K)]  # (K, R, nt)
            out[1, :, j, :, sl] = own.transpose(1, 0, 2).real
            out[2, :, j, :, sl] = (np.abs(vh) ** 2) @ power.ravel()
            ups = real.distortion[:, j, tt - 1]  # (R, nt, N)
            out[3, :, j, :, sl] = np.abs(np.einsum("rktn,rtn->rkt", v.conj(), ups)) ** 2
    return out


def empirical_rate(scenario: Scenario, config: SystemConfig, profile: HardwareProfile,
                   R: int, seed=0, workers: int = 1) -> RateReport:
    """Achievable rates with every SINR assembled from Monte Carlo moments."""
    if R < 2:
        raise ValueError("R must be >= 2")
    ts = np.arange(config.B + 1, config.T + 1)
    cache = EstimatorCache(scenario, profile, config.sigma2, config.B)
    coef = _own_combiners(cache, ts)

    def one(b, n):
        real = simulate_blocks(scenario, config, profile, _batch_rng(seed, b), n,
                               pilots=cache.pilots)
        return _Stats.of(_rate_samples(real, coef, scenario.power, ts).swapaxes(0, 1))

    st = _merge(_run(one, _batches(R, batch_size(config)), workers))
    fn, sig, interf, dist = st.mean
    p = scenario.power[..., None]
    signal_power = p * sig**2
    sinr = signal_power / (interf - signal_power + dist + cache.noise * fn)
    return RateReport(sinr, rate(sinr, config.T, config.B), config.T, config.B)
