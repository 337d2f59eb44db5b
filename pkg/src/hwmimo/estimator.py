"""LMMSE channel estimation under phase drift and the shared B x B matrices.

Everything here lives in the pilot domain (B x B); the estimate itself is a
weighted sum of the B received antenna vectors, so the N*B x N*B Kronecker
form is never built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import HardwareProfile, PilotBook, Scenario


def delay_weights(t, B: int, delta: float) -> np.ndarray:
    """Diagonal of the delay matrix, ``exp(-delta/2 * (t - i))`` for i = 1..B.

    ``t`` may be an array; the result then has shape ``t.shape + (B,)``.
    """
    t = np.asarray(t)
    if np.any(t < B):
        raise ValueError(f"channel use t must be >= B={B}")
    lag = t[..., None] - np.arange(1, B + 1)
    return np.exp(-0.5 * delta * lag)


def delay_matrix(t: int, B: int, delta: float) -> np.ndarray:
    return np.diag(delay_weights(t, B, delta))


def pilot_grams(pilot, delta: float, kappa2: float):
    """Return ``(Xbar, X)`` for one pilot sequence.

    ``Xbar`` is the outer product ``x x^H`` with off-diagonals damped by
    ``exp(-delta/2 * |i1 - i2|)``; ``X`` adds ``kappa2 * diag(|x|^2)``.
    Works on stacked pilots of shape (..., B).
    """
    x = np.asarray(pilot, dtype=complex)
    B = x.shape[-1]
    i = np.arange(B)
    damp = np.exp(-0.5 * delta * np.abs(i[:, None] - i[None, :]))
    xbar = x[..., :, None] * x[..., None, :].conj() * damp
    x_mat = xbar + kappa2 * (np.abs(x) ** 2)[..., :, None] * np.eye(B)
    return xbar, x_mat


def psi_matrix(scenario: Scenario, pilots: PilotBook, profile: HardwareProfile,
               sigma2: float, j: int) -> np.ndarray:
    """Per-antenna covariance of the received pilot signal at BS j."""
    x = pilots.effective(scenario)
    _, x_mat = pilot_grams(x, profile.delta, profile.kappa2)
    psi = np.einsum("lk,lkab->ab", scenario.lam[j], x_mat)
    return psi + sigma2 * profile.xi * np.eye(pilots.B)


class EstimatorCache:
    """Pilot-domain matrices for one (scenario, hardware, noise) setup.

    Attributes
    ----------
    pilots : ndarray (L, K, B)
        Effective pilots ``sqrt(p_lk) * sequence``.
    xbar, x_mat : ndarray (L, K, B, B)
        Damped pilot Gram matrices without / with the distortion term.
    psi, psi_inv : ndarray (L, B, B)
        Received-pilot covariance per BS and its inverse.
    """

    def __init__(self, scenario: Scenario, profile: HardwareProfile, sigma2: float,
                 B: int | None = None, pilot_book: PilotBook | None = None):
        if pilot_book is None:
            pilot_book = PilotBook.dft(B if B is not None else scenario.K)
        self.scenario = scenario
        self.profile = profile
        self.sigma2 = float(sigma2)
        self.pilot_book = pilot_book
        self.B = pilot_book.B
        self.noise = self.sigma2 * profile.xi
        self.pilots = pilot_book.effective(scenario)
        self.xbar, self.x_mat = pilot_grams(self.pilots, profile.delta, profile.kappa2)
        self.psi = np.einsum("jlk,lkab->jab", scenario.lam, self.x_mat)
        self.psi = self.psi + self.noise * np.eye(self.B)
        self.psi_inv = np.empty_like(self.psi)
        eye = np.eye(self.B)
        for j, psi in enumerate(self.psi):
            # Hermitian PD, so Cholesky both inverts and certifies.
            c = scipy.linalg.cho_factor(psi, lower=True)
            inv = scipy.linalg.cho_solve(c, eye)
            self.psi_inv[j] = 0.5 * (inv + inv.conj().T)
        for a in (self.pilots, self.xbar, self.x_mat, self.psi, self.psi_inv):
            a.setflags(write=False)

    def check(self) -> None:
        """Raise if some Psi_j has an eigenvalue below 0.99 * sigma2 * xi."""
        for j, psi in enumerate(self.psi):
            lo = np.linalg.eigvalsh(psi).min()
            if lo <= 0.99 * self.noise:
                raise np.linalg.LinAlgError(
                    f"Psi_{j} min eigenvalue {lo:.3e} below noise floor {self.noise:.3e}")

    def delay(self, t) -> np.ndarray:
        return delay_weights(t, self.B, self.profile.delta)

    def weighted_pilot(self, j: int, t) -> np.ndarray:
        """``u = Psi_j^{-1} D(t) x_jk`` for every user k, shape t.shape + (K, B)."""
        d = self.delay(t)
        dx = d[..., None, :] * self.pilots[j]
        return np.einsum("ab,...kb->...ka", self.psi_inv[j], dx)

    def combiner(self, j: int, l: int, k: int, t) -> np.ndarray:
        """Row weights ``lam_jlk x_lk^H D(t) Psi_j^{-1}``; shape t.shape + (B,)."""
        d = self.delay(t)
        dx = d * self.pilots[l, k]
        u = np.einsum("ab,...b->...a", self.psi_inv[j], dx)
        return self.scenario.lam[j, l, k] * u.conj()


@dataclass(frozen=True)
class PilotObservation:
    """Stacked pilot-phase received signal ``[y(1); ...; y(B)]`` at one BS."""

    psi_vec: np.ndarray

    @classmethod
    def from_rows(cls, y_pilot) -> "PilotObservation":
        """Build from an array of shape (B, N)."""
        return cls(np.asarray(y_pilot, dtype=complex).reshape(-1))

    def rows(self, B: int) -> np.ndarray:
        if self.psi_vec.size % B:
            raise ValueError(f"observation length {self.psi_vec.size} is not a multiple of B={B}")
        return self.psi_vec.reshape(B, -1)


def lmmse_estimate(obs: PilotObservation, cache: EstimatorCache, j: int, t: int,
                   target: tuple[int, int]) -> np.ndarray:
    """LMMSE estimate of the drifted channel from user ``target`` to BS j at time t.

    The same estimator holds for common and separate oscillators.
    """
    l, k = target
    a = cache.combiner(j, l, k, t)
    return a @ obs.rows(cache.B)
