"""Wrap-around square-cell layout, user drops and large-scale fading."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .model import Scenario, dbm_per_hz_to_linear

PATHLOSS_OFFSET = 1.53
PATHLOSS_EXPONENT = 3.76
MAX_DROP_ATTEMPTS = 10_000


class DropError(RuntimeError):
    """Rejection sampling could not place a user (degenerate geometry)."""


@dataclass(frozen=True)
class Geometry:
    """G x G grid of square cells with the BS at each cell center.

    Each cell is split into ``sectors_per_cell`` equal angular wedges around
    its BS and holds one user per wedge.
    """

    grid: int = 4
    cell_side: float = 250.0
    min_distance: float = 35.0
    sectors_per_cell: int = 8

    def __post_init__(self):
        if self.grid < 1 or self.sectors_per_cell < 1:
            raise ValueError("grid and sectors_per_cell must be >= 1")
        if not 0 <= self.min_distance < self.cell_side / 2:
            raise ValueError("min_distance must be below cell_side / 2")

    @property
    def n_cells(self) -> int:
        return self.grid * self.grid

    @property
    def world_side(self) -> float:
        return self.grid * self.cell_side

    def bs_positions(self) -> np.ndarray:
        """Cell centers, shape (L, 2); cell index is ``row * grid + col``."""
        c = (np.arange(self.grid) + 0.5) * self.cell_side
        xx, yy = np.meshgrid(c, c)
        return np.column_stack([xx.ravel(), yy.ravel()])


@dataclass(frozen=True)
class ShadowFadingModel:
    # Exponent std; N(0, 0.25) is read as variance 0.25.
    std_dev: float = 0.5

    def __post_init__(self):
        if self.std_dev < 0:
            raise ValueError("std_dev must be >= 0")


def wrap_distance(a, b, world_side: float):
    """Euclidean distance on a square torus of side ``world_side``.

    Broadcasts over leading axes; the last axis holds (x, y).
    """
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    d = np.minimum(d, world_side - d)
    return np.hypot(d[..., 0], d[..., 1])


def pathloss(d, s=0.0, min_distance: float = 35.0):
    """Linear attenuation ``10**(s - 1.53) / d**3.76``."""
    d = np.asarray(d, dtype=float)
    if np.any(d < min_distance):
        raise ValueError(f"distance below min_distance={min_distance} m; user drop is broken")
    return 10.0 ** (np.asarray(s, dtype=float) - PATHLOSS_OFFSET) / d**PATHLOSS_EXPONENT


def _sector_of(dx, dy, n_sectors):
    angle = np.mod(np.arctan2(dy, dx), 2 * np.pi)
    return np.minimum((angle / (2 * np.pi / n_sectors)).astype(int), n_sectors - 1)


def drop_ues(geometry: Geometry, seed) -> np.ndarray:
    """Place one uniformly distributed user in every sector of every cell.

    Returns positions of shape (L, K, 2) with K = ``sectors_per_cell``.
    Sampling is uniform over the square cell, restricted to the sector and
    to distances of at least ``min_distance`` from the BS.
    """
    rng = np.random.default_rng(seed)
    L, K = geometry.n_cells, geometry.sectors_per_cell
    half = geometry.cell_side / 2
    bs = geometry.bs_positions()
    out = np.empty((L, K, 2))
    for l in range(L):
        for k in range(K):
            for _ in range(MAX_DROP_ATTEMPTS // 100):
                pts = rng.uniform(-half, half, size=(100, 2))
                ok = (np.hypot(pts[:, 0], pts[:, 1]) >= geometry.min_distance) & (
                    _sector_of(pts[:, 0], pts[:, 1], K) == k
                )
                if ok.any():
                    out[l, k] = bs[l] + pts[np.argmax(ok)]
                    break
            else:
                raise DropError(f"could not place user {k} in cell {l}")
    return out


def build_scenario(
    geometry: Geometry | None = None,
    shadow: ShadowFadingModel | None = None,
    power_dbm_per_hz: float = -47.0,
    seed=0,
) -> Scenario:
    """Draw user positions and shadowing, and return the resulting Scenario.

    The pilot of a user is its sector index, so the same pilot is reused in
    the same sector of every cell.
    """
    geometry = geometry or Geometry()
    shadow = shadow or ShadowFadingModel()
    ss = np.random.SeedSequence(seed)
    drop_seed, shadow_seed = ss.spawn(2)
    ues = drop_ues(geometry, drop_seed)
    bs = geometry.bs_positions()
    L, K = ues.shape[:2]
    d = wrap_distance(bs[:, None, None, :], ues[None], geometry.world_side)
    s = np.random.default_rng(shadow_seed).normal(0.0, shadow.std_dev, size=(L, L, K))
    lam = pathloss(d, s, geometry.min_distance)
    power = np.full((L, K), dbm_per_hz_to_linear(power_dbm_per_hz))
    pilots = np.broadcast_to(np.arange(K), (L, K))
    return Scenario(lam, power, pilots)


def write_scenario_csv(scenario: Scenario, path) -> None:
    """Write one row per link: j, l, k, lambda, pilot_index, p."""
    L, K = scenario.L, scenario.K
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "l", "k", "lambda", "pilot_index", "p"])
        for j in range(L):
            for l in range(L):
                for k in range(K):
                    w.writerow([j, l, k, repr(float(scenario.lam[j, l, k])),
                                int(scenario.pilot_assignment[l, k]),
                                repr(float(scenario.power[l, k]))])


def read_scenario_csv(path) -> Scenario:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no scenario rows")
    L = max(int(r["j"]) for r in rows) + 1
    K = max(int(r["k"]) for r in rows) + 1
    lam = np.full((L, L, K), np.nan)
    power = np.full((L, K), np.nan)
    pilots = np.full((L, K), -1)
    for r in rows:
        j, l, k = int(r["j"]), int(r["l"]), int(r["k"])
        lam[j, l, k] = float(r["lambda"])
        power[l, k] = float(r["p"])
        pilots[l, k] = int(r["pilot_index"])
    if np.isnan(lam).any():
        raise ValueError(f"{path}: missing (j, l, k) rows")
    return Scenario(lam, power, pilots)
