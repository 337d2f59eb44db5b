"""Command-line experiments: rate sweeps, oracle checks, circuit power and scaling tables.

Usage::

    python -m hwmimo sweep   [--config FILE] [--seed S] [--out DIR] [--mode clo|slo|both]
                             [--hardware ideal|fixed|scaled|all] [--mc R] [--workers W]
    python -m hwmimo verify  [--mc R] [--seed S] [--out DIR]
    python -m hwmimo power   [--config FILE] [--mode ...] [--out DIR]
    python -m hwmimo scaling [--config FILE] [--out DIR]

Config files hold ``key = value`` lines in optional sections (section names
are ignored); keys are case-insensitive. A ``manifest.json`` written by a
previous run is accepted in place of a config file and replays that run.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .circuits import CircuitSpecs, power_report, write_power_csv
from .closed_form import apply_scaling, mrc_moments, rate_report, scaling_law_satisfied
from .estimator import EstimatorCache
from .instances import SMALL_IMPAIRED, small_instance
from .model import HardwareProfile, ScalingExponents, SystemConfig, dbm_per_hz_to_linear
from .montecarlo import empirical_rate, estimate_moments
from .scenario import Geometry, ShadowFadingModel, build_scenario

log = logging.getLogger("hwmimo")

HARDWARE_MODES = ("ideal", "fixed", "scaled")
SWEEP_HEADER = ["N", "mode", "hardware", "sum_rate_bits_per_use", "seed"]


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    """A sweep point failed; ``rows`` holds the points finished before it."""

    def __init__(self, message: str, rows: list[dict]):
        super().__init__(message)
        self.rows = rows


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved experiment settings; defaults reproduce the 16-cell setup."""

    grid: int = 4
    cell_side: float = 250.0
    min_distance: float = 35.0
    K: int = 8
    B: int = 8
    T: int = 500
    shadow_std: float = 0.5
    power_dbm: float = -47.0
    noise_dbm: float = -174.0
    seed: int = 0
    kappa0: float = 2.0**-8
    xi0: float = 10.0**0.2
    delta0: float = 1.6e-4
    tau1: float = 0.5
    tau2: float = 0.5
    tau3: float = 0.0
    antennas: tuple = (10, 20, 50, 100, 200, 400)
    oscillator: tuple = ("clo", "slo")
    hardware: tuple = HARDWARE_MODES
    mc_blocks: int = 0
    mc_max_antennas: int = 16
    workers: int = 1
    out: str = "results"

    def __post_init__(self):
        errors = []
        if self.grid < 1:
            errors.append("grid: must be >= 1")
        if not 1 <= self.B < self.T:
            errors.append("B: 1 <= B < T violated")
        if not 1 <= self.K <= self.B:
            errors.append("K: 1 <= K <= B violated")
        if not 0 <= self.min_distance < self.cell_side / 2:
            errors.append("min_distance: must be below cell_side / 2")
        if self.shadow_std < 0:
            errors.append("shadow_std: must be >= 0")
        for name in ("kappa0", "delta0", "tau1", "tau2", "tau3"):
            if getattr(self, name) < 0:
                errors.append(f"{name}: must be >= 0")
        if self.xi0 < 1:
            errors.append("xi0: must be >= 1")
        if not self.antennas or min(self.antennas) < 1:
            errors.append("antennas: need a non-empty list of positive counts")
        for o in self.oscillator:
            if o not in ("clo", "slo"):
                errors.append(f"oscillator: unknown mode {o!r}")
        for h in self.hardware:
            if h not in HARDWARE_MODES:
                errors.append(f"hardware: unknown mode {h!r}")
        if self.mc_blocks < 0 or self.mc_blocks == 1:
            errors.append("mc_blocks: must be 0 (off) or >= 2")
        if errors:
            raise ConfigError("; ".join(errors))

    @property
    def L(self) -> int:
        return self.grid * self.grid

    def system(self, N: int) -> SystemConfig:
        return SystemConfig(self.L, self.K, int(N), self.T, self.B,
                            dbm_per_hz_to_linear(self.noise_dbm))

    def exponents(self) -> ScalingExponents:
        return ScalingExponents(self.tau1, self.tau2, self.tau3, self.kappa0**2, self.xi0,
                                self.delta0)

    def profile(self, hardware: str, oscillator: str, N: int) -> HardwareProfile:
        if hardware == "ideal":
            return HardwareProfile.ideal(oscillator)
        if hardware == "fixed":
            return HardwareProfile(self.delta0, self.kappa0**2, self.xi0, oscillator)
        return apply_scaling(self.exponents(), N, oscillator)

    def scenario(self):
        geo = Geometry(self.grid, self.cell_side, self.min_distance, self.K)
        return build_scenario(geo, ShadowFadingModel(self.shadow_std), self.power_dbm, self.seed)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


_FIELDS = {f.name.lower(): f for f in dataclasses.fields(ExperimentConfig)}
_ALIASES = {"mode": "oscillator", "mc": "mc_blocks", "sectors": "k"}


def _convert(name: str, raw, default):
    if isinstance(default, tuple):
        if isinstance(raw, str):
            items = [s.strip() for s in raw.replace(";", ",").split(",") if s.strip()]
        else:
            items = list(raw)
        if name == "oscillator" and items == ["both"]:
            return ("clo", "slo")
        if name == "hardware" and items == ["all"]:
            return HARDWARE_MODES
        if name == "antennas":
            return tuple(int(float(x)) for x in items)
        return tuple(str(x).lower() for x in items)
    if isinstance(default, bool):
        return str(raw).lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        value = float(raw)
        if value != int(value):
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    if isinstance(default, float):
        return float(raw)
    return str(raw)


def config_from_mapping(values: dict) -> ExperimentConfig:
    """Build a config from raw key/value pairs; unknown keys are warned about."""
    kwargs = {}
    for key, raw in values.items():
        name = _ALIASES.get(key.lower(), key.lower())
        f = _FIELDS.get(name)
        if f is None:
            log.warning("ignoring unknown config key %r", key)
            continue
        try:
            kwargs[f.name] = _convert(f.name, raw, f.default)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{f.name}: {exc}") from None
    return ExperimentConfig(**kwargs)


def load_config(path=None) -> ExperimentConfig:
    """Read an INI-style config or a JSON run manifest; missing keys take defaults."""
    if path is None:
        return ExperimentConfig()
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return config_from_mapping(json.loads(text)["config"])
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}".replace("\n", " ")) from None
    values = {}
    for section in parser.sections():
        values.update(parser[section])
    return config_from_mapping(values)


def _sweep_point(cfg: ExperimentConfig, N: int, osc: str, hw: str) -> dict:
    scenario = cfg.scenario()
    system = cfg.system(N)
    profile = cfg.profile(hw, osc, N)
    row = {"N": N, "mode": osc, "hardware": hw,
           "sum_rate_bits_per_use": rate_report(scenario, system, profile).sum_rate,
           "seed": cfg.seed}
    if cfg.mc_blocks:
        row["mc_sum_rate_bits_per_use"] = (
            empirical_rate(scenario, system, profile, cfg.mc_blocks, cfg.seed).sum_rate
            if N <= cfg.mc_max_antennas else float("nan"))
    return row


def _sort_rows(rows: list[dict]) -> list[dict]:
    order = {h: i for i, h in enumerate(HARDWARE_MODES)}
    return sorted(rows, key=lambda r: (r["N"], r["mode"], order[r["hardware"]]))


def run_sweep(cfg: ExperimentConfig) -> list[dict]:
    """Closed-form network sum rate for every (N, oscillator, hardware) combination.

    Raises
    ------
    SweepError
        If any point fails; carries the rows completed so far.
    """
    jobs = [(N, osc, hw) for N in sorted(set(cfg.antennas)) for osc in cfg.oscillator
            for hw in cfg.hardware]
    rows = []
    try:
        if cfg.workers > 1:
            with ProcessPoolExecutor(cfg.workers) as pool:
                for row in pool.map(_sweep_point, *zip(*[(cfg,) + j for j in jobs])):
                    rows.append(row)
        else:
            for job in jobs:
                rows.append(_sweep_point(cfg, *job))
    except Exception as exc:
        raise SweepError(f"{type(exc).__name__}: {exc}", _sort_rows(rows)) from exc
    return _sort_rows(rows)


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return v


def write_csv(rows: list[dict], path, header=None) -> Path:
    path = Path(path)
    header = header or list(rows[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r[h]) for h in header])
    return path


def emit_results(rows: list[dict], cfg: ExperimentConfig, out_dir=None, name="sweep",
                 argv=None) -> tuple[Path, Path]:
    """Write ``<name>.csv`` and ``manifest.json`` (everything needed to replay)."""
    out = Path(out_dir or cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    header = list(SWEEP_HEADER) if name == "sweep" else None
    if name == "sweep" and rows and "mc_sum_rate_bits_per_use" in rows[0]:
        header.append("mc_sum_rate_bits_per_use")
    csv_path = out / f"{name}.csv"
    if name == "power":
        write_power_csv(rows, csv_path)
    else:
        write_csv(rows, csv_path, header)
    manifest = {"command": name, "version": __version__, "config": cfg.to_dict(),
                "seeds": {"scenario": cfg.seed, "monte_carlo": cfg.seed},
                "argv": list(argv or [])}
    man_path = out / "manifest.json"
    man_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, man_path


def run_verify(R: int, seed: int) -> list[dict]:
    """Closed-form vs Monte Carlo moments on the small two-cell instance."""
    scenario, system = small_instance()
    rows = []
    for osc in ("clo", "slo"):
        profile = SMALL_IMPAIRED.with_oscillator(osc)
        cache = EstimatorCache(scenario, profile, system.sigma2, system.B)
        ts = [system.B + 1, system.T]
        em = estimate_moments(scenario, system, profile, ts, R, seed)
        for t in ts:
            cf = mrc_moments(cache, 0, 0, t, system.N)
            mc = em.user(0, 0, t)
            pairs = [("filter_norm", "", "", cf.filter_norm, *mc["filter_norm"]),
                     ("signal", "", "", cf.signal, *mc["signal"]),
                     ("distortion", "", "", cf.distortion, *mc["distortion"])]
            for (l, m), v in np.ndenumerate(cf.interference):
                pairs.append(("interference", l, m, v, mc["interference"][0][l, m],
                              mc["interference"][1][l, m]))
            for q, l, m, c, mean, se in pairs:
                rows.append({"mode": osc, "t": t, "quantity": q, "l": l, "m": m,
                             "closed_form": float(c), "monte_carlo": float(mean),
                             "stderr": float(se), "z": float((mean - c) / se) if se > 0 else 0.0})
    return rows


def run_scaling(cfg: ExperimentConfig) -> list[dict]:
    """Feasibility of the scaling law over a grid of exponents at t = T."""
    rows = []
    taus = (0.0, 0.25, 0.5, 0.75, 1.0)
    for osc in cfg.oscillator:
        for t1 in taus:
            for t2 in taus:
                for t3 in (0.0, 1.0, 3.0, 6.0, 12.0):
                    e = ScalingExponents(t1, t2, t3, cfg.kappa0**2, cfg.xi0, cfg.delta0)
                    rows.append({"tau1": t1, "tau2": t2, "tau3": t3, "mode": osc, "t": cfg.T,
                                 "satisfied": int(scaling_law_satisfied(e, cfg.T, cfg.B, osc))})
    return rows


def run_power(cfg: ExperimentConfig) -> list[dict]:
    specs = CircuitSpecs(adc_bits=-math.log2(cfg.kappa0) if cfg.kappa0 > 0 else 16.0,
                         xi0=cfg.xi0)
    rows = []
    for osc in cfg.oscillator:
        e = cfg.exponents()
        if osc == "clo" and e.tau3 > 0:
            e = dataclasses.replace(e, tau3=0.0)
            log.warning("tau3 forced to 0 for the common-oscillator power report")
        rows.extend(power_report(sorted(set(cfg.antennas)), specs, e, osc))
    return rows


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hwmimo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("sweep", "verify", "power", "scaling"):
        s = sub.add_parser(name)
        s.add_argument("--config", help="INI-style config or manifest.json")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", help="output directory")
        s.add_argument("--mode", choices=("clo", "slo", "both"))
        s.add_argument("--hardware", choices=HARDWARE_MODES + ("all",))
        s.add_argument("--mc", type=int, metavar="R", help="Monte Carlo blocks (oracle column)")
        s.add_argument("--workers", type=int)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        overrides = {"seed": args.seed, "out": args.out, "mode": args.mode,
                     "hardware": args.hardware, "mc_blocks": args.mc, "workers": args.workers}
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if overrides:
            merged = cfg.to_dict()
            if "mode" in overrides:
                merged["oscillator"] = overrides.pop("mode")
            merged.update(overrides)
            cfg = config_from_mapping(merged)
        if args.command == "sweep":
            try:
                rows = run_sweep(cfg)
            except SweepError as exc:
                if exc.rows:
                    emit_results(exc.rows, cfg, name=args.command, argv=argv)
                raise
        elif args.command == "verify":
            rows = run_verify(cfg.mc_blocks or 20_000, cfg.seed)
        elif args.command == "power":
            rows = run_power(cfg)
        else:
            rows = run_scaling(cfg)
        csv_path, _ = emit_results(rows, cfg, name=args.command, argv=argv)
    except Exception as exc:  # noqa: BLE001 - one machine-readable line per failure
        print(f"error: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}",
              file=sys.stderr)
        return 2
    print(csv_path)
    return 0
