"""Experiment configuration: a flat ``key = value`` file plus CLI overrides."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace, asdict
from pathlib import Path

from ..errors import InputError
from ..metrics import HardwareProfile
from ..optim import ScaOptions
from ..scene import ScenarioParams, dbm_to_watt

METHODS = ("mmse", "sca", "power_alloc", "sca_unaware", "power_alloc_unaware")
AXES = ("none", "m", "kappa_t", "kappa_r")
HARDWARE = ("impaired", "ideal")
COMBINERS = ("clutter_aware", "matched_filter")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 2025
    trials: int = 200
    sweep_axis: str = "none"
    sweep_values: tuple[float, ...] = ()
    num_antennas: int = 100
    methods: tuple[str, ...] = ("sca", "power_alloc", "sca_unaware", "power_alloc_unaware")
    hardware: tuple[str, ...] = ("impaired",)
    combiner: str = "clutter_aware"
    gamma0: float = 0.5
    kappa_t: float = 0.01
    kappa_r: float = 0.01
    total_power_dbm: float = 70.0
    ue_noise_dbm: float = -90.0
    radar_noise_dbm: float = -90.0
    carrier_frequency: float = 28e9
    bandwidth: float = 50e6
    num_users: int = 8
    num_clutter: int = 5
    cell_radius: float = 1000.0
    ue_min_distance: float = 10.0
    target_range_min: float = 400.0
    target_range_max: float = 500.0
    clutter_range_min: float = 20.0
    clutter_range_max: float = 100.0
    clutter_rcs_db_min: float = 10.0
    clutter_rcs_db_max: float = 20.0
    target_rcs: float = 1.0
    angular_spread_deg: float = 5.0
    min_separation_deg: float = 5.0
    sca_max_iter: int = 50
    sca_rel_tol: float = 1e-6
    sca_warm_start: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    workers: int = 1

    def __post_init__(self):
        if self.sweep_axis not in AXES:
            raise InputError(f"sweep_axis must be one of {AXES}")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise InputError(f"unknown methods {sorted(bad)}; choose from {METHODS}")
        bad = set(self.hardware) - set(HARDWARE)
        if bad:
            raise InputError(f"unknown hardware modes {sorted(bad)}")
        if self.combiner not in COMBINERS:
            raise InputError(f"combiner must be one of {COMBINERS}")
        if list(self.sweep_values) != sorted(self.sweep_values):
            raise InputError("sweep values must be sorted ascending")
        if self.trials < 1:
            raise InputError("trials must be >= 1")

    # -- derived objects --------------------------------------------------
    def scenario(self) -> ScenarioParams:
        return ScenarioParams(
            carrier_frequency=self.carrier_frequency,
            num_users=self.num_users,
            num_clutter=self.num_clutter,
            cell_radius=self.cell_radius,
            ue_min_distance=self.ue_min_distance,
            target_range=(self.target_range_min, self.target_range_max),
            clutter_range=(self.clutter_range_min, self.clutter_range_max),
            clutter_rcs_db=(self.clutter_rcs_db_min, self.clutter_rcs_db_max),
            target_rcs=self.target_rcs,
            min_separation_deg=self.min_separation_deg,
            angular_spread_deg=self.angular_spread_deg,
            ue_noise_dbm=self.ue_noise_dbm,
            bandwidth=self.bandwidth,
        )

    def hardware_profile(self) -> HardwareProfile:
        return HardwareProfile(
            kappa_t=self.kappa_t,
            kappa_r=self.kappa_r,
            total_power=dbm_to_watt(self.total_power_dbm),
            ue_noise_var=dbm_to_watt(self.ue_noise_dbm),
            radar_noise_var=dbm_to_watt(self.radar_noise_dbm),
        )

    def sca_options(self) -> ScaOptions:
        return ScaOptions(max_iter=self.sca_max_iter, rel_tol=self.sca_rel_tol,
                          warm_start=tuple(self.sca_warm_start))

    def at(self, value: float | None) -> "ExperimentConfig":
        """Config with the swept parameter set to ``value``."""
        if value is None or self.sweep_axis == "none":
            return self
        if self.sweep_axis == "m":
            return replace(self, num_antennas=int(round(value)))
        return replace(self, **{self.sweep_axis: float(value)})

    def points(self) -> list[float | None]:
        if self.sweep_axis == "none":
            return [None]
        if not self.sweep_values:
            raise InputError(f"sweep axis {self.sweep_axis} needs sweep_values")
        return list(self.sweep_values)

    def header_lines(self) -> list[str]:
        out = []
        for k, v in asdict(self).items():
            out.append(f"{k} = {_format(v)}")
        return out


def _format(v) -> str:
    if isinstance(v, (tuple, list)):
        return ",".join(_format(x) for x in v)
    return str(v)


_FIELD_TYPES = {f.name: f for f in fields(ExperimentConfig)}


def _coerce(name: str, raw) -> object:
    default = getattr(ExperimentConfig, name, None)
    if name not in _FIELD_TYPES:
        raise InputError(f"unknown config key {name!r}")
    if isinstance(raw, str):
        raw = raw.strip()
    if isinstance(default, tuple) or name in ("sweep_values", "sca_warm_start", "methods", "hardware"):
        items = raw if isinstance(raw, (list, tuple)) else [x.strip() for x in str(raw).split(",") if x.strip()]
        if name in ("methods", "hardware"):
            return tuple(str(x) for x in items)
        return tuple(float(x) for x in items)
    if isinstance(default, bool):
        return str(raw).lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(float(raw))
    if isinstance(default, float):
        return float(raw)
    return str(raw)


def load_config(path: str | Path | None = None, base: dict | None = None, **overrides) -> ExperimentConfig:
    """Layer ``base`` (a preset), then a flat key/value file (``#`` comments allowed), then ``overrides``."""
    values: dict[str, object] = {k: _coerce(k, v) for k, v in (base or {}).items()}
    if path is not None:
        text = Path(path).read_text()
        parser = configparser.ConfigParser(comment_prefixes=("#", ";"), inline_comment_prefixes=("#",))
        parser.optionxform = str
        parser.read_string("[isacsim]\n" + text)
        for k, v in parser["isacsim"].items():
            values[k.replace("-", "_")] = _coerce(k.replace("-", "_"), v)
    for k, v in overrides.items():
        if v is not None:
            values[k] = _coerce(k, v)
    return ExperimentConfig(**values)


CDF_PRESET = dict(sweep_axis="none", num_antennas=100)
SWEEP_M = dict(sweep_axis="m", sweep_values=(16, 32, 64, 128), methods=("mmse", "sca", "power_alloc"),
            hardware=("impaired", "ideal"))
SWEEP_KAPPA_T = dict(sweep_axis="kappa_t", sweep_values=(0.0, 0.005, 0.01, 0.02, 0.05),
                     num_antennas=64, methods=("mmse", "sca", "power_alloc"), hardware=("impaired", "ideal"))
SWEEP_KAPPA_R = dict(sweep_axis="kappa_r", sweep_values=(0.0, 0.005, 0.01, 0.02, 0.05),
                     num_antennas=64, methods=("mmse", "sca", "power_alloc"), hardware=("impaired", "ideal"))
