"""Monte Carlo trials, SCNR CDFs, and spectral-efficiency sweeps."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..array import UlaConfig
from ..metrics import HardwareProfile, scnr, scnr_closed_form, sinr_all
from ..optim import CONVERGED, INFEASIBLE, power_allocation, sca_design
from ..precoding import mmse_precoder
from ..scene import Scene, UserSet, sample_scene, sample_users, trial_streams
from .config import ExperimentConfig

@dataclass
class TrialRow:
    trial: int
    seed: int
    method: str
    hardware: str
    sweep_axis: str
    sweep_value: float
    status: str
    iterations: int
    scnr: float           # closed form, used by the designs
    scnr_combiner: float  # general form with the configured receive combiner
    sum_se: float
    ue_sinr: str
    objective: float
    power_slack: float
    wall_time: float

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def draw_trial(config: ExperimentConfig, trial: int) -> tuple[Scene, UserSet]:
    """Scene and users for one trial; identical for every method (common random numbers)."""
    scene_rng, user_rng = trial_streams(config.seed, trial)
    params = config.scenario()
    return sample_scene(scene_rng, params), sample_users(user_rng, params, UlaConfig(config.num_antennas))


def _design(method: str, users: UserSet, scene: Scene, hw: HardwareProfile, config: ExperimentConfig,
            baseline):
    designer_hw = hw.ideal() if method.endswith("_unaware") else hw
    if method == "mmse":
        return baseline.design(), None
    if method.startswith("sca"):
        return sca_design(users, scene, designer_hw, config.gamma0, config.sca_options(),
                          baseline=baseline, eval_hw=hw)
    return power_allocation(users, scene, designer_hw, config.gamma0, baseline=baseline, eval_hw=hw)


def run_trial(config: ExperimentConfig, trial: int, sweep_value: float | None = None) -> list[TrialRow]:
    cfg = config.at(sweep_value)
    scene, users = draw_trial(cfg, trial)
    baseline = mmse_precoder(users)
    rows = []
    for hardware in cfg.hardware:
        hw = cfg.hardware_profile()
        if hardware == "ideal":
            hw = hw.ideal()
        for method in cfg.methods:
            if hardware == "ideal" and method.endswith("_unaware"):
                continue
            t0 = time.perf_counter()
            design, report = _design(method, users, scene, hw, cfg, baseline)
            elapsed = time.perf_counter() - t0
            sinr = sinr_all(users, design, hw)
            rows.append(TrialRow(
                trial=trial,
                seed=cfg.seed,
                method=method,
                hardware=hardware,
                sweep_axis=cfg.sweep_axis,
                sweep_value=float("nan") if sweep_value is None else float(sweep_value),
                status=CONVERGED if report is None else report.status,
                iterations=0 if report is None else report.iterations,
                scnr=scnr_closed_form(scene, design, hw),
                scnr_combiner=scnr(scene, design, hw, cfg.combiner),
                sum_se=float(np.sum(np.log2(1.0 + sinr))),
                ue_sinr=";".join(f"{v:.9g}" for v in sinr),
                objective=0.0 if report is None else report.objective,
                power_slack=design.power_slack(),
                wall_time=elapsed,
            ))
    return rows


def _trial_job(args):
    config, trial, value = args
    return run_trial(config, trial, value)


def run_trials(config: ExperimentConfig) -> list[TrialRow]:
    jobs = [(config, t, v) for v in config.points() for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_trial_job, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))))
    else:
        chunks = [_trial_job(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    order = {m: i for i, m in enumerate(config.methods)}
    hw_order = {h: i for i, h in enumerate(config.hardware)}
    rows.sort(key=lambda r: (np.nan_to_num(r.sweep_value, nan=-np.inf), r.trial,
                             hw_order[r.hardware], order[r.method]))
    return rows


@dataclass
class CdfPoint:
    method: str
    hardware: str
    rank: int
    trial: int
    scnr: float
    cdf: float


def scnr_cdf(rows: list[TrialRow]) -> tuple[list[CdfPoint], dict]:
    """Sorted feasible SCNR samples per (method, hardware), plus infeasible counts."""
    groups: dict[tuple[str, str], list[TrialRow]] = {}
    for r in rows:
        groups.setdefault((r.method, r.hardware), []).append(r)
    points, counts = [], {}
    for (method, hardware), rs in groups.items():
        feas = sorted((r for r in rs if r.feasible), key=lambda r: (r.scnr, r.trial))
        counts[(method, hardware)] = {"trials": len(rs), "infeasible": len(rs) - len(feas)}
        n = len(feas)
        for i, r in enumerate(feas):
            points.append(CdfPoint(method, hardware, i + 1, r.trial, r.scnr, (i + 1) / n))
    return points, counts


def run_scnr_cdf(config: ExperimentConfig) -> tuple[list[TrialRow], list[CdfPoint], dict]:
    rows = run_trials(replace(config, sweep_axis="none", sweep_values=()))
    points, counts = scnr_cdf(rows)
    return rows, points, counts


@dataclass
class SweepPoint:
    sweep_axis: str
    sweep_value: float
    method: str
    hardware: str
    trials: int
    feasible: int
    infeasible_rate: float
    mean_se: float
    stderr_se: float
    mean_scnr: float


def summarize_sweep(rows: list[TrialRow]) -> list[SweepPoint]:
    groups: dict[tuple, list[TrialRow]] = {}
    for r in rows:
        groups.setdefault((r.sweep_value, r.hardware, r.method), []).append(r)
    out = []
    for (value, hardware, method), rs in groups.items():
        feas = [r for r in rs if r.feasible]
        se = np.array([r.sum_se for r in feas])
        sc = np.array([r.scnr for r in feas])
        n = len(feas)
        out.append(SweepPoint(
            sweep_axis=rs[0].sweep_axis, sweep_value=value, method=method, hardware=hardware,
            trials=len(rs), feasible=n, infeasible_rate=1 - n / len(rs),
            mean_se=float(se.mean()) if n else float("nan"),
            stderr_se=float(se.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan"),
            mean_scnr=float(sc.mean()) if n else float("nan"),
        ))
    return out


def run_se_sweep(config: ExperimentConfig, axis: str | None = None) -> tuple[list[TrialRow], list[SweepPoint]]:
    if axis is not None:
        config = replace(config, sweep_axis=axis)
    rows = run_trials(config)
    return rows, summarize_sweep(rows)
