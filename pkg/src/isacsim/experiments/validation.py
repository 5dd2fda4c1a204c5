"""Cross-module identity and Monte Carlo oracle checks with measured error vs tolerance."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .. import metrics as mt
from ..array import UlaConfig, beampattern, dft_grid, steering
from ..montecarlo import empirical_covariance, simulate_echo, simulate_transmit, simulate_ue_terms
from ..optim import (P2Solver, build_constraint_coeffs, build_power_alloc_coeffs, p3_kkt_residual,
                     solve_power_qp)
from ..precoding import mmse_precoder, sensing_beam
from ..scene import ScenarioParams, Scene, UserSet, sample_scene, sample_users, trial_streams
from .config import ExperimentConfig


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    seconds: float = 0.0
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.measured):
            return False
        return self.measured <= self.tolerance if self.comparison == "<=" else self.measured >= self.tolerance

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.name}: measured {self.measured:.3e} {self.comparison} "
                f"tolerance {self.tolerance:.3e} ({self.seconds:.2f} s)")


def random_design(rng: np.random.Generator, users: UserSet, scene: Scene) -> mt.TransmitDesign:
    """MMSE user beams, the clutter-nulling sensing beam, and a random power split."""
    base = mmse_precoder(users)
    w0 = sensing_beam(UlaConfig(users.M), scene)
    rho = rng.dirichlet(np.ones(users.K + 1))
    return mt.TransmitDesign.unit_norm(base.W, w0, rho[:-1], rho[-1])


def random_instance(seed: int, trial: int, M: int, Q: int, K: int = 4, hw: mt.HardwareProfile | None = None,
                    min_separation_deg: float = 5.0):
    params = ScenarioParams(num_clutter=Q, num_users=K, min_separation_deg=min_separation_deg)
    rs, ru = trial_streams(seed, trial)
    scene = sample_scene(rs, params)
    users = sample_users(ru, params, M)
    hw = hw or ExperimentConfig().hardware_profile()
    return scene, users, random_design(ru, users, scene), hw


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def identity_errors(n: int = 100, seed: int = 11) -> tuple[float, float]:
    """Max relative error of (general form at the combiner, inversion lemma) vs the exact form."""
    rng = np.random.default_rng(seed)
    e_gen = e_lem = 0.0
    for i in range(n):
        M = int(rng.integers(8, 129))
        Q = int(rng.integers(0, 6))
        scene, users, design, hw = random_instance(seed, i, M, Q)
        exact = mt.scnr_exact_clutter_aware(scene, design, hw)
        omega = mt.clutter_aware_combiner(scene, design, hw)
        e_gen = max(e_gen, _rel(mt.scnr_general(scene, design, hw, omega).value, exact))
        e_lem = max(e_lem, _rel(mt.scnr_inversion_lemma(scene, design, hw), exact))
    return e_gen, e_lem


def matched_vs_aware_violation(n: int = 100, seed: int = 12) -> float:
    """Largest relative amount by which the matched filter beats the clutter-aware combiner."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n):
        scene, users, design, hw = random_instance(seed, i, int(rng.integers(8, 129)), int(rng.integers(0, 6)))
        mf = mt.scnr(scene, design, hw, "matched_filter")
        ca = mt.scnr(scene, design, hw, "clutter_aware")
        worst = max(worst, (mf - ca) / ca)
    return worst


def closed_form_gap_db(n: int = 100, seed: int = 13, M: int = 128, sep_deg: float = 10.0) -> np.ndarray:
    """|10 log10(closed form / exact)| per scene."""
    gaps = []
    for i in range(n):
        scene, users, design, hw = random_instance(seed, i, M, 5, K=8, min_separation_deg=sep_deg)
        gaps.append(abs(10 * np.log10(mt.scnr_closed_form(scene, design, hw)
                                      / mt.scnr_exact_clutter_aware(scene, design, hw))))
    return np.array(gaps)


def monte_carlo_errors(n_samples: int = 100_000, seed: int = 14, M: int = 8) -> dict[str, float]:
    """Relative errors of symbol-level estimates vs the closed forms."""
    scene, users, design, _ = random_instance(seed, 0, M, 3, K=3)
    hw = mt.HardwareProfile(kappa_t=0.05, kappa_r=0.05, total_power=10.0,
                            ue_noise_var=1e-3 * np.mean(users.gains) * 10.0, radar_noise_var=1e-12)
    rng = np.random.default_rng(seed)
    x, _, _ = simulate_transmit(rng, design, hw, n_samples)
    C = mt.transmit_covariance(design, hw)
    err_cov = np.linalg.norm(empirical_covariance(x) - C) / np.linalg.norm(C)

    err_sinr = 0.0
    for k in range(users.K):
        emp = simulate_ue_terms(rng, k, users, design, hw, n_samples)
        ref = mt.comm_sinr(k, users, design, hw)
        for name in ("signal", "interference", "sensing", "distortion", "noise"):
            r = getattr(ref, name)
            if r > 1e-12 * ref.signal:
                err_sinr = max(err_sinr, _rel(getattr(emp, name), r))
        err_sinr = max(err_sinr, _rel(emp.value, ref.value))

    z = simulate_echo(rng, scene, design, hw, n_samples)
    diag = np.mean(np.abs(z) ** 2, axis=1)
    level = mt.receiver_distortion_level(scene, design, hw) / hw.kappa_r
    err_rr = float(np.max(np.abs(diag - level)) / level)
    return {"transmit_covariance": float(err_cov), "comm_sinr_terms": float(err_sinr),
            "receiver_distortion_diag": err_rr}


def constraint_equivalence_mismatches(n: int = 100, seed: int = 15, tol: float = 1e-9) -> int:
    """Instances where the quadratic constraint and the closed-form SCNR test disagree."""
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(n):
        M = int(rng.integers(8, 65))
        scene, users, _, hw = random_instance(seed, i, M, int(rng.integers(0, 6)), K=3)
        W = rng.standard_normal((M, 3)) + 1j * rng.standard_normal((M, 3))
        W *= np.sqrt(rng.uniform(0.2, 1.0)) / np.linalg.norm(W)
        design = mt.TransmitDesign.absorbed(W)
        value = mt.scnr_closed_form(scene, design, hw)
        gamma0 = value * float(rng.choice([0.5, 0.999, 1.001, 2.0]))
        coeffs = build_constraint_coeffs(scene, hw, gamma0, M)
        g = coeffs.value(W) / (coeffs.c0 * M)
        if (g <= tol) != (value >= gamma0 * (1 - tol)):
            bad += 1
    return bad


def p2_kkt_worst(n: int = 20, seed: int = 16) -> float:
    worst = 0.0
    rng = np.random.default_rng(seed)
    for i in range(n):
        M = int(rng.integers(4, 33))
        scene, users, _, hw = random_instance(seed, i, M, int(rng.integers(0, 6)), K=3)
        Wm = mmse_precoder(users).scaled
        coeffs = build_constraint_coeffs(scene, hw, 0.5, M)
        W_ref = Wm + 0.3 * (rng.standard_normal(Wm.shape) + 1j * rng.standard_normal(Wm.shape)) / np.sqrt(M)
        res = P2Solver(coeffs, Wm).solve(W_ref)
        if res.status == "infeasible":
            continue
        worst = max(worst, res.kkt_residual / np.linalg.norm(Wm))
    return worst


def p3_kkt_worst(n: int = 20, seed: int = 17) -> float:
    worst = 0.0
    for i in range(n):
        scene, users, _, hw = random_instance(seed, i, 32, 5, K=4)
        beams = np.column_stack([mmse_precoder(users).W, sensing_beam(32, scene)])
        coeffs = build_power_alloc_coeffs(scene, hw, beams, np.full(4, 0.25))
        rho, _ = solve_power_qp(coeffs, 0.5)
        if rho is None:
            continue
        worst = max(worst, max(p3_kkt_residual(rho, coeffs, 0.5)))
    return worst


def array_errors(seed: int = 18) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    e_norm = e_dft = 0.0
    for _ in range(50):
        M = int(rng.integers(1, 257))
        th = rng.uniform(-np.pi / 2, np.pi / 2)
        e_norm = max(e_norm, abs(np.vdot(steering(M, th), steering(M, th)).real - M) / M)
        F = rng.standard_normal((M, 3)) + 1j * rng.standard_normal((M, 3))
        X = F @ F.conj().T
        tot = sum(M * beampattern(M, X, t) for t in dft_grid(M))
        e_dft = max(e_dft, _rel(tot, M * np.trace(X).real))
    return e_norm, e_dft


def run_validation(config: ExperimentConfig | None = None, quick: bool = False) -> list[Check]:
    n = 25 if quick else 100
    n_mc = 20_000 if quick else 100_000
    checks: list[Check] = []

    def timed(fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        return out, time.perf_counter() - t0

    (e_norm, e_dft), dt = timed(array_errors)
    checks.append(Check("steering vector squared norm equals M", e_norm, 1e-12, dt))
    checks.append(Check("DFT-grid beampattern sum equals M trace(X)", e_dft, 1e-10, dt))

    (e_gen, e_lem), dt = timed(identity_errors, n)
    checks.append(Check("general SCNR at clutter-aware combiner equals exact form", e_gen, 1e-9, dt))
    checks.append(Check("matrix-inversion-lemma SCNR equals exact form", e_lem, 1e-9, dt))

    viol, dt = timed(matched_vs_aware_violation, n)
    checks.append(Check("matched-filter SCNR never exceeds clutter-aware SCNR", viol, 1e-9, dt))

    gaps, dt = timed(closed_form_gap_db, n)
    checks.append(Check("closed-form vs exact SCNR at M=128, 10 deg separation (dB)", float(gaps.max()), 1.0, dt))

    mc, dt = timed(monte_carlo_errors, n_mc)
    tol_cov = 0.02 if not quick else 0.05
    tol_mc = 0.03 if not quick else 0.07
    checks.append(Check("Monte Carlo transmit covariance (rel. Frobenius)", mc["transmit_covariance"], tol_cov, dt))
    checks.append(Check("Monte Carlo UE SINR terms (rel.)", mc["comm_sinr_terms"], tol_mc, dt))
    checks.append(Check("Monte Carlo receiver distortion diagonal (rel.)", mc["receiver_distortion_diag"], tol_mc, dt))

    bad, dt = timed(constraint_equivalence_mismatches, n)
    checks.append(Check("quadratic SCNR constraint agrees with closed form (mismatches)", float(bad), 0.0, dt))

    w2, dt = timed(p2_kkt_worst)
    checks.append(Check("SCA subproblem KKT stationarity (rel.)", w2, 1e-8, dt))
    w3, dt = timed(p3_kkt_worst)
    checks.append(Check("power-allocation QP KKT residual", w3, 1e-7, dt))
    return checks
