"""Power allocation over fixed beams with a dedicated sensing stream.

minimize    sum_k (rho_bar_k - rho_k)^2          (user streams only)
subject to  (gamma0 d - c)^T rho + gamma0 sigma2^2 <= 0
            1^T rho <= 1,  rho >= 0

The sensing power rho_0 does not enter the objective, so it is eliminated:
for fixed user powers the smallest feasible rho_0 is taken, which leaves a
strictly convex projection over the user powers.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import nnls

from ..array import UlaConfig
from ..metrics import HardwareProfile, TransmitDesign, scnr_closed_form
from ..precoding import MmseBaseline, mmse_precoder, sensing_beam
from ..scene import Scene, UserSet
from .active_set import active_set_qp
from .coeffs import PowerAllocCoeffs, build_power_alloc_coeffs
from .report import CONVERGED, INFEASIBLE, SolveReport


def solve_power_qp(coeffs: PowerAllocCoeffs, gamma0: float) -> tuple[np.ndarray | None, dict]:
    """Optimal (rho_1..rho_K, rho_0), or None when no allocation meets the target."""
    a = gamma0 * coeffs.d - coeffs.c
    b = gamma0 * coeffs.sigma2_sq
    s = max(np.abs(a).max(), abs(b), 1e-300)
    a, b = a / s, b / s
    K = a.size - 1
    a_c, a_s = a[:K], a[K]
    rho_bar = coeffs.rho_bar

    # linear constraint over the simplex is tightest at a vertex (or the origin)
    j = int(np.argmin(a))
    if min(a[j], 0.0) > -b:
        return None, {"best_vertex": j}

    x0 = np.zeros(K)
    if b > 0 and j < K:
        x0[j] = 1.0

    rows = [-np.eye(K), np.ones((1, K))]
    rhs = [np.zeros(K), np.ones(1)]
    if a_s < 0:
        tau = -a_s
        rows.append((1.0 + a_c / tau)[None, :])
        rhs.append(np.array([1.0 - b / tau]))
    else:
        rows.append(a_c[None, :])
        rhs.append(np.array([-b]))
    G, h = np.vstack(rows), np.concatenate(rhs)
    qp = active_set_qp(np.eye(K), -rho_bar, G, h, x0)
    x = np.clip(qp.x, 0.0, None)
    rho0 = max(0.0, (b + a_c @ x) / -a_s) if a_s < 0 else 0.0
    rho = np.append(x, rho0)
    return rho, {"qp_iterations": qp.iterations, "normalized_a": a, "normalized_b": b}


def p3_kkt_residual(rho: np.ndarray, coeffs: PowerAllocCoeffs, gamma0: float,
                    active_tol: float = 1e-9) -> tuple[float, float]:
    """Stationarity and complementary-slackness residuals of the full problem.

    Multipliers are fitted by nonnegative least squares over the constraints
    active at ``rho``.
    """
    a = gamma0 * coeffs.d - coeffs.c
    b = gamma0 * coeffs.sigma2_sq
    s = max(np.abs(a).max(), abs(b), 1e-300)
    a, b = a / s, b / s
    K = rho.size - 1
    grad = np.zeros(K + 1)
    grad[:K] = 2.0 * (rho[:K] - coeffs.rho_bar)
    normals, slacks = [a, np.ones(K + 1)], [a @ rho + b, rho.sum() - 1.0]
    for i in range(K + 1):
        e = np.zeros(K + 1)
        e[i] = -1.0
        normals.append(e)
        slacks.append(-rho[i])
    N = np.array(normals)
    slacks = np.array(slacks)
    active = np.abs(slacks) <= active_tol
    mu = np.zeros(len(slacks))
    if active.any():
        mu_act, _ = nnls(N[active].T, -grad)
        mu[active] = mu_act
    stationarity = float(np.linalg.norm(grad + N.T @ mu))
    comp = float(np.max(np.abs(mu * slacks)))
    return stationarity, comp


def default_beams(users: UserSet, scene: Scene, baseline: MmseBaseline | None = None) -> np.ndarray:
    baseline = mmse_precoder(users) if baseline is None else baseline
    w0 = sensing_beam(UlaConfig(users.M), scene)
    return np.column_stack([baseline.W, w0])


def power_allocation(users: UserSet, scene: Scene, hw: HardwareProfile, gamma0: float,
                     beams: np.ndarray | None = None, baseline: MmseBaseline | None = None,
                     eval_hw: HardwareProfile | None = None) -> tuple[TransmitDesign, SolveReport]:
    eval_hw = hw if eval_hw is None else eval_hw
    beams = default_beams(users, scene, baseline) if beams is None else np.asarray(beams, dtype=complex)
    K = beams.shape[1] - 1
    rho_bar = np.full(K, 1.0 / K)
    coeffs = build_power_alloc_coeffs(scene, hw, beams, rho_bar)
    rho, info = solve_power_qp(coeffs, gamma0)
    status = CONVERGED
    if rho is None:
        rho, status = np.append(rho_bar, 0.0), INFEASIBLE
    design = TransmitDesign.unit_norm(beams[:, :K], beams[:, K], rho[:K], rho[K])
    achieved = scnr_closed_form(scene, design, eval_hw)
    objective = float(np.sum((rho[:K] - rho_bar) ** 2))
    details = {"rho": rho.tolist(), **{k: v for k, v in info.items() if k == "qp_iterations"}}
    if status == CONVERGED:
        details["kkt_stationarity"], details["kkt_complementarity"] = p3_kkt_residual(rho, coeffs, gamma0)
    report = SolveReport(status=status, iterations=info.get("qp_iterations", 0),
                         objective_trace=[objective], achieved_scnr=achieved,
                         constraint_slack=achieved - gamma0, power_slack=design.power_slack(),
                         details=details)
    return design, report
