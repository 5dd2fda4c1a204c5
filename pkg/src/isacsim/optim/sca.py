"""Direct precoder design by successive convex approximation.

Keeps the precoder as close as possible to the power-scaled MMSE precoder
while meeting the closed-form SCNR target under a total power budget. No
dedicated sensing stream is used; the user beams are reshaped instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..array import UlaConfig
from ..metrics import HardwareProfile, TransmitDesign, scnr_closed_form
from ..precoding import MmseBaseline, mmse_precoder
from ..scene import Scene, UserSet
from .coeffs import ScnrConstraintCoeffs, build_constraint_coeffs
from .report import CONVERGED, INFEASIBLE, MAX_ITER, SolveReport
from .subproblem import P2Solver


@dataclass(frozen=True)
class ScaOptions:
    max_iter: int = 50
    rel_tol: float = 1e-6
    warm_start: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    feas_tol: float = 1e-12    # on the normalized constraint


def max_margin_beam(coeffs: ScnrConstraintCoeffs) -> tuple[float, np.ndarray]:
    """Unit beam maximizing c0 |a0^T w|^2 - w^H B w, and that maximum.

    With trace(W W^H) <= 1 the constraint can be met iff sigma1^2 is at most
    this value, so it doubles as the feasibility test.
    """
    a0c = coeffs.a0.conj()
    G = coeffs.c0 * np.outer(a0c, a0c.conj()) - coeffs.penalty_matrix()
    vals, vecs = np.linalg.eigh(G)
    return float(vals[-1]), vecs[:, -1]


def _probe_precoder(v: np.ndarray, W_mmse: np.ndarray, a0: np.ndarray) -> np.ndarray:
    """Beam ``v`` replicated over the K columns (total power 1), phase-aligned
    per column with the MMSE column's response toward the target."""
    K = W_mmse.shape[1]
    ref = a0 @ W_mmse
    gv = a0 @ v
    phase = np.exp(1j * (np.angle(ref) - np.angle(gv))) if abs(gv) > 0 else np.ones(K)
    return np.outer(v, phase) / np.sqrt(K)


def sca_design(users: UserSet, scene: Scene, hw: HardwareProfile, gamma0: float,
               opts: ScaOptions = ScaOptions(), baseline: MmseBaseline | None = None,
               eval_hw: HardwareProfile | None = None) -> tuple[TransmitDesign, SolveReport]:
    """Run the SCA loop. ``hw`` is what the designer assumes; the returned
    report evaluates the SCNR under ``eval_hw`` (defaults to ``hw``)."""
    eval_hw = hw if eval_hw is None else eval_hw
    baseline = mmse_precoder(users) if baseline is None else baseline
    W_mmse = baseline.scaled
    M = W_mmse.shape[0]

    def finish(W, status, trace, **details):
        design = TransmitDesign.absorbed(W)
        achieved = scnr_closed_form(scene, design, eval_hw)
        report = SolveReport(status=status, iterations=len(trace), objective_trace=list(trace),
                             achieved_scnr=achieved, constraint_slack=achieved - gamma0,
                             power_slack=design.power_slack(), details=details)
        return design, report

    coeffs = build_constraint_coeffs(scene, hw, gamma0, UlaConfig(M))
    solver = P2Solver(coeffs, W_mmse)
    if solver.normalized(coeffs.value(W_mmse)) <= opts.feas_tol:
        return finish(W_mmse, CONVERGED, [0.0], init_t=0.0)

    best, v = max_margin_beam(coeffs)
    if solver.normalized(coeffs.sigma1_sq - best) > opts.feas_tol:
        return finish(W_mmse, INFEASIBLE, [], max_margin=best)

    res = solver.solve(W_mmse)
    init_t = 0.0
    if res.status == INFEASIBLE:
        probe = _probe_precoder(v, W_mmse, coeffs.a0)
        for t in opts.warm_start:
            res = solver.solve((1 - t) * W_mmse + t * probe)
            init_t = t
            if res.status != INFEASIBLE:
                break
    if res.status == INFEASIBLE:
        return finish(W_mmse, INFEASIBLE, [], max_margin=best)

    trace = [res.objective]
    W = res.W
    status = MAX_ITER
    kkt = [res.kkt_residual]
    for _ in range(opts.max_iter - 1):
        res = solver.solve(W)
        if res.status == INFEASIBLE:
            # cannot happen from a feasible iterate; keep the last good point
            break
        prev = trace[-1]
        trace.append(res.objective)
        kkt.append(res.kkt_residual)
        W = res.W
        if abs(prev - res.objective) < opts.rel_tol * max(1.0, prev):
            status = CONVERGED
            break
    return finish(W, status, trace, init_t=init_t, lam1=res.lam1, lam2=res.lam2,
                  max_kkt_residual=max(kkt))
