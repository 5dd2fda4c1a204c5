"""Convexified SCA subproblem solved through its two-multiplier dual.

minimize    ||W_mmse - W||_F
subject to  linearized SCNR constraint <= 0
            trace(W W^H) <= 1

For multipliers (lam1, lam2) the minimizer of the Lagrangian is, per column,

    ((1 + lam2) I + lam1 B) w_k = m_k + lam1 c0 (a0^T w_k^ref) a0^*

so a single eigendecomposition of B turns every dual evaluation into
elementwise arithmetic. lam2 is fixed by power complementary slackness for a
given lam1, and lam1 by bisection on the (monotone) SCNR constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .coeffs import ScnrConstraintCoeffs
from .report import CONVERGED, INFEASIBLE

_LAM1_CAP = 1e14


@dataclass
class SubproblemResult:
    W: np.ndarray
    lam1: float          # SCNR-constraint multiplier, in the caller's units
    lam2: float          # power-constraint multiplier
    objective: float
    constraint: float    # linearized constraint value, caller's units
    power: float
    kkt_residual: float
    status: str


class P2Solver:
    """Holds the per-scene factorization reused across SCA iterations."""

    def __init__(self, coeffs: ScnrConstraintCoeffs, W_mmse: np.ndarray):
        self.coeffs = coeffs
        self.W_mmse = np.atleast_2d(np.asarray(W_mmse, dtype=complex))
        B = coeffs.penalty_matrix()
        b, U = np.linalg.eigh(B)
        # Scale so the normalized constraint is O(1); the problem is unchanged.
        self.scale = max(coeffs.c0 * coeffs.M, float(b[-1]), abs(coeffs.sigma1_sq), 1e-300)
        self.c0 = coeffs.c0 / self.scale
        self.sigma1 = coeffs.sigma1_sq / self.scale
        self.b = np.clip(b / self.scale, 0.0, None)
        self.U = U
        self.ut = U.conj().T @ coeffs.a0.conj()
        self.mt = U.conj().T @ self.W_mmse
        self.B = B / self.scale

    # -- pieces of the dual evaluated in the eigenbasis -------------------
    def _numerator(self, lam1: float, x_ref: np.ndarray) -> np.ndarray:
        return self.mt + lam1 * self.c0 * np.outer(self.ut, x_ref)

    def _lam2_for(self, N: np.ndarray, lam1: float) -> float:
        row = np.sum(np.abs(N) ** 2, axis=1)
        base = 1.0 + lam1 * self.b

        def excess(lam2):
            return float(np.sum(row / (base + lam2) ** 2)) - 1.0

        if excess(0.0) <= 0.0:
            return 0.0
        hi = max(np.sqrt(row.sum()), 1.0)
        while excess(hi) > 0.0:
            hi *= 2.0
        return brentq(excess, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)

    def _primal(self, lam1: float, x_ref: np.ndarray):
        N = self._numerator(lam1, x_ref)
        lam2 = self._lam2_for(N, lam1)
        Z = N / (1.0 + lam2 + lam1 * self.b)[:, None]
        return Z, lam2

    def _g1(self, Z: np.ndarray, x_ref: np.ndarray) -> float:
        y = self.ut.conj() @ Z                     # a0^T w_k
        quad = float(np.sum(self.b[:, None] * np.abs(Z) ** 2))
        lin = np.sum(np.abs(x_ref) ** 2) - 2.0 * np.sum((x_ref * y.conj()).real)
        return self.sigma1 + quad + self.c0 * float(lin)

    def solve(self, W_ref: np.ndarray) -> SubproblemResult:
        x_ref = self.coeffs.a0 @ np.atleast_2d(W_ref)

        def h(lam1):
            Z, _ = self._primal(lam1, x_ref)
            return self._g1(Z, x_ref)

        status = CONVERGED
        if h(0.0) <= 0.0:
            lam1 = 0.0
        else:
            hi = 1.0
            while h(hi) > 0.0 and hi < _LAM1_CAP:
                hi *= 4.0
            if h(hi) > 0.0:
                status = INFEASIBLE
                lam1 = hi
            else:
                lam1 = brentq(h, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=1000)
        Z, lam2 = self._primal(lam1, x_ref)
        W = self.U @ Z
        g1 = self._g1(Z, x_ref)
        V = np.outer(self.coeffs.a0.conj(), x_ref)
        resid = ((1.0 + lam2) * W + lam1 * (self.B @ W) - self.W_mmse - lam1 * self.c0 * V)
        return SubproblemResult(
            W=W,
            lam1=lam1 / self.scale,
            lam2=lam2,
            objective=float(np.linalg.norm(self.W_mmse - W)),
            constraint=g1 * self.scale,
            power=float(np.sum(np.abs(W) ** 2)),
            kkt_residual=float(np.linalg.norm(resid)),
            status=status,
        )

    def normalized(self, value: float) -> float:
        return value / self.scale


def solve_p2_subproblem(coeffs: ScnrConstraintCoeffs, W_mmse: np.ndarray,
                        W_ref: np.ndarray) -> SubproblemResult:
    return P2Solver(coeffs, W_mmse).solve(W_ref)
