"""Primal active-set method for small strictly convex QPs.

    minimize    0.5 x^T H x + f^T x
    subject to  G x <= h

Starts from a feasible point supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError


@dataclass
class QPResult:
    x: np.ndarray
    multipliers: np.ndarray   # one per row of G, zero when inactive
    active: list[int]
    iterations: int


def _independent(rows: np.ndarray, tol: float = 1e-10) -> bool:
    return np.linalg.matrix_rank(rows, tol=tol) == rows.shape[0]


def active_set_qp(H: np.ndarray, f: np.ndarray, G: np.ndarray, h: np.ndarray,
                  x0: np.ndarray, tol: float = 1e-12, max_iter: int | None = None) -> QPResult:
    H = np.asarray(H, dtype=float)
    f = np.asarray(f, dtype=float)
    G = np.atleast_2d(np.asarray(G, dtype=float))
    h = np.asarray(h, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    n, m = x.size, G.shape[0]
    max_iter = max_iter or 50 * (n + m)
    scale = np.maximum(np.linalg.norm(G, axis=1), 1e-300)

    if np.any(G @ x - h > tol * scale * 1e3):
        raise SolverError("active_set_qp needs a feasible starting point")

    work: list[int] = []
    for i in np.argsort(np.abs(G @ x - h) / scale):
        if abs(G[i] @ x - h[i]) <= tol * scale[i] * 1e3 and _independent(G[work + [i]]):
            work.append(int(i))

    for it in range(1, max_iter + 1):
        g = H @ x + f
        Gw = G[work]
        nw = len(work)
        kkt = np.block([[H, Gw.T], [Gw, np.zeros((nw, nw))]])
        sol = np.linalg.solve(kkt, np.concatenate([-g, np.zeros(nw)]))
        p, lam = sol[:n], sol[n:]
        if np.linalg.norm(p) <= tol * max(1.0, np.linalg.norm(x)):
            if nw == 0 or lam.min() >= -tol:
                mult = np.zeros(m)
                mult[work] = np.clip(lam, 0.0, None)
                return QPResult(x, mult, sorted(work), it)
            work.pop(int(np.argmin(lam)))
            continue
        Gp = G @ p
        alpha, block = 1.0, None
        for i in range(m):
            if i in work or Gp[i] <= tol * scale[i] * np.linalg.norm(p):
                continue
            step = (h[i] - G[i] @ x) / Gp[i]
            if step < alpha:
                alpha, block = max(step, 0.0), i
        x = x + alpha * p
        if block is not None:
            work.append(block)
    raise SolverError("active-set QP did not terminate")
