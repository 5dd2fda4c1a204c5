"""Baseline precoders: regularized MMSE for the users and the clutter-nulling sensing beam."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .array import UlaConfig, steering, steering_matrix
from .errors import InputError
from .metrics import TransmitDesign
from .scene import Scene, UserSet


@dataclass(frozen=True)
class MmseBaseline:
    raw: np.ndarray        # (H H^H + sigma^2 I)^{-1} H
    W: np.ndarray          # unit-norm columns
    rho_bar: np.ndarray    # 1/K each

    @property
    def scaled(self) -> np.ndarray:
        """Columns sqrt(rho_bar_k) * w_k; trace(W W^H) = 1."""
        return self.W * np.sqrt(self.rho_bar)

    def design(self, w0: np.ndarray | None = None) -> TransmitDesign:
        """Communication-only design (rho_0 = 0) in unit-norm mode."""
        M = self.W.shape[0]
        if w0 is None:
            w0 = np.zeros(M, dtype=complex)
            w0[0] = 1.0
        return TransmitDesign.unit_norm(self.W, w0, self.rho_bar, 0.0)


def mmse_precoder(users: UserSet, noise_var: float | None = None) -> MmseBaseline:
    H = users.H
    M, K = H.shape
    if K < 1:
        raise InputError("need at least one user")
    sigma2 = users.noise_var if noise_var is None else noise_var
    if sigma2 < 0:
        raise InputError("noise variance must be >= 0")
    G = H @ H.conj().T + sigma2 * np.eye(M)
    try:
        raw = cho_solve(cho_factor(G), H)
    except np.linalg.LinAlgError as exc:
        raise InputError("H H^H + sigma^2 I is singular; use a positive noise variance") from exc
    norms = np.linalg.norm(raw, axis=0)
    if np.any(norms == 0):
        raise InputError("MMSE precoder has a zero column")
    return MmseBaseline(raw, raw / norms, np.full(K, 1.0 / K))


def sensing_beam(cfg: UlaConfig | int, scene: Scene) -> np.ndarray:
    """Target matched filter pushed toward the null space of the clutter directions."""
    M = cfg.num_antennas if isinstance(cfg, UlaConfig) else int(cfg)
    a0c = steering(M, scene.target.angle).conj()
    if scene.Q == 0:
        return a0c / np.sqrt(M)
    Ac = steering_matrix(M, scene.angles[1:]).conj()
    G = np.eye(M) + Ac @ Ac.conj().T
    w = cho_solve(cho_factor(G), a0c)
    return w / np.linalg.norm(w)
