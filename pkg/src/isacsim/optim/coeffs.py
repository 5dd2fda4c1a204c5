"""Quadratic/linear rewrites of the SCNR >= threshold constraint."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..array import UlaConfig, steering_matrix
from ..errors import InputError
from ..metrics import HardwareProfile
from ..scene import Scene


@dataclass(frozen=True)
class ScnrConstraintCoeffs:
    """sigma1^2 + sum_q d_q sum_k |a_q^T w_k|^2 - c0 sum_k |a_0^T w_k|^2 <= 0.

    ``steer`` holds [a(theta_0), ..., a(theta_Q)] as columns; ``d[0]`` is the
    target term.
    """

    c0: float
    d: np.ndarray
    sigma1_sq: float
    gamma0: float
    steer: np.ndarray

    @property
    def a0(self) -> np.ndarray:
        return self.steer[:, 0]

    @property
    def M(self) -> int:
        return self.steer.shape[0]

    def penalty_matrix(self) -> np.ndarray:
        """B = sum_q d_q a_q^* a_q^T."""
        S = self.steer.conj()
        return (S * self.d) @ S.conj().T

    def value(self, W: np.ndarray) -> float:
        g = np.abs(self.steer.T @ np.atleast_2d(W)) ** 2   # (Q+1, K)
        per_q = g.sum(axis=1)
        return float(self.sigma1_sq + self.d @ per_q - self.c0 * per_q[0])

    def linearized_value(self, W: np.ndarray, W_ref: np.ndarray) -> float:
        """Constraint with the concave part replaced by its tangent at ``W_ref``."""
        W = np.atleast_2d(W)
        g = np.abs(self.steer.T @ W) ** 2
        x_ref = self.a0 @ W_ref
        y = self.a0 @ W
        lin = np.sum(np.abs(x_ref) ** 2) - 2 * np.sum((x_ref * y.conj()).real)
        return float(self.sigma1_sq + self.d @ g.sum(axis=1) + self.c0 * lin)


def build_constraint_coeffs(scene: Scene, hw: HardwareProfile, gamma0: float,
                            cfg: UlaConfig | int) -> ScnrConstraintCoeffs:
    if gamma0 < 0:
        raise InputError("SCNR target must be >= 0")
    M = cfg.num_antennas if isinstance(cfg, UlaConfig) else int(cfg)
    gains = scene.echo_gains()
    rho = hw.total_power
    c0 = M * gains[0] * rho
    d = gamma0 * rho * hw.kappa_r * gains
    sigma1_sq = gamma0 * hw.radar_noise_var + gamma0 * hw.kappa_r * rho * hw.kappa_t * gains.sum()
    return ScnrConstraintCoeffs(float(c0), d, float(sigma1_sq), float(gamma0),
                                steering_matrix(M, scene.angles))


@dataclass(frozen=True)
class PowerAllocCoeffs:
    """SCNR = c^T rho / (sigma2^2 + d^T rho) for fixed unit-norm beams.

    Index K (last) of ``c`` and ``d`` is the sensing beam.
    """

    c: np.ndarray
    d: np.ndarray
    sigma2_sq: float
    rho_bar: np.ndarray

    def scnr(self, rho: np.ndarray) -> float:
        num = float(self.c @ rho)
        return 0.0 if num == 0.0 else num / (self.sigma2_sq + float(self.d @ rho))


def build_power_alloc_coeffs(scene: Scene, hw: HardwareProfile, beams: np.ndarray,
                             rho_bar: np.ndarray) -> PowerAllocCoeffs:
    """``beams`` is (M, K+1): unit-norm user beams followed by the sensing beam."""
    M = beams.shape[0]
    gains = scene.echo_gains()
    rho = hw.total_power
    resp = np.abs(steering_matrix(M, scene.angles).T @ beams) ** 2   # (Q+1, K+1)
    c = M * gains[0] * rho * resp[0]
    d = hw.kappa_r * rho * (gains @ resp)
    sigma2_sq = hw.radar_noise_var + hw.kappa_r * hw.kappa_t * rho * gains.sum()
    return PowerAllocCoeffs(c, d, float(sigma2_sq), np.asarray(rho_bar, dtype=float))
