"""Symbol-level simulation of the transmit, downlink, and echo signals.

Used as an independent check on the second-order closed forms: nothing here
calls into :mod:`isacsim.metrics` except the design container.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array import steering
from .metrics import HardwareProfile, TransmitDesign
from .scene import Scene, UserSet


def _cn(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def simulate_transmit(rng: np.random.Generator, design: TransmitDesign, hw: HardwareProfile,
                      n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (x, s, eta): x = sqrt(P) [W, w0] diag(sqrt(rho)) s + eta, shapes (M, n)."""
    M, K = design.M, design.K
    Wt = np.column_stack([design.W, design.w0])
    s = _cn(rng, (K + 1, n))
    eta = np.sqrt(hw.kappa_t * hw.total_power / M) * _cn(rng, (M, n))
    x = np.sqrt(hw.total_power) * (Wt @ (np.sqrt(np.clip(design.rho, 0, None))[:, None] * s)) + eta
    return x, s, eta


def empirical_covariance(x: np.ndarray) -> np.ndarray:
    return x @ x.conj().T / x.shape[1]


@dataclass
class EmpiricalSinr:
    signal: float
    interference: float
    sensing: float
    distortion: float
    noise: float

    @property
    def value(self) -> float:
        return self.signal / (self.interference + self.sensing + self.distortion + self.noise)


def simulate_ue_terms(rng: np.random.Generator, k: int, users: UserSet, design: TransmitDesign,
                      hw: HardwareProfile, n: int) -> EmpiricalSinr:
    """Empirical powers of each component of user k's received signal, divided by total power."""
    x, s, eta = simulate_transmit(rng, design, hw, n)
    h = users.H[:, k]
    K = design.K
    Wt = np.column_stack([design.W, design.w0])
    amp = np.sqrt(hw.total_power) * (h.conj() @ Wt) * np.sqrt(np.clip(design.rho, 0, None))
    comps = amp[:, None] * s                    # per-stream received components
    nu = np.sqrt(hw.ue_noise_var) * _cn(rng, n)
    power = lambda v: float(np.mean(np.abs(v) ** 2)) / hw.total_power
    others = np.delete(np.arange(K), k)
    return EmpiricalSinr(
        signal=power(comps[k]),
        interference=power(comps[others].sum(axis=0)) if others.size else 0.0,
        sensing=power(comps[K]),
        distortion=power(h.conj() @ eta),
        noise=power(nu),
    )


def simulate_echo(rng: np.random.Generator, scene: Scene, design: TransmitDesign, hw: HardwareProfile,
                  n: int) -> np.ndarray:
    """Noise-free echo z[n] with each delay tag modelled as an independent transmit stream."""
    M = design.M
    z = np.zeros((M, n), dtype=complex)
    for s_q, gain in zip(scene.scatterers, scene.echo_gains()):
        a = steering(M, s_q.angle)
        x, _, _ = simulate_transmit(rng, design, hw, n)
        alpha = np.sqrt(gain) * np.exp(2j * np.pi * rng.uniform())
        z += alpha * np.outer(a, a @ x)
    return z
