"""Closed-form communication and sensing performance under hardware distortion.

All quantities use the additive uncorrelated distortion model: the transmitter
adds white distortion with total power ``kappa_t * total_power`` and the
receiver adds white distortion proportional to the received echo power.
"""

from __future__ import annotations

from dataclasses import dataclass, replace, field
from typing import Literal

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .array import steering, steering_matrix, beampattern_from_columns
from .errors import InputError, SolverError
from .scene import Scene, UserSet

UNIT = "unit"
ABSORBED = "absorbed"


@dataclass(frozen=True)
class HardwareProfile:
    kappa_t: float = 0.01
    kappa_r: float = 0.01
    total_power: float = 100.0
    ue_noise_var: float = 1e-12
    radar_noise_var: float = 1e-12

    def __post_init__(self):
        for name in ("kappa_t", "kappa_r", "ue_noise_var", "radar_noise_var"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be >= 0")
        if not self.total_power > 0:
            raise InputError("total_power must be > 0")

    def ideal(self) -> "HardwareProfile":
        """Same powers, distortion-free hardware."""
        return replace(self, kappa_t=0.0, kappa_r=0.0)


@dataclass(frozen=True)
class TransmitDesign:
    """Precoder columns [W, w0] with power coefficients (rho_1..rho_K, rho_0).

    In ``unit`` mode every column has unit norm and ``rho`` carries the power
    split. In ``absorbed`` mode ``rho`` is all ones and power lives in the
    column norms.
    """

    W: np.ndarray
    w0: np.ndarray
    rho: np.ndarray
    mode: Literal["unit", "absorbed"]
    tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.W, dtype=complex))
        w0 = np.asarray(self.w0, dtype=complex).reshape(-1)
        rho = np.asarray(self.rho, dtype=float).reshape(-1)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "rho", rho)
        M, K = W.shape
        if w0.shape != (M,):
            raise InputError(f"w0 must have length {M}")
        if rho.shape != (K + 1,):
            raise InputError(f"rho must have length K+1 = {K + 1}")
        if np.any(rho < -self.tol):
            raise InputError("power coefficients must be nonnegative")
        if self.mode == UNIT:
            norms = np.linalg.norm(np.column_stack([W, w0]), axis=0)
            if np.any(np.abs(norms - 1.0) > 1e-8):
                raise InputError("unit mode requires unit-norm columns")
            if rho.sum() > 1.0 + self.tol:
                raise InputError(f"power coefficients sum to {rho.sum()} > 1")
        elif self.mode == ABSORBED:
            if not np.allclose(rho, 1.0):
                raise InputError("absorbed mode requires rho to be all ones")
            if self.signal_power() > 1.0 + self.tol:
                raise InputError(f"trace(W W^H) = {self.signal_power()} > 1")
        else:
            raise InputError(f"unknown design mode {self.mode!r}")

    @classmethod
    def unit_norm(cls, W, w0, rho_comm, rho0=0.0) -> "TransmitDesign":
        return cls(W, w0, np.append(np.asarray(rho_comm, dtype=float), rho0), UNIT)

    @classmethod
    def absorbed(cls, W, w0=None) -> "TransmitDesign":
        W = np.atleast_2d(np.asarray(W, dtype=complex))
        w0 = np.zeros(W.shape[0], dtype=complex) if w0 is None else w0
        return cls(W, w0, np.ones(W.shape[1] + 1), ABSORBED)

    @property
    def M(self) -> int:
        return self.W.shape[0]

    @property
    def K(self) -> int:
        return self.W.shape[1]

    def columns(self) -> np.ndarray:
        """Effective columns sqrt(rho_k) w_k, sensing column last; shape (M, K+1)."""
        return np.column_stack([self.W, self.w0]) * np.sqrt(np.clip(self.rho, 0.0, None))

    def signal_power(self) -> float:
        """Fraction of the total power carried by intended signals."""
        return float(np.sum(np.abs(self.columns()) ** 2))

    def power_slack(self) -> float:
        return 1.0 - self.signal_power()


@dataclass(frozen=True)
class SinrTerms:
    value: float
    signal: float
    interference: float
    sensing: float
    distortion: float
    noise: float


@dataclass(frozen=True)
class ScnrBreakdown:
    numerator: float
    clutter_terms: np.ndarray
    distortion_term: float
    thermal_term: float

    @property
    def denominator(self) -> float:
        return float(self.clutter_terms.sum() + self.distortion_term + self.thermal_term)

    @property
    def value(self) -> float:
        if self.numerator == 0.0:
            return 0.0
        return self.numerator / self.denominator


def transmit_covariance(design: TransmitDesign, hw: HardwareProfile) -> np.ndarray:
    F = design.columns()
    M = design.M
    return hw.total_power * (F @ F.conj().T) + hw.kappa_t * hw.total_power / M * np.eye(M)


def comm_sinr(k: int, users: UserSet, design: TransmitDesign, hw: HardwareProfile) -> SinrTerms:
    """Instantaneous SINR of user ``k``; every term is normalized by total_power."""
    K = design.K
    if not 0 <= k < K:
        raise InputError(f"user index {k} out of range for K = {K}")
    h = users.H[:, k]
    gains = np.abs(h.conj() @ design.columns()) ** 2
    signal = gains[k]
    interference = gains[:K].sum() - signal
    sensing = gains[K]
    distortion = hw.kappa_t / design.M * np.vdot(h, h).real
    noise = hw.ue_noise_var / hw.total_power
    den = interference + sensing + distortion + noise
    if signal == 0.0:
        value = 0.0
    elif den == 0.0:
        value = np.inf
    else:
        value = signal / den
    return SinrTerms(float(value), float(signal), float(interference), float(sensing),
                     float(distortion), float(noise))


def sinr_all(users: UserSet, design: TransmitDesign, hw: HardwareProfile) -> np.ndarray:
    return np.array([comm_sinr(k, users, design, hw).value for k in range(design.K)])


def sum_spectral_efficiency(users: UserSet, design: TransmitDesign, hw: HardwareProfile) -> float:
    return float(np.sum(np.log2(1.0 + sinr_all(users, design, hw))))


def beampattern_at_scatterers(scene: Scene, design: TransmitDesign) -> np.ndarray:
    """P(theta_q) for q = 0..Q."""
    return beampattern_from_columns(design.columns(), scene.angles)


def echo_powers(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> np.ndarray:
    """alpha_q^2 * total_power * (M P(theta_q) + kappa_t) for q = 0..Q."""
    P = beampattern_at_scatterers(scene, design)
    return scene.echo_gains() * hw.total_power * (design.M * P + hw.kappa_t)


def receiver_distortion_level(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> float:
    """Common diagonal entry of the receiver-distortion covariance."""
    return float(hw.kappa_r * echo_powers(scene, design, hw).sum())


def receiver_distortion_cov(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> np.ndarray:
    return receiver_distortion_level(scene, design, hw) * np.eye(design.M)


@dataclass(frozen=True)
class ScnrTerms:
    """Ingredients shared by the clutter-aware SCNR expressions."""

    sigma0_sq: float            # target echo power
    sigma_q_sq: np.ndarray      # clutter powers, q = 1..Q
    noise_level: float          # thermal + receiver distortion
    a0: np.ndarray
    A: np.ndarray               # (M, Q) clutter steering matrix


def scnr_terms(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> ScnrTerms:
    M = design.M
    P = beampattern_at_scatterers(scene, design)
    gains = scene.echo_gains()
    powers = gains * hw.total_power * (M * P + hw.kappa_t)
    sigma0_sq = gains[0] * hw.total_power * M * P[0]
    noise_level = hw.radar_noise_var + hw.kappa_r * powers.sum()
    A = steering_matrix(M, scene.angles[1:]) if scene.Q else np.zeros((M, 0), dtype=complex)
    return ScnrTerms(float(sigma0_sq), powers[1:], float(noise_level), steering(M, scene.target.angle), A)


def _interference_cov(t: ScnrTerms) -> np.ndarray:
    M = t.a0.shape[0]
    return (t.A * t.sigma_q_sq) @ t.A.conj().T + t.noise_level * np.eye(M)


def clutter_aware_combiner(scene: Scene, design: TransmitDesign, hw: HardwareProfile,
                           mode: str = "clutter_aware") -> np.ndarray:
    """Receive combiner. ``mode`` is ``clutter_aware`` or ``matched_filter``."""
    t = scnr_terms(scene, design, hw)
    if mode == "matched_filter":
        return t.a0
    if mode != "clutter_aware":
        raise InputError(f"unknown combiner mode {mode!r}")
    if not t.noise_level > 0:
        raise InputError("clutter-aware combiner needs a positive noise level")
    try:
        return cho_solve(cho_factor(_interference_cov(t)), t.a0)
    except np.linalg.LinAlgError as exc:
        raise SolverError("interference covariance is not positive definite") from exc


def scnr_general(scene: Scene, design: TransmitDesign, hw: HardwareProfile,
                 omega: np.ndarray) -> ScnrBreakdown:
    """Term-by-term SCNR for an arbitrary receive combiner."""
    omega = np.asarray(omega, dtype=complex)
    wnorm = np.vdot(omega, omega).real
    if wnorm == 0.0:
        raise InputError("combiner must be nonzero")
    M = design.M
    gains = scene.echo_gains()
    P = beampattern_at_scatterers(scene, design)
    rho = hw.total_power
    a0 = steering(M, scene.target.angle)
    numerator = rho * gains[0] * M * P[0] * abs(np.vdot(a0, omega)) ** 2
    if scene.Q:
        proj = np.abs(steering_matrix(M, scene.angles[1:]).conj().T @ omega) ** 2
        clutter = gains[1:] * proj * rho * (M * P[1:] + hw.kappa_t)
    else:
        clutter = np.zeros(0)
    distortion = hw.kappa_r * np.sum(gains * rho * (M * P + hw.kappa_t)) * wnorm
    thermal = hw.radar_noise_var * wnorm
    return ScnrBreakdown(float(numerator), clutter, float(distortion), float(thermal))


def scnr_exact_clutter_aware(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> float:
    """sigma0^2 a0^H (A Sigma A^H + noise I)^{-1} a0 via Cholesky."""
    t = scnr_terms(scene, design, hw)
    if not t.noise_level > 0:
        raise InputError("exact SCNR needs a positive noise level")
    x = cho_solve(cho_factor(_interference_cov(t)), t.a0)
    return float(t.sigma0_sq * np.vdot(t.a0, x).real)


def scnr_inversion_lemma(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> float:
    """Exact SCNR rewritten with the matrix inversion lemma (Q x Q solve)."""
    t = scnr_terms(scene, design, hw)
    M = t.a0.shape[0]
    keep = t.sigma_q_sq > 0
    A = t.A[:, keep]
    if A.shape[1] == 0:
        return float(t.sigma0_sq / t.noise_level * M)
    inner = np.diag(t.noise_level / t.sigma_q_sq[keep]) + A.conj().T @ A
    b = A.conj().T @ t.a0
    quad = M - np.vdot(b, np.linalg.solve(inner, b)).real
    return float(t.sigma0_sq / t.noise_level * quad)


def scnr_large_array_approx(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> float:
    """Intermediate form assuming A^H A = M I; keeps the target-clutter cross terms."""
    t = scnr_terms(scene, design, hw)
    M = t.a0.shape[0]
    weights = t.sigma_q_sq / (M * t.sigma_q_sq + t.noise_level)
    cross = np.abs(t.A.conj().T @ t.a0) ** 2
    return float(t.sigma0_sq / t.noise_level * (M - np.sum(weights * cross)))


def scnr_closed_form(scene: Scene, design: TransmitDesign, hw: HardwareProfile) -> float:
    """Large-array SCNR with negligible target-clutter cross-correlation."""
    t = scnr_terms(scene, design, hw)
    M = design.M
    if t.sigma0_sq == 0.0:
        return 0.0
    return float(M * t.sigma0_sq / t.noise_level)


def scnr(scene: Scene, design: TransmitDesign, hw: HardwareProfile, combiner: str = "clutter_aware") -> float:
    """SCNR achieved with the chosen combiner, evaluated with the general form."""
    omega = clutter_aware_combiner(scene, design, hw, mode=combiner)
    return scnr_general(scene, design, hw, omega).value
