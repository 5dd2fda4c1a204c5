"""Half-wavelength uniform linear array geometry.

Element ``m`` (0-based) of the steering vector toward ``theta`` is
``exp(1j * pi * m * sin(theta))``; element 0 is the phase reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

HALF_PI = np.pi / 2


@dataclass(frozen=True)
class UlaConfig:
    num_antennas: int

    def __post_init__(self):
        if int(self.num_antennas) != self.num_antennas or self.num_antennas < 1:
            raise InputError(f"num_antennas must be a positive integer, got {self.num_antennas!r}")

    @property
    def M(self) -> int:
        return self.num_antennas


def check_angle(theta: float) -> float:
    theta = float(theta)
    if not (-HALF_PI - 1e-12 <= theta <= HALF_PI + 1e-12):
        raise InputError(f"angle {theta} rad outside [-pi/2, pi/2]")
    return theta


def _num(cfg: UlaConfig | int) -> int:
    return cfg.num_antennas if isinstance(cfg, UlaConfig) else int(cfg)


def steering(cfg: UlaConfig | int, theta: float) -> np.ndarray:
    """Array response a(theta) of length M."""
    M = _num(cfg)
    theta = check_angle(theta)
    return np.exp(1j * np.pi * np.arange(M) * np.sin(theta))


def steering_matrix(cfg: UlaConfig | int, thetas) -> np.ndarray:
    """Columns are steering vectors for each angle; shape (M, len(thetas))."""
    M = _num(cfg)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    for t in thetas:
        check_angle(t)
    return np.exp(1j * np.pi * np.outer(np.arange(M), np.sin(thetas)))


def check_hermitian(X: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError(f"expected a square matrix, got shape {X.shape}")
    scale = max(np.abs(X).max(initial=0.0), 1e-300)
    if np.abs(X - X.conj().T).max(initial=0.0) > rtol * scale:
        raise InputError("matrix is not Hermitian")
    return X


def beampattern(cfg: UlaConfig | int, X: np.ndarray, theta: float) -> float:
    """Normalized transmit power toward ``theta``: (1/M) a^T(theta) X a*(theta)."""
    X = check_hermitian(X)
    M = X.shape[0]
    if M != _num(cfg):
        raise InputError(f"X is {M}x{M} but the array has {_num(cfg)} elements")
    a = steering(M, theta)
    val = a @ X @ a.conj() / M
    tr = abs(np.trace(X).real)
    if abs(val.imag) >= 1e-10 * max(tr, 1e-300) and abs(val.imag) > 1e-300:
        raise InputError("beampattern has a non-negligible imaginary part; X is not PSD Hermitian")
    return float(val.real)


def beampattern_from_columns(F: np.ndarray, thetas) -> np.ndarray:
    """Beampattern of X = F F^H evaluated at several angles.

    ``F`` holds effective (power-scaled) beam columns. Computed as
    (1/M) * sum_k |a^T w_k|^2, which is nonnegative by construction.
    """
    F = np.atleast_2d(np.asarray(F, dtype=complex))
    M = F.shape[0]
    A = steering_matrix(M, thetas)
    return (np.abs(A.T @ F) ** 2).sum(axis=1) / M


def dft_grid(cfg: UlaConfig | int) -> np.ndarray:
    """The M angles with sin(theta) = 2m/M - 1, m = 0..M-1."""
    M = _num(cfg)
    return np.arcsin(2.0 * np.arange(M) / M - 1.0)


def angular_distance(theta, other):
    """Angle between two directions as seen by the array.

    The two endfire directions +-pi/2 give the same steering vector, so the
    sector wraps around there and the distance is taken modulo pi.
    """
    d = np.abs(np.asarray(theta, dtype=float) - np.asarray(other, dtype=float))
    return np.minimum(d, np.pi - d)


def angular_separation_ok(theta: float, others, min_sep: float) -> bool:
    return bool(np.all(angular_distance(theta, others) >= min_sep))
