"""Random scenario generation: users, target, clutter, and channel draws."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .array import UlaConfig, angular_separation_ok, check_angle, HALF_PI
from .errors import InputError

SPEED_OF_LIGHT = 299_792_458.0


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def trial_streams(seed: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (scene, users) generators for one trial.

    Counter-based Philox streams keyed by (seed, trial) so trials can run in
    any order or in parallel and still reproduce bit-for-bit.
    """
    ss_scene, ss_users = np.random.SeedSequence([int(seed), int(trial)]).spawn(2)
    return (np.random.Generator(np.random.Philox(ss_scene)),
            np.random.Generator(np.random.Philox(ss_users)))


@dataclass(frozen=True)
class PointScatterer:
    angle: float
    distance: float
    rcs_power: float
    delay_tag: int = 0

    def __post_init__(self):
        check_angle(self.angle)
        if not self.distance > 0:
            raise InputError(f"scatterer distance must be > 0, got {self.distance}")
        if not self.rcs_power > 0:
            raise InputError(f"rcs_power must be > 0, got {self.rcs_power}")
        if self.delay_tag < 0:
            raise InputError("delay_tag must be >= 0")

    def to_dict(self) -> dict:
        return {"angle": self.angle, "distance": self.distance,
                "rcs_power": self.rcs_power, "delay_tag": self.delay_tag}


@dataclass(frozen=True)
class Scene:
    target: PointScatterer
    clutter: tuple[PointScatterer, ...] = ()
    carrier_frequency: float = 28e9

    def __post_init__(self):
        object.__setattr__(self, "clutter", tuple(self.clutter))
        if self.target.delay_tag != 0:
            raise InputError("target delay_tag must be 0")
        tags = [c.delay_tag for c in self.clutter]
        if 0 in tags or len(set(tags)) != len(tags):
            raise InputError("clutter delay tags must be distinct and nonzero")
        if not self.carrier_frequency > 0:
            raise InputError("carrier frequency must be > 0")

    @property
    def Q(self) -> int:
        return len(self.clutter)

    @property
    def scatterers(self) -> tuple[PointScatterer, ...]:
        """Target first (q = 0), then clutter q = 1..Q."""
        return (self.target,) + self.clutter

    @property
    def angles(self) -> np.ndarray:
        return np.array([s.angle for s in self.scatterers])

    def echo_gains(self) -> np.ndarray:
        """Mean-square echo gains for q = 0..Q."""
        return np.array([echo_gain(s, self.carrier_frequency) for s in self.scatterers])

    def to_dict(self) -> dict:
        return {"carrier_frequency": self.carrier_frequency,
                "target": self.target.to_dict(),
                "clutter": [c.to_dict() for c in self.clutter]}


@dataclass
class UserSet:
    angles: np.ndarray          # (K,)
    distances: np.ndarray       # (K,)
    gains: np.ndarray           # (K,) pathloss beta_k
    covariances: np.ndarray     # (K, M, M)
    H: np.ndarray               # (M, K), column k is h_k
    noise_var: float

    @property
    def K(self) -> int:
        return self.H.shape[1]

    @property
    def M(self) -> int:
        return self.H.shape[0]

    def to_dict(self) -> dict:
        return {"angles": self.angles.tolist(), "distances": self.distances.tolist(),
                "gains": self.gains.tolist(), "noise_var": self.noise_var,
                "H_real": self.H.real.tolist(), "H_imag": self.H.imag.tolist()}


@dataclass(frozen=True)
class ScenarioParams:
    """Scenario ranges. Defaults follow the 28 GHz evaluation setup."""

    carrier_frequency: float = 28e9
    num_users: int = 8
    num_clutter: int = 5
    cell_radius: float = 1000.0
    ue_min_distance: float = 10.0
    target_range: tuple[float, float] = (400.0, 500.0)
    clutter_range: tuple[float, float] = (20.0, 100.0)
    clutter_rcs_db: tuple[float, float] = (10.0, 20.0)
    target_rcs: float = 1.0
    min_separation_deg: float = 5.0
    angular_spread_deg: float = 5.0
    ue_noise_dbm: float = -90.0
    bandwidth: float = 50e6
    angle_range: tuple[float, float] = field(default=(-HALF_PI, HALF_PI))

    @property
    def ue_noise_var(self) -> float:
        return dbm_to_watt(self.ue_noise_dbm)


def radar_pathloss(distance: float, carrier_frequency: float) -> float:
    """Two-way radar-equation gain c^2 / ((4 pi)^3 f_c^2 d^4)."""
    if not distance > 0 or not carrier_frequency > 0:
        raise InputError("distance and carrier frequency must be positive")
    return SPEED_OF_LIGHT**2 / ((4 * np.pi) ** 3 * carrier_frequency**2 * distance**4)


def echo_gain(s: PointScatterer, carrier_frequency: float) -> float:
    return radar_pathloss(s.distance, carrier_frequency) * s.rcs_power


def free_space_gain(distance, carrier_frequency: float):
    """One-way free-space gain (c / (4 pi f_c d))^2."""
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0) or carrier_frequency <= 0:
        raise InputError("distance and carrier frequency must be positive")
    return (SPEED_OF_LIGHT / (4 * np.pi * carrier_frequency * distance)) ** 2


def local_scattering_covariance(cfg: UlaConfig | int, phi: float, spread_deg: float,
                                gain: float = 1.0) -> np.ndarray:
    """Gaussian local-scattering spatial covariance around nominal angle ``phi``."""
    if spread_deg < 0:
        raise InputError("angular spread must be >= 0")
    M = cfg.num_antennas if isinstance(cfg, UlaConfig) else int(cfg)
    phi = check_angle(phi)
    sigma = np.deg2rad(spread_deg)
    d = np.subtract.outer(np.arange(M), np.arange(M))
    R = gain * np.exp(1j * np.pi * d * np.sin(phi)) * np.exp(-0.5 * (sigma * np.pi * d * np.cos(phi)) ** 2)
    return 0.5 * (R + R.conj().T)


def _uniform_angle(rng: np.random.Generator, params: ScenarioParams) -> float:
    lo, hi = params.angle_range
    return float(rng.uniform(lo, hi))


def sample_scene(rng: np.random.Generator, params: ScenarioParams = ScenarioParams()) -> Scene:
    target = PointScatterer(
        angle=_uniform_angle(rng, params),
        distance=float(rng.uniform(*params.target_range)),
        rcs_power=params.target_rcs,
        delay_tag=0,
    )
    min_sep = np.deg2rad(params.min_separation_deg)
    clutter = []
    for q in range(1, params.num_clutter + 1):
        for _ in range(10_000):
            angle = _uniform_angle(rng, params)
            if angular_separation_ok(angle, [target.angle], min_sep):
                break
        else:
            raise InputError("could not place clutter with the requested angular separation")
        distance = float(rng.uniform(*params.clutter_range))
        rcs = 10.0 ** (float(rng.uniform(*params.clutter_rcs_db)) / 10.0)
        clutter.append(PointScatterer(angle, distance, rcs, delay_tag=q))
    return Scene(target, tuple(clutter), params.carrier_frequency)


def covariance_sqrt(R: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(R)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def draw_channels(rng: np.random.Generator, covariances: np.ndarray) -> np.ndarray:
    """One CN(0, R_k) realization per covariance; returns (M, K)."""
    K, M, _ = covariances.shape
    z = (rng.standard_normal((M, K)) + 1j * rng.standard_normal((M, K))) / np.sqrt(2)
    return np.stack([covariance_sqrt(covariances[k]) @ z[:, k] for k in range(K)], axis=1)


def sample_users(rng: np.random.Generator, params: ScenarioParams, cfg: UlaConfig | int) -> UserSet:
    """Place K users uniformly over the cell area and draw one channel realization.

    Positions are drawn before channel coefficients, so the same stream gives
    the same geometry for every array size.
    """
    M = cfg.num_antennas if isinstance(cfg, UlaConfig) else int(cfg)
    K = params.num_users
    if K < 1:
        raise InputError("need at least one user")
    angles = rng.uniform(*params.angle_range, size=K)
    r0, R = params.ue_min_distance, params.cell_radius
    u = rng.uniform(size=K)
    distances = np.sqrt(r0**2 + u * (R**2 - r0**2))
    gains = free_space_gain(distances, params.carrier_frequency)
    covs = np.stack([
        local_scattering_covariance(M, angles[k], params.angular_spread_deg, gains[k]) for k in range(K)
    ])
    H = draw_channels(rng, covs)
    return UserSet(angles, distances, gains, covs, H, params.ue_noise_var)
