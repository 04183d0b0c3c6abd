"""Multipath channel generation and effective channels at the array ports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .geometry import HbfCodebook, RaaGeometry
from .response import AntennaPattern, hbf_response_matrix, raa_response_matrix

SINGLE_USER = "single_user"
MULTI_USER = "multi_user"


def _sector_angles(count: int) -> tuple[float, ...]:
    # -0.5*pi + 0.15*pi*i for i = 1..count
    return tuple(-0.5 * math.pi + 0.15 * math.pi * i for i in range(1, count + 1))


@dataclass(frozen=True)
class ScenarioConfig:
    """Propagation scenario.

    For ``single_user`` the ``mean_angles`` are the fixed path angles and
    ``angle_spread`` is ignored. For ``multi_user`` they are the per-user
    mean angles and each path angle is Gaussian around it.
    """

    mode: str = SINGLE_USER
    user_count: int = 1
    paths_per_user: int = 5
    gain_magnitude: float = math.sqrt(0.2)
    mean_angles: tuple[float, ...] = field(default_factory=lambda: _sector_angles(5))
    angle_spread: float = 0.0
    eta_max: float = 0.5 * math.pi
    pattern: str = "isotropic"
    snr_grid_db: tuple[float, ...] = tuple(range(-10, 11, 2))
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (SINGLE_USER, MULTI_USER):
            raise ValueError(f"unknown scenario mode {self.mode!r}")
        if self.user_count < 1 or self.paths_per_user < 1:
            raise ValueError("user_count and paths_per_user must be >= 1")
        if self.gain_magnitude < 0:
            raise ValueError("gain_magnitude must be >= 0")

    @classmethod
    def single_user(cls, **kw) -> "ScenarioConfig":
        return cls(**{**dict(mode=SINGLE_USER), **kw})

    @classmethod
    def multi_user(cls, **kw) -> "ScenarioConfig":
        base = dict(mode=MULTI_USER, user_count=5, paths_per_user=2,
                    gain_magnitude=math.sqrt(0.5), mean_angles=_sector_angles(5),
                    angle_spread=0.1 * math.pi)
        return cls(**{**base, **kw})


@dataclass
class MultipathChannel:
    """Paths ``(alpha_l, theta_l)`` seen by one user."""

    gains: np.ndarray
    angles: np.ndarray
    user: int = 0

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=complex).ravel()
        self.angles = np.asarray(self.angles, dtype=float).ravel()
        if self.gains.shape != self.angles.shape:
            raise ValueError("gains and angles must have the same length")

    @property
    def path_count(self) -> int:
        return len(self.gains)

    def scaled(self, c: complex) -> "MultipathChannel":
        return MultipathChannel(c * self.gains, self.angles.copy(), self.user)


def _random_phases(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.exp(1j * rng.uniform(0.0, 2 * np.pi, size=n))


def generate_single_user(config: ScenarioConfig, rng: np.random.Generator) -> MultipathChannel:
    """Fixed path angles, fixed magnitudes, independent uniform phases."""
    if config.mode != SINGLE_USER:
        raise ValueError("generate_single_user needs a single_user config")
    angles = np.asarray(config.mean_angles[:config.paths_per_user], dtype=float)
    if len(angles) != config.paths_per_user:
        raise ValueError("need one angle per path for the single-user scenario")
    gains = config.gain_magnitude * _random_phases(rng, config.paths_per_user)
    return MultipathChannel(gains, angles, user=0)


def _truncated_normal(rng: np.random.Generator, mean: float, std: float,
                      lo: float, hi: float) -> float:
    # rejection, not clamping: clamping would pile mass on the edges
    while True:
        x = rng.normal(mean, std)
        if lo <= x <= hi:
            return float(x)


def generate_multi_user(config: ScenarioConfig, rng: np.random.Generator) -> list[MultipathChannel]:
    """``K`` users, Gaussian path angles around each user's mean, resampled into coverage."""
    if config.mode != MULTI_USER:
        raise ValueError("generate_multi_user needs a multi_user config")
    if len(config.mean_angles) < config.user_count:
        raise ValueError("need one mean angle per user")
    users = []
    for k in range(config.user_count):
        mean = config.mean_angles[k]
        angles = [_truncated_normal(rng, mean, config.angle_spread,
                                    -config.eta_max, config.eta_max)
                  for _ in range(config.paths_per_user)]
        gains = config.gain_magnitude * _random_phases(rng, config.paths_per_user)
        users.append(MultipathChannel(gains, angles, user=k))
    return users


def effective_channel_raa(geom: RaaGeometry, pattern: AntennaPattern,
                          chan: MultipathChannel) -> np.ndarray:
    """``h = sum_l alpha_l r(theta_l)``, length ``N``."""
    if chan.path_count == 0:
        return np.zeros(geom.N, dtype=complex)
    return chan.gains @ raa_response_matrix(geom, pattern, chan.angles)


def effective_channel_hbf(codebook: HbfCodebook, pattern: AntennaPattern,
                          chan: MultipathChannel) -> np.ndarray:
    """``h = sum_l alpha_l r_HBF(theta_l)``, length ``N'``."""
    if chan.path_count == 0:
        return np.zeros(codebook.codeword_count, dtype=complex)
    return chan.gains @ hbf_response_matrix(codebook, pattern, chan.angles)


def channels_to_csv(channels: Iterable[MultipathChannel], trial: int | None = None) -> str:
    """Dump paths as ``user, path, re_alpha, im_alpha, theta_rad`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["user", "path", "re_alpha", "im_alpha", "theta_rad"]
    w.writerow((["trial"] if trial is not None else []) + head)
    for ch in channels:
        for l, (a, t) in enumerate(zip(ch.gains, ch.angles)):
            row = [ch.user, l, repr(float(a.real)), repr(float(a.imag)), repr(float(t))]
            w.writerow(([trial] if trial is not None else []) + row)
    return buf.getvalue()


def channels_from_csv(text: str) -> list[MultipathChannel]:
    rows = [r for r in csv.DictReader(line for line in text.splitlines()
                                      if not line.startswith("#"))]
    users: dict[int, list] = {}
    for r in rows:
        users.setdefault(int(r["user"]), []).append(
            (complex(float(r["re_alpha"]), float(r["im_alpha"])), float(r["theta_rad"])))
    return [MultipathChannel([p[0] for p in paths], [p[1] for p in paths], user=u)
            for u, paths in sorted(users.items())]
