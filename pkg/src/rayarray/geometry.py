"""RAA geometry design and the DFT-codebook HBF baseline.

Lengths are in units of the wavelength unless a different ``wavelength``
is passed. Ray indices follow the symmetric convention
``n = -(N-1)/2, ..., (N-1)/2``; arrays indexed by *port* use
``port = n + (N-1)/2`` so port 0 is the most negative orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConstraintViolationError, InvalidArgumentError

# slack for comparing a user-supplied offset against the closed-form bound
_D_RTOL = 1e-12


def _angular_step(M: int) -> float:
    return math.asin(2.0 / M)


def design_orientations(M: int, eta_max: float) -> tuple[int, np.ndarray]:
    """Ray count and orientations for ``M``-element rays.

    Adjacent rays are spaced by ``arcsin(2/M)`` so the peak of each ray's
    main lobe sits on the first null of its neighbours.

    Parameters
    ----------
    M : int
        Elements per ray, at least 2.
    eta_max : float
        Maximum orientation in radians, in ``(0, pi]``.

    Returns
    -------
    N : int
        Odd ray count ``2*floor(eta_max/arcsin(2/M)) + 1``.
    eta : ndarray, shape (N,)
        Orientations in port order, ``eta[port] = n*arcsin(2/M)``.
    """
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f"M must be an integer >= 2, got {M!r}")
    if not (0.0 < eta_max <= math.pi):
        raise InvalidArgumentError(
            f"eta_max must lie in (0, pi], got {eta_max!r}")
    step = _angular_step(int(M))
    half = int(math.floor(eta_max / step))
    N = 2 * half + 1
    eta = np.arange(-half, half + 1) * step
    return N, eta


def min_ray_spacing(M: int, wavelength: float = 1.0) -> float:
    """Smallest ray offset ``D`` keeping adjacent first elements >= lambda/2 apart."""
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f"M must be an integer >= 2, got {M!r}")
    return wavelength / (4.0 * math.sin(0.5 * _angular_step(int(M))))


@dataclass(frozen=True)
class RaaGeometry:
    """Immutable description ``(N, M, D, eta)`` of a ray antenna array."""

    elements_per_ray: int
    ray_count: int
    orientations: tuple[float, ...]
    offset: float
    max_orientation: float
    wavelength: float = 1.0

    @property
    def M(self) -> int:
        return self.elements_per_ray

    @property
    def N(self) -> int:
        return self.ray_count

    @property
    def eta(self) -> np.ndarray:
        return np.asarray(self.orientations)

    @property
    def half_count(self) -> int:
        return (self.ray_count - 1) // 2

    @property
    def ray_indices(self) -> np.ndarray:
        """Signed ray indices in port order."""
        return np.arange(-self.half_count, self.half_count + 1)

    def port(self, n: int) -> int:
        """Port (array position) of signed ray index ``n``."""
        if int(n) != n or abs(n) > self.half_count:
            raise IndexError(
                f"ray index {n!r} outside [-{self.half_count}, {self.half_count}]")
        return int(n) + self.half_count

    def orientation(self, n: int) -> float:
        return self.orientations[self.port(n)]

    def element_positions(self) -> np.ndarray:
        """Cartesian (x, y) of every element, shape (N, M, 2), in wavelengths.

        Ray ``n`` points along the +y axis rotated by ``eta_n``; its first
        element sits at distance ``D`` from the origin and the rest follow at
        half-wavelength spacing.
        """
        r = self.offset + 0.5 * self.wavelength * np.arange(self.M)
        eta = self.eta[:, None]
        # eta_n < 0 lies in the first quadrant
        x = -r[None, :] * np.sin(eta)
        y = r[None, :] * np.cos(eta)
        return np.stack([x, y], axis=-1)

    def to_text(self) -> str:
        """Plain ``key = value`` dump used for config echo in result files."""
        lines = [
            f"M = {self.M}",
            f"N = {self.N}",
            f"D = {self.offset!r}",
            f"eta_max = {self.max_orientation!r}",
            f"lambda = {self.wavelength!r}",
            "eta = " + ",".join(repr(float(e)) for e in self.orientations),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RaaGeometry":
        kv = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
        geom = build_raa(int(kv["M"]), float(kv["eta_max"]),
                         float(kv["D"]), float(kv.get("lambda", 1.0)))
        if "N" in kv and int(kv["N"]) != geom.N:
            raise ConstraintViolationError(
                f"N = {kv['N']} inconsistent with M and eta_max (expected {geom.N})")
        return geom


def build_raa(M: int, eta_max: float, D: Optional[float] = None,
              wavelength: float = 1.0) -> RaaGeometry:
    """Design a full RAA; ``D`` defaults to the minimum admissible offset."""
    N, eta = design_orientations(M, eta_max)
    d_min = min_ray_spacing(M, wavelength)
    if D is None:
        D = d_min
    elif D < d_min * (1.0 - _D_RTOL):
        raise ConstraintViolationError(
            f"offset D={D} is below the minimum {d_min:.6f} for M={M}")
    return RaaGeometry(
        elements_per_ray=int(M),
        ray_count=N,
        orientations=tuple(float(e) for e in eta),
        offset=float(D),
        max_orientation=float(eta_max),
        wavelength=float(wavelength),
    )


@dataclass(frozen=True)
class HbfCodebook:
    """DFT codebook for an ``M``-element half-wavelength ULA."""

    elements: int
    codeword_angles: tuple[float, ...]

    @property
    def M(self) -> int:
        return self.elements

    @property
    def codeword_count(self) -> int:
        return len(self.codeword_angles)

    @property
    def theta(self) -> np.ndarray:
        return np.asarray(self.codeword_angles)

    @property
    def sines(self) -> np.ndarray:
        """``sin(theta_n) = 2n/M`` computed exactly, not via sin(arcsin(.))."""
        half = self.M // 2
        return np.arange(-half, half) / half

    def matrix(self) -> np.ndarray:
        """Codeword matrix ``A_DFT``, shape (M, N')."""
        m = np.arange(self.M)[:, None]
        return np.exp(1j * np.pi * m * self.sines[None, :])


def build_hbf_codebook(M: int) -> HbfCodebook:
    """Full DFT codebook, ``theta_n = arcsin(2n/M)`` for ``n = -M/2 .. M/2-1``."""
    if int(M) != M or M < 2 or M % 2:
        raise InvalidArgumentError(f"M must be an even integer >= 2, got {M!r}")
    half = int(M) // 2
    angles = tuple(math.asin(n / half) for n in range(-half, half))
    return HbfCodebook(elements=int(M), codeword_angles=angles)
