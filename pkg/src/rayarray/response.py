"""Element patterns, sULA responses and combined port outputs.

All functions work in linear amplitude; the dB pattern parameters are
converted once in :func:`element_gain`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .geometry import HbfCodebook, RaaGeometry

ISOTROPIC = "isotropic"
DIRECTIONAL = "directional_3gpp"

# below this |sin(pi*u/2)| the kernel ratio is replaced by its limit
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class AntennaPattern:
    """Element radiation pattern.

    ``directional_3gpp`` is the parabolic-in-dB model
    ``G0 - min(12 (psi/theta_3dB)^2, A_max)``; ``isotropic`` is a flat
    ``G0`` in every direction.
    """

    kind: str = ISOTROPIC
    g0_db: float = 0.0
    theta_3db: float = math.pi
    a_max_db: float = 30.0

    def __post_init__(self):
        if self.kind not in (ISOTROPIC, DIRECTIONAL):
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == DIRECTIONAL and (self.theta_3db <= 0 or self.a_max_db <= 0):
            raise ValueError("directional pattern needs theta_3db > 0 and a_max_db > 0")

    @classmethod
    def isotropic(cls, g0_db: float = 0.0) -> "AntennaPattern":
        return cls(ISOTROPIC, g0_db)

    @classmethod
    def directional(cls, g0_db: float, theta_3db: float,
                    a_max_db: float = 30.0) -> "AntennaPattern":
        return cls(DIRECTIONAL, g0_db, theta_3db, a_max_db)


# Reference element settings: the RAA element only has to cover a narrow
# sector so it gets a tighter beam with the same radiated power.
RAA_DIRECTIONAL = AntennaPattern.directional(5.1335, 0.3 * math.pi)
HBF_DIRECTIONAL = AntennaPattern.directional(0.0, math.pi)
ISOTROPIC_MATCHED = AntennaPattern.isotropic(-2.816)


def reference_patterns(kind: str) -> tuple[AntennaPattern, AntennaPattern]:
    """``(raa_pattern, hbf_pattern)`` for ``kind`` in {'isotropic', 'directional'}."""
    if kind == "isotropic":
        return ISOTROPIC_MATCHED, ISOTROPIC_MATCHED
    if kind in ("directional", DIRECTIONAL):
        return RAA_DIRECTIONAL, HBF_DIRECTIONAL
    raise ValueError(f"unknown pattern kind {kind!r}")


def element_gain(pattern: AntennaPattern, psi):
    """Linear power gain of an element at angle ``psi`` off its boresight."""
    psi = np.asarray(psi, dtype=float)
    if pattern.kind == ISOTROPIC:
        out = np.full(psi.shape, 10.0 ** (pattern.g0_db / 10.0))
    else:
        wrapped = np.mod(psi + np.pi, 2 * np.pi) - np.pi
        att = np.minimum(12.0 * (wrapped / pattern.theta_3db) ** 2, pattern.a_max_db)
        out = 10.0 ** ((pattern.g0_db - att) / 10.0)
    return out if out.ndim else float(out)


def dirichlet_kernel(M: int, u):
    """Sum of ``M`` unit phasors ``exp(j*pi*m*u)``, ``m = 0..M-1``, in closed form.

    At the singular points ``u = 0, +-2`` the ratio
    ``sin(pi*M*u/2) / sin(pi*u/2)`` is replaced by its limit
    ``M*cos(pi*M*u/2) / cos(pi*u/2)``.
    """
    u = np.asarray(u, dtype=float)
    half = 0.5 * np.pi * u
    den = np.sin(half)
    singular = np.abs(den) < _SINGULAR_TOL
    safe_den = np.where(singular, 1.0, den)
    ratio = np.where(
        singular,
        M * np.cos(M * half) / np.cos(half),
        np.sin(M * half) / safe_den,
    )
    out = np.exp(1j * (M - 1) * half) * ratio
    return out if out.ndim else complex(out)


def sula_response(geom: RaaGeometry, n: int, theta: float) -> np.ndarray:
    """Element-wise response of ray ``n``, ``exp(j*pi*m*sin(theta - eta_n))``."""
    eta_n = geom.orientation(n)
    m = np.arange(geom.M)
    return np.exp(1j * np.pi * m * math.sin(theta - eta_n))


def ray_reference_gain(geom: RaaGeometry, pattern: AntennaPattern, n: int,
                       theta: float) -> complex:
    """Response of the first element of ray ``n`` including its radiation pattern."""
    rel = theta - geom.orientation(n)
    phase = 2 * math.pi / geom.wavelength * geom.offset * math.sin(rel)
    return complex(np.exp(1j * phase) * math.sqrt(element_gain(pattern, rel)))


@dataclass
class BeamResponse:
    theta: float
    values: np.ndarray
    architecture: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)

    def __len__(self):
        return len(self.values)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def raa_response_matrix(geom: RaaGeometry, pattern: AntennaPattern, thetas) -> np.ndarray:
    """Port outputs for every angle in ``thetas``, shape (len(thetas), N)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    rel = thetas[:, None] - geom.eta[None, :]
    s = np.sin(rel)
    b = (np.exp(2j * np.pi / geom.wavelength * geom.offset * s)
         * np.sqrt(element_gain(pattern, rel)))
    return b * dirichlet_kernel(geom.M, s)


def hbf_response_matrix(codebook: HbfCodebook, pattern: AntennaPattern,
                        thetas) -> np.ndarray:
    """Codeword outputs for every angle in ``thetas``, shape (len(thetas), N')."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    u = np.sin(thetas)[:, None] - codebook.sines[None, :]
    g = np.sqrt(element_gain(pattern, thetas))[:, None]
    return g * dirichlet_kernel(codebook.M, u)


def raa_output(geom: RaaGeometry, pattern: AntennaPattern, theta: float) -> BeamResponse:
    """Outputs of all ``N`` ray combiners for a unit plane wave from ``theta``."""
    return BeamResponse(float(theta), raa_response_matrix(geom, pattern, theta)[0], "raa")


def hbf_output(codebook: HbfCodebook, pattern: AntennaPattern, theta: float) -> BeamResponse:
    """Outputs of all DFT codewords for a unit plane wave from ``theta``."""
    return BeamResponse(float(theta), hbf_response_matrix(codebook, pattern, theta)[0], "hbf")


Architecture = Union[RaaGeometry, HbfCodebook]


@dataclass
class SweepTable:
    """Magnitude response over an angle grid (one row per grid angle)."""

    architecture: str
    theta: np.ndarray
    magnitudes: np.ndarray
    out_of_coverage: np.ndarray = field(default=None)

    @property
    def max_magnitude(self) -> np.ndarray:
        return self.magnitudes.max(axis=1)

    @property
    def max_magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(self.max_magnitude)

    def rows(self):
        for i, t in enumerate(self.theta):
            yield float(t), self.magnitudes[i], float(self.max_magnitude_db[i])

    def to_csv(self, header_lines=()) -> str:
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        buf.write("# port magnitudes are linear |r|; max_magnitude_dB = 20*log10(max |r|)\n")
        n_flag = int(np.count_nonzero(self.out_of_coverage))
        buf.write(f"# out_of_coverage_points = {n_flag}\n")
        w = csv.writer(buf, lineterminator="\n")
        ports = self.magnitudes.shape[1]
        w.writerow(["theta_rad"] + [f"port_{p}" for p in range(ports)] + ["max_magnitude_dB"])
        for t, mags, mdb in self.rows():
            w.writerow([repr(t)] + [repr(float(m)) for m in mags] + [repr(mdb)])
        return buf.getvalue()


def beam_pattern_sweep(architecture: Architecture, pattern: AntennaPattern,
                       theta_grid) -> SweepTable:
    """Per-port and max-over-port magnitudes over ``theta_grid``.

    RAA angles beyond ``+-eta_max`` are evaluated anyway and flagged in
    ``out_of_coverage``.
    """
    theta = np.asarray(theta_grid, dtype=float).ravel()
    if theta.size == 0:
        raise ValueError("theta_grid must be non-empty")
    if isinstance(architecture, RaaGeometry):
        resp = raa_response_matrix(architecture, pattern, theta)
        limit = architecture.max_orientation
        tag = "raa"
    elif isinstance(architecture, HbfCodebook):
        resp = hbf_response_matrix(architecture, pattern, theta)
        limit = 0.5 * np.pi
        tag = "hbf"
    else:
        raise TypeError(f"unsupported architecture {type(architecture).__name__}")
    flags = np.abs(theta) > limit + 1e-12
    return SweepTable(tag, theta, np.abs(resp), flags)
