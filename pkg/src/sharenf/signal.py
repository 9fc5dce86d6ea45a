"""Near-field data synthesis and steering vectors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import ArrayConfig


@dataclass(frozen=True)
class SourceTruth:
    """Point source at azimuth ``theta`` (degrees) and range ``r`` (meters)."""

    theta: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"source range must be positive, got {self.r}")
        if not -90.0 < self.theta < 90.0:
            raise ValueError(f"source angle must lie in (-90, 90), got {self.theta}")


@dataclass(frozen=True)
class Scenario:
    """Sources plus acquisition settings for one realization.

    ``snr_db = math.inf`` disables the noise term.
    """

    sources: tuple[SourceTruth, ...]
    N: int = 32
    snr_db: float = 20.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        if len(self.sources) < 1:
            raise ValueError("a scenario needs at least one source")
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def L(self) -> int:
        return len(self.sources)

    @property
    def noise_variance(self) -> float:
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0)


@dataclass
class SnapshotMatrix:
    """Complex snapshot matrix tagged as fully digital (``M x N``) or
    compressed (``PK x N``)."""

    data: np.ndarray
    kind: str = "digital"

    def __post_init__(self):
        if self.kind not in ("digital", "compressed"):
            raise ValueError(f"unknown snapshot kind {self.kind!r}")
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim != 2:
            raise ValueError("snapshot matrix must be 2-D")

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    @property
    def shape(self):
        return self.data.shape


def as_matrix(Y) -> np.ndarray:
    """Plain 2-D complex array from a SnapshotMatrix or array-like."""
    if isinstance(Y, SnapshotMatrix):
        return Y.data
    Y = np.asarray(Y, dtype=complex)
    if Y.ndim == 1:
        Y = Y[:, None]
    return Y


def direction_cosine(cfg: ArrayConfig, theta_deg) -> np.ndarray:
    """Cosine of the angle between the array axis and the source direction."""
    t = np.deg2rad(np.asarray(theta_deg, dtype=float))
    return np.sin(t) if cfg.angle_convention == "broadside" else np.cos(t)


def source_xy(cfg: ArrayConfig, theta_deg, r) -> tuple[np.ndarray, np.ndarray]:
    t = np.deg2rad(np.asarray(theta_deg, dtype=float))
    r = np.asarray(r, dtype=float)
    if cfg.angle_convention == "broadside":
        return r * np.sin(t), r * np.cos(t)
    return r * np.cos(t), r * np.sin(t)


def steering_matrix(cfg: ArrayConfig, thetas, ranges) -> np.ndarray:
    """Near-field steering vectors for paired ``(thetas[i], ranges[i])``.

    Returns an ``M x n`` array. Entry ``(i, col)`` is
    ``(r / r_i) * exp(-j 2 pi (r_i - r) / lambda)`` where ``r_i`` is the
    distance from element ``i`` to the source.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    ranges = np.atleast_1d(np.asarray(ranges, dtype=float))
    thetas, ranges = np.broadcast_arrays(thetas, ranges)
    if np.any(ranges <= 0):
        raise ValueError("source range must be positive")
    sx, sy = source_xy(cfg, thetas, ranges)
    x = cfg.x_positions[:, None]
    dist = np.hypot(x - sx[None, :], sy[None, :])
    k = 2.0 * np.pi / cfg.wavelength
    return (ranges / dist) * np.exp(-1j * k * (dist - ranges))


def nearfield_steering(cfg: ArrayConfig, theta: float, r: float) -> np.ndarray:
    """Length-``M`` near-field steering vector; the reference element maps to 1."""
    if not r > 0:
        raise ValueError(f"source range must be positive, got {r}")
    return steering_matrix(cfg, theta, r)[:, 0]


def farfield_sub_steering(cfg: ArrayConfig, theta) -> np.ndarray:
    """Range-free subarray response ``exp(j 2 pi m d u / lambda)``, ``m < M0``.

    ``theta`` may be a scalar (returns length ``M0``) or an array of ``G``
    angles (returns ``M0 x G``).
    """
    u = direction_cosine(cfg, theta)
    m = np.arange(cfg.M0)
    phase = (2.0 * np.pi / cfg.wavelength) * cfg.d * np.multiply.outer(m, u)
    return np.exp(1j * phase)


def synthesize(cfg: ArrayConfig, sc: Scenario,
               rng: np.random.Generator | None = None) -> tuple[SnapshotMatrix, np.ndarray]:
    """Draw ``Y = A X + V`` for the scenario.

    Waveforms and noise are unit-power and ``10^(-snr/10)``-power circular
    complex Gaussians, drawn in that order from ``numpy.random.default_rng``
    (PCG64) seeded with ``sc.seed`` unless a generator is passed in.

    Returns:
        ``(Y, X)`` with ``Y`` an ``M x N`` digital SnapshotMatrix and ``X``
        the ``L x N`` waveform matrix.
    """
    if sc.L > cfg.M:
        raise ValueError("more sources than array elements")
    if rng is None:
        rng = np.random.default_rng(sc.seed)
    A = steering_matrix(cfg, [s.theta for s in sc.sources], [s.r for s in sc.sources])
    X = _complex_gaussian(rng, (sc.L, sc.N))
    Y = A @ X
    var = sc.noise_variance
    if var > 0:
        Y = Y + math.sqrt(var) * _complex_gaussian(rng, (cfg.M, sc.N))
    return SnapshotMatrix(Y, "digital"), X


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def fresnel_check(cfg: ArrayConfig, r: float) -> tuple[bool, bool]:
    """Whether range ``r`` is in a subarray's far field and the full array's
    near field. Purely diagnostic."""
    if not r > 0:
        raise ValueError("range must be positive")
    sub_boundary = 2.0 * ((cfg.M0 - 1) * cfg.d) ** 2 / cfg.wavelength
    return bool(r >= sub_boundary), bool(r <= cfg.rayleigh_distance)


def sources_from_pairs(pairs: Sequence[tuple[float, float]]) -> tuple[SourceTruth, ...]:
    return tuple(SourceTruth(float(t), float(r)) for t, r in pairs)
