"""Sparse modular linear array geometry and search-grid descriptions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

SPEED_OF_LIGHT = 299792458.0

#: Angle conventions. ``"broadside"`` measures azimuth from the array normal
#: (source at ``[r sin(theta), r cos(theta), 0]``) so that ``[-90, 90]`` is
#: unambiguous. ``"axis"`` measures it from the array axis (source at
#: ``[r cos(theta), r sin(theta), 0]``); in that convention ``theta`` and
#: ``-theta`` produce identical data.
ANGLE_CONVENTIONS = ("broadside", "axis")


@dataclass(frozen=True)
class ArrayConfig:
    """Linear array of ``P`` subarrays with ``M0`` elements each, along x.

    Args:
        P: number of subarrays.
        M0: elements per subarray.
        d: intra-subarray element spacing in meters.
        dp: spacing between the first elements of adjacent subarrays, meters.
        fc: carrier frequency in Hz.
        angle_convention: one of :data:`ANGLE_CONVENTIONS`.
    """

    P: int
    M0: int
    d: float
    dp: float
    fc: float
    angle_convention: str = "broadside"

    def __post_init__(self):
        if self.P < 1 or self.M0 < 1:
            raise ValueError("P and M0 must be >= 1")
        if not self.d > 0:
            raise ValueError("d must be positive")
        if not self.fc > 0:
            raise ValueError("fc must be positive")
        # tolerate round-off when dp is given as M0*d through a wavelength
        if self.dp < self.M0 * self.d * (1 - 1e-12):
            raise ValueError("dp must be >= M0*d (subarrays may not overlap)")
        if self.angle_convention not in ANGLE_CONVENTIONS:
            raise ValueError(f"unknown angle_convention {self.angle_convention!r}")

    @classmethod
    def default(cls, **overrides) -> "ArrayConfig":
        """P=4, M0=16 at 60.48 GHz with d = lambda/2 and dp = 16 lambda."""
        fc = overrides.pop("fc", 60.48e9)
        lam = SPEED_OF_LIGHT / fc
        kw = dict(P=4, M0=16, d=lam / 2, dp=16 * lam, fc=fc)
        kw.update(overrides)
        return cls(**kw)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.fc

    @property
    def M(self) -> int:
        return self.P * self.M0

    @property
    def aperture(self) -> float:
        return (self.P - 1) * self.dp + (self.M0 - 1) * self.d

    @property
    def rayleigh_distance(self) -> float:
        return 2.0 * self.aperture ** 2 / self.wavelength

    @property
    def is_contiguous(self) -> bool:
        return bool(np.isclose(self.dp, self.M0 * self.d, rtol=1e-12, atol=0.0))

    @cached_property
    def x_positions(self) -> np.ndarray:
        """x coordinates of all ``M`` elements, flattened as ``(p-1)*M0 + m``."""
        p = np.arange(self.P)[:, None]
        m = np.arange(self.M0)[None, :]
        x = (p * self.dp + m * self.d).ravel()
        x.setflags(write=False)
        return x


def element_position(cfg: ArrayConfig, p: int, m: int) -> np.ndarray:
    """Position ``[(p-1)dp + m d, 0, 0]`` of element ``m`` of subarray ``p``.

    ``p`` is 1-based and ``m`` is 0-based.
    """
    if not 1 <= p <= cfg.P:
        raise IndexError(f"subarray index p={p} outside 1..{cfg.P}")
    if not 0 <= m < cfg.M0:
        raise IndexError(f"element index m={m} outside 0..{cfg.M0 - 1}")
    return np.array([(p - 1) * cfg.dp + m * cfg.d, 0.0, 0.0])


def aperture_and_rayleigh(cfg: ArrayConfig) -> tuple[float, float]:
    """Return the aperture ``D`` and the Rayleigh distance ``2 D^2 / lambda``."""
    return cfg.aperture, cfg.rayleigh_distance


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear angle/range grid. Angles in degrees, ranges in meters."""

    theta_min: float = -60.0
    theta_max: float = 60.0
    G_theta: int = 121
    r_min: float = 1.0
    r_max: float = 9.0
    G_r: int = 64

    def __post_init__(self):
        if not self.theta_min < self.theta_max:
            raise ValueError("theta_min must be < theta_max")
        if not self.r_min < self.r_max:
            raise ValueError("r_min must be < r_max")
        if self.G_theta < 2:
            raise ValueError("G_theta must be >= 2")
        if self.G_r < 1:
            raise ValueError("G_r must be >= 1")
        if self.r_min <= 0:
            raise ValueError("r_min must be positive")

    @property
    def angles(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.G_theta)

    @property
    def ranges(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.G_r)

    @property
    def angle_step(self) -> float:
        return (self.theta_max - self.theta_min) / (self.G_theta - 1)

    @property
    def range_step(self) -> float:
        if self.G_r < 2:
            return 0.0
        return (self.r_max - self.r_min) / (self.G_r - 1)
