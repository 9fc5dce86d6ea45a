"""Two-stage hierarchical angle-range estimation from compressed subarray data.

Stage 1 sums per-subarray power spectra computed with a range-free subarray
response, which discards the inter-subarray phase and so the grating lobes of
the sparse aperture. Stage 2 runs multiple-measurement OMP over a dictionary of
compressed near-field atoms restricted to small windows around the Stage-1
peaks.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .compression import CombinerBank, _check, compress_atoms, subarray_blocks
from .geometry import ArrayConfig, GridSpec
from .peaks import greedy_peaks
from .signal import as_matrix, farfield_sub_steering, steering_matrix

log = logging.getLogger(__name__)


@dataclass
class Spectrum1D:
    """Nonnegative power values on an angle grid (degrees)."""

    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.angles.shape != self.values.shape:
            raise ValueError("angles and values differ in length")

    def __len__(self):
        return len(self.angles)


@dataclass
class Dictionary:
    """Compressed steering atoms with their ``(theta_deg, range_m)`` labels."""

    atoms: np.ndarray
    labels: np.ndarray
    norms: np.ndarray = field(init=False)

    def __post_init__(self):
        self.atoms = np.asarray(self.atoms, dtype=complex)
        self.labels = np.asarray(self.labels, dtype=float).reshape(-1, 2)
        if self.atoms.shape[1] != len(self.labels):
            raise ValueError("one label per atom required")
        self.norms = np.linalg.norm(self.atoms, axis=0)

    @property
    def G(self) -> int:
        return self.atoms.shape[1]


@dataclass
class EstimateSet:
    """Estimated ``(theta, range)`` pairs, recovered waveforms, fit residual."""

    thetas: np.ndarray
    ranges: np.ndarray
    waveforms: np.ndarray
    residual_norm: float = 0.0

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.ranges = np.asarray(self.ranges, dtype=float)

    def __len__(self):
        return len(self.thetas)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return [(float(t), float(r)) for t, r in zip(self.thetas, self.ranges)]


@dataclass(frozen=True)
class ShareParams:
    """Tuning knobs. Defaults: 41-point coarse grid on [-60, 60], +-3 degree
    windows of 14 points, 64 ranges on [1, 9] m."""

    coarse_grid: GridSpec = GridSpec(-60.0, 60.0, 41)
    guard_bins: int = 1
    delta_theta: float = 3.0
    G_delta: int = 14
    range_grid: GridSpec = GridSpec()
    L: int = 1


def stage1_spectrum(bank: CombinerBank, cfg: ArrayConfig, Ytil, coarse_grid) -> Spectrum1D:
    """Non-coherent sum over subarrays of ``|| a_sub^H Phi_p^H Ytil_p ||^2``.

    ``coarse_grid`` is a GridSpec (its angles are used) or an array of angles.
    """
    _check(bank, cfg)
    angles = coarse_grid.angles if isinstance(coarse_grid, GridSpec) else np.asarray(coarse_grid, float)
    blocks = subarray_blocks(bank, Ytil)            # P x K x N
    A_sub = farfield_sub_steering(cfg, angles)      # M0 x G
    total = np.zeros(len(angles))
    for p in range(bank.P):
        # (Phi_p a_sub)^H Ytil_p, one row per grid angle
        B = bank.subarray_weights(p) @ A_sub        # K x G
        proj = B.conj().T @ blocks[p]               # G x N
        total += np.sum(np.abs(proj) ** 2, axis=1)
    return Spectrum1D(angles, total)


def pick_peaks(spec: Spectrum1D, L: int, guard_bins: int = 1) -> list[float]:
    """Angles of the ``L`` largest local maxima (see :func:`greedy_peaks`)."""
    if len(spec) == 0:
        raise ValueError("empty spectrum")
    return [float(spec.angles[i]) for (i,) in greedy_peaks(spec.values, L, guard_bins)]


def build_dictionary(bank: CombinerBank, cfg: ArrayConfig, angles, ranges) -> Dictionary:
    """Compressed atoms for every (angle, range) pair, angle-major order."""
    angles = np.asarray(angles, dtype=float)
    ranges = np.asarray(ranges, dtype=float)
    T, R = np.meshgrid(angles, ranges, indexing="ij")
    T, R = T.ravel(), R.ravel()
    atoms = compress_atoms(bank, steering_matrix(cfg, T, R))
    return Dictionary(atoms, np.column_stack([T, R]))


def refined_angles(coarse_angles, delta_theta: float, G_delta: int,
                   theta_min: float = -np.inf, theta_max: float = np.inf) -> np.ndarray:
    """Sorted union of ``G_delta``-point windows of half-width ``delta_theta``
    around each coarse angle, each window clipped to ``[theta_min, theta_max]``."""
    coarse_angles = list(coarse_angles)
    if not coarse_angles:
        raise ValueError("no coarse angles given")
    if G_delta < 2:
        raise ValueError("G_delta must be >= 2")
    windows = []
    for c in coarse_angles:
        lo = max(c - delta_theta, theta_min)
        hi = min(c + delta_theta, theta_max)
        windows.append(np.linspace(lo, hi, G_delta))
    return np.unique(np.concatenate(windows))


def build_refined_dictionary(bank: CombinerBank, cfg: ArrayConfig, coarse_angles,
                             delta_theta: float, G_delta: int, range_grid: GridSpec,
                             angle_limits: tuple[float, float] | None = None) -> Dictionary:
    """Stage-2 dictionary over the union of the local windows and all ranges.

    ``angle_limits`` defaults to the angle span of ``range_grid``.
    """
    lo, hi = angle_limits or (range_grid.theta_min, range_grid.theta_max)
    angles = refined_angles(coarse_angles, delta_theta, G_delta, lo, hi)
    return build_dictionary(bank, cfg, angles, range_grid.ranges)


def mmv_omp(Ytil, dictionary: Dictionary, L: int,
            rank_tol: float = 1e-10) -> tuple[list[int], np.ndarray, float]:
    """Multiple-measurement OMP with exactly ``L`` selections.

    Each iteration scores unselected atoms by ``||psi^H R||_2 / ||psi||``,
    takes the best (lowest index on ties), refits all selected atoms jointly
    by least squares and updates the residual. An atom that is numerically
    dependent on the already selected ones is skipped in favor of the next best.

    Returns:
        ``(support, S, residual_norm)`` with ``S`` the ``L x N`` least-squares
        coefficients in support order.
    """
    Y = as_matrix(Ytil)
    Psi = dictionary.atoms
    G = dictionary.G
    if L < 1 or L > G:
        raise ValueError(f"need 1 <= L <= G, got L={L}, G={G}")
    norms = dictionary.norms
    if np.any(norms == 0):
        raise ValueError("dictionary contains a zero atom")
    available = np.ones(G, dtype=bool)
    support: list[int] = []
    R = Y
    S = np.zeros((0, Y.shape[1]), dtype=complex)
    Q = np.zeros((Psi.shape[0], 0), dtype=complex)  # orthonormal basis of selection
    while len(support) < L:
        if not available.any():
            raise ValueError("ran out of linearly independent atoms")
        scores = np.linalg.norm(Psi.conj().T @ R, axis=1) / norms
        scores[~available] = -np.inf
        g = int(np.argmax(scores))
        available[g] = False
        psi = Psi[:, g]
        resid = psi - Q @ (Q.conj().T @ psi)
        rn = np.linalg.norm(resid)
        if rn <= rank_tol * norms[g]:
            log.info("skipping atom %d: dependent on current support", g)
            continue
        Q = np.column_stack([Q, resid / rn])
        support.append(g)
        sel = Psi[:, support]
        S = np.linalg.lstsq(sel, Y, rcond=None)[0]
        R = Y - sel @ S
    return support, S, float(np.linalg.norm(R))


def estimates_from_support(dictionary: Dictionary, support, S, residual_norm) -> EstimateSet:
    labels = dictionary.labels[list(support)]
    return EstimateSet(labels[:, 0], labels[:, 1], S, residual_norm)


def share_estimate(bank: CombinerBank, cfg: ArrayConfig, Ytil,
                   params: ShareParams = ShareParams()) -> EstimateSet:
    """Run both stages and return the ``L`` refined (angle, range) estimates."""
    spec = stage1_spectrum(bank, cfg, Ytil, params.coarse_grid)
    coarse = pick_peaks(spec, params.L, params.guard_bins)
    if len(coarse) < params.L:
        log.info("stage 1 found %d of %d peaks", len(coarse), params.L)
    grid = params.coarse_grid
    dictionary = build_refined_dictionary(bank, cfg, coarse, params.delta_theta, params.G_delta,
                                          params.range_grid, (grid.theta_min, grid.theta_max))
    support, S, res = mmv_omp(Ytil, dictionary, params.L)
    return estimates_from_support(dictionary, support, S, res)
