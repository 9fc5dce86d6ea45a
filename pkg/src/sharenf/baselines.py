"""Reference estimators: one-shot 2D-OMP on compressed data and fully digital
near-field 2D-MUSIC."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compression import CombinerBank, _check
from .geometry import ArrayConfig, GridSpec
from .peaks import greedy_peaks
from .share import Dictionary, EstimateSet, build_dictionary, estimates_from_support, mmv_omp
from .signal import as_matrix, steering_matrix


class EstimatorError(RuntimeError):
    """An estimator could not produce a result for this trial."""


def global_dictionary(bank: CombinerBank, cfg: ArrayConfig, grid: GridSpec) -> Dictionary:
    """Compressed atoms over the full ``G_theta x G_r`` grid."""
    _check(bank, cfg)
    return build_dictionary(bank, cfg, grid.angles, grid.ranges)


def omp2d_estimate(bank: CombinerBank, cfg: ArrayConfig, Ytil, global_grid: GridSpec, L: int,
                   dictionary: Dictionary | None = None) -> EstimateSet:
    """OMP over the global grid. Pass ``dictionary`` to reuse a prebuilt one."""
    if dictionary is None:
        dictionary = global_dictionary(bank, cfg, global_grid)
    support, S, res = mmv_omp(Ytil, dictionary, L)
    return estimates_from_support(dictionary, support, S, res)


@dataclass
class MusicSpectrum2D:
    angles: np.ndarray
    ranges: np.ndarray
    values: np.ndarray   # G_theta x G_r


def music_steering(cfg: ArrayConfig, grid: GridSpec) -> np.ndarray:
    """Unit-norm steering vectors for the grid, ``M x (G_theta*G_r)`` angle-major."""
    T, R = np.meshgrid(grid.angles, grid.ranges, indexing="ij")
    A = steering_matrix(cfg, T.ravel(), R.ravel())
    return A / np.linalg.norm(A, axis=0)


def sample_covariance(Y) -> np.ndarray:
    Y = as_matrix(Y)
    return (Y @ Y.conj().T) / Y.shape[1]


def noise_subspace(R: np.ndarray, L: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigen-split of a Hermitian covariance.

    Returns ``(eigenvalues_desc, E_s, E_n)``: eigenvalues sorted in descending
    order, the ``L`` dominant eigenvectors and the remaining ``M - L``.
    """
    M = R.shape[0]
    if not 1 <= L < M:
        raise ValueError(f"need 1 <= L < M, got L={L}, M={M}")
    try:
        w, V = np.linalg.eigh(R)
    except np.linalg.LinAlgError as exc:
        raise EstimatorError(f"eigendecomposition failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EstimatorError("non-finite eigenvalues")
    w, V = w[::-1], V[:, ::-1]
    return w, V[:, :L], V[:, L:]


def music2d_spectrum(cfg: ArrayConfig, Y, grid: GridSpec, L: int,
                     steering: np.ndarray | None = None,
                     En: np.ndarray | None = None) -> MusicSpectrum2D:
    """Pseudo-spectrum ``1 / ||E_n^H a||^2`` with unit-norm ``a`` over the grid."""
    if En is None:
        En = noise_subspace(sample_covariance(Y), L)[2]
    if steering is None:
        steering = music_steering(cfg, grid)
    proj = np.sum(np.abs(En.conj().T @ steering) ** 2, axis=0)
    with np.errstate(divide="ignore"):
        values = 1.0 / proj
    return MusicSpectrum2D(grid.angles, grid.ranges, values.reshape(grid.G_theta, grid.G_r))


def music2d_estimate(cfg: ArrayConfig, Y, global_grid: GridSpec, L: int,
                     steering: np.ndarray | None = None,
                     return_spectrum: bool = False):
    """Near-field MUSIC on the fully digital snapshots.

    Peaks are the ``L`` largest 8-neighborhood local maxima of the
    pseudo-spectrum with a one-cell exclusion window. Waveforms are fitted by
    least squares on the (unnormalized) steering vectors of the picks.
    """
    Y = as_matrix(Y)
    if L >= cfg.M:
        raise ValueError(f"MUSIC needs L < M, got L={L}, M={cfg.M}")
    spec = music2d_spectrum(cfg, Y, global_grid, L, steering)
    peaks = greedy_peaks(spec.values, L, guard=1)
    if len(peaks) < L:
        raise EstimatorError(f"only {len(peaks)} MUSIC peaks for L={L}")
    thetas = np.array([spec.angles[i] for i, _ in peaks])
    ranges = np.array([spec.ranges[j] for _, j in peaks])
    A = steering_matrix(cfg, thetas, ranges)
    X, *_ = np.linalg.lstsq(A, Y, rcond=None)
    est = EstimateSet(thetas, ranges, X, float(np.linalg.norm(Y - A @ X)))
    return (est, spec) if return_spectrum else est
