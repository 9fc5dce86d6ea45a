"""Constant-modulus analog combiners and the compressive measurement matrix.

Rows of the stacked measurement matrix are ordered instant-major: row
``k * P + p`` (0-based) holds ``w_{k,p}^T`` on the columns of subarray ``p``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import ArrayConfig
from .signal import SnapshotMatrix, as_matrix

POLICIES = ("first-k", "random")


def dft_matrix(M0: int) -> np.ndarray:
    """Unnormalized ``M0 x M0`` DFT matrix, entries ``exp(-j 2 pi k m / M0)``."""
    k = np.arange(M0)
    return np.exp(-2j * np.pi * np.outer(k, k) / M0)


@dataclass(eq=False)
class CombinerBank:
    """Analog combining weights for ``K`` measurement instants.

    Attributes:
        weights: ``K x P x M0`` complex array, ``weights[k, p]`` is ``w_{k+1,p+1}``.
        policy: how the weights were chosen (``"first-k"``, ``"random"`` or
            ``"custom"``).
        rows: DFT row indices used, one per instant (empty for custom banks).
        seed: RNG seed for the random policy, else ``None``.
    """

    weights: np.ndarray
    policy: str = "custom"
    rows: tuple[int, ...] = ()
    seed: int | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 3:
            raise ValueError("weights must have shape (K, P, M0)")
        if not np.allclose(np.abs(w), 1.0, rtol=0, atol=1e-12):
            raise ValueError("combiner weights must have unit modulus")
        w.setflags(write=False)
        self.weights = w
        if not self.is_orthogonal():
            warnings.warn("combiner bank is not row-orthogonal; compressed noise "
                          "is colored and no whitening is applied", stacklevel=2)

    @property
    def K(self) -> int:
        return self.weights.shape[0]

    @property
    def P(self) -> int:
        return self.weights.shape[1]

    @property
    def M0(self) -> int:
        return self.weights.shape[2]

    def subarray_weights(self, p: int) -> np.ndarray:
        """``K x M0`` block for 0-based subarray ``p`` (rows ``w_{k,p}^T``)."""
        return self.weights[:, p, :]

    def is_orthogonal(self, tol: float = 1e-10) -> bool:
        W = self.weights
        gram = np.einsum("kpm,lpm->pkl", W, W.conj())
        eye = self.M0 * np.eye(self.K)
        return bool(np.all(np.abs(gram - eye) <= tol * self.M0))

    def summary(self) -> str:
        rows = " ".join(str(r) for r in self.rows) if self.rows else "-"
        return f"policy={self.policy} K={self.K} rows={rows} seed={self.seed}"


def dft_combiner_bank(M0: int, K: int, P: int, policy: str = "first-k",
                      seed: int | None = None) -> CombinerBank:
    """Select ``K`` rows of the ``M0``-point DFT, shared by all subarrays.

    ``first-k`` takes rows ``0..K-1``; ``random`` draws ``K`` distinct rows
    with ``numpy.random.default_rng(seed)``.
    """
    if not 1 <= K <= M0:
        raise ValueError(f"need 1 <= K <= M0, got K={K}, M0={M0}")
    if P < 1:
        raise ValueError("P must be >= 1")
    if policy == "first-k":
        rows = np.arange(K)
        seed = None
    elif policy == "random":
        if seed is None:
            raise ValueError("random policy needs a seed")
        rows = np.random.default_rng(seed).choice(M0, size=K, replace=False)
    else:
        raise ValueError(f"unknown combiner policy {policy!r}")
    F = dft_matrix(M0)[rows]
    weights = np.repeat(F[:, None, :], P, axis=1)
    return CombinerBank(weights, policy, tuple(int(r) for r in rows), seed)


def _check(bank: CombinerBank, cfg: ArrayConfig):
    if bank.P != cfg.P or bank.M0 != cfg.M0:
        raise ValueError(f"bank is {bank.P}x{bank.M0} but array is {cfg.P}x{cfg.M0}")


def phi_matrix(bank: CombinerBank, cfg: ArrayConfig) -> np.ndarray:
    """Dense ``PK x M`` measurement matrix."""
    _check(bank, cfg)
    K, P, M0 = bank.weights.shape
    Phi = np.zeros((K, P, P, M0), dtype=complex)
    for p in range(P):
        Phi[:, p, p, :] = bank.weights[:, p, :]
    return Phi.reshape(K * P, P * M0)


def compress(bank: CombinerBank, Y) -> SnapshotMatrix:
    """Apply the combiners block by block: ``Ytil = Phi @ Y`` without forming Phi."""
    Y = as_matrix(Y)
    K, P, M0 = bank.weights.shape
    if Y.shape[0] != P * M0:
        raise ValueError(f"expected {P * M0} rows, got {Y.shape[0]}")
    Yt = np.einsum("kpm,pmn->kpn", bank.weights, Y.reshape(P, M0, -1))
    return SnapshotMatrix(Yt.reshape(K * P, -1), "compressed")


def compress_atoms(bank: CombinerBank, A: np.ndarray) -> np.ndarray:
    """Same as :func:`compress` for a plain ``M x n`` matrix, returning an array."""
    return compress(bank, A).data


def subarray_blocks(bank: CombinerBank, Ytil) -> np.ndarray:
    """Regroup compressed rows by subarray: returns ``P x K x N``."""
    Yt = as_matrix(Ytil)
    K, P = bank.K, bank.P
    if Yt.shape[0] != K * P:
        raise ValueError(f"expected {K * P} rows, got {Yt.shape[0]}")
    return Yt.reshape(K, P, -1).transpose(1, 0, 2)
