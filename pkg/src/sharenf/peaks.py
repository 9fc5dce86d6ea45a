"""Greedy local-maximum selection on 1-D and 2-D grids."""
from __future__ import annotations

import itertools

import numpy as np


def local_maxima(values: np.ndarray) -> np.ndarray:
    """Boolean mask of cells that are >= every in-grid neighbor.

    Neighbors are the ``3^ndim - 1`` surrounding cells (2 in 1-D, 8 in 2-D);
    cells on the border compare only against neighbors that exist.
    """
    v = np.asarray(values, dtype=float)
    padded = np.pad(v, 1, constant_values=-np.inf)
    mask = np.ones(v.shape, dtype=bool)
    for offset in itertools.product((-1, 0, 1), repeat=v.ndim):
        if not any(offset):
            continue
        window = tuple(slice(1 + o, 1 + o + n) for o, n in zip(offset, v.shape))
        mask &= v >= padded[window]
    return mask


def greedy_peaks(values: np.ndarray, count: int, guard: int = 1) -> list[tuple[int, ...]]:
    """Pick up to ``count`` peaks by descending value.

    Local maxima are taken first. Each accepted peak blocks all cells within
    Chebyshev distance ``guard`` of it. If there are too few local maxima the
    remaining slots go to the largest unblocked cells. Ties are broken by the
    lower flat index.

    Returns:
        A list of index tuples, possibly shorter than ``count``.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("cannot pick peaks of an empty spectrum")
    if count < 1:
        raise ValueError("count must be >= 1")
    flat = v.ravel()
    # stable sort on -value keeps lower flat index first among ties
    order = np.argsort(-flat, kind="stable")
    is_max = local_maxima(v).ravel()
    blocked = np.zeros(v.shape, dtype=bool)
    picked: list[tuple[int, ...]] = []

    def take(candidates):
        for i in candidates:
            if len(picked) == count:
                return
            idx = np.unravel_index(i, v.shape)
            if blocked[idx]:
                continue
            picked.append(tuple(int(j) for j in idx))
            window = tuple(slice(max(j - guard, 0), j + guard + 1) for j in idx)
            blocked[window] = True

    take(i for i in order if is_max[i])
    take(order)
    return picked
