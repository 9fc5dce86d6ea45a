"""Estimate-to-truth matching and RMSE bookkeeping."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..share import EstimateSet
from ..signal import SourceTruth

MAX_MATCH_SOURCES = 6


def position(theta_deg, r) -> np.ndarray:
    """Cartesian ``[r cos(theta), r sin(theta), 0]`` (rows for array input)."""
    t = np.deg2rad(np.asarray(theta_deg, dtype=float))
    r = np.asarray(r, dtype=float)
    return np.stack([r * np.cos(t), r * np.sin(t), np.zeros_like(r)], axis=-1)


def match_estimates(est: EstimateSet, truth: Sequence[SourceTruth]) -> tuple[int, ...]:
    """Permutation ``perm`` minimizing ``sum_l ||s_hat[perm[l]] - s[l]||^2``.

    Exhaustive over all ``L!`` orderings; earlier permutations in
    lexicographic order win ties.
    """
    L = len(truth)
    if len(est) != L:
        raise ValueError(f"{len(est)} estimates for {L} sources")
    if L > MAX_MATCH_SOURCES:
        raise ValueError(f"matching supports at most {MAX_MATCH_SOURCES} sources")
    s_true = position([s.theta for s in truth], [s.r for s in truth])
    s_hat = position(est.thetas, est.ranges)
    cost = np.sum(np.abs(s_hat[None, :, :] - s_true[:, None, :]) ** 2, axis=2)  # truth x est
    best, best_cost = None, math.inf
    for perm in itertools.permutations(range(L)):
        c = sum(cost[l, perm[l]] for l in range(L))
        if c < best_cost:
            best, best_cost = perm, c
    return tuple(best)


@dataclass
class MetricsRecord:
    """RMSEs (degrees / meters) for one algorithm over ``trials`` realizations.

    ``failures`` counts trials excluded from the RMSEs.
    """

    rmse_theta: float
    rmse_range: float
    rmse_pos: float
    trials: int = 1
    failures: int = 0
    algorithm: str = ""
    scenario: str = ""


def rmse(est: EstimateSet, truth: Sequence[SourceTruth], matching=None,
         algorithm: str = "", scenario: str = "") -> MetricsRecord:
    """Single-realization RMSE over sources after matching."""
    if matching is None:
        matching = match_estimates(est, truth)
    idx = list(matching)
    th = np.array([s.theta for s in truth])
    r = np.array([s.r for s in truth])
    th_hat, r_hat = est.thetas[idx], est.ranges[idx]
    d_pos = position(th_hat, r_hat) - position(th, r)
    return MetricsRecord(
        rmse_theta=float(np.sqrt(np.mean((th_hat - th) ** 2))),
        rmse_range=float(np.sqrt(np.mean((r_hat - r) ** 2))),
        rmse_pos=float(np.sqrt(np.mean(np.sum(d_pos ** 2, axis=1)))),
        algorithm=algorithm, scenario=scenario,
    )


def aggregate(records: Sequence[MetricsRecord], failed: Sequence[bool] | None = None,
              algorithm: str = "", scenario: str = "") -> MetricsRecord:
    """Root of the mean squared per-trial RMSE over successful trials."""
    if failed is None:
        failed = [False] * len(records)
    ok = [rec for rec, f in zip(records, failed) if not f]
    n_fail = sum(bool(f) for f in failed)

    def root_mean_sq(vals):
        return float(np.sqrt(np.mean(np.square(vals)))) if vals else math.nan

    return MetricsRecord(
        rmse_theta=root_mean_sq([r.rmse_theta for r in ok]),
        rmse_range=root_mean_sq([r.rmse_range for r in ok]),
        rmse_pos=root_mean_sq([r.rmse_pos for r in ok]),
        trials=len(records), failures=n_fail,
        algorithm=algorithm, scenario=scenario,
    )
