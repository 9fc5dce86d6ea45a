"""Leading-order operation counts for the three estimators."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FlopEstimate:
    algorithm: str
    flops: float


@dataclass(frozen=True)
class FlopParams:
    M: int = 64
    P: int = 4
    M0: int = 16
    K: int = 16
    N: int = 32
    L: int = 1
    G_theta: int = 121
    G_r: int = 64
    G_theta_c: int = 41
    G_delta: int = 14


def flop_model(params: FlopParams = FlopParams()) -> list[FlopEstimate]:
    """MUSIC ``M^3 + G_theta G_r M^2``, OMP ``L P K N G_theta G_r``,
    SHARE ``P N K G_theta_c + L P K N G_delta G_r``, unit constants."""
    for name, value in vars(params).items():
        if value < 1:
            raise ValueError(f"{name} must be >= 1")
    p = params
    music = p.M ** 3 + p.G_theta * p.G_r * p.M ** 2
    omp = p.L * p.P * p.K * p.N * p.G_theta * p.G_r
    share = p.P * p.N * p.K * p.G_theta_c + p.L * p.P * p.K * p.N * p.G_delta * p.G_r
    return [FlopEstimate("music2d", float(music)),
            FlopEstimate("omp2d", float(omp)),
            FlopEstimate("share", float(share))]
