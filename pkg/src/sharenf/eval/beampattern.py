from __future__ import annotations

import numpy as np

from ..geometry import ArrayConfig
from ..peaks import local_maxima
from ..share import Spectrum1D
from ..signal import SourceTruth, nearfield_steering, steering_matrix


def beampattern(cfg: ArrayConfig, target: SourceTruth, angle_grid, at_range: float) -> Spectrum1D:
    """Normalized matched response ``|a_t^H a(theta)|^2 / (|a_t|^2 |a(theta)|^2)``
    of the focused target against steering vectors at ``at_range``."""
    angles = np.asarray(angle_grid, dtype=float)
    a_t = nearfield_steering(cfg, target.theta, target.r)
    A = steering_matrix(cfg, angles, np.full(len(angles), float(at_range)))
    num = np.abs(a_t.conj() @ A) ** 2
    den = np.vdot(a_t, a_t).real * np.sum(np.abs(A) ** 2, axis=0)
    return Spectrum1D(angles, num / den)


def count_peaks_above(spec: Spectrum1D, threshold_db: float = -3.0) -> int:
    """Number of local maxima within ``threshold_db`` of the pattern maximum."""
    v = spec.values
    level = v.max() * 10.0 ** (threshold_db / 10.0)
    return int(np.count_nonzero(local_maxima(v) & (v >= level)))
