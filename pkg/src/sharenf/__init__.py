"""Hierarchical near-field localization with compressive sparse modular arrays."""

__version__ = "0.1.0"

from .geometry import ArrayConfig, GridSpec, aperture_and_rayleigh, element_position  # noqa: E402
from .signal import (  # noqa: E402
    Scenario, SnapshotMatrix, SourceTruth, farfield_sub_steering, fresnel_check,
    nearfield_steering, synthesize,
)
from .compression import CombinerBank, compress, dft_combiner_bank, phi_matrix  # noqa: E402
from .share import (  # noqa: E402
    Dictionary, EstimateSet, ShareParams, Spectrum1D, build_refined_dictionary, mmv_omp,
    pick_peaks, share_estimate, stage1_spectrum,
)
from .baselines import music2d_estimate, omp2d_estimate  # noqa: E402
