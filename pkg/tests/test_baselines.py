import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharenf.baselines import (
    EstimatorError, global_dictionary, music2d_estimate, music2d_spectrum, music_steering,
    noise_subspace, omp2d_estimate, sample_covariance,
)
from sharenf.compression import compress, dft_combiner_bank
from sharenf.geometry import ArrayConfig, GridSpec
from sharenf.share import (
    ShareParams, build_refined_dictionary, mmv_omp, pick_peaks, stage1_spectrum,
)
from sharenf.signal import Scenario, SourceTruth, synthesize

GRID = GridSpec()


@pytest.fixture(scope="module")
def setup():
    cfg = ArrayConfig.default()
    bank = dft_combiner_bank(16, 16, 4)
    return cfg, bank, global_dictionary(bank, cfg, GRID), music_steering(cfg, GRID)


def draw(cfg, sources, snr=math.inf, N=32, seed=0):
    Y, _ = synthesize(cfg, Scenario(tuple(SourceTruth(*s) for s in sources), N, snr, seed))
    return Y


def best_single_atom(Y, atoms, chunk=512):
    """Index of the atom whose rank-1 projection leaves the smallest residual."""
    res = np.empty(atoms.shape[1])
    for s in range(0, atoms.shape[1], chunk):
        A = atoms[:, s:s + chunk]
        for j in range(A.shape[1]):
            a = A[:, j]
            proj = np.outer(a, a.conj() @ Y) / np.vdot(a, a).real
            res[s + j] = np.linalg.norm(Y - proj)
    return int(np.argmin(res))


def test_omp2d_exact_on_grid(setup):
    cfg, bank, D, _ = setup
    src = (float(GRID.angles[95]), float(GRID.ranges[17]))
    Yt = compress(bank, draw(cfg, [src]))
    est = omp2d_estimate(bank, cfg, Yt, GRID, 1, D)
    assert est.entries == [src]
    # same answer when the dictionary is built on the fly
    assert omp2d_estimate(bank, cfg, Yt, GRID, 1).entries == [src]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_omp2d_l1_matches_exhaustive(setup, seed):
    cfg, bank, D, _ = setup
    r = np.random.default_rng(seed)
    src = (float(r.uniform(-55, 55)), float(r.uniform(1.5, 8.5)))
    Yt = compress(bank, draw(cfg, [src], snr=float(r.uniform(0, 15)), N=8, seed=seed))
    est = omp2d_estimate(bank, cfg, Yt, GRID, 1, D)
    g = best_single_atom(Yt.data, D.atoms)
    assert tuple(D.labels[g]) == est.entries[0]


def test_music_exact_and_divergent(setup):
    cfg, _, _, S = setup
    src = (float(GRID.angles[80]), float(GRID.ranges[33]))
    Y = draw(cfg, [src], N=4)
    est, spec = music2d_estimate(cfg, Y, GRID, 1, S, return_spectrum=True)
    assert est.entries == [src]
    assert spec.values[80, 33] >= 1e9 * np.median(spec.values)
    assert est.residual_norm < 1e-8 * np.linalg.norm(Y.data)


def test_music_pure_noise_has_no_dominant_peak(setup):
    cfg, _, _, S = setup
    rng = np.random.default_rng(7)
    Y = (rng.standard_normal((64, 32)) + 1j * rng.standard_normal((64, 32))) / np.sqrt(2)
    spec = music2d_spectrum(cfg, Y, GRID, 1, S)
    assert spec.values.max() / np.median(spec.values) < 10


def test_music_rejects_large_L(setup):
    cfg, _, _, _ = setup
    with pytest.raises(ValueError):
        music2d_estimate(cfg, np.zeros((64, 4)), GRID, 64)


def test_music_handles_flat_spectrum():
    cfg = ArrayConfig(1, 4, 0.5, 2.0, 3e8)
    grid = GridSpec(-10, 10, 3, 1, 2, 2)
    Y = np.zeros((4, 3), dtype=complex)
    Y[0, 0] = 1
    est = music2d_estimate(cfg, Y, grid, 2)
    assert len(est) == 2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(2, 40))
def test_covariance_and_subspace_properties(seed, L, N):
    cfg = ArrayConfig(2, 8, 0.5, 6.0, 3e8)
    r = np.random.default_rng(seed)
    Y = draw(cfg, [(float(r.uniform(-50, 50)), float(r.uniform(2, 9))) for _ in range(L)],
             snr=float(r.uniform(-5, 25)), N=N, seed=seed)
    R = sample_covariance(Y)
    np.testing.assert_allclose(R, R.conj().T, atol=1e-12)
    w, Es, En = noise_subspace(R, L)
    tr = np.trace(R).real
    assert np.all(np.diff(w) <= 1e-10 * tr)
    assert w.min() >= -1e-10 * tr
    assert np.max(np.abs(Es.conj().T @ En)) < 1e-10
    assert Es.shape == (16, L) and En.shape == (16, 16 - L)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_music_invariant_to_noise_basis_rotation(seed):
    cfg = ArrayConfig(2, 8, 0.5, 6.0, 3e8)
    grid = GridSpec(-60, 60, 25, 1, 9, 9)
    Y = draw(cfg, [(12.0, 4.0), (-30.0, 7.0)], snr=10.0, N=16, seed=seed)
    En = noise_subspace(sample_covariance(Y), 2)[2]
    r = np.random.default_rng(seed)
    Z = r.standard_normal((14, 14)) + 1j * r.standard_normal((14, 14))
    Q, _ = np.linalg.qr(Z)
    a = music2d_spectrum(cfg, Y, grid, 2, En=En).values
    b = music2d_spectrum(cfg, Y, grid, 2, En=En @ Q).values
    np.testing.assert_allclose(b, a, rtol=1e-10)


def test_omp2d_on_share_window_matches_share_stage2(setup):
    cfg, bank, _, _ = setup
    params = ShareParams(L=2)
    Yt = compress(bank, draw(cfg, [(20.4, 6.1), (-35.2, 3.3)], snr=10.0, seed=5))
    coarse = pick_peaks(stage1_spectrum(bank, cfg, Yt, params.coarse_grid), 2, 1)
    D = build_refined_dictionary(bank, cfg, coarse, 3.0, 14, GRID)
    share_support, _, _ = mmv_omp(Yt, D, 2)
    est = omp2d_estimate(bank, cfg, Yt, GRID, 2, D)
    np.testing.assert_array_equal(D.labels[share_support], np.column_stack([est.thetas, est.ranges]))


def test_estimator_error_is_runtime_error():
    assert issubclass(EstimatorError, RuntimeError)
