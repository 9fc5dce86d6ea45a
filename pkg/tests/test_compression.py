import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharenf.compression import (
    CombinerBank, compress, dft_combiner_bank, phi_matrix, subarray_blocks,
)
from sharenf.geometry import ArrayConfig
from sharenf.signal import Scenario, SourceTruth, nearfield_steering, synthesize


def test_first_row_is_ones():
    bank = dft_combiner_bank(4, 1, 3)
    for p in range(3):
        np.testing.assert_array_equal(bank.weights[0, p], [1, 1, 1, 1])


def test_second_row_m0_4():
    bank = dft_combiner_bank(4, 2, 2)
    np.testing.assert_allclose(bank.weights[1, 0], [1, -1j, -1, 1j], atol=1e-15)


def test_full_dft_orthogonality():
    bank = dft_combiner_bank(16, 16, 4)
    for p in range(4):
        W = bank.subarray_weights(p)
        np.testing.assert_allclose(W.conj() @ W.T, 16 * np.eye(16), atol=1e-10)
    assert bank.is_orthogonal()


def test_constant_modulus_and_errors():
    bank = dft_combiner_bank(8, 5, 2, "random", seed=3)
    np.testing.assert_allclose(np.abs(bank.weights), 1.0, atol=1e-12)
    assert len(set(bank.rows)) == 5
    assert bank.rows == dft_combiner_bank(8, 5, 2, "random", seed=3).rows
    with pytest.raises(ValueError):
        dft_combiner_bank(16, 17, 4)
    with pytest.raises(ValueError):
        dft_combiner_bank(16, 0, 4)
    with pytest.raises(ValueError):
        dft_combiner_bank(16, 4, 4, "random")
    with pytest.raises(ValueError):
        CombinerBank(2 * np.ones((1, 1, 4)))


def test_non_orthogonal_bank_warns():
    w = np.ones((2, 1, 4), dtype=complex)
    with pytest.warns(UserWarning, match="not row-orthogonal"):
        CombinerBank(w)


def test_phi_small_block_layout():
    cfg = ArrayConfig(2, 2, 0.5, 1.0, 1e9)
    bank = dft_combiner_bank(2, 1, 2)
    np.testing.assert_array_equal(phi_matrix(bank, cfg), [[1, 1, 0, 0], [0, 0, 1, 1]])


def test_phi_zero_pattern(cfg, bank):
    Phi = phi_matrix(bank, cfg)
    assert Phi.shape == (64, 64)
    for k in range(bank.K):
        for p in range(bank.P):
            row = Phi[k * bank.P + p]
            cols = np.nonzero(row)[0]
            np.testing.assert_array_equal(cols, np.arange(p * 16, (p + 1) * 16))


def test_phi_dimension_mismatch(cfg):
    with pytest.raises(ValueError):
        phi_matrix(dft_combiner_bank(8, 4, 4), cfg)


@pytest.mark.parametrize("P,M0,K", [(4, 16, 16), (2, 8, 4), (3, 4, 1), (4, 16, 5)])
def test_phi_gram_identity(P, M0, K):
    cfg = ArrayConfig(P, M0, 0.5, M0 * 0.5 + 1.0, 1e9)
    Phi = phi_matrix(dft_combiner_bank(M0, K, P), cfg)
    np.testing.assert_allclose(Phi @ Phi.conj().T, M0 * np.eye(P * K), atol=1e-10)


def test_compress_zero(bank):
    assert not np.any(compress(bank, np.zeros((64, 5))).data)


def test_compress_matches_dense(cfg, bank, rng):
    Y = rng.standard_normal((64, 7)) + 1j * rng.standard_normal((64, 7))
    fast = compress(bank, Y)
    dense = phi_matrix(bank, cfg) @ Y
    assert fast.kind == "compressed"
    assert np.linalg.norm(fast.data - dense) / np.linalg.norm(dense) < 1e-12


def test_compress_single_source_rank_one(cfg, bank):
    Y, X = synthesize(cfg, Scenario((SourceTruth(20.0, 3.0),), 12, math.inf, 0))
    Yt = compress(bank, Y).data
    s = np.linalg.svd(Yt, compute_uv=False)
    assert s[1] / s[0] < 1e-12
    expected = np.outer(phi_matrix(bank, cfg) @ nearfield_steering(cfg, 20.0, 3.0), X[0])
    np.testing.assert_allclose(Yt, expected, atol=1e-10)


def test_compress_dimension_mismatch(bank):
    with pytest.raises(ValueError):
        compress(bank, np.zeros((63, 2)))


def test_subarray_blocks_round_trip(bank, rng):
    Yt = rng.standard_normal((64, 3)) + 0j
    blocks = subarray_blocks(bank, Yt)
    assert blocks.shape == (4, 16, 3)
    for k in range(16):
        for p in range(4):
            np.testing.assert_array_equal(blocks[p, k], Yt[k * 4 + p])
    np.testing.assert_array_equal(blocks.transpose(1, 0, 2).reshape(64, 3), Yt)


def test_subarray_block_is_local_combination(cfg, bank, rng):
    Y = rng.standard_normal((64, 3)) + 1j * rng.standard_normal((64, 3))
    blocks = subarray_blocks(bank, compress(bank, Y))
    for p in range(4):
        np.testing.assert_allclose(blocks[p], bank.subarray_weights(p) @ Y[p * 16:(p + 1) * 16],
                                   atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 12), st.data())
def test_compressed_noise_stays_white(P, M0, data):
    K = data.draw(st.integers(1, M0))
    cfg = ArrayConfig(P, M0, 0.5, M0 * 0.5, 1e9)
    Phi = phi_matrix(dft_combiner_bank(M0, K, P), cfg)
    # E[Z Z^H] = sigma^2 Phi Phi^H, which must be sigma^2 M0 I
    np.testing.assert_allclose(Phi @ Phi.conj().T, M0 * np.eye(P * K), atol=1e-9)
