import math

import numpy as np
import pytest

from sdkernel.oracles import (
    McConfig,
    sample_hermitian,
    sdkr_kernel,
    sdkr_traces,
    series_kernel,
    standard_error,
    _unitary_step,
)
from sdkernel.roughpath import PathSamples, segment_exp, signature_of_path


def catalan(k):
    return math.comb(2 * k, k) // (k + 1)


def catalan_series(speed, n_terms=16):
    """Independent reference for the d=1 linear-path kernel:
    sum (-1)^k Catalan(k) speed^(2k) / (2k)!"""
    return sum(
        (-1.0) ** k * catalan(k) * speed ** (2 * k) / math.factorial(2 * k)
        for k in range(n_terms)
    )


def linear_path(n=64, speed=1.0):
    t = np.linspace(0.0, 1.0, n + 1)
    return PathSamples(t, speed * t)


class TestSeries:
    def test_level_zero_is_one(self):
        assert series_kernel(segment_exp([3.0], 1)) == pytest.approx(1.0)

    def test_unit_speed_linear_d1(self):
        sig = signature_of_path(linear_path(), 20)
        assert series_kernel(sig) == pytest.approx(catalan_series(1.0), abs=1e-5)
        assert series_kernel(sig) == pytest.approx(0.57672, abs=1e-5)

    def test_unused_letters_contribute_nothing(self):
        t = np.linspace(0.0, 1.0, 9)
        d2 = PathSamples(t, np.column_stack([t, np.zeros_like(t)]))
        v2 = series_kernel(signature_of_path(d2, 12))
        v1 = series_kernel(signature_of_path(linear_path(8), 12))
        assert v2 == pytest.approx(v1, rel=1e-14)

    def test_real_for_geometric_signatures(self):
        # odd moment levels vanish, so the value only reads even levels; check
        # the contraction ignores sign-flips of odd signature levels
        rng = np.random.default_rng(0)
        deltas = rng.standard_normal((6, 2)) * 0.4
        values = np.vstack([np.zeros(2), np.cumsum(deltas, axis=0)])
        path = PathSamples(np.linspace(0, 1, 7), values)
        sig = signature_of_path(path, 8)
        flipped = sig.coeffs.copy()
        for n in range(1, 9, 2):
            flipped.level(n)[:] *= -1.0
        from sdkernel.roughpath import GroupIncrement

        assert series_kernel(GroupIncrement(flipped)) == pytest.approx(
            series_kernel(sig), rel=1e-14
        )


class TestHermitian:
    def test_hermitian_exact(self):
        rng = np.random.default_rng(1)
        mats = sample_hermitian(3, 25, rng)
        for m in mats:
            assert np.array_equal(m, m.conj().T)

    def test_entry_variance(self):
        rng = np.random.default_rng(2)
        mats = np.stack([sample_hermitian(1, 40, rng)[0] for _ in range(12)])
        # 12 * 40 * 40 > 10^4 entries
        var = np.mean(np.abs(mats) ** 2)
        assert abs(var - 1.0) < 0.05

    def test_cross_matrix_decorrelation(self):
        rng = np.random.default_rng(3)
        prods = []
        for _ in range(40):
            a, b = sample_hermitian(2, 30, rng)
            prods.append(np.mean((a * b.conj()).real))
        z = np.mean(prods) / (np.std(prods, ddof=1) / np.sqrt(len(prods)))
        assert abs(z) < 3.0


class TestSdkr:
    def test_zero_path_is_exactly_one(self):
        t = np.linspace(0, 1, 9)
        path = PathSamples(t, np.zeros((9, 2)))
        traces = sdkr_traces(path, McConfig(10, 5, seed=0))
        assert np.array_equal(traces, np.ones(5, dtype=np.complex128))

    def test_unitary_step(self):
        rng = np.random.default_rng(4)
        h = sample_hermitian(1, 30, rng)[0]
        u = _unitary_step(h, 0.31)
        assert np.linalg.norm(u @ u.conj().T - np.eye(30)) < 1e-10

    def test_matches_series_on_linear_path(self):
        cfg = McConfig(matrix_dim=100, n_sims=120, seed=7)
        traces = sdkr_traces(linear_path(16), cfg)
        se = standard_error(traces.real)
        ref = catalan_series(1.0)
        assert abs(np.mean(traces.real) - ref) < 3 * se + 2.0 / cfg.matrix_dim
        # imaginary part is a pure diagnostic and should be noise around zero
        assert abs(np.mean(traces.imag)) < 4 * standard_error(traces.imag)

    def test_standard_error_shrinks(self):
        cfg_small = McConfig(40, 60, seed=9)
        cfg_large = McConfig(40, 240, seed=9)
        se_small = standard_error(sdkr_traces(linear_path(8), cfg_small).real)
        se_large = standard_error(sdkr_traces(linear_path(8), cfg_large).real)
        assert se_large < se_small

    def test_deterministic_given_seed(self):
        cfg = McConfig(20, 8, seed=11)
        a = sdkr_kernel(linear_path(8), cfg)
        b = sdkr_kernel(linear_path(8), cfg)
        assert a == b
