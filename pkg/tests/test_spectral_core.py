import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import pure_cosine, summation_dct, summation_idct, table_dct, table_filter
from tokenspectra import (
    BandFilter,
    apply_filter,
    dct_forward,
    dct_inverse,
    filter_operator,
    filter_sequence,
    resolve_filter,
)
from tokenspectra.bands import COMBINATIONS, default_scheme
from tokenspectra.exceptions import DataValidityError, ShapeError

METHODS = ["fft", "direct"]


def sequences(max_n=24, max_d=5):
    shape = st.tuples(st.integers(1, max_n), st.integers(1, max_d))
    return shape.flatmap(
        lambda s: arrays(np.float64, s, elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False))
    )


class TestForward:
    @pytest.mark.parametrize("method", METHODS)
    def test_constant_sequence_has_only_dc(self, method):
        F = dct_forward(np.ones((4, 1)), method)
        np.testing.assert_allclose(F, [[4, 0, 0, 0]], atol=1e-14)

    @pytest.mark.parametrize("method", METHODS)
    def test_single_token(self, method):
        assert dct_forward([[2.5]], method).tolist() == [[2.5]]

    @pytest.mark.parametrize("method", METHODS)
    def test_impulse_n3(self, method):
        expected = summation_dct([1.0, 0.0, 0.0])
        np.testing.assert_allclose(expected, [1.0, 0.8660254037844387, 0.5], rtol=1e-14)
        np.testing.assert_allclose(dct_forward([[1.0], [0.0], [0.0]], method)[0], expected, rtol=1e-12)

    def test_table_oracle_matches_summation(self, rng):
        X = rng.normal(size=(7, 3))
        F = table_dct(X)
        for j in range(3):
            np.testing.assert_allclose(F[j], summation_dct(list(X[:, j])), rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 50, 197, 256])
    @pytest.mark.parametrize("method", METHODS)
    def test_matches_oracle(self, rng, n, method):
        X = rng.normal(size=(n, 3))
        ref = table_dct(X)
        err = np.max(np.abs(dct_forward(X, method) - ref)) / np.max(np.abs(ref))
        assert err < 1e-6

    def test_output_shape_is_channels_by_freqs(self):
        assert dct_forward(np.zeros((5, 3))).shape == (3, 5)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        X = np.ones((3, 2))
        X[1, 1] = bad
        with pytest.raises(DataValidityError):
            dct_forward(X)

    def test_rejects_wrong_rank(self):
        with pytest.raises(ShapeError):
            dct_forward(np.ones(4))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            dct_forward(np.ones((2, 2)), method="dft")

    def test_float32_input_is_upcast(self, rng):
        X = rng.normal(size=(50, 8)).astype(np.float32)
        assert dct_forward(X).dtype == np.float64


class TestInverse:
    @pytest.mark.parametrize("method", METHODS)
    def test_constant(self, method):
        np.testing.assert_allclose(dct_inverse([[4.0, 0, 0, 0]], method), np.ones((4, 1)), atol=1e-15)

    @pytest.mark.parametrize("method", METHODS)
    def test_single_coefficient(self, method):
        assert dct_inverse([[-3.0]], method).tolist() == [[-3.0]]

    def test_matches_summation_inverse(self, rng):
        f = rng.normal(size=6)
        np.testing.assert_allclose(dct_inverse(f[None, :])[:, 0], summation_idct(list(f)), atol=1e-12)

    @pytest.mark.parametrize("method", METHODS)
    def test_roundtrip_large(self, rng, method):
        X = rng.normal(size=(50, 512)).astype(np.float32)
        back = dct_inverse(dct_forward(X, method), method)
        assert np.max(np.abs(back - X)) < 1e-5

    def test_rejects_non_finite(self):
        with pytest.raises(DataValidityError):
            dct_inverse([[1.0, np.nan]])


@settings(max_examples=60, deadline=None)
@given(sequences())
def test_roundtrip_property(X):
    scale = max(1.0, np.max(np.abs(X)))
    assert np.max(np.abs(dct_inverse(dct_forward(X)) - X)) <= 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(sequences(), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**31))
def test_linearity(X, a, b, seed):
    Y = np.random.default_rng(seed).normal(size=X.shape)
    lhs = dct_forward(a * X + b * Y)
    rhs = a * dct_forward(X) + b * dct_forward(Y)
    scale = max(1.0, np.max(np.abs(lhs)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(sequences())
def test_energy_relation(X):
    n = X.shape[0]
    F = dct_forward(X)
    lhs = np.sum(X**2, axis=0)
    rhs = F[:, 0] ** 2 / n + 2.0 / n * np.sum(F[:, 1:] ** 2, axis=1)
    np.testing.assert_allclose(rhs, lhs, rtol=1e-6, atol=1e-9)


class TestBandFilter:
    def test_canonical(self):
        f = BandFilter(10, [3, 1, 3, 0])
        assert f.masked == (0, 1, 3)
        assert f == BandFilter(10, (0, 1, 3))
        assert hash(f) == hash(BandFilter(10, (3, 0, 1)))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            BandFilter(4, [4])
        with pytest.raises(ValueError):
            BandFilter(4, [-1])

    def test_mask_matrix(self):
        M = BandFilter(4, [1]).mask_matrix(2)
        assert M.tolist() == [[1, 0, 1, 1], [1, 0, 1, 1]]


class TestApplyFilter:
    def test_identity(self, rng):
        F = rng.normal(size=(3, 6))
        np.testing.assert_array_equal(apply_filter(F, BandFilter.empty(6)), F)

    def test_full_mask(self, rng):
        F = rng.normal(size=(3, 6))
        assert not apply_filter(F, BandFilter.full(6)).any()

    def test_does_not_modify_input(self, rng):
        F = rng.normal(size=(3, 6))
        before = F.copy()
        apply_filter(F, BandFilter(6, [0, 2]))
        np.testing.assert_array_equal(F, before)

    def test_dc_removal_of_constant(self):
        S = apply_filter(dct_forward(np.ones((4, 1))), BandFilter(4, [0]))
        np.testing.assert_allclose(S, np.zeros((1, 4)), atol=1e-15)
        np.testing.assert_allclose(dct_inverse(S), np.zeros((4, 1)), atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            apply_filter(np.ones((2, 5)), BandFilter(4, [0]))

    @settings(max_examples=40, deadline=None)
    @given(sequences(), st.data())
    def test_idempotent(self, X, data):
        n = X.shape[0]
        masked = data.draw(st.sets(st.integers(0, n - 1)))
        f = BandFilter(n, masked)
        once = apply_filter(dct_forward(X), f)
        np.testing.assert_array_equal(apply_filter(once, f), once)


class TestFilterSequence:
    def test_empty_filter(self, rng):
        X = rng.normal(size=(9, 4))
        np.testing.assert_allclose(filter_sequence(X, BandFilter.empty(9)), X, atol=1e-12)

    @pytest.mark.parametrize("m0", [1, 3, 8])
    def test_removes_single_cosine(self, m0):
        X = pure_cosine(17, m0, [1.0, -2.0, 0.5])
        assert np.max(np.abs(filter_sequence(X, BandFilter(17, [m0])))) < 1e-5

    def test_c3_zeroes_first_two_columns(self, rng):
        X = rng.normal(size=(50, 512))
        f = resolve_filter(COMBINATIONS["c3"], default_scheme(50))
        F = dct_forward(filter_sequence(X, f))
        assert np.max(np.abs(F[:, :2])) < 1e-9
        np.testing.assert_allclose(F[:, 2:], dct_forward(X)[:, 2:], atol=1e-9)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            filter_sequence(np.ones((5, 2)), BandFilter(4, [0]))

    def test_n1_full_mask(self):
        np.testing.assert_array_equal(filter_sequence([[3.0, 4.0]], BandFilter(1, [0])), [[0.0, 0.0]])

    @pytest.mark.parametrize("method", METHODS)
    def test_matches_table_oracle(self, rng, method):
        X = rng.normal(size=(23, 5))
        masked = [0, 4, 5, 17]
        np.testing.assert_allclose(
            filter_sequence(X, BandFilter(23, masked), method), table_filter(X, masked), atol=1e-10
        )

    def test_channel_independence(self, rng):
        X = rng.normal(size=(20, 6))
        f = BandFilter(20, [0, 2, 3, 11])
        whole = filter_sequence(X, f)
        cols = np.hstack([filter_sequence(X[:, [j]], f) for j in range(6)])
        np.testing.assert_allclose(whole, cols, atol=1e-12)

    def test_operator_matches_pipeline(self, rng):
        X = rng.normal(size=(31, 4))
        f = BandFilter(31, [1, 2, 9, 30])
        np.testing.assert_allclose(filter_operator(f) @ X, filter_sequence(X, f), atol=1e-12)

    def test_operator_is_projection(self):
        A = filter_operator(BandFilter(12, [0, 5]))
        np.testing.assert_allclose(A @ A, A, atol=1e-12)
        assert math.isclose(np.trace(A), 10, abs_tol=1e-9)
