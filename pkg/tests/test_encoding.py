import numpy as np
import pytest
from hypothesis import given, strategies as st

from intrvfl import encode, encode_features, materialize_features, quantize
from intrvfl.encoding import materialize_level


class TestQuantize:
    def test_full_scale(self):
        assert quantize(1.0, 10) == 10

    def test_zero(self):
        for n in (1, 4, 10, 100):
            assert quantize(0.0, n) == 0

    def test_half_rounds_away_from_zero(self):
        assert quantize(0.25, 10) == 3  # 2.5 rounds up, not to even

    def test_vectorized(self):
        got = quantize(np.array([0.0, 0.5, 1.0]), 4)
        assert got.tolist() == [0, 2, 4]

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            quantize(1.2, 4)
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            quantize(np.array([0.5, -0.1]), 4)

    def test_round_trip_exact_grid(self):
        for n in range(1, 65):
            for v in range(n + 1):
                assert quantize(v / n, n) == v


class TestEncode:
    def test_all_plus_one(self):
        assert encode(0, 4).materialize().tolist() == [1, 1, 1, 1]

    def test_all_minus_one(self):
        assert encode(4, 4).materialize().tolist() == [-1, -1, -1, -1]

    def test_mixed(self):
        assert encode(2, 4).materialize().tolist() == [-1, -1, 1, 1]

    def test_level_out_of_range(self):
        with pytest.raises(ValueError, match="outside"):
            encode(5, 4)

    def test_cardinality_exhaustive(self):
        # exactly N+1 distinct codes per dimension
        for n in range(1, 65):
            codes = {tuple(materialize_level(v, n)) for v in range(n + 1)}
            assert len(codes) == n + 1

    def test_hamming_distance_equals_level_gap(self):
        for n in (1, 2, 7, 16, 33, 64):
            codes = np.stack([materialize_level(v, n) for v in range(n + 1)])
            for v1 in range(n + 1):
                diff = (codes[v1] != codes).sum(axis=1)
                assert diff.tolist() == [abs(v1 - v2) for v2 in range(n + 1)]

    def test_adjacent_levels_differ_in_one_position(self):
        for n in (1, 5, 16, 64):
            for v in range(n):
                a = materialize_level(v, n)
                b = materialize_level(v + 1, n)
                changed = np.flatnonzero(a != b)
                assert changed.tolist() == [v]


class TestEncodeFeatures:
    def test_extremes(self):
        assert encode_features(np.array([0.0, 1.0]), 4).tolist() == [0, 4]

    def test_midpoint(self):
        assert encode_features(np.array([0.5]), 4).tolist() == [2]

    def test_saturated_feature_among_five(self):
        x = np.array([0.31, 0.62, 1.0, 0.18, 0.77])
        levels = encode_features(x, 10)
        assert levels[2] == 10

    def test_matrix_input(self):
        levels = encode_features(np.array([[0.0, 1.0], [0.5, 0.25]]), 4)
        assert levels.tolist() == [[0, 4], [2, 1]]


class TestMaterializeFeatures:
    def test_columns_match_single_codes(self):
        levels = np.array([0, 2, 4])
        mat = materialize_features(levels, 4)
        assert mat.shape == (4, 3)
        for k, v in enumerate(levels):
            assert mat[:, k].tolist() == materialize_level(v, 4).tolist()

    def test_saturated_column_all_minus_one(self):
        mat = materialize_features(np.array([3, 10, 0]), 10)
        assert np.all(mat[:, 1] == -1)


@given(st.integers(1, 64), st.data())
def test_distance_monotone_in_level_gap(n, data):
    v1 = data.draw(st.integers(0, n))
    v2 = data.draw(st.integers(0, n))
    a = materialize_level(v1, n)
    b = materialize_level(v2, n)
    assert int((a != b).sum()) == abs(v1 - v2)
