import math

import pytest

from vita.dtypes import FLOAT_VECTOR
from vita.engine import pca2
from vita.errors import DegenerateInputError, TypeMismatchError
from vita.frame import Column


def vec_col(rows) -> Column:
    return Column("v", FLOAT_VECTOR, tuple(tuple(float(x) for x in r) for r in rows))


def pairwise_distances(points) -> list[list[float]]:
    """Brute-force oracle: full distance matrix."""
    return [
        [math.dist(p, q) for q in points]
        for p in points
    ]


class TestPca2:
    def test_rank_one_line_in_3d(self):
        rows = [(t * 1.0, t * 1.0, 0.0) for t in (0, 1, 2)]
        projected = pca2(vec_col(rows))
        for _, y in projected:
            assert abs(y) <= 1e-9

    def test_projected_mean_is_origin(self):
        rows = [(1.0, 2.0, 3.0), (4.0, 0.0, 1.0), (2.0, 2.0, 2.0), (0.0, 5.0, 1.0)]
        projected = pca2(vec_col(rows))
        n = len(projected)
        assert sum(p[0] for p in projected) / n == pytest.approx(0.0, abs=1e-9)
        assert sum(p[1] for p in projected) / n == pytest.approx(0.0, abs=1e-9)

    def test_2d_input_preserves_pairwise_distances(self):
        rows = [(0.0, 0.0), (1.0, 0.5), (3.0, -1.0), (2.0, 2.0), (-1.0, 1.5)]
        projected = pca2(vec_col(rows))
        want = pairwise_distances(rows)
        got = pairwise_distances(projected)
        for wr, gr in zip(want, got):
            for w, g in zip(wr, gr):
                assert g == pytest.approx(w, abs=1e-9)

    def test_deterministic_and_sign_fixed(self):
        rows = [(1.0, 2.0, 0.5), (0.0, 1.0, 1.5), (2.0, 0.0, 0.25), (1.5, 1.5, 2.0)]
        a = pca2(vec_col(rows))
        b = pca2(vec_col(rows))
        assert a == b

    def test_components_ordered_by_variance(self):
        # x spreads much wider than y: the first output must carry the spread
        rows = [(-10.0, 0.1), (0.0, -0.1), (10.0, 0.05), (5.0, 0.0)]
        projected = pca2(vec_col(rows))
        spread_x = max(p[0] for p in projected) - min(p[0] for p in projected)
        spread_y = max(p[1] for p in projected) - min(p[1] for p in projected)
        assert spread_x > spread_y

    def test_identical_points_are_degenerate(self):
        with pytest.raises(DegenerateInputError):
            pca2(vec_col([(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)]))

    def test_single_row_rejected(self):
        with pytest.raises(DegenerateInputError):
            pca2(vec_col([(1.0, 2.0)]))

    def test_one_dimensional_vectors_rejected(self):
        with pytest.raises(TypeMismatchError):
            pca2(vec_col([(1.0,), (2.0,)]))

    def test_wrong_dtype(self):
        from vita.dtypes import INT

        with pytest.raises(TypeMismatchError):
            pca2(Column("n", INT, (1, 2)))
