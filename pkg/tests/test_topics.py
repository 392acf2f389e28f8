import pytest

from vita.dtypes import FLOAT_VECTOR, Null, TOKENS
from vita.engine import cluster_assign, lda
from vita.errors import EmptyCorpusError, InvalidKError, TypeMismatchError
from vita.frame import Column

# Two disjoint vocabularies, separable by construction.
TWO_VOCAB_DOCS = (
    ("a", "b", "a", "b", "a", "b"),
    ("a", "b", "a", "b", "a", "b"),
    ("a", "b", "a", "b", "a", "b"),
    ("b", "a", "b", "a", "b"),
    ("b", "a", "b", "a", "b"),
    ("x", "y", "x", "y", "x", "y"),
    ("x", "y", "x", "y", "x", "y"),
    ("x", "y", "x", "y", "x", "y"),
    ("y", "x", "y", "x", "y"),
    ("y", "x", "y", "x", "y"),
)


def two_vocab_col() -> Column:
    return Column("tokens", TOKENS, TWO_VOCAB_DOCS)


def purity(assignments, group_sizes=(5, 5)) -> float:
    """Cluster purity: sum over clusters of the majority group count, over N."""
    groups = []
    start = 0
    for size in group_sizes:
        groups.append(list(assignments[start : start + size]))
        start += size
    clusters = set(assignments)
    total = 0
    for c in clusters:
        total += max(sum(1 for z in g if z == c) for g in groups)
    return total / sum(group_sizes)


class TestLda:
    def test_seeded_determinism_bit_for_bit(self):
        a = lda(two_vocab_col(), k=2, iterations=200, seed=7)
        b = lda(two_vocab_col(), k=2, iterations=200, seed=7)
        assert a.theta == b.theta and a.phi == b.phi

    def test_different_seeds_differ(self):
        a = lda(two_vocab_col(), k=2, iterations=50, seed=1)
        b = lda(two_vocab_col(), k=2, iterations=50, seed=2)
        assert a.theta != b.theta

    def test_theta_rows_sum_to_one(self):
        model = lda(two_vocab_col(), k=2, iterations=100, seed=7)
        for row in model.theta:
            assert sum(row) == pytest.approx(1.0, abs=1e-9)
            assert all(x >= 0 for x in row)

    def test_phi_rows_sum_to_one(self):
        model = lda(two_vocab_col(), k=2, iterations=100, seed=7)
        for row in model.phi:
            assert sum(row) == pytest.approx(1.0, abs=1e-9)
            assert all(x >= 0 for x in row)

    def test_two_vocab_separation_is_perfect(self):
        model = lda(two_vocab_col(), k=2, iterations=200, seed=7)
        assignments = cluster_assign(Column("theta", FLOAT_VECTOR, model.theta))
        assert purity(assignments) == 1.0

    def test_empty_docs_get_uniform_theta(self):
        docs = TWO_VOCAB_DOCS + ((),)
        model = lda(Column("t", TOKENS, docs), k=2, iterations=10, seed=7)
        assert model.theta[-1] == (0.5, 0.5)

    def test_invalid_k(self):
        with pytest.raises(InvalidKError):
            lda(two_vocab_col(), k=1)

    def test_too_few_nonempty_docs(self):
        with pytest.raises(EmptyCorpusError):
            lda(Column("t", TOKENS, (("a",), (), ())), k=2)

    def test_wrong_dtype(self):
        from vita.dtypes import INT

        with pytest.raises(TypeMismatchError):
            lda(Column("n", INT, (1, 2)), k=2)


class TestClusterAssign:
    def test_argmax(self):
        col = Column("v", FLOAT_VECTOR, ((0.1, 0.7, 0.2),))
        assert cluster_assign(col) == (1,)

    def test_tie_breaks_low_index(self):
        col = Column("v", FLOAT_VECTOR, ((0.5, 0.5),))
        assert cluster_assign(col) == (0,)

    def test_null_rows_take_index_zero(self):
        col = Column("v", FLOAT_VECTOR, ((0.2, 0.8), Null))
        assert cluster_assign(col) == (1, 0)

    def test_wrong_dtype(self):
        from vita.dtypes import INT

        with pytest.raises(TypeMismatchError):
            cluster_assign(Column("n", INT, (1,)))
