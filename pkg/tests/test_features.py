"""TF-IDF and aggregation against independent brute-force oracles.

The oracle below recomputes everything from first principles (Counter + math
over plain dicts) and shares no code with the engine path it checks.
"""

import math
from collections import Counter

import pytest

from vita.dtypes import FLOAT, FLOAT_VECTOR, INT, Null, TOKENS
from vita.engine import aggregate_column, mean_score_per_token, tfidf
from vita.errors import EmptyInputError, EmptyVocabularyError, TypeMismatchError
from vita.frame import Column


def oracle_tfidf(docs: list[list[str]], min_df: int = 1, norm: str = "l2"):
    """Brute-force reference: tf = count/len, idf = ln((1+N)/(1+df)) + 1."""
    n = len(docs)
    df = Counter()
    for doc in docs:
        for tok in set(doc):
            df[tok] += 1
    vocab = sorted(t for t in df if df[t] >= min_df)
    idf = {t: math.log((1 + n) / (1 + df[t])) + 1.0 for t in vocab}
    rows = []
    for doc in docs:
        counts = Counter(doc)
        row = [
            (counts[t] / len(doc)) * idf[t] if doc and t in counts else 0.0 for t in vocab
        ]
        if norm == "l2":
            length = math.sqrt(sum(x * x for x in row))
            if length:
                row = [x / length for x in row]
        rows.append(row)
    return vocab, rows


FIVE_DOCS = [
    ["shoes", "comfy", "shoes"],
    ["red", "shoes"],
    ["comfy", "red", "laces", "laces"],
    [],
    ["blue", "blue", "blue", "shoes", "comfy"],
]


def tok_col(docs) -> Column:
    return Column("tokens", TOKENS, tuple(tuple(d) for d in docs))


class TestTfidf:
    def test_single_doc_hand_computed(self):
        vectors, model = tfidf(tok_col([["a", "a", "b"]]))
        assert list(model.vocabulary) == ["a", "b"]
        assert model.idf == (1.0, 1.0)  # ln(2/2) + 1
        assert vectors[0][0] == pytest.approx(0.8944, abs=1e-4)
        assert vectors[0][1] == pytest.approx(0.4472, abs=1e-4)

    def test_identical_docs_identical_rows(self):
        vectors, _ = tfidf(tok_col([["x", "y"], ["x", "y"]]))
        assert vectors[0] == vectors[1]

    def test_five_doc_corpus_matches_oracle_within_1e9(self):
        vectors, model = tfidf(tok_col(FIVE_DOCS))
        vocab, expected = oracle_tfidf(FIVE_DOCS)
        assert list(model.vocabulary) == vocab
        for got_row, want_row in zip(vectors, expected):
            for got, want in zip(got_row, want_row):
                assert got == pytest.approx(want, abs=1e-9)

    def test_min_df_filters_and_oracle_agrees(self):
        vectors, model = tfidf(tok_col(FIVE_DOCS), min_df=2)
        vocab, expected = oracle_tfidf(FIVE_DOCS, min_df=2)
        assert list(model.vocabulary) == vocab
        for got_row, want_row in zip(vectors, expected):
            for got, want in zip(got_row, want_row):
                assert got == pytest.approx(want, abs=1e-9)

    def test_min_df_removing_everything_is_an_error(self):
        with pytest.raises(EmptyVocabularyError):
            tfidf(tok_col([["a"], ["b"]]), min_df=3)

    def test_null_rows_become_zero_vectors(self):
        col = Column("tokens", TOKENS, (("a",), Null))
        vectors, _ = tfidf(col)
        assert vectors[1] == (0.0,)

    def test_unnormalized_variant(self):
        vectors, _ = tfidf(tok_col([["a", "a", "b"]]), norm="none")
        vocab, expected = oracle_tfidf([["a", "a", "b"]], norm="none")
        assert vectors[0] == pytest.approx(expected[0], abs=1e-12)

    def test_wrong_dtype_rejected(self):
        with pytest.raises(TypeMismatchError):
            tfidf(Column("n", INT, (1, 2)))


class TestMeanScorePerToken:
    def test_single_doc_equals_its_vector(self):
        vectors, model = tfidf(tok_col([["a", "a", "b"]]))
        col = Column("v", FLOAT_VECTOR, vectors)
        scores = mean_score_per_token(col, tuple(model.vocabulary))
        assert scores["a"] == pytest.approx(0.8944, abs=1e-4)
        assert scores["b"] == pytest.approx(0.4472, abs=1e-4)

    def test_zeros_included_in_mean(self):
        vectors, model = tfidf(tok_col(FIVE_DOCS))
        col = Column("v", FLOAT_VECTOR, vectors)
        scores = mean_score_per_token(col, tuple(model.vocabulary))
        j = list(model.vocabulary).index("blue")
        expected = sum(row[j] for row in vectors) / len(vectors)
        assert scores["blue"] == pytest.approx(expected, abs=1e-12)

    def test_empty_input(self):
        col = Column("v", FLOAT_VECTOR, ())
        with pytest.raises(EmptyInputError):
            mean_score_per_token(col, ("a",))


class TestAggregates:
    def test_mean(self):
        assert aggregate_column(Column("n", INT, (1, 2, 3)), "mean") == 2

    def test_mean_skips_nulls(self):
        assert aggregate_column(Column("n", INT, (1, Null, 3)), "mean") == 2

    def test_mean_of_nothing_is_an_error(self):
        with pytest.raises(EmptyInputError):
            aggregate_column(Column("n", INT, ()), "mean")
        with pytest.raises(EmptyInputError):
            aggregate_column(Column("n", INT, (Null, Null)), "mean")

    def test_sum_preserves_int(self):
        assert aggregate_column(Column("n", INT, (1, 2)), "sum") == 3
        assert aggregate_column(Column("x", FLOAT, (0.5, 0.25)), "sum") == 0.75

    def test_count_counts_non_null(self):
        assert aggregate_column(Column("n", INT, ()), "count") == 0
        assert aggregate_column(Column("n", INT, (1, Null, 3)), "count") == 2

    def test_mean_requires_numeric(self):
        from vita.dtypes import STRING

        with pytest.raises(TypeMismatchError):
            aggregate_column(Column("s", STRING, ("a",)), "mean")
