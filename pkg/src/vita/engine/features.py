"""TF-IDF featurization and aggregation.

The TF-IDF variant is fixed: tf = raw count / document length, smoothed
idf = ln((1+N)/(1+df)) + 1, optional L2 row normalization, vocabulary sorted
lexicographically. Computation is pure Python over the token lists so results
are identical across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..dtypes import is_null
from ..errors import EmptyInputError, EmptyVocabularyError, TypeMismatchError
from ..frame import Column


@dataclass(frozen=True)
class TfidfModel:
    vocabulary: dict[str, int]  # token -> dense index, lexicographic order
    idf: tuple[float, ...]
    min_df: int
    norm: str


def _token_rows(col: Column, op: str) -> list[tuple[str, ...]]:
    if col.dtype.tag != "List" or col.dtype.inner.tag != "String":
        raise TypeMismatchError(f"{op} expects a List(String) column, found {col.dtype}")
    return [() if is_null(v) else v for v in col.values]


def tfidf(col: Column, min_df: int = 1, norm: str = "l2") -> tuple[tuple, TfidfModel]:
    """Token column -> (row vectors, fitted model). Null rows get zero vectors."""
    rows = _token_rows(col, "tfidf")
    n_docs = len(rows)
    df: dict[str, int] = {}
    for row in rows:
        for tok in set(row):
            df[tok] = df.get(tok, 0) + 1
    kept = sorted(t for t, c in df.items() if c >= min_df)
    if not kept:
        raise EmptyVocabularyError(
            f"no tokens survive min_df={min_df} over {n_docs} documents"
        )
    vocab = {t: i for i, t in enumerate(kept)}
    idf = tuple(math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in kept)

    vectors = []
    for row in rows:
        vec = [0.0] * len(kept)
        if row:
            inv_len = 1.0 / len(row)
            counts: dict[str, int] = {}
            for tok in row:
                counts[tok] = counts.get(tok, 0) + 1
            for tok, c in counts.items():
                j = vocab.get(tok)
                if j is not None:
                    vec[j] = (c * inv_len) * idf[j]
        if norm == "l2":
            scale = math.sqrt(sum(x * x for x in vec))
            if scale > 0.0:
                vec = [x / scale for x in vec]
        vectors.append(tuple(vec))
    return tuple(vectors), TfidfModel(vocab, idf, min_df, norm)


def mean_score_per_token(col: Column, vocabulary: tuple[str, ...]) -> dict[str, float]:
    """Per-token mean of the TF-IDF component over all docs, zeros included."""
    if col.dtype.tag != "Vector":
        raise TypeMismatchError(f"mean_score_per_token expects a Vector column, found {col.dtype}")
    n = len(col.values)
    if n == 0:
        raise EmptyInputError("mean over zero rows")
    sums = [0.0] * len(vocabulary)
    for vec in col.values:
        if is_null(vec):
            continue
        for j, x in enumerate(vec):
            sums[j] += x
    return {tok: sums[j] / n for j, tok in enumerate(vocabulary)}


def aggregate_column(col: Column, udf: str):
    """Scalar summaries: mean and sum skip Nulls; count counts non-Null cells."""
    if udf == "count":
        return sum(1 for v in col.values if not is_null(v))
    if not col.dtype.is_numeric:
        raise TypeMismatchError(f"{udf} expects a numeric column, found {col.dtype}")
    present = [v for v in col.values if not is_null(v)]
    if udf == "sum":
        total = sum(present)
        return total if col.dtype.tag == "Int" else float(total)
    if udf == "mean":
        if not present:
            raise EmptyInputError("mean over zero values")
        return sum(present) / len(present)
    raise TypeMismatchError(f"unknown aggregate {udf!r}")
