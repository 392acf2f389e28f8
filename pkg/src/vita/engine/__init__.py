"""Native implementations backing the compiled plan steps.

Each function here is a pure column-in/column-out (or column-in/value-out)
transform; the executor owns frame mutation and action semantics. All
randomized routines take explicit seeds and are bit-for-bit reproducible.
"""

from .features import aggregate_column, mean_score_per_token, tfidf, TfidfModel
from .filters import filter_rows
from .pca import pca2
from .text import project_text, tokenize, unique_tokens
from .topics import cluster_assign, lda, TopicModel

__all__ = [
    "TfidfModel",
    "TopicModel",
    "aggregate_column",
    "cluster_assign",
    "filter_rows",
    "lda",
    "mean_score_per_token",
    "pca2",
    "project_text",
    "tfidf",
    "tokenize",
    "unique_tokens",
]
