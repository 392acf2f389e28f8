"""Topic modeling: collapsed Gibbs sampling LDA and topic assignment.

The sampler runs a fixed number of full sweeps with a seeded RNG, so results
are bit-for-bit reproducible for identical (corpus, k, iterations, seed).
Hyperparameters follow the pinned configuration alpha = 50/k, beta = 0.01.
Empty (or Null) documents contribute no tokens and end up with a uniform
topic distribution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..dtypes import is_null
from ..errors import EmptyCorpusError, InvalidKError, TypeMismatchError
from ..frame import Column

DEFAULT_ITERATIONS = 200
DEFAULT_BETA = 0.01


@dataclass(frozen=True)
class TopicModel:
    k: int
    vocabulary: tuple[str, ...]
    phi: tuple[tuple[float, ...], ...]  # k x V topic-word rows, each sums to 1
    theta: tuple[tuple[float, ...], ...]  # N x k doc-topic rows, each sums to 1
    seed: int


def lda(
    col: Column,
    k: int,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> TopicModel:
    if col.dtype.tag != "List" or col.dtype.inner.tag != "String":
        raise TypeMismatchError(f"lda expects a List(String) column, found {col.dtype}")
    if k < 2:
        raise InvalidKError(f"topic count must be at least 2, got {k}")
    docs = [() if is_null(v) else tuple(v) for v in col.values]
    nonempty = sum(1 for d in docs if d)
    if nonempty < k:
        raise EmptyCorpusError(f"need at least k={k} nonempty documents, found {nonempty}")

    vocab = sorted({t for d in docs for t in d})
    vocab_index = {t: w for w, t in enumerate(vocab)}
    n_words = len(vocab)
    alpha = 50.0 / k
    beta = DEFAULT_BETA

    doc_words = [[vocab_index[t] for t in d] for d in docs]
    rng = random.Random(seed)
    assignments = [[rng.randrange(k) for _ in words] for words in doc_words]

    doc_topic = [[0] * k for _ in docs]
    topic_word = [[0] * n_words for _ in range(k)]
    topic_total = [0] * k
    for d, words in enumerate(doc_words):
        for i, w in enumerate(words):
            z = assignments[d][i]
            doc_topic[d][z] += 1
            topic_word[z][w] += 1
            topic_total[z] += 1

    beta_total = beta * n_words
    weights = [0.0] * k
    for _ in range(iterations):
        for d, words in enumerate(doc_words):
            dt = doc_topic[d]
            zs = assignments[d]
            for i, w in enumerate(words):
                z = zs[i]
                dt[z] -= 1
                topic_word[z][w] -= 1
                topic_total[z] -= 1

                total = 0.0
                for t in range(k):
                    p = (dt[t] + alpha) * (topic_word[t][w] + beta) / (topic_total[t] + beta_total)
                    total += p
                    weights[t] = total
                u = rng.random() * total
                z = 0
                while weights[z] < u:
                    z += 1

                zs[i] = z
                dt[z] += 1
                topic_word[z][w] += 1
                topic_total[z] += 1

    theta = tuple(
        tuple((doc_topic[d][t] + alpha) / (len(doc_words[d]) + k * alpha) for t in range(k))
        for d in range(len(docs))
    )
    phi = tuple(
        tuple((topic_word[t][w] + beta) / (topic_total[t] + beta_total) for w in range(n_words))
        for t in range(k)
    )
    return TopicModel(k, tuple(vocab), phi, theta, seed)


def cluster_assign(col: Column) -> tuple[int, ...]:
    """Row-wise argmax over a vector column; ties break to the lowest index.

    Null rows have no preference and take index 0 by the tie rule.
    """
    if col.dtype.tag != "Vector":
        raise TypeMismatchError(f"cluster_assign expects a Vector column, found {col.dtype}")
    out = []
    for vec in col.values:
        if is_null(vec) or not vec:
            out.append(0)
            continue
        best, best_val = 0, vec[0]
        for i in range(1, len(vec)):
            if vec[i] > best_val:
                best, best_val = i, vec[i]
        out.append(best)
    return tuple(out)
