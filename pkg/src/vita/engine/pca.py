"""Two-component PCA via eigendecomposition of the covariance matrix.

Deterministic by construction: the covariance matrix is symmetric, so numpy's
eigh (a deterministic symmetric solver) applies, components are ordered by
descending eigenvalue, and each eigenvector's sign is fixed so its
largest-magnitude entry is positive.
"""

from __future__ import annotations

import numpy as np

from ..dtypes import is_null
from ..errors import DegenerateInputError, TypeMismatchError
from ..frame import Column

_RANK_EPS = 1e-12


def pca2(col: Column) -> tuple[tuple[float, float], ...]:
    if col.dtype.tag != "Vector":
        raise TypeMismatchError(f"pca2 expects a Vector column, found {col.dtype}")
    rows = list(col.values)
    dims = {len(v) for v in rows if not is_null(v)}
    if not dims:
        raise DegenerateInputError("no vector values to project")
    dim = dims.pop()
    if dim < 2:
        raise TypeMismatchError(f"pca2 needs vectors of dimension >= 2, found {dim}")
    if len(rows) < 2:
        raise DegenerateInputError("pca2 needs at least 2 rows")

    x = np.array([[0.0] * dim if is_null(v) else list(v) for v in rows], dtype=float)
    x -= x.mean(axis=0)
    cov = (x.T @ x) / (len(rows) - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[-1] <= _RANK_EPS:
        raise DegenerateInputError("covariance has rank 0: all points coincide")

    order = np.argsort(eigvals)[::-1][:2]
    components = eigvecs[:, order]
    for j in range(2):
        col_j = components[:, j]
        pivot = int(np.argmax(np.abs(col_j)))
        if col_j[pivot] < 0:
            components[:, j] = -col_j
    projected = x @ components
    return tuple((float(px), float(py)) for px, py in projected)
