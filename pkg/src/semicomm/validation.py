"""Input checks shared by the solvers and estimators."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array


def check_matrix(x, *, square=False, symmetric=False, nonnegative=False, name="X"):
    """Return ``x`` as a finite float64 2-D array, enforcing the requested shape.

    Raises
    ------
    ValueError
        If any requested property does not hold.
    """
    x = check_array(x, dtype=np.float64, ensure_min_samples=1, ensure_min_features=1)
    if square and x.shape[0] != x.shape[1]:
        raise ValueError(f"{name} must be square, got shape {x.shape}")
    if symmetric:
        if x.shape[0] != x.shape[1]:
            raise ValueError(f"{name} must be square, got shape {x.shape}")
        scale = max(1.0, float(np.abs(x).max()))
        if not np.allclose(x, x.T, rtol=0.0, atol=1e-10 * scale):
            raise ValueError(f"{name} must be symmetric")
    if nonnegative and (x < 0).any():
        i, j = np.argwhere(x < 0)[0]
        raise ValueError(f"{name} has a negative entry at ({i}, {j}): {x[i, j]}")
    return x


def check_n_communities(k, n):
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"number of communities must be a positive integer, got {k!r}")
    if k > n:
        raise ValueError(f"number of communities k={k} exceeds number of nodes n={n}")
    return int(k)
