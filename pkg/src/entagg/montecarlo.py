"""Monte Carlo estimates of expected COD matrices from batches of label vectors."""

from __future__ import annotations

import numpy as np


def mc_cod_moments(labels: np.ndarray, sigma=None) -> tuple[np.ndarray, np.ndarray]:
    """Mean COD matrix and its standard error from ``draws x n`` block labels.

    ``labels[t, e-1]`` is the block of element ``e`` in draw ``t``; labels
    must be integers in ``0..n-1``. Rows follow the permutation ``sigma``
    (default ``1..n``). Both outputs are dense ``n x n`` and zero above the
    diagonal.
    """
    labels = np.asarray(labels)
    draws, n = labels.shape
    if sigma is not None:
        labels = labels[:, np.asarray(sigma) - 1]
    rows = np.arange(draws)
    counts = np.zeros((draws, n), dtype=np.int64)
    at_least = np.zeros((draws, n + 2), dtype=np.int64)
    s1 = np.zeros((n, n))
    s2 = np.zeros((n, n))
    for i in range(n):
        lab = labels[:, i]
        c = counts[rows, lab]
        at_least[rows, c + 1] += 1
        counts[rows, lab] = c + 1
        row = at_least[:, 1 : i + 2].astype(float)
        s1[i, : i + 1] = row.sum(axis=0)
        s2[i, : i + 1] = (row * row).sum(axis=0)
    mean = s1 / draws
    if draws > 1:
        var = np.maximum(s2 - draws * mean * mean, 0.0) / (draws - 1)
    else:
        var = np.zeros_like(mean)
    return mean, np.sqrt(var / draws)
