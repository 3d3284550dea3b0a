"""Shared builders for the test suite."""

import numpy as np


def planted_instance(m, n, r, lam, seed):
    """Data where both residuals of the structure-preserving objective vanish.

    Builds W with disjoint row supports per column, each column scaled to
    Euclidean norm sqrt(lam), so W^T W = lam * I exactly. With X = W H it
    follows that X^T X = lam * H^T H, hence the objective is exactly zero at
    (W, H) and one update step has numerator equal to denominator.

    Returns (X, W, H).
    """
    rng = np.random.default_rng(seed)
    w = np.zeros((m, r))
    blocks = np.array_split(rng.permutation(m), r)
    for col, rows in enumerate(blocks):
        v = rng.uniform(0.5, 1.0, size=rows.size)
        w[rows, col] = v / np.linalg.norm(v) * np.sqrt(lam)
    h = rng.uniform(0.1, 1.0, size=(r, n))
    return w @ h, w, h


def random_factors(m, n, r, seed, scale=1.0):
    """Strictly positive random (X, W, H) triple for generic numeric tests."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.05, scale, size=(m, n))
    w = rng.uniform(0.05, scale, size=(m, r))
    h = rng.uniform(0.05, scale, size=(r, n))
    return x, w, h
