"""Dense matrix kernels and objective/gradient expressions shared by the solvers.

Everything operates on float64 numpy arrays. Shapes follow the factorization
convention: data X is m features by n samples, basis W is m by r, and
coefficients H are r by n.
"""

import numpy as np

EPS = 1e-12


def frobenius_sq(a):
    """Squared Frobenius norm, the plain sum of squared entries."""
    a = np.asarray(a, dtype=float)
    return float(np.sum(a * a))


def gram(a):
    """Gram matrix A^T A; symmetric and positive semidefinite."""
    a = np.asarray(a, dtype=float)
    return a.T @ a


def mul_update_step(current, numerator, denominator, eps=EPS):
    """One elementwise multiplicative update.

    Returns current * numerator / (denominator + eps). All three matrices
    must share one shape and be nonnegative; eps keeps the division finite
    where a denominator entry vanishes, which also keeps zero entries of
    `current` absorbing.
    """
    current = np.asarray(current, dtype=float)
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.asarray(denominator, dtype=float)
    if not (current.shape == numerator.shape == denominator.shape):
        raise ValueError(
            "shape mismatch: current %s, numerator %s, denominator %s"
            % (current.shape, numerator.shape, denominator.shape)
        )
    return current * numerator / (denominator + eps)


def _check_factor_shapes(x, w, h):
    if w.shape[0] != x.shape[0] or h.shape[1] != x.shape[1] or w.shape[1] != h.shape[0]:
        raise ValueError(
            "factor shapes W %s, H %s do not conform to data %s"
            % (w.shape, h.shape, x.shape)
        )


def objective_nmf(x, w, h):
    """Reconstruction objective ||X - WH||_F^2."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    _check_factor_shapes(x, w, h)
    return frobenius_sq(x - w @ h)


def objective_dsp(x, w, h, lam):
    """Structure-preserving objective ||X - WH||^2 + ||X^T X - lam H^T H||^2.

    Arguments:
        x: data matrix, m x n.
        w: basis matrix, m x r.
        h: coefficient matrix, r x n.
        lam: positive scale relating the two Gram matrices.

    Forms the n x n Gram matrix of X directly; use objective_dsp_expanded
    inside iteration loops where n is large.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    if lam <= 0:
        raise ValueError("lam must be positive, got %r" % (lam,))
    _check_factor_shapes(x, w, h)
    return frobenius_sq(x - w @ h) + frobenius_sq(gram(x) - lam * gram(h))


def objective_dsp_expanded(x, w, h, lam, xxt_sq=None):
    """objective_dsp computed without forming any n x n matrix.

    Uses ||X^T X - lam H^T H||^2 =
    ||X X^T||^2 - 2 lam ||X H^T||^2 + lam^2 ||H H^T||^2, whose largest
    intermediate is m x m. Pass xxt_sq = frobenius_sq(x @ x.T) to reuse
    the constant term across iterations.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    if lam <= 0:
        raise ValueError("lam must be positive, got %r" % (lam,))
    _check_factor_shapes(x, w, h)
    if xxt_sq is None:
        xxt_sq = frobenius_sq(x @ x.T)
    penalty = xxt_sq - 2.0 * lam * frobenius_sq(x @ h.T) + lam**2 * frobenius_sq(h @ h.T)
    return frobenius_sq(x - w @ h) + penalty


def grad_h_dsp(x, w, h, lam):
    """Gradient of objective_dsp with respect to H, an r x n matrix.

    Equals -2 W^T X + 2 W^T W H - 4 lam (H X^T) X + 4 lam^2 (H H^T) H.
    lam = 0 is accepted and leaves the plain reconstruction gradient.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    _check_factor_shapes(x, w, h)
    g = -2.0 * (w.T @ x) + 2.0 * ((w.T @ w) @ h)
    if lam != 0:
        g -= 4.0 * lam * ((h @ x.T) @ x)
        g += 4.0 * lam**2 * ((h @ h.T) @ h)
    return g
