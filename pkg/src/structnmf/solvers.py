"""Multiplicative-update solvers and factor utilities.

Four algorithms share one fit loop: plain NMF, graph-regularized NMF,
symmetric NMF on the sample Gram matrix, and structure-preserving NMF
(dsp_nmf), which penalizes the gap between X^T X and lam * H^T H.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    frobenius_sq,
    gram,
    mul_update_step,
    objective_dsp_expanded,
    objective_nmf,
)

ALGORITHMS = ("basic_nmf", "gnmf", "symm_nmf", "dsp_nmf")
DSP_RULES = ("appendix_consistent", "main_text")


@dataclass(frozen=True)
class SolverConfig:
    """Everything a fit needs beyond the data matrix.

    `lam` is the structure-preservation scale of dsp_nmf; `gnmf_lambda` and
    `graph_k` only matter for gnmf; `dsp_rule` selects which printed form of
    the dsp H update denominator is used (the two differ by a factor of two
    on the quartic term).
    """

    algorithm: str = "dsp_nmf"
    rank: int = 2
    lam: float = 1e3
    gnmf_lambda: float = 100.0
    graph_k: int = 5
    max_iter: int = 200
    rel_tol: float = 1e-5
    seed: int = 0
    dsp_rule: str = "appendix_consistent"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError("unknown algorithm %r" % (self.algorithm,))
        if self.dsp_rule not in DSP_RULES:
            raise ValueError("unknown dsp_rule %r" % (self.dsp_rule,))
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.gnmf_lambda < 0:
            raise ValueError("gnmf_lambda must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")


@dataclass
class FactorPair:
    """The factorization (W: m x r basis, H: r x n coefficients).

    W is None for symm_nmf, which factors the sample Gram matrix and has no
    basis in data space.
    """

    W: Optional[np.ndarray]
    H: np.ndarray


@dataclass
class FitTrace:
    """Per-iteration objective values plus stopping metadata.

    objective_history[0] is the objective of the initial factors, so its
    length is iterations_run + 1.
    """

    objective_history: np.ndarray
    converged: bool
    iterations_run: int
    wall_time: float


@dataclass
class GraphSpec:
    """Binary kNN graph: adjacency A, degree matrix D, Laplacian L = D - A."""

    adjacency: np.ndarray
    degree: np.ndarray
    laplacian: np.ndarray


def init_factors(m, n, r, seed):
    """Random starting factors with entries i.i.d. uniform on (0.01, 1].

    The lower cutoff keeps every entry strictly positive so multiplicative
    updates cannot lock an entry at zero from the start. Deterministic for
    a given seed; W is drawn before H.
    """
    if not 1 <= r < min(m, n):
        raise ValueError("rank %d out of range, need 1 <= r < min(%d, %d)" % (r, m, n))
    rng = np.random.default_rng(seed)
    w = 1.0 - rng.uniform(0.0, 0.99, size=(m, r))
    h = 1.0 - rng.uniform(0.0, 0.99, size=(r, n))
    return FactorPair(W=w, H=h)


def update_h_dsp(x, w, h, lam, rule="appendix_consistent"):
    """One multiplicative H step of the structure-preserving objective.

    Arguments:
        x: data, m x n.
        w: basis, m x r.
        h: coefficients, r x n.
        lam: structure scale, >= 0 (0 reduces to the plain NMF step).
        rule: "appendix_consistent" uses denominator W^T W H + 2 lam^2 (H H^T) H,
            "main_text" uses lam^2 instead of 2 lam^2; numerators agree.

    The similarity product is evaluated as (H X^T) X so the step costs
    O(mnr) and never materializes the n x n Gram matrix.
    """
    if rule not in DSP_RULES:
        raise ValueError("unknown dsp_rule %r" % (rule,))
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    numerator = w.T @ x + 2.0 * lam * ((h @ x.T) @ x)
    quartic = 2.0 * lam**2 if rule == "appendix_consistent" else lam**2
    denominator = (w.T @ w) @ h + quartic * ((h @ h.T) @ h)
    return mul_update_step(h, numerator, denominator)


def update_w(x, w, h):
    """One multiplicative W step, W * (X H^T) / (W H H^T); shared by all
    reconstruction-based algorithms."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    return mul_update_step(w, x @ h.T, w @ (h @ h.T))


def _update_h_basic(x, w, h):
    return mul_update_step(h, w.T @ x, (w.T @ w) @ h)


def normalize_factors(pair):
    """Rescale so each W column has unit Euclidean norm, moving the scale
    into the matching H row; the product WH is unchanged.

    Raises on an all-zero W column (the scale of that component is lost).
    """
    if pair.W is None:
        raise ValueError("cannot normalize factors without a basis matrix W")
    norms = np.sqrt(np.sum(pair.W**2, axis=0))
    dead = np.flatnonzero(norms == 0.0)
    if dead.size:
        raise ValueError("degenerate factor: W column %d is all zero" % dead[0])
    return FactorPair(W=pair.W / norms, H=pair.H * norms[:, None])


def build_knn_graph(x, k):
    """Symmetrized-union binary kNN graph over the columns (samples) of x.

    A_ij = 1 when j is among the k Euclidean nearest neighbors of i or vice
    versa; the diagonal stays zero. Returns the GraphSpec with degree and
    Laplacian filled in.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[1]
    if k >= n:
        raise ValueError("graph_k=%d must be smaller than sample count %d" % (k, n))
    sq = np.sum(x * x, axis=0)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x.T @ x)
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    a = np.zeros((n, n))
    rows = np.repeat(np.arange(n), k)
    a[rows, order[:, :k].ravel()] = 1.0
    a = np.maximum(a, a.T)
    degree = np.diag(a.sum(axis=1))
    return GraphSpec(adjacency=a, degree=degree, laplacian=degree - a)


def update_gnmf(x, w, h, graph, gnmf_lambda):
    """One full graph-regularized update pair (H then W).

    H gets the neighbor-smoothing terms: numerator adds lam_g * H A and
    denominator adds lam_g * H D; W is the plain reconstruction step against
    the updated H.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    degs = np.diag(graph.degree)
    numerator = w.T @ x + gnmf_lambda * (h @ graph.adjacency)
    denominator = (w.T @ w) @ h + gnmf_lambda * (h * degs[None, :])
    h_new = mul_update_step(h, numerator, denominator)
    return FactorPair(W=update_w(x, w, h_new), H=h_new)


def update_symm(a, h):
    """One multiplicative step of min ||A - H^T H||^2, H * (H A) / (H H^T H)."""
    a = np.asarray(a, dtype=float)
    h = np.asarray(h, dtype=float)
    if a.shape[0] != a.shape[1]:
        raise ValueError("similarity matrix must be square, got %s" % (a.shape,))
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-12):
        raise ValueError("similarity matrix must be symmetric")
    return mul_update_step(h, h @ a, (h @ h.T) @ h)


def diag_deviation(w):
    """How far W^T W is from a scaled identity.

    Returns (lambda_hat, deviation) where lambda_hat is the mean diagonal of
    W^T W and deviation is ||W^T W - lambda_hat I||_F / (lambda_hat sqrt(r)).
    Small deviation means the basis columns are near-orthogonal with equal
    norms, the regime the structure penalty pushes toward.
    """
    w = np.asarray(w, dtype=float)
    g = w.T @ w
    lam_hat = float(np.mean(np.diag(g)))
    if lam_hat == 0.0:
        raise ValueError("W is all zero")
    r = g.shape[0]
    dev = float(np.linalg.norm(g - lam_hat * np.eye(r)) / (lam_hat * np.sqrt(r)))
    return lam_hat, dev


def _gnmf_objective(x, w, h, laplacian, gnmf_lambda):
    smooth = float(np.sum((h @ laplacian) * h))
    return objective_nmf(x, w, h) + gnmf_lambda * smooth


def _symm_objective(a_sq, a, h):
    # ||A - H^T H||^2 expanded so no n x n product is formed per iteration
    cross = float(np.sum((h @ a) * h))
    return a_sq - 2.0 * cross + frobenius_sq(h @ h.T)


def fit(x, config):
    """Run one solver to convergence; returns (FactorPair, FitTrace).

    Arguments:
        x: nonnegative data, m features by n samples; min-max normalize
            first for real datasets.
        config: SolverConfig selecting the algorithm and its settings.

    Each iteration applies the algorithm's update pair (H then W), then
    records that iteration's objective. The loop stops once the relative
    change |f_t - f_{t-1}| / (1 + f_{t-1}) drops below rel_tol, or at
    max_iter. Factors are normalized once at the end (skipped for
    symm_nmf, which has no W).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("x must be 2-D, got shape %s" % (x.shape,))
    if not np.all(np.isfinite(x)):
        raise ValueError("x contains non-finite values")
    if np.any(x < 0):
        raise ValueError("x contains negative values; min-max normalize first")
    m, n = x.shape
    if not 1 <= config.rank < min(m, n):
        raise ValueError(
            "degenerate rank %d for %d x %d data, need 1 <= r < %d"
            % (config.rank, m, n, min(m, n))
        )

    start = time.perf_counter()
    pair = init_factors(m, n, config.rank, config.seed)
    w, h = pair.W, pair.H
    algorithm = config.algorithm

    if algorithm == "dsp_nmf":
        xxt_sq = frobenius_sq(x @ x.T)
        objective = lambda w, h: objective_dsp_expanded(x, w, h, config.lam, xxt_sq)
    elif algorithm == "basic_nmf":
        objective = lambda w, h: objective_nmf(x, w, h)
    elif algorithm == "gnmf":
        graph = build_knn_graph(x, config.graph_k)
        objective = lambda w, h: _gnmf_objective(x, w, h, graph.laplacian, config.gnmf_lambda)
    else:  # symm_nmf
        a = gram(x)
        a_sq = frobenius_sq(a)
        w = None
        objective = lambda w, h: _symm_objective(a_sq, a, h)

    history = [objective(w, h)]
    converged = False
    iterations = 0
    for _ in range(config.max_iter):
        if algorithm == "dsp_nmf":
            h = update_h_dsp(x, w, h, config.lam, config.dsp_rule)
            w = update_w(x, w, h)
        elif algorithm == "basic_nmf":
            h = _update_h_basic(x, w, h)
            w = update_w(x, w, h)
        elif algorithm == "gnmf":
            stepped = update_gnmf(x, w, h, graph, config.gnmf_lambda)
            w, h = stepped.W, stepped.H
        else:
            h = update_symm(a, h)
        f = objective(w, h)
        history.append(f)
        iterations += 1
        if abs(f - history[-2]) < config.rel_tol * (1.0 + history[-2]):
            converged = True
            break

    result = FactorPair(W=w, H=h)
    if algorithm != "symm_nmf":
        result = normalize_factors(result)
    trace = FitTrace(
        objective_history=np.asarray(history),
        converged=converged,
        iterations_run=iterations,
        wall_time=time.perf_counter() - start,
    )
    return result, trace
