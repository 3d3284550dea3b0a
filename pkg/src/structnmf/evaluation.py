"""Clustering and classification quality measurement for reduced data.

Points are matrices with samples as columns, matching the H produced by the
solvers. Labels are integer vectors indexed 0..k-1.
"""

from dataclasses import dataclass

import numpy as np

KMEANS_MAX_ITER = 300
KMEANS_TOL = 1e-6


@dataclass
class EvalReport:
    """Per-(dataset, algorithm, rank, lam) statistics for one metric."""

    dataset: str
    algorithm: str
    rank: int
    lam: float
    metric: str
    per_run: list
    mean: float
    max: float

    @classmethod
    def from_runs(cls, dataset, algorithm, rank, lam, metric, per_run):
        mean, best = run_stats(per_run)
        return cls(dataset, algorithm, rank, lam, metric, list(per_run), mean, best)


def _pairwise_sq_dists(a, b):
    # rows of a against rows of b
    sq_a = np.sum(a * a, axis=1)
    sq_b = np.sum(b * b, axis=1)
    d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def _kmeans_pp_centers(pts, k, rng):
    """Seed centers by sampling proportionally to squared distance from the
    nearest center already chosen."""
    n = pts.shape[0]
    centers = np.empty((k, pts.shape[1]))
    centers[0] = pts[rng.integers(n)]
    d2 = np.sum((pts - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers[j] = pts[idx]
        d2 = np.minimum(d2, np.sum((pts - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(pts, centers, rng):
    """Lloyd iterations from given centers.

    Returns (labels, wcss, wcss_history). Empty clusters are reseeded to the
    point currently farthest from its assigned center.
    """
    k = centers.shape[0]
    history = []
    labels = None
    for _ in range(KMEANS_MAX_ITER):
        d2 = _pairwise_sq_dists(pts, centers)
        labels = np.argmin(d2, axis=1)
        closest = d2[np.arange(pts.shape[0]), labels]
        history.append(float(closest.sum()))
        new_centers = centers.copy()
        for j in range(k):
            members = pts[labels == j]
            if members.shape[0] == 0:
                new_centers[j] = pts[np.argmax(closest)]
            else:
                new_centers[j] = members.mean(axis=0)
        shift = np.max(np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)))
        centers = new_centers
        if shift < KMEANS_TOL:
            break
    d2 = _pairwise_sq_dists(pts, centers)
    labels = np.argmin(d2, axis=1)
    wcss = float(d2[np.arange(pts.shape[0]), labels].sum())
    history.append(wcss)
    return labels, wcss, history


def kmeans(points, k, seed=0, restarts=10):
    """Lloyd's algorithm with k-means++ seeding, best of `restarts` by
    within-cluster sum of squares.

    Arguments:
        points: matrix with samples as columns.
        k: number of clusters, at most the sample count.
        seed: seeds both the restarts and the ++ sampling.
        restarts: independent seedings to try.

    Returns the integer label vector of the best restart.
    """
    pts = np.asarray(points, dtype=float).T
    n = pts.shape[0]
    if k > n:
        raise ValueError("k=%d exceeds sample count %d" % (k, n))
    rng = np.random.default_rng(seed)
    best_labels, best_wcss = None, np.inf
    for _ in range(restarts):
        centers = _kmeans_pp_centers(pts, k, rng)
        labels, wcss, _ = _lloyd(pts, centers, rng)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return best_labels


def _contingency(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1))
    np.add.at(table, (ai, bi), 1.0)
    return table


def _entropy(counts):
    p = counts / counts.sum()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def nmi(a, b, normalization="arithmetic"):
    """Normalized mutual information between two labelings, in [0, 1].

    Arguments:
        a, b: equal-length label vectors; values only matter up to renaming.
        normalization: "arithmetic" (mean of the two entropies, the default),
            "geometric", or "max".

    Symmetric in its arguments. Two constant labelings count as identical
    (returns 1); zero mutual information returns 0 regardless of entropies.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("label vectors differ in length: %d vs %d" % (a.size, b.size))
    if a.size == 0:
        raise ValueError("empty labelings")
    table = _contingency(a, b)
    if table.shape == (1, 1):
        return 1.0
    # canonical orientation so nmi(a, b) == nmi(b, a) bitwise: float summation
    # order would otherwise differ between the table and its transpose
    flipped = table.T
    if table.shape > flipped.shape or (
        table.shape == flipped.shape and tuple(table.ravel()) > tuple(flipped.ravel())
    ):
        table = flipped
    n = table.sum()
    pij = table / n
    pa = pij.sum(axis=1)
    pb = pij.sum(axis=0)
    outer = pa[:, None] * pb[None, :]
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    if mi <= 0:
        return 0.0
    ha = _entropy(table.sum(axis=1))
    hb = _entropy(table.sum(axis=0))
    if normalization == "arithmetic":
        denom = 0.5 * (ha + hb)
    elif normalization == "geometric":
        denom = np.sqrt(ha * hb)
    elif normalization == "max":
        denom = max(ha, hb)
    else:
        raise ValueError("unknown normalization %r" % (normalization,))
    return min(mi / denom, 1.0)


def knn_classify(train, train_labels, test, k):
    """Predict test labels by Euclidean k-nearest-neighbor majority vote.

    Samples are columns. Vote ties go to the smallest class index.
    """
    tr = np.asarray(train, dtype=float).T
    te = np.asarray(test, dtype=float).T
    labels = np.asarray(train_labels)
    if tr.shape[1] != te.shape[1]:
        raise ValueError(
            "feature dimensions differ: train %d vs test %d" % (tr.shape[1], te.shape[1])
        )
    if k > tr.shape[0]:
        raise ValueError("k=%d exceeds training sample count %d" % (k, tr.shape[0]))
    d2 = _pairwise_sq_dists(te, tr)
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    votes = labels[order]
    num_classes = int(labels.max()) + 1
    out = np.empty(te.shape[0], dtype=int)
    for i in range(te.shape[0]):
        out[i] = np.argmax(np.bincount(votes[i], minlength=num_classes))
    return out


def accuracy(pred, truth):
    """Fraction of exact label matches."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("label vectors differ in length: %d vs %d" % (pred.size, truth.size))
    return float(np.mean(pred == truth))


def _stratified_folds(labels, folds, rng):
    """Fold index per sample: shuffle each class, deal round-robin."""
    assignment = np.empty(labels.size, dtype=int)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.size < folds:
            raise ValueError(
                "class %d has %d samples, cannot stratify into %d folds"
                % (int(c), idx.size, folds)
            )
        idx = rng.permutation(idx)
        assignment[idx] = np.arange(idx.size) % folds
    return assignment


def kfold_cv(x, labels, folds, seed=0, knn_k=3):
    """Stratified k-fold cross-validation of the KNN classifier.

    Arguments:
        x: samples as columns.
        labels: ground-truth classes.
        folds: at least 2; folds equal to the sample count degenerates to
            leave-one-out, where stratification is disabled.
        seed: controls the per-class shuffling.
        knn_k: neighbor count for the classifier.

    Returns one accuracy per fold.
    """
    x = np.asarray(x, dtype=float)
    labels = np.asarray(labels)
    n = labels.size
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds == n:
        assignment = np.arange(n)
    else:
        assignment = _stratified_folds(labels, folds, np.random.default_rng(seed))
    scores = []
    for f in range(folds):
        test_mask = assignment == f
        pred = knn_classify(x[:, ~test_mask], labels[~test_mask], x[:, test_mask], knn_k)
        scores.append(accuracy(pred, labels[test_mask]))
    return scores


def run_stats(per_run):
    """(mean, max) of a nonempty score sequence."""
    per_run = list(per_run)
    if not per_run:
        raise ValueError("empty run sequence")
    return float(np.mean(per_run)), float(np.max(per_run))
