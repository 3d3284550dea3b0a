"""Dataset ingestion, normalization, subsampling and synthetic data.

A Dataset carries X as features-by-samples, whatever the file layout was,
plus optional integer labels re-indexed to 0..k-1 in first-occurrence order.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

ORIENTATIONS = ("samples_as_rows", "samples_as_cols")


@dataclass
class Dataset:
    X: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Optional[list] = None
    name: str = ""

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D, got shape %s" % (self.X.shape,))
        if not np.all(np.isfinite(self.X)):
            raise ValueError("X contains non-finite values")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.size != self.X.shape[1]:
                raise ValueError(
                    "label count %d does not match sample count %d"
                    % (self.labels.size, self.X.shape[1])
                )

    @property
    def num_features(self):
        return self.X.shape[0]

    @property
    def num_samples(self):
        return self.X.shape[1]

    @property
    def num_classes(self):
        return 0 if self.labels is None else int(self.labels.max()) + 1


def _reindex_first_occurrence(raw):
    seen = {}
    out = np.empty(len(raw), dtype=int)
    for i, v in enumerate(raw):
        if v not in seen:
            seen[v] = len(seen)
        out[i] = seen[v]
    return out


def _parse_cell(cell, row_num, col_num):
    try:
        return float(cell)
    except ValueError:
        raise ValueError(
            "row %d, column %d: could not parse %r as a number" % (row_num, col_num, cell)
        ) from None


def load_csv(path, orientation="samples_as_rows", label_column=None, name=None):
    """Load a rectangular numeric CSV into a Dataset.

    Arguments:
        path: file to read.
        orientation: "samples_as_rows" (one sample per line, the common
            layout) or "samples_as_cols" (one feature per line).
        label_column: where the class labels live. For samples_as_rows this
            is a column, by header name or zero-based index; for
            samples_as_cols it is a zero-based data row index. None means
            unlabeled.
        name: dataset name; defaults to the file stem.

    An optional first header row is detected by failing to parse as numbers.
    Errors carry 1-based row/column positions into the raw file.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError("unknown orientation %r" % (orientation,))
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError("%s: empty file" % path)
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                "%s: row %d has %d cells, expected %d" % (path, i + 1, len(row), width)
            )

    header = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = rows[0]
        rows = rows[1:]
        if not rows:
            raise ValueError("%s: header but no data rows" % path)
    offset = 2 if header is not None else 1

    if orientation == "samples_as_rows":
        label_idx = None
        if label_column is not None:
            if isinstance(label_column, str):
                if header is None or label_column not in header:
                    raise ValueError(
                        "%s: label column %r not found in header %r"
                        % (path, label_column, header)
                    )
                label_idx = header.index(label_column)
            else:
                label_idx = int(label_column)
                if not 0 <= label_idx < width:
                    raise ValueError(
                        "%s: label column index %d out of range for %d columns"
                        % (path, label_idx, width)
                    )
        raw_labels = [row[label_idx] for row in rows] if label_idx is not None else None
        feature_cols = [j for j in range(width) if j != label_idx]
        table = np.array(
            [
                [_parse_cell(row[j], i + offset, j + 1) for j in feature_cols]
                for i, row in enumerate(rows)
            ]
        )
        x = table.T
        names = [header[j] for j in feature_cols] if header else None
    else:
        if isinstance(label_column, str):
            raise ValueError(
                "with samples_as_cols the label row must be a zero-based integer index"
            )
        label_idx = int(label_column) if label_column is not None else None
        if label_idx is not None and not 0 <= label_idx < len(rows):
            raise ValueError(
                "%s: label row index %d out of range for %d data rows"
                % (path, label_idx, len(rows))
            )
        raw_labels = rows[label_idx] if label_idx is not None else None
        feature_rows = [i for i in range(len(rows)) if i != label_idx]
        x = np.array(
            [
                [_parse_cell(rows[i][j], i + offset, j + 1) for j in range(width)]
                for i in feature_rows
            ]
        )
        names = None

    labels = _reindex_first_occurrence(raw_labels) if raw_labels is not None else None
    return Dataset(X=x, labels=labels, feature_names=names, name=name or path.stem)


def save_csv(dataset, path):
    """Write a Dataset as samples-as-rows CSV with a header.

    Floats are written with repr() so a reload reproduces them bit-exactly.
    The label column, when present, is named "label".
    """
    path = Path(path)
    names = dataset.feature_names or ["f%d" % i for i in range(dataset.num_features)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = list(names) + (["label"] if dataset.labels is not None else [])
        writer.writerow(header)
        for j in range(dataset.num_samples):
            row = [repr(float(v)) for v in dataset.X[:, j]]
            if dataset.labels is not None:
                row.append(str(int(dataset.labels[j])))
            writer.writerow(row)


def minmax_normalize(x):
    """Map every feature (row) affinely onto [0, 1]; constant rows become 0."""
    x = np.asarray(x, dtype=float)
    lo = x.min(axis=1, keepdims=True)
    hi = x.max(axis=1, keepdims=True)
    span = hi - lo
    out = np.zeros_like(x)
    np.divide(x - lo, span, out=out, where=span > 0)
    return out


def stratified_sample(dataset, fraction, seed=0, min_class_size=None):
    """Per-class subsample without replacement.

    Arguments:
        dataset: labeled Dataset.
        fraction: in (0, 1]; each class keeps ceil(fraction * size) samples.
        seed: sampling determinism.
        min_class_size: classes smaller than this are dropped entirely
            before sampling.

    Sample order follows the original dataset; labels are re-indexed densely
    after any class drops.
    """
    if dataset.labels is None:
        raise ValueError("stratified_sample needs labels")
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1], got %r" % (fraction,))
    rng = np.random.default_rng(seed)
    keep = []
    for c in range(dataset.num_classes):
        idx = np.flatnonzero(dataset.labels == c)
        if min_class_size is not None and idx.size < min_class_size:
            continue
        take = math.ceil(fraction * idx.size)
        keep.append(rng.choice(idx, size=take, replace=False))
    if not keep:
        raise ValueError("no class survived min_class_size=%r" % (min_class_size,))
    chosen = np.sort(np.concatenate(keep))
    return Dataset(
        X=dataset.X[:, chosen],
        labels=_reindex_first_occurrence(dataset.labels[chosen].tolist()),
        feature_names=dataset.feature_names,
        name=dataset.name,
    )


def synthetic_blobs(m, n, k, separation, seed=0):
    """Isotropic Gaussian clusters with nonnegative means, clipped at zero.

    Centers are drawn uniformly in [0, separation]^m, so larger separation
    spreads the clusters further apart relative to their unit spread. Class
    sizes are balanced to within one sample.
    """
    if k > n:
        raise ValueError("k=%d clusters exceed n=%d samples" % (k, n))
    if separation <= 0:
        raise ValueError("separation must be positive")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, separation, size=(k, m))
    sizes = [n // k + (1 if c < n % k else 0) for c in range(k)]
    cols, labels = [], []
    for c, size in enumerate(sizes):
        cols.append(rng.normal(loc=centers[c], scale=1.0, size=(size, m)).T)
        labels.extend([c] * size)
    x = np.clip(np.concatenate(cols, axis=1), 0.0, None)
    return Dataset(X=x, labels=np.array(labels), name="blobs")


def load_manifest(path):
    """Load the dataset described by a JSON manifest.

    Keys: name, path (CSV, resolved relative to the manifest), orientation,
    label_column, sample_fraction, min_class_size, seed. Subsampling runs
    only when sample_fraction < 1 or min_class_size is set.
    """
    path = Path(path)
    with open(path) as fh:
        spec = json.load(fh)
    csv_path = Path(spec["path"])
    if not csv_path.is_absolute():
        csv_path = path.parent / csv_path
    ds = load_csv(
        csv_path,
        orientation=spec.get("orientation", "samples_as_rows"),
        label_column=spec.get("label_column"),
        name=spec.get("name"),
    )
    fraction = spec.get("sample_fraction", 1.0)
    min_class = spec.get("min_class_size")
    if fraction < 1.0 or min_class is not None:
        ds = stratified_sample(ds, fraction, seed=spec.get("seed", 0), min_class_size=min_class)
    return ds
