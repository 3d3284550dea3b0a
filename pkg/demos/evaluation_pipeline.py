"""The full loop: CSV on disk -> factors -> clustering and CV scores.

Writes a labeled CSV, reads it back through the loader, normalizes,
fits, and scores the reduced columns the same way the sweep harness does.

Run:  python3 demos/evaluation_pipeline.py
"""

import tempfile
from pathlib import Path

import numpy as np

from structnmf import (
    SolverConfig,
    fit,
    kfold_cv,
    kmeans,
    load_csv,
    minmax_normalize,
    nmi,
    run_stats,
    save_csv,
    synthetic_blobs,
)

workdir = Path(tempfile.mkdtemp(prefix="structnmf_demo_"))
csv_path = workdir / "blobs.csv"
save_csv(synthetic_blobs(m=12, n=120, k=4, separation=6.0, seed=3), csv_path)
print("wrote", csv_path)

ds = load_csv(csv_path, label_column="label")
x = minmax_normalize(ds.X)
k = ds.num_classes
print("loaded %d x %d with %d classes" % (ds.num_features, ds.num_samples, k))
print()

nmis, accs = [], []
for seed in range(5):
    config = SolverConfig(algorithm="dsp_nmf", rank=4, lam=1e3, seed=seed)
    pair, _ = fit(x, config)
    nmis.append(nmi(kmeans(pair.H, k, seed=seed), ds.labels))
    # stratified 5-fold CV of a 3-NN classifier on the reduced columns
    accs.append(float(np.mean(kfold_cv(pair.H, ds.labels, 5, seed=seed, knn_k=3))))

for label, scores in (("k-means NMI", nmis), ("3-NN accuracy", accs)):
    mean, best = run_stats(scores)
    print("%-14s mean %.3f  max %.3f  (5 seeds)" % (label, mean, best))
