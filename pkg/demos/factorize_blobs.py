"""Fit every solver on the same synthetic clusters and compare them.

Run:  python3 demos/factorize_blobs.py
"""

import numpy as np

from structnmf import (
    SolverConfig,
    fit,
    frobenius_sq,
    kmeans,
    minmax_normalize,
    nmi,
    synthetic_blobs,
)

ds = synthetic_blobs(m=30, n=90, k=3, separation=6.0, seed=7)
x = minmax_normalize(ds.X)
print("data: %d features x %d samples, %d planted clusters" % (*x.shape, 3))
print()
print("%-10s %14s %10s %8s %6s" % ("algorithm", "reconstruction", "cluster", "iters", "time"))

for algorithm in ("basic_nmf", "gnmf", "symm_nmf", "dsp_nmf"):
    config = SolverConfig(algorithm=algorithm, rank=3, lam=1e3, seed=0)
    pair, trace = fit(x, config)
    if pair.W is not None:
        recon = np.sqrt(frobenius_sq(x - pair.W @ pair.H) / frobenius_sq(x))
        recon_txt = "%14.4f" % recon
    else:
        # the symmetric solver factors the sample similarities, not X itself
        recon_txt = "%14s" % "n/a"
    score = nmi(kmeans(pair.H, 3, seed=0), ds.labels)
    print(
        "%-10s %s %10.3f %8d %5.2fs"
        % (algorithm, recon_txt, score, trace.iterations_run, trace.wall_time)
    )

print()
print("reconstruction = relative Frobenius error of W @ H")
print("cluster        = NMI of k-means on H columns vs planted labels")
