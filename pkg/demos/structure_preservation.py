"""What the structure penalty actually buys.

The dsp_nmf objective adds ||X^T X - lam * H^T H||^2 to the usual
reconstruction term, i.e. it asks the reduced columns to keep the pairwise
dot products of the original columns up to a known scale. A side effect
(and the easiest thing to measure) is that the basis Gram W^T W is pushed
toward lam * I. diag_deviation reports exactly that distance.

Run:  python3 demos/structure_preservation.py
"""

import numpy as np

from structnmf import (
    SolverConfig,
    diag_deviation,
    fit,
    frobenius_sq,
    gram,
    minmax_normalize,
    synthetic_blobs,
)

LAM = 1e3

print("paired runs on 10 blob datasets, rank 3, lam = %g" % LAM)
print()
print("%6s %22s %22s" % ("seed", "dsp_nmf dev", "basic_nmf dev"))

dsp_wins = 0
for seed in range(10):
    ds = synthetic_blobs(m=30, n=60, k=3, separation=6.0, seed=seed)
    x = minmax_normalize(ds.X)
    devs = {}
    for algorithm in ("dsp_nmf", "basic_nmf"):
        config = SolverConfig(algorithm=algorithm, rank=3, lam=LAM, seed=seed)
        pair, _ = fit(x, config)
        devs[algorithm] = diag_deviation(pair.W)[1]
    dsp_wins += devs["dsp_nmf"] < devs["basic_nmf"]
    print("%6d %22.4f %22.4f" % (seed, devs["dsp_nmf"], devs["basic_nmf"]))

print()
print("dsp basis closer to a scaled identity in %d/10 pairs" % dsp_wins)

# the similarity itself: how well does H^T H track X^T X up to scale?
# (fit normalizes factor columns at the end, so compare at the best scalar
# rather than at the training lam)
print()
ds = synthetic_blobs(m=30, n=60, k=3, separation=6.0, seed=0)
x = minmax_normalize(ds.X)
gx = gram(x)
for algorithm in ("dsp_nmf", "basic_nmf"):
    config = SolverConfig(algorithm=algorithm, rank=3, lam=LAM, seed=0)
    pair, _ = fit(x, config)
    gh = gram(pair.H)
    scale = np.sum(gx * gh) / np.sum(gh * gh)
    gap = np.sqrt(frobenius_sq(gx - scale * gh) / frobenius_sq(gx))
    print("%-10s relative gap between X'X and best-scale H'H: %.4f" % (algorithm, gap))
