"""Objective traces, including the oscillation of the dsp update.

With a small structure scale the dsp objective decays like plain NMF. With
a large one the H rule's numerator and denominator are dominated by the
penalty terms, the per-entry step becomes h <- g / (lam * h), and applying
it twice lands back where it started: the trace bounces between two levels
instead of descending. The envelope still drifts down slowly through the
reconstruction term, and the factors it settles between are what the
quality metrics see, which is why clustering results stay good.

Run:  python3 demos/convergence_trace.py
"""

import numpy as np

from structnmf import SolverConfig, fit, minmax_normalize, synthetic_blobs

ds = synthetic_blobs(m=20, n=50, k=3, separation=5.0, seed=1)
x = minmax_normalize(ds.X)

for algorithm, lam in (("basic_nmf", 1.0), ("dsp_nmf", 1e-2), ("dsp_nmf", 1e3)):
    config = SolverConfig(
        algorithm=algorithm, rank=3, lam=lam, max_iter=40, rel_tol=1e-15, seed=0
    )
    _, trace = fit(x, config)
    f = np.asarray(trace.objective_history)
    rises = int(np.sum(f[1:] > f[:-1]))
    print("%s, lam=%g: %d of %d steps increased the objective" % (algorithm, lam, rises, f.size - 1))
    print("  first 12 objective values:")
    for i in range(0, 12, 4):
        print("   " + " ".join("%12.5g" % v for v in f[i : i + 4]))
    print()
