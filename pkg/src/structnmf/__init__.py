"""Structure-preserving nonnegative matrix factorization toolkit.

Factorizes nonnegative data X (features by samples) into nonnegative W and H
while optionally preserving the pairwise sample similarity X^T X at a chosen
scale, plus graph-regularized and symmetric variants and the evaluation
harness used to benchmark them.
"""

from .linalg import (
    EPS,
    frobenius_sq,
    gram,
    grad_h_dsp,
    mul_update_step,
    objective_dsp,
    objective_dsp_expanded,
    objective_nmf,
)
from .solvers import (
    FactorPair,
    FitTrace,
    GraphSpec,
    SolverConfig,
    build_knn_graph,
    diag_deviation,
    fit,
    init_factors,
    normalize_factors,
    update_gnmf,
    update_h_dsp,
    update_symm,
    update_w,
)
from .evaluation import (
    EvalReport,
    accuracy,
    kfold_cv,
    kmeans,
    knn_classify,
    nmi,
    run_stats,
)
from .datasets import (
    Dataset,
    load_csv,
    load_manifest,
    minmax_normalize,
    save_csv,
    stratified_sample,
    synthetic_blobs,
)

__version__ = "0.1.0"
