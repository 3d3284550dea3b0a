"""Export the scikit-learn copies of Wine, Breast Cancer and Digits as
labeled CSVs plus manifests, so the CLI can chew on real data:

    python3 demos/export_uci.py data/
    structnmf fit --data data/wine.json --algorithm dsp_nmf --rank 7 --out runs/wine
    structnmf sweep --data data/wine.json --data data/bc.json --out runs/sweep \
        --ranks 3 5 7 --lambdas 0.01 1000 --runs 3

scikit-learn is only needed by this script, not by the library.
"""

import sys
import json
from pathlib import Path

try:
    from sklearn.datasets import load_breast_cancer, load_digits, load_wine
except ImportError:
    sys.exit("this exporter needs scikit-learn (pip install scikit-learn)")

from structnmf import Dataset, save_csv

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
out_dir.mkdir(parents=True, exist_ok=True)

for name, loader in (("wine", load_wine), ("bc", load_breast_cancer), ("digits", load_digits)):
    bunch = loader()
    ds = Dataset(X=bunch.data.T, labels=bunch.target, name=name)
    save_csv(ds, out_dir / (name + ".csv"))
    (out_dir / (name + ".json")).write_text(
        json.dumps({"name": name, "path": name + ".csv", "label_column": "label"}, indent=2)
    )
    print("wrote %s (%d features x %d samples)" % (out_dir / (name + ".csv"), *ds.X.shape))
