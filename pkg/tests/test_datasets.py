import json

import numpy as np
import pytest

from structnmf.datasets import (
    Dataset,
    load_csv,
    load_manifest,
    minmax_normalize,
    save_csv,
    stratified_sample,
    synthetic_blobs,
)


def write(path, text):
    path.write_text(text)
    return path


# -- load_csv


def test_load_csv_transposes_rows_to_samples(tmp_path):
    p = write(tmp_path / "t.csv", "1,2\n3,4\n5,6\n")
    ds = load_csv(p, orientation="samples_as_rows")
    assert ds.X.shape == (2, 3)
    assert np.array_equal(ds.X, np.array([[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]]))
    assert ds.labels is None
    assert ds.name == "t"


def test_load_csv_samples_as_cols(tmp_path):
    p = write(tmp_path / "c.csv", "1,2\n3,4\n5,6\n")
    ds = load_csv(p, orientation="samples_as_cols")
    assert ds.X.shape == (3, 2)
    assert np.array_equal(ds.X, np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]))


def test_load_csv_label_first_occurrence_order(tmp_path):
    p = write(tmp_path / "l.csv", "x,y,label\n1,2,b\n3,4,a\n5,6,b\n")
    ds = load_csv(p, label_column="label")
    assert ds.labels.tolist() == [0, 1, 0]
    assert ds.feature_names == ["x", "y"]
    assert ds.X.shape == (2, 3)


def test_load_csv_label_by_index_without_header(tmp_path):
    p = write(tmp_path / "i.csv", "1,2,0\n3,4,1\n5,6,0\n")
    ds = load_csv(p, label_column=2)
    assert ds.labels.tolist() == [0, 1, 0]
    assert ds.X.shape == (2, 3)


def test_load_csv_label_row_with_samples_as_cols(tmp_path):
    p = write(tmp_path / "r.csv", "1,2,3\n7,8,9\n0,1,0\n")
    ds = load_csv(p, orientation="samples_as_cols", label_column=2)
    assert ds.X.shape == (2, 3)
    assert ds.labels.tolist() == [0, 1, 0]
    with pytest.raises(ValueError, match="integer"):
        load_csv(p, orientation="samples_as_cols", label_column="label")


def test_load_csv_diagnostics(tmp_path):
    ragged = write(tmp_path / "ragged.csv", "1,2\n3\n")
    with pytest.raises(ValueError, match="row 2 has 1 cells"):
        load_csv(ragged)
    bad = write(tmp_path / "bad.csv", "a,b\n1,2\n3,oops\n")
    with pytest.raises(ValueError, match="row 3, column 2"):
        load_csv(bad)
    missing = write(tmp_path / "m.csv", "a,b\n1,2\n")
    with pytest.raises(ValueError, match="not found in header"):
        load_csv(missing, label_column="label")
    empty = write(tmp_path / "e.csv", "")
    with pytest.raises(ValueError, match="empty"):
        load_csv(empty)
    with pytest.raises(ValueError, match="orientation"):
        load_csv(ragged, orientation="sideways")


def test_csv_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    ds = Dataset(
        X=rng.uniform(size=(4, 7)) / 3.0,
        labels=np.array([0, 0, 1, 1, 2, 2, 0]),
        name="orig",
    )
    p = tmp_path / "round.csv"
    save_csv(ds, p)
    back = load_csv(p, label_column="label", name="orig")
    assert np.array_equal(back.X, ds.X)
    assert np.array_equal(back.labels, ds.labels)
    assert back.feature_names == ["f0", "f1", "f2", "f3"]


# -- minmax_normalize


def test_minmax_hand_values():
    out = minmax_normalize(np.array([[0.0, 5.0, 10.0]]))
    assert np.allclose(out, [[0.0, 0.5, 1.0]])
    out = minmax_normalize(np.array([[7.0, 7.0, 7.0]]))
    assert np.array_equal(out, np.zeros((1, 3)))


def test_minmax_range_and_idempotence():
    rng = np.random.default_rng(1)
    x = rng.normal(loc=3.0, scale=10.0, size=(6, 20))
    out = minmax_normalize(x)
    assert np.all(out >= 0.0) and np.all(out <= 1.0)
    assert np.allclose(out.min(axis=1), 0.0) and np.allclose(out.max(axis=1), 1.0)
    assert np.array_equal(minmax_normalize(out), out)


# -- stratified_sample


def test_stratified_sample_counts():
    labels = np.array([0] * 10 + [1] * 10)
    ds = Dataset(X=np.arange(40, dtype=float).reshape(2, 20), labels=labels)
    out = stratified_sample(ds, fraction=0.2, seed=0)
    assert out.num_samples == 4
    assert np.bincount(out.labels).tolist() == [2, 2]


def test_stratified_sample_identity_and_drops():
    labels = np.array([0] * 8 + [1] * 3)
    ds = Dataset(X=np.random.default_rng(2).uniform(size=(3, 11)), labels=labels)
    same = stratified_sample(ds, fraction=1.0, seed=0)
    assert same.num_samples == 11
    dropped = stratified_sample(ds, fraction=1.0, seed=0, min_class_size=5)
    assert dropped.num_samples == 8
    assert dropped.num_classes == 1
    with pytest.raises(ValueError, match="no class survived"):
        stratified_sample(ds, fraction=1.0, seed=0, min_class_size=100)


def test_stratified_sample_proportions_and_determinism():
    labels = np.array([0] * 30 + [1] * 21 + [2] * 9)
    ds = Dataset(X=np.random.default_rng(3).uniform(size=(4, 60)), labels=labels)
    a = stratified_sample(ds, fraction=0.5, seed=5)
    b = stratified_sample(ds, fraction=0.5, seed=5)
    assert np.array_equal(a.X, b.X)
    assert np.bincount(a.labels).tolist() == [15, 11, 5]
    with pytest.raises(ValueError, match="fraction"):
        stratified_sample(ds, fraction=0.0, seed=0)
    with pytest.raises(ValueError, match="labels"):
        stratified_sample(Dataset(X=ds.X), fraction=0.5, seed=0)


# -- synthetic_blobs


def test_blobs_contract():
    a = synthetic_blobs(m=8, n=25, k=3, separation=4.0, seed=4)
    b = synthetic_blobs(m=8, n=25, k=3, separation=4.0, seed=4)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.labels, b.labels)
    assert a.X.shape == (8, 25)
    assert np.all(a.X >= 0)
    counts = np.bincount(a.labels)
    assert counts.max() - counts.min() <= 1
    with pytest.raises(ValueError, match="clusters exceed"):
        synthetic_blobs(m=3, n=4, k=5, separation=1.0, seed=0)


# -- manifest


def test_load_manifest(tmp_path):
    ds = synthetic_blobs(m=4, n=30, k=3, separation=5.0, seed=6)
    save_csv(ds, tmp_path / "blobs.csv")
    manifest = {
        "name": "blobs-small",
        "path": "blobs.csv",
        "orientation": "samples_as_rows",
        "label_column": "label",
        "sample_fraction": 0.5,
        "seed": 9,
    }
    mp = write(tmp_path / "m.json", json.dumps(manifest))
    out = load_manifest(mp)
    assert out.name == "blobs-small"
    assert out.num_samples == 15
    assert out.num_classes == 3


def test_load_manifest_no_sampling(tmp_path):
    ds = synthetic_blobs(m=3, n=12, k=2, separation=5.0, seed=7)
    save_csv(ds, tmp_path / "d.csv")
    mp = write(
        tmp_path / "m.json",
        json.dumps({"name": "d", "path": "d.csv", "label_column": "label"}),
    )
    out = load_manifest(mp)
    assert out.num_samples == 12
    assert np.array_equal(out.labels, ds.labels)
