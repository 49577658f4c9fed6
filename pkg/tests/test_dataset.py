import numpy as np
import pytest

from panng.data import load_bundled
from panng.dataset import (
    Preprocessor,
    load_csv,
    preprocess,
    preprocessor_state,
    transform_feature_rows,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_basic_parse(self, tmp_path):
        p = write(tmp_path, "a,b,y\n1,2,p\n3,4,q\n")
        raw = load_csv(p, label_column="y")
        assert raw.n_rows == 2
        assert raw.n_cols == 3
        assert raw.label_column == 2

    def test_ragged_rows(self, tmp_path):
        p = write(tmp_path, "a,b,y\n1,2,p\n3,4\n")
        with pytest.raises(ValueError, match="ragged"):
            load_csv(p, label_column="y")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_csv(tmp_path / "nope.csv", label_column=0)

    def test_label_column_absent(self, tmp_path):
        p = write(tmp_path, "a,b\n1,2\n")
        with pytest.raises(ValueError, match="label column"):
            load_csv(p, label_column="y")
        with pytest.raises(ValueError, match="out of range"):
            load_csv(p, label_column=5)

    def test_no_header(self, tmp_path):
        p = write(tmp_path, "1,2,p\n3,4,q\n")
        raw = load_csv(p, label_column=2, has_header=False)
        assert raw.n_rows == 2
        assert raw.header == ("col0", "col1", "col2")

    def test_wdbc_row_count(self):
        # bundled WDBC: 569 rows, 30 features + label
        ds = load_bundled("wdbc")
        assert ds.source.n_rows == 569
        assert ds.source.n_cols == 31


class TestPreprocess:
    def test_mean_imputation(self, tmp_path):
        p = write(tmp_path, "a,y\n1,p\n,q\n3,p\n")
        ds = preprocess(load_csv(p, label_column="y"), norm="none")
        assert np.allclose(ds.features.ravel(), [1.0, 2.0, 3.0])

    def test_one_hot(self, tmp_path):
        p = write(tmp_path, "c,y\nred,p\nblue,q\nred,p\n")
        ds = preprocess(load_csv(p, label_column="y"), norm="none")
        assert ds.feature_names == ("c=red", "c=blue")
        assert np.array_equal(ds.features, [[1, 0], [0, 1], [1, 0]])

    def test_drops_unlabeled_rows(self, tmp_path):
        p = write(tmp_path, "a,y\n1,p\n2,\n3,q\n")
        ds = preprocess(load_csv(p, label_column="y"))
        assert ds.n == 2

    def test_all_rows_dropped(self, tmp_path):
        p = write(tmp_path, "a,y\n1,\n2,?\n")
        with pytest.raises(ValueError, match="no labeled samples"):
            preprocess(load_csv(p, label_column="y"))

    def test_label_coding_first_appearance(self, tmp_path):
        p = write(tmp_path, "a,y\n1,z\n2,a\n3,z\n4,m\n")
        ds = preprocess(load_csv(p, label_column="y"))
        assert ds.label_names == ("z", "a", "m")
        assert ds.labels.tolist() == [0, 1, 0, 2]

    def test_class_counts(self, tiny_dataset):
        for c in range(tiny_dataset.m):
            assert tiny_dataset.class_counts[c] == np.sum(tiny_dataset.labels == c)
        assert tiny_dataset.class_counts.sum() == tiny_dataset.n

    def test_output_finite(self, tiny_dataset):
        assert np.all(np.isfinite(tiny_dataset.features))

    def test_constant_column_zscore_maps_to_zero(self, tmp_path):
        p = write(tmp_path, "a,b,y\n5,1,p\n5,2,q\n5,3,p\n")
        ds = preprocess(load_csv(p, label_column="y"), norm="zscore")
        assert np.all(ds.features[:, 0] == 0.0)

    def test_wine_shape(self):
        # Wine: 178 samples, 3 classes, 13 all-numeric features
        ds = load_bundled("wine")
        assert (ds.n, ds.m, ds.d) == (178, 3, 13)

    @pytest.mark.parametrize("norm", ["l2row", "zscore", "minmax"])
    def test_renormalizing_is_noop(self, tmp_path, norm):
        p = write(tmp_path, "a,b,y\n1,10,p\n2,20,q\n4,35,p\n8,50,q\n")
        ds = preprocess(load_csv(p, label_column="y"), norm=norm)
        pre = Preprocessor(norm=norm)
        pre.numeric_mask_ = np.ones(ds.d, dtype=bool)
        if norm == "zscore":
            pre.col_mean_ = ds.features.mean(axis=0)
            pre.col_std_ = ds.features.std(axis=0)
        elif norm == "minmax":
            pre.col_min_ = ds.features.min(axis=0)
            pre.col_max_ = ds.features.max(axis=0)
        again = pre.apply_norm(ds.features)
        if norm == "zscore":
            # already zero-mean unit-variance, so the same map is identity
            assert np.allclose(again, ds.features, atol=1e-12)
        else:
            assert np.allclose(again, ds.features, atol=1e-12)


class TestPreprocessorState:
    def test_round_trip_transform(self, tiny_csv):
        raw = load_csv(tiny_csv, label_column="y")
        ds = preprocess(raw, norm="l2row")
        pre = Preprocessor(norm="l2row").fit(raw)
        state = preprocessor_state(pre)
        rows = [tuple(r[j] for j in range(raw.n_cols) if j != raw.label_column) for r in raw.rows]
        x = transform_feature_rows(state, rows)
        assert np.allclose(x, pre.transform(raw))

    def test_train_only_statistics(self, tiny_csv):
        raw = load_csv(tiny_csv, label_column="y")
        train = [0, 2, 4]
        pre = Preprocessor(norm="zscore").fit(raw, row_indices=train)
        # deleting the held-out rows must not change the fitted statistics
        pre2 = Preprocessor(norm="zscore").fit(raw.subset(train))
        assert pre.means_ == pre2.means_
        assert np.allclose(pre.col_mean_, pre2.col_mean_)
        assert np.allclose(pre.col_std_, pre2.col_std_)
