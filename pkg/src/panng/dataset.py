"""CSV loading and preprocessing into immutable numeric datasets.

Preprocessing rules: rows without a label are dropped, missing numeric
cells are imputed with the column mean, numeric features are normalized,
categorical features are one-hot encoded, and labels are integer-coded
in first-appearance order.
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

DEFAULT_NA_VALUES = ("", "NA", "N/A", "?", "nan", "NaN")
NORM_SCHEMES = ("l2row", "zscore", "minmax", "none")


@dataclass(frozen=True)
class RawTable:
    """Parsed delimiter-separated table with a designated label column."""

    rows: tuple
    header: tuple
    label_column: int

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.header)

    def subset(self, indices) -> "RawTable":
        rows = tuple(self.rows[i] for i in indices)
        return RawTable(rows=rows, header=self.header, label_column=self.label_column)


@dataclass(frozen=True)
class Dataset:
    """Immutable design matrix with integer-coded labels."""

    features: np.ndarray
    labels: np.ndarray
    class_counts: np.ndarray
    feature_names: tuple
    label_names: tuple = ()
    source: Optional[RawTable] = None
    norm: str = "l2row"
    na_values: tuple = DEFAULT_NA_VALUES
    name: str = ""

    def __post_init__(self):
        self.features.flags.writeable = False
        self.labels.flags.writeable = False
        self.class_counts.flags.writeable = False

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def m(self) -> int:
        return len(self.class_counts)

    @classmethod
    def from_arrays(cls, features, labels, m=None, name="", norm="none") -> "Dataset":
        features = np.ascontiguousarray(features, dtype=np.float64)
        labels = np.ascontiguousarray(labels, dtype=np.int64)
        if features.ndim == 1:
            features = features[:, None]
        if not np.all(np.isfinite(features)):
            raise ValueError("features contain non-finite values")
        if m is None:
            m = int(labels.max()) + 1 if len(labels) else 0
        counts = np.bincount(labels, minlength=m)
        names = tuple(f"x{j}" for j in range(features.shape[1]))
        return cls(
            features=features,
            labels=labels,
            class_counts=counts,
            feature_names=names,
            label_names=tuple(str(c) for c in range(m)),
            norm=norm,
            name=name,
        )


def load_csv(
    path: Union[str, Path],
    label_column: Union[str, int],
    has_header: bool = True,
) -> RawTable:
    """Parse a comma-delimited file into a RawTable.

    ``label_column`` may be a header name (requires a header row) or a
    zero-based column index.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        records = [tuple(cell.strip() for cell in row) for row in reader if row]
    if not records:
        raise ValueError(f"empty file: {path}")

    if has_header:
        header = records[0]
        rows = records[1:]
    else:
        header = tuple(f"col{j}" for j in range(len(records[0])))
        rows = records

    arity = len(header)
    for idx, row in enumerate(rows):
        if len(row) != arity:
            raise ValueError(
                f"ragged rows: row {idx + 1} has {len(row)} cells, expected {arity}"
            )

    if isinstance(label_column, int):
        label_idx = label_column
        if not 0 <= label_idx < arity:
            raise ValueError(f"label column index {label_idx} out of range")
    else:
        if label_column not in header:
            raise ValueError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)

    return RawTable(rows=tuple(rows), header=header, label_column=label_idx)


def _parse_number(cell: str) -> Optional[float]:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


class Preprocessor:
    """Feature-column statistics fit on one row subset, applicable to another.

    Separating fit from transform lets the cross-validation harness compute
    imputation means, scaling statistics, and one-hot vocabularies on
    training rows only.
    """

    def __init__(self, na_values: Sequence[str] = DEFAULT_NA_VALUES, norm: str = "l2row"):
        if norm not in NORM_SCHEMES:
            raise ValueError(f"unknown normalization {norm!r}; choose from {NORM_SCHEMES}")
        self.na_values = tuple(na_values)
        self.norm = norm
        self.fitted_ = False

    def fit(self, table: RawTable, row_indices=None) -> "Preprocessor":
        rows = table.rows if row_indices is None else [table.rows[i] for i in row_indices]
        if not rows:
            raise ValueError("no rows to fit preprocessing statistics on")
        feat_cols = [j for j in range(table.n_cols) if j != table.label_column]
        na = set(self.na_values)

        self.numeric_ = {}
        self.means_ = {}
        self.vocab_ = {}
        for j in feat_cols:
            cells = [r[j] for r in rows if r[j] not in na]
            parsed = [_parse_number(c) for c in cells]
            is_numeric = bool(cells) and all(v is not None for v in parsed)
            self.numeric_[j] = is_numeric
            if is_numeric:
                self.means_[j] = float(np.mean(parsed))
            else:
                vocab = []
                for c in cells:
                    if c not in vocab:
                        vocab.append(c)
                self.vocab_[j] = vocab

        names = []
        for j in feat_cols:
            if self.numeric_[j]:
                names.append(table.header[j])
            else:
                names.extend(f"{table.header[j]}={v}" for v in self.vocab_[j])
        self.feature_cols_ = feat_cols
        self.feature_names_ = tuple(names)

        raw = self._assemble(table, rows)
        numeric_mask = []
        for j in feat_cols:
            if self.numeric_[j]:
                numeric_mask.append(True)
            else:
                numeric_mask.extend([False] * len(self.vocab_[j]))
        self.numeric_mask_ = np.array(numeric_mask, dtype=bool)
        if self.norm == "zscore":
            self.col_mean_ = raw.mean(axis=0)
            self.col_std_ = raw.std(axis=0)
        elif self.norm == "minmax":
            self.col_min_ = raw.min(axis=0)
            self.col_max_ = raw.max(axis=0)
        self.fitted_ = True
        return self

    def _assemble(self, table: RawTable, rows) -> np.ndarray:
        na = set(self.na_values)
        cols = []
        for j in self.feature_cols_:
            if self.numeric_[j]:
                vals = []
                for r in rows:
                    v = None if r[j] in na else _parse_number(r[j])
                    # unparseable cells in a numeric column are treated as missing
                    vals.append(self.means_[j] if v is None else v)
                cols.append(np.array(vals, dtype=np.float64)[:, None])
            else:
                vocab = self.vocab_[j]
                block = np.zeros((len(rows), len(vocab)), dtype=np.float64)
                pos = {v: q for q, v in enumerate(vocab)}
                for i, r in enumerate(rows):
                    if r[j] in na:
                        continue  # missing categorical: all-zero indicator
                    q = pos.get(r[j])
                    if q is not None:
                        block[i, q] = 1.0
                cols.append(block)
        return np.hstack(cols) if cols else np.zeros((len(rows), 0))

    def transform(self, table: RawTable, row_indices=None) -> np.ndarray:
        if not self.fitted_:
            raise RuntimeError("Preprocessor.fit must be called first")
        rows = table.rows if row_indices is None else [table.rows[i] for i in row_indices]
        x = self._assemble(table, rows)
        return self.apply_norm(x)

    def apply_norm(self, x: np.ndarray) -> np.ndarray:
        x = np.array(x, dtype=np.float64)
        mask = self.numeric_mask_
        if self.norm == "zscore":
            std = np.where(self.col_std_ > 0, self.col_std_, 1.0)
            x[:, mask] = (x[:, mask] - self.col_mean_[mask]) / std[mask]
            x[:, mask & (self.col_std_ == 0)] = 0.0
        elif self.norm == "minmax":
            span = self.col_max_ - self.col_min_
            span = np.where(span > 0, span, 1.0)
            x[:, mask] = (x[:, mask] - self.col_min_[mask]) / span[mask]
            x[:, mask & (self.col_max_ == self.col_min_)] = 0.0
        elif self.norm == "l2row":
            norms = np.linalg.norm(x, axis=1, keepdims=True)
            norms[norms == 0] = 1.0
            x = x / norms
        return x


def preprocessor_state(pre: Preprocessor) -> dict:
    """JSON-serializable snapshot of fitted preprocessing statistics, in
    feature-column order (label column excluded)."""
    if not pre.fitted_:
        raise RuntimeError("Preprocessor.fit must be called first")
    columns = []
    for j in pre.feature_cols_:
        col = {"numeric": pre.numeric_[j]}
        if pre.numeric_[j]:
            col["mean"] = pre.means_[j]
        else:
            col["vocab"] = list(pre.vocab_[j])
        columns.append(col)
    state = {
        "na_values": list(pre.na_values),
        "norm": pre.norm,
        "columns": columns,
        "numeric_mask": pre.numeric_mask_.tolist(),
    }
    if pre.norm == "zscore":
        state["col_mean"] = pre.col_mean_.tolist()
        state["col_std"] = pre.col_std_.tolist()
    elif pre.norm == "minmax":
        state["col_min"] = pre.col_min_.tolist()
        state["col_max"] = pre.col_max_.tolist()
    return state


def transform_feature_rows(state: dict, rows) -> np.ndarray:
    """Apply saved preprocessing to rows holding only the feature columns,
    in training order."""
    na = set(state["na_values"])
    columns = state["columns"]
    blocks = []
    for j, col in enumerate(columns):
        if col["numeric"]:
            vals = []
            for r in rows:
                v = None if r[j] in na else _parse_number(r[j])
                vals.append(col["mean"] if v is None else v)
            blocks.append(np.array(vals, dtype=np.float64)[:, None])
        else:
            vocab = col["vocab"]
            block = np.zeros((len(rows), len(vocab)), dtype=np.float64)
            pos = {v: q for q, v in enumerate(vocab)}
            for i, r in enumerate(rows):
                q = pos.get(r[j])
                if q is not None:
                    block[i, q] = 1.0
            blocks.append(block)
    x = np.hstack(blocks) if blocks else np.zeros((len(rows), 0))

    mask = np.array(state["numeric_mask"], dtype=bool)
    norm = state["norm"]
    if norm == "zscore":
        mean = np.array(state["col_mean"])
        std = np.array(state["col_std"])
        safe = np.where(std > 0, std, 1.0)
        x[:, mask] = (x[:, mask] - mean[mask]) / safe[mask]
        x[:, mask & (std == 0)] = 0.0
    elif norm == "minmax":
        lo = np.array(state["col_min"])
        hi = np.array(state["col_max"])
        span = np.where(hi - lo > 0, hi - lo, 1.0)
        x[:, mask] = (x[:, mask] - lo[mask]) / span[mask]
        x[:, mask & (hi == lo)] = 0.0
    elif norm == "l2row":
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        x = x / norms
    return x


def preprocess(
    raw: RawTable,
    na_values: Sequence[str] = DEFAULT_NA_VALUES,
    norm: str = "l2row",
    name: str = "",
) -> Dataset:
    """Apply the full preprocessing pipeline to a RawTable."""
    na = set(na_values)
    keep = [i for i, r in enumerate(raw.rows) if r[raw.label_column] not in na]
    if not keep:
        raise ValueError("all rows dropped: no labeled samples remain")
    clean = raw.subset(keep)

    label_names = []
    labels = np.empty(clean.n_rows, dtype=np.int64)
    for i, r in enumerate(clean.rows):
        v = r[clean.label_column]
        if v not in label_names:
            label_names.append(v)
        labels[i] = label_names.index(v)

    pre = Preprocessor(na_values=na_values, norm=norm).fit(clean)
    features = pre.transform(clean)
    if not np.all(np.isfinite(features)):
        raise ValueError("preprocessed features contain non-finite values")

    counts = np.bincount(labels, minlength=len(label_names))
    if np.any(counts == 0):
        raise ValueError("a class has zero samples after preprocessing")

    return Dataset(
        features=features,
        labels=labels,
        class_counts=counts,
        feature_names=pre.feature_names_,
        label_names=tuple(label_names),
        source=clean,
        norm=norm,
        na_values=tuple(na_values),
        name=name,
    )
