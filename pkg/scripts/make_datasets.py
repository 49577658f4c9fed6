"""One-off generator for the bundled CSVs (requires scikit-learn).

Writes src/panng/data/{wdbc,wine}.csv with a header row and a trailing
``target`` column holding the class names.
"""

import csv
from pathlib import Path

from sklearn.datasets import load_breast_cancer, load_wine

OUT = Path(__file__).resolve().parents[1] / "src" / "panng" / "data"


def write(name, bunch):
    path = OUT / f"{name}.csv"
    cols = [c.replace(" ", "_") for c in bunch.feature_names]
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(cols + ["target"])
        for row, y in zip(bunch.data, bunch.target):
            w.writerow([repr(float(v)) for v in row] + [bunch.target_names[y]])
    print(f"wrote {path} ({len(bunch.data)} rows)")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write("wdbc", load_breast_cancer())
    write("wine", load_wine())
