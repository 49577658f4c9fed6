import numpy as np
import pytest

from panng.dataset import load_csv, preprocess


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text(
        "a,b,color,y\n"
        "1,2,red,p\n"
        "3,,blue,q\n"
        "5,6,red,p\n"
        "7,8,blue,q\n"
        "2,3,red,p\n"
        "6,7,blue,q\n"
    )
    return path


@pytest.fixture
def tiny_dataset(tiny_csv):
    return preprocess(load_csv(tiny_csv, label_column="y"), norm="zscore")


def brute_force_orderings(points):
    """Independent O(n^2) oracle: full sort of the distance matrix with
    (distance, index) lexicographic tie-break."""
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    out = []
    for i in range(n):
        pairs = sorted(
            (float(np.sum((points[i] - points[j]) ** 2)), j) for j in range(n) if j != i
        )
        out.append([j for _, j in pairs])
    return out
