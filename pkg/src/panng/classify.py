"""Graph-based prediction: nearest training node, then a majority vote
among that node's graph neighbors."""

from dataclasses import dataclass

import numpy as np

from .density import DistanceIndex, query_nearest, query_nearest_batch
from .graph import NeighborGraph


@dataclass(frozen=True)
class GraphClassifier:
    graph: NeighborGraph
    index: DistanceIndex
    train_labels: np.ndarray
    fallback_k: int  # kappa; used when the closest node has no neighbors

    def __post_init__(self):
        if not (self.graph.n == self.index.n == len(self.train_labels)):
            raise ValueError("graph, index, and labels must agree on node count")

    @property
    def n_classes(self) -> int:
        return int(self.train_labels.max()) + 1


def _vote(clf: GraphClassifier, node: int) -> int:
    neighbors = np.flatnonzero(clf.graph.adjacency[node])
    if len(neighbors) == 0:
        # isolated node (possible in the mutual variant): plain kNN fallback
        neighbors = clf.index.order[node, : clf.fallback_k]
    counts = np.bincount(clf.train_labels[neighbors], minlength=clf.n_classes)
    return int(np.argmax(counts))  # ties resolve to the smallest class code


def predict(clf: GraphClassifier, x: np.ndarray) -> int:
    return _vote(clf, query_nearest(clf.index, x))


def predict_batch(clf: GraphClassifier, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return np.empty(0, dtype=np.int64)
    nodes = query_nearest_batch(clf.index, xs)
    return np.array([_vote(clf, v) for v in nodes], dtype=np.int64)
