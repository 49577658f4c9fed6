"""paNNG: preferential-attached k-nearest-neighbor graphs.

Distribution-aware adaptive-k graph construction driven by a learned
one-dimensional fitness kernel, with a graph-vote classifier and a
cross-validation harness.
"""

from ._kernels import BACKEND
from .classify import GraphClassifier, predict, predict_batch
from .data import BUNDLED, load_bundled
from .dataset import Dataset, Preprocessor, RawTable, load_csv, preprocess
from .density import DensityEstimate, DistanceIndex, build_index, kde, knn_of, query_nearest
from .fitness import (
    FitnessDivergenceError,
    FitnessKernel,
    LearnConfig,
    init_fitness,
    kl_loss,
    learn_fitness,
    loss_gradient,
    scale_fitness,
)
from .graph import (
    KVector,
    NeighborGraph,
    build_w,
    compute_k,
    eta_equivalence_check,
    export_graph,
    realize,
    select_eta,
)
from .harness import (
    CVConfig,
    EvalReport,
    borderline_accuracy,
    borderline_subset,
    compute_gain,
    cross_validate,
    emit_report,
    eta_sweep,
    load_report,
    stratified_folds,
)

__version__ = "0.1.0"
