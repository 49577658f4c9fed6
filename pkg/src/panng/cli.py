"""Command-line interface.

Subcommands: eval, sweep-eta, borderline, build-graph, predict.
"""

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .classify import GraphClassifier, predict_batch
from .dataset import (
    DEFAULT_NA_VALUES,
    NORM_SCHEMES,
    Preprocessor,
    load_csv,
    preprocess,
    preprocessor_state,
    transform_feature_rows,
)
from .density import build_index, kde
from .fitness import learn_fitness, scale_fitness
from .graph import VARIANTS, build_w, compute_k, export_graph, realize, select_eta
from .harness import CVConfig, borderline_accuracy, cross_validate, emit_report, eta_sweep


def _add_data_args(p):
    p.add_argument("--data", required=True, help="input CSV file")
    p.add_argument("--label", default="target", help="label column name or index")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")
    p.add_argument(
        "--na-values",
        default=",".join(v for v in DEFAULT_NA_VALUES if v),
        help="comma-separated missing-value sentinels (empty cell always counts)",
    )
    p.add_argument("--norm", default="l2row", choices=NORM_SCHEMES)


def _add_model_args(p):
    p.add_argument("--kappa", type=int, default=10)
    p.add_argument("--eta", default="auto", help="'auto' or a fixed value in [0, 1]")
    p.add_argument("--variant", default="plain", choices=VARIANTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-noise", action="store_true")
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--threshold", type=float, default=1e-2)
    p.add_argument("--bandwidth", type=float, default=0.5)


def _load_dataset(args):
    label = int(args.label) if str(args.label).lstrip("-").isdigit() else args.label
    raw = load_csv(args.data, label_column=label, has_header=not args.no_header)
    na = ("",) + tuple(v for v in args.na_values.split(",") if v)
    return preprocess(raw, na_values=na, norm=args.norm, name=Path(args.data).stem)


def _config(args):
    eta = args.eta if args.eta == "auto" else float(args.eta)
    return CVConfig(
        folds=args.folds if hasattr(args, "folds") else 10,
        seed=args.seed,
        kappa=args.kappa,
        eta=eta,
        variant=args.variant,
        noise=not args.no_noise,
        bandwidth=args.bandwidth,
        learning_rate=args.learning_rate,
        max_iterations=args.max_iters,
        threshold=args.threshold,
    )


def _parse_grid(spec: str):
    if ":" in spec:
        start, stop, step = (float(v) for v in spec.split(":"))
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(v) for v in spec.split(",")]


def _parse_quantiles(spec: str):
    if ".." in spec:
        lo, hi = (int(v) for v in spec.split(".."))
        return list(range(lo, hi + 1))
    return [float(v) for v in spec.split(",")]


def _write_json(payload: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_eval(args):
    dataset = _load_dataset(args)
    report = cross_validate(dataset, _config(args))
    emit_report(report, args.out)
    print(
        f"{dataset.name}: paNNG={report.mean_accuracy:.4f} "
        f"kNNG={report.baseline_accuracy:.4f} gain={report.gain:+.4f}"
    )


def cmd_sweep_eta(args):
    dataset = _load_dataset(args)
    config = replace(_config(args), eta="auto")
    grid = _parse_grid(args.grid)
    result = eta_sweep(dataset, config, grid)
    _write_json(
        {
            "schema_version": 1,
            "dataset": dataset.name,
            "seed": config.seed,
            "accuracy_by_eta": {f"{k:.10g}": v for k, v in result.items()},
        },
        args.out,
    )
    for eta, acc in result.items():
        print(f"eta={eta:.2f} accuracy={acc:.4f}")


def cmd_borderline(args):
    dataset = _load_dataset(args)
    config = _config(args)
    quantiles = _parse_quantiles(args.quantiles)
    result = borderline_accuracy(dataset, config, quantiles)
    _write_json(
        {
            "schema_version": 1,
            "dataset": dataset.name,
            "seed": config.seed,
            "accuracy_by_quantile": {
                f"{q:.10g}": {"panng": v[0], "knng": v[1]} for q, v in result.items()
            },
        },
        args.out,
    )
    for q, (pa, ka) in sorted(result.items()):
        print(f"quantile={q:g} paNNG={pa} kNNG={ka}")


def cmd_build_graph(args):
    dataset = _load_dataset(args)
    config = _config(args)
    index = build_index(dataset.features)
    px = kde(dataset.features, config.bandwidth, normalize=True)
    fk = scale_fitness(learn_fitness(dataset, px, config.learn_config()), config.kappa)
    if config.eta == "auto":
        eta, _ = select_eta(
            dataset, fk, config.kappa, seed=config.seed, variant=config.variant
        )
    else:
        eta = float(config.eta)
    k = compute_k(fk, config.kappa, eta, seed=config.seed, noise=config.noise)
    graph = realize(build_w(index, k), config.variant, dataset.labels)

    pre = Preprocessor(na_values=dataset.na_values, norm=dataset.norm).fit(dataset.source)
    state = preprocessor_state(pre)
    state["label_names"] = list(dataset.label_names)
    export_graph(graph, k, args.out, features=dataset.features, preprocessor_state=state)
    print(f"wrote {args.out} and {args.out}.json (n={graph.n}, eta={eta:g})")


def cmd_predict(args):
    with open(str(args.model) + ".json", encoding="utf-8") as fh:
        sidecar = json.load(fh)
    features = np.array(sidecar["features"], dtype=np.float64)
    labels = np.array(sidecar["labels"], dtype=np.int64)
    n = sidecar["n"]
    adjacency = np.zeros((n, n), dtype=np.uint8)
    with open(args.model, encoding="utf-8") as fh:
        for line in fh:
            src, dst, _variant = line.rstrip("\n").split("\t")
            adjacency[int(src), int(dst)] = 1

    state = sidecar["preprocessor"]
    with open(args.input, newline="", encoding="utf-8") as fh:
        rows = [tuple(c.strip() for c in row) for row in csv.reader(fh) if row]
    if not args.no_header:
        rows = rows[1:]
    xs = transform_feature_rows(state, rows)

    from .graph import NeighborGraph

    graph = NeighborGraph(
        w=adjacency.copy(), adjacency=adjacency, variant=sidecar["variant"], node_labels=labels
    )
    index = build_index(features)
    clf = GraphClassifier(
        graph=graph, index=index, train_labels=labels, fallback_k=sidecar["kappa"]
    )
    preds = predict_batch(clf, xs)
    names = state.get("label_names")
    for p in preds:
        print(names[p] if names else p)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="panng", description="preferential-attached kNN graphs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="10-fold cross-validation report")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep-eta", help="cross-validation accuracy per fixed eta")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--grid", default="0:1:0.1", help="start:stop:step or comma list")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_eta)

    p = sub.add_parser("borderline", help="borderline-quantile accuracy analysis")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--quantiles", default="1..20", help="lo..hi or comma list")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_borderline)

    p = sub.add_parser("build-graph", help="build and export a graph on the full dataset")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--out", required=True, help="edge-list path; sidecar gets .json suffix")
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("predict", help="classify rows against an exported graph")
    p.add_argument("--model", required=True, help="edge-list path from build-graph")
    p.add_argument("--input", required=True, help="CSV of feature rows")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=cmd_predict)

    args = parser.parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
