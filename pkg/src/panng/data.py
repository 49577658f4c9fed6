"""Bundled desk-scale datasets: two small public tabular sets shipped as
package data plus seeded synthetic generators."""

from importlib import resources

from .dataset import Dataset, load_csv, preprocess
from .synth import blobs, two_overlap

BUNDLED = ("wdbc", "wine", "synth-overlap", "synth-blobs")


def load_bundled(name: str, norm: str = "l2row", seed: int = 0) -> Dataset:
    if name == "wdbc":
        return _load_packaged_csv("wdbc.csv", norm, name)
    if name == "wine":
        return _load_packaged_csv("wine.csv", norm, name)
    if name == "synth-overlap":
        return two_overlap(seed=seed)
    if name == "synth-blobs":
        return blobs(seed=seed)
    raise ValueError(f"unknown bundled dataset {name!r}; choose from {BUNDLED}")


def _load_packaged_csv(filename: str, norm: str, name: str) -> Dataset:
    path = resources.files("panng").joinpath("data", filename)
    with resources.as_file(path) as p:
        raw = load_csv(p, label_column="target")
    return preprocess(raw, norm=norm, name=name)
