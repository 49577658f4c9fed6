"""Learning the fitness kernel: class-count initialization, KL-style loss
between sample-wise density estimates, gradient descent, and symmetric
scaling about kappa."""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ._kernels import kl_gradient
from .dataset import Dataset
from .density import DensityEstimate, kde


class FitnessDivergenceError(RuntimeError):
    """Raised when the descent loss becomes non-finite."""

    def __init__(self, iteration: int):
        super().__init__(f"loss became non-finite at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class FitnessKernel:
    values: np.ndarray
    state: str = "initialized"  # initialized | learned | scaled
    scale_range: Optional[Tuple[float, float]] = None
    iterations_used: int = 0
    final_loss: float = float("nan")
    loss_history: Tuple[float, ...] = ()

    def __post_init__(self):
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return len(self.values)

    def subset(self, indices) -> "FitnessKernel":
        """Restriction to a sample subset, preserving learned state."""
        return replace(self, values=self.values[np.asarray(indices)].copy())


@dataclass(frozen=True)
class LearnConfig:
    threshold: float = 1e-2
    learning_rate: float = 0.05
    max_iterations: int = 1000
    bandwidth: float = 0.5
    gradient_mode: str = "analytic"  # analytic | finite_difference

    def validate(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if self.gradient_mode not in ("analytic", "finite_difference"):
            raise ValueError(f"unknown gradient_mode {self.gradient_mode!r}")


def init_fitness(dataset: Dataset) -> FitnessKernel:
    """values[i] = ln(count of the class of sample i)."""
    if dataset.n == 0:
        raise ValueError("empty dataset")
    counts = dataset.class_counts[dataset.labels]
    if np.any(counts < 1):
        raise ValueError("every class present must have count >= 1")
    return FitnessKernel(values=np.log(counts.astype(np.float64)), state="initialized")


def kl_loss(px: DensityEstimate, pf: DensityEstimate) -> float:
    """Sample-wise KL divergence sum_i px_i * ln(px_i / pf_i)."""
    if len(px) != len(pf):
        raise ValueError("density estimates have different lengths")
    if not (px.normalized and pf.normalized):
        raise ValueError("kl_loss requires normalized density estimates")
    return float(np.sum(px.values * np.log(px.values / pf.values)))


def _loss_at(f_values: np.ndarray, px: DensityEstimate, bandwidth: float) -> float:
    pf = kde(f_values, bandwidth, normalize=True)
    return kl_loss(px, pf)


def finite_difference_gradient(
    f_values: np.ndarray, px: DensityEstimate, bandwidth: float, step: float = 1e-5
) -> np.ndarray:
    """Central-difference gradient of the loss; the independent check on
    the analytic form."""
    f_values = np.asarray(f_values, dtype=np.float64)
    grad = np.empty_like(f_values)
    for m in range(len(f_values)):
        bump = np.zeros_like(f_values)
        bump[m] = step
        grad[m] = (
            _loss_at(f_values + bump, px, bandwidth)
            - _loss_at(f_values - bump, px, bandwidth)
        ) / (2.0 * step)
    return grad


def loss_gradient(f, px: DensityEstimate, bandwidth: float) -> np.ndarray:
    """Analytic gradient of the loss with respect to each fitness value."""
    f_values = f.values if isinstance(f, FitnessKernel) else np.asarray(f, dtype=np.float64)
    if not np.all(np.isfinite(f_values)):
        raise ValueError("non-finite fitness values")
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    return kl_gradient(f_values, px.values, bandwidth)


def learn_fitness(
    dataset: Dataset,
    px: DensityEstimate,
    config: LearnConfig,
    initial: Optional[np.ndarray] = None,
) -> FitnessKernel:
    """Gradient descent on the fitness values from the class-count init.

    Steps are accepted only if they do not increase the loss (backtracking
    halves the step otherwise), so the recorded loss sequence is
    non-increasing. Stops on loss < threshold, max_iterations, a plateau
    (relative improvement < 1e-6 over 10 iterations), or when no step of
    any size improves the loss.
    """
    config.validate()
    if not px.normalized:
        raise ValueError("px must be normalized")
    h = config.bandwidth

    if initial is None:
        f = init_fitness(dataset).values.copy()
    else:
        f = np.array(initial, dtype=np.float64)
        if len(f) != dataset.n:
            raise ValueError("initial vector length does not match dataset")
    loss = _loss_at(f, px, h)
    if not math.isfinite(loss):
        raise FitnessDivergenceError(0)
    if loss < config.threshold:
        return FitnessKernel(
            values=f, state="learned", iterations_used=0, final_loss=loss,
            loss_history=(loss,),
        )

    history = [loss]
    iterations = 0
    for it in range(1, config.max_iterations + 1):
        if config.gradient_mode == "analytic":
            grad = loss_gradient(f, px, h)
        else:
            grad = finite_difference_gradient(f, px, h)
        if not np.all(np.isfinite(grad)):
            raise FitnessDivergenceError(it)

        step = config.learning_rate
        accepted = False
        for _ in range(30):
            candidate = f - step * grad
            new_loss = _loss_at(candidate, px, h)
            if math.isfinite(new_loss) and new_loss <= loss:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        f, loss = candidate, new_loss
        iterations = it
        history.append(loss)
        if loss < config.threshold:
            break
        if len(history) > 10:
            past = history[-11]
            if past - loss < 1e-6 * max(abs(past), 1e-12):
                break

    return FitnessKernel(
        values=f,
        state="learned",
        iterations_used=iterations,
        final_loss=loss,
        loss_history=tuple(history),
    )


def scale_fitness(f: FitnessKernel, kappa: int) -> FitnessKernel:
    """Affine map of the learned values onto [kappa/2, 3*kappa/2].

    Constant input maps every value to kappa.
    """
    if kappa <= 0:
        raise ValueError("kappa must be a positive integer")
    lo, hi = kappa / 2.0, 3.0 * kappa / 2.0
    v = f.values
    vmin, vmax = float(v.min()), float(v.max())
    if vmax == vmin:
        scaled = np.full_like(v, float(kappa))
    else:
        scaled = (v - vmin) * (hi - lo) / (vmax - vmin) + lo
    return FitnessKernel(
        values=scaled,
        state="scaled",
        scale_range=(lo, hi),
        iterations_used=f.iterations_used,
        final_loss=f.final_loss,
        loss_history=f.loss_history,
    )
