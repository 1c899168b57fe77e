"""Gaussian-kernel support vector classification trained with SMO.

The binary trainer is a Platt-style sequential minimal optimisation with
fully deterministic working-set selection (no randomised heuristics), so
one dataset and configuration always yield one model. Multiclass
problems over the eight environmental factors are decomposed one-vs-one
and resolved by majority vote, ties going to the smallest class id.
"""

from __future__ import annotations

import warnings
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ucp import ENVIRONMENTAL_FACTOR_COUNT, check_ratings


@dataclass(frozen=True)
class SvmConfig:
    """Trainer settings.

    ``gamma=None`` resolves at training time to ``1 / (n_features * var)``
    over the scaled training features. ``epsilon`` bounds the largest
    tolerated KKT violation; ``max_iterations`` caps optimisation sweeps
    and overrunning it is a warning, not an error.
    """

    penalty_c: float = 1.0
    gamma: Optional[float] = None
    epsilon: float = 1e-3
    max_iterations: int = 1000
    kernel_cache_entries: int = 5000

    def __post_init__(self):
        if self.penalty_c <= 0:
            raise ValueError("penalty_c must be > 0")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.kernel_cache_entries < 1:
            raise ValueError("kernel_cache_entries must be >= 1")


def gaussian_kernel(a: Sequence[float], b: Sequence[float], gamma: float) -> float:
    """exp(-gamma * ||a - b||^2); 1 at zero distance, positive everywhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.exp(-gamma * np.dot(diff, diff)))


def resolve_gamma(features: np.ndarray, config: SvmConfig) -> float:
    """Concrete kernel width: configured value, or 1/(d * var(features))."""
    if config.gamma is not None:
        return config.gamma
    variance = float(np.var(features))
    if variance <= 0:
        return 1.0
    return 1.0 / (features.shape[1] * variance)


class KernelRowCache:
    """LRU memo of kernel matrix rows, bounded by entry count."""

    def __init__(self, features: np.ndarray, gamma: float, capacity: int):
        self._features = features
        self._gamma = gamma
        self._capacity = capacity
        self._rows: OrderedDict[int, np.ndarray] = OrderedDict()

    def row(self, i: int) -> np.ndarray:
        cached = self._rows.get(i)
        if cached is not None:
            self._rows.move_to_end(i)
            return cached
        diff = self._features - self._features[i]
        row = np.exp(-self._gamma * np.einsum("ij,ij->i", diff, diff))
        self._rows[i] = row
        if len(self._rows) > self._capacity:
            self._rows.popitem(last=False)
        return row


@dataclass(frozen=True)
class BinarySvmModel:
    """Dual solution of one two-class problem.

    ``dual_coefficients`` holds alpha_i * y_i for the support vectors, so
    every entry lies in [-C, C] and the decision value is
    ``sum(coef * k(sv, x)) + bias``.
    """

    support_vectors: np.ndarray
    dual_coefficients: np.ndarray
    bias: float
    gamma: float
    penalty_c: float
    converged: bool = True

    def decision_value(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        if self.support_vectors.size == 0:
            return self.bias
        diff = self.support_vectors - x
        k = np.exp(-self.gamma * np.einsum("ij,ij->i", diff, diff))
        return float(np.dot(self.dual_coefficients, k) + self.bias)


class _Smo:
    # Platt's SMO with deterministic second-choice heuristics: the best
    # |E1 - E2| partner first, then non-bound points in index order, then
    # all points in index order.

    def __init__(self, features, targets, config: SvmConfig, gamma: float):
        self.x = features
        self.y = targets
        self.c = config.penalty_c
        self.tol = config.epsilon
        self.max_sweeps = config.max_iterations
        self.n = features.shape[0]
        self.cache = KernelRowCache(features, gamma, config.kernel_cache_entries)
        self.alphas = np.zeros(self.n)
        self.bias = 0.0
        self.errors = -targets.astype(float)  # f(x) = 0 initially
        self.sweeps = 0

    def _diag(self, i: int) -> float:
        return 1.0  # Gaussian kernel: k(x, x) == 1

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alphas[i1], self.alphas[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2

        if s > 0:
            low, high = max(0.0, a1 + a2 - self.c), min(self.c, a1 + a2)
        else:
            low, high = max(0.0, a2 - a1), min(self.c, self.c + a2 - a1)
        if low >= high:
            return False

        row1 = self.cache.row(i1)
        k11, k12, k22 = self._diag(i1), row1[i2], self._diag(i2)
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, low), high)
        else:
            # Degenerate direction (duplicate points): evaluate the dual
            # objective at both clip bounds and move to the better one.
            f1 = y1 * e1 - a1 * k11 - s * a2 * k12
            f2 = y2 * e2 - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - low)
            h1 = a1 + s * (a2 - high)
            obj_low = l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 + 0.5 * low * low * k22 + s * low * l1 * k12
            obj_high = h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 + 0.5 * high * high * k22 + s * high * h1 * k12
            if obj_low < obj_high - 1e-12:
                a2_new = low
            elif obj_low > obj_high + 1e-12:
                a2_new = high
            else:
                return False

        if abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        row2 = self.cache.row(i2)
        b1 = self.bias - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12
        b2 = self.bias - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22
        if 0.0 < a1_new < self.c:
            new_bias = b1
        elif 0.0 < a2_new < self.c:
            new_bias = b2
        else:
            new_bias = 0.5 * (b1 + b2)

        delta_b = new_bias - self.bias
        self.errors += y1 * (a1_new - a1) * row1 + y2 * (a2_new - a2) * row2 + delta_b
        self.alphas[i1] = a1_new
        self.alphas[i2] = a2_new
        self.bias = new_bias
        return True

    def _examine(self, i2: int) -> int:
        y2, a2, e2 = self.y[i2], self.alphas[i2], self.errors[i2]
        r2 = e2 * y2
        if not ((r2 < -self.tol and a2 < self.c) or (r2 > self.tol and a2 > 0)):
            return 0
        non_bound = np.flatnonzero((self.alphas > 0) & (self.alphas < self.c))
        if non_bound.size > 1:
            i1 = int(non_bound[np.argmax(np.abs(self.errors[non_bound] - e2))])
            if self._take_step(i1, i2):
                return 1
        for i1 in non_bound:
            if self._take_step(int(i1), i2):
                return 1
        for i1 in range(self.n):
            if self._take_step(i1, i2):
                return 1
        return 0

    def run(self) -> bool:
        examine_all = True
        while self.sweeps < self.max_sweeps:
            self.sweeps += 1
            if examine_all:
                changed = sum(self._examine(i) for i in range(self.n))
                if changed == 0:
                    return True  # full sweep clean: every point within KKT tolerance
                examine_all = False
            else:
                non_bound = np.flatnonzero((self.alphas > 0) & (self.alphas < self.c))
                changed = sum(self._examine(int(i)) for i in non_bound)
                if changed == 0:
                    examine_all = True
        return False


def train_binary(
    features: Sequence[Sequence[float]],
    targets: Sequence[float],
    config: SvmConfig = SvmConfig(),
    gamma: Optional[float] = None,
) -> BinarySvmModel:
    """Train one max-margin classifier; ``targets`` must be -1/+1.

    Raises ValueError when only one class is present. Hitting the
    iteration cap emits a warning and returns the model with
    ``converged=False``.
    """
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if features.ndim != 2 or features.shape[0] != targets.shape[0]:
        raise ValueError("features must be (n, d) with one target per row")
    if not set(np.unique(targets)) <= {-1.0, 1.0}:
        raise ValueError("targets must be -1 or +1")
    if np.unique(targets).size < 2:
        raise ValueError("training needs at least one row of each class")

    resolved_gamma = gamma if gamma is not None else resolve_gamma(features, config)
    smo = _Smo(features, targets, config, resolved_gamma)
    converged = smo.run()
    if not converged:
        warnings.warn(
            f"SMO stopped at the {config.max_iterations}-sweep limit before meeting "
            f"the {config.epsilon} KKT tolerance",
            RuntimeWarning,
            stacklevel=2,
        )
    keep = smo.alphas > 1e-12
    return BinarySvmModel(
        support_vectors=features[keep].copy(),
        dual_coefficients=(smo.alphas * targets)[keep].copy(),
        bias=smo.bias,
        gamma=resolved_gamma,
        penalty_c=config.penalty_c,
        converged=converged,
    )


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature affine scaling applied before the kernel: (x - offset) / divisor."""

    offsets: tuple[float, ...]
    divisors: tuple[float, ...]

    def __post_init__(self):
        if len(self.offsets) != len(self.divisors):
            raise ValueError("offsets and divisors must have equal length")
        if any(d == 0 for d in self.divisors):
            raise ValueError("divisors must be nonzero")

    def transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        return (rows - np.asarray(self.offsets)) / np.asarray(self.divisors)


#: Environmental ratings live on 0..5; map them to [0, 1] so the default
#: kernel width keeps contrast between profiles.
ENV_RATING_SCALER = FeatureScaler(offsets=(0.0,) * 8, divisors=(5.0,) * 8)


@dataclass(frozen=True)
class MulticlassSvmModel:
    """One-vs-one ensemble over productivity label ids.

    ``pair_models`` maps (a, b) with a < b to the binary model trained
    with class a as +1 and class b as -1. A single-class training set
    yields no pairs and a constant classifier.
    """

    class_labels: tuple[int, ...]
    pair_models: dict[tuple[int, int], BinarySvmModel] = field(default_factory=dict)
    scaler: FeatureScaler = ENV_RATING_SCALER
    gamma: float = 1.0
    config: SvmConfig = SvmConfig()


def train_multiclass(
    env_ratings: Sequence[Sequence[int]],
    labels: Sequence[int],
    config: SvmConfig = SvmConfig(),
    scaler: FeatureScaler = ENV_RATING_SCALER,
) -> MulticlassSvmModel:
    """Learn productivity labels from environmental ratings, one-vs-one."""
    rows = [check_ratings(r, ENVIRONMENTAL_FACTOR_COUNT, "env_ratings") for r in env_ratings]
    labels = [int(l) for l in labels]
    if not rows:
        raise ValueError("training set is empty")
    if len(rows) != len(labels):
        raise ValueError("one label per rating row required")

    features = scaler.transform(np.asarray(rows, dtype=float))
    classes = tuple(sorted(set(labels)))
    gamma = resolve_gamma(features, config)

    pair_models: dict[tuple[int, int], BinarySvmModel] = {}
    label_arr = np.asarray(labels)
    for i, a in enumerate(classes):
        for b in classes[i + 1:]:
            mask = (label_arr == a) | (label_arr == b)
            pair_targets = np.where(label_arr[mask] == a, 1.0, -1.0)
            pair_models[(a, b)] = train_binary(features[mask], pair_targets, config, gamma=gamma)
    return MulticlassSvmModel(
        class_labels=classes, pair_models=pair_models, scaler=scaler, gamma=gamma, config=config
    )


def predict_label(model: MulticlassSvmModel, env_ratings: Sequence[int]) -> int:
    """Majority vote over the pairwise decisions; ties pick the smallest id."""
    if not model.class_labels:
        raise ValueError("model has no classes")
    ratings = check_ratings(env_ratings, ENVIRONMENTAL_FACTOR_COUNT, "env_ratings")
    if len(model.class_labels) == 1:
        return model.class_labels[0]
    x = model.scaler.transform(np.asarray(ratings, dtype=float))
    votes = {label: 0 for label in model.class_labels}
    for (a, b), pair in model.pair_models.items():
        if pair.decision_value(x) >= 0:
            votes[a] += 1
        else:
            votes[b] += 1
    best = max(votes.values())
    return min(label for label, count in votes.items() if count == best)


def training_accuracy(model: MulticlassSvmModel, env_ratings, labels) -> float:
    """Fraction of training rows the model maps back to their own label."""
    hits = sum(
        1 for row, label in zip(env_ratings, labels) if predict_label(model, row) == int(label)
    )
    return hits / len(labels)
