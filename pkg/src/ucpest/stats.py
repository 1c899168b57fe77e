"""Statistical comparison tools for model error distributions.

Holds the two-sided Wilcoxon rank-sum test (exact permutation
enumeration for small samples, tie-corrected normal approximation
otherwise), a Box-Cox power transform with maximum-likelihood lambda,
and the Scott-Knott multiple-comparison procedure (Scott & Knott, 1974)
that partitions models into groups with statistically indistinct mean
errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import chi2

ALPHA = 0.05

#: Largest sample size still handled by exact enumeration; from 10 up the
#: normal approximation takes over.
EXACT_LIMIT = 9


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size, dtype=float)
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class RankSumResult:
    statistic: float  # rank sum of the first sample
    p_value: float

    def __iter__(self):
        return iter((self.statistic, self.p_value))


def wilcoxon_rank_sum(sample_a: Sequence[float], sample_b: Sequence[float]) -> RankSumResult:
    """Two-sided rank-sum test with midrank tie handling.

    Exact permutation enumeration when both samples have fewer than 10
    observations; otherwise the normal approximation with continuity and
    tie corrections. Completely tied data yields p = 1.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    pooled = np.concatenate((a, b))
    ranks = _midranks(pooled)
    n_a, n_b = a.size, b.size
    total = n_a + n_b
    statistic = float(ranks[:n_a].sum())
    mean = n_a * (total + 1) / 2.0

    if max(n_a, n_b) <= EXACT_LIMIT:
        observed = abs(statistic - mean)
        hits = 0
        count = 0
        for positions in combinations(range(total), n_a):
            count += 1
            if abs(ranks[list(positions)].sum() - mean) >= observed - 1e-9:
                hits += 1
        return RankSumResult(statistic, hits / count)

    tie_sizes = np.unique(pooled, return_counts=True)[1]
    tie_term = float(np.sum(tie_sizes**3 - tie_sizes)) / (total * (total - 1))
    variance = n_a * n_b / 12.0 * ((total + 1) - tie_term)
    if variance <= 0:
        return RankSumResult(statistic, 1.0)
    shifted = statistic - mean
    correction = 0.5 * np.sign(shifted)
    z = (shifted - correction) / math.sqrt(variance)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return RankSumResult(statistic, min(1.0, p))


@dataclass(frozen=True)
class PairwiseTest:
    model_a: str
    model_b: str
    statistic: float
    p_value: float
    significant: bool


@dataclass(frozen=True)
class SignificanceReport:
    """All unordered pairwise rank-sum outcomes at the given level."""

    alpha: float
    entries: tuple[PairwiseTest, ...]

    def lookup(self, model_a: str, model_b: str) -> PairwiseTest:
        for entry in self.entries:
            if {entry.model_a, entry.model_b} == {model_a, model_b}:
                return entry
        raise KeyError(f"no pairwise entry for {model_a} vs {model_b}")


def significance_report(
    errors_by_model: Mapping[str, Sequence[float]],
    alpha: float = ALPHA,
) -> SignificanceReport:
    """Pairwise rank-sum tests over per-model absolute errors."""
    names = list(errors_by_model)
    entries = []
    for i, name_a in enumerate(names):
        for name_b in names[i + 1:]:
            result = wilcoxon_rank_sum(errors_by_model[name_a], errors_by_model[name_b])
            entries.append(
                PairwiseTest(
                    model_a=name_a,
                    model_b=name_b,
                    statistic=result.statistic,
                    p_value=result.p_value,
                    significant=result.p_value < alpha,
                )
            )
    return SignificanceReport(alpha=alpha, entries=tuple(entries))


@dataclass(frozen=True)
class BoxCoxResult:
    transformed: tuple[float, ...]
    lam: float
    shift: float = 0.0


def boxcox_transform(values: np.ndarray, lam: float) -> np.ndarray:
    """(v^lam - 1) / lam, degrading to ln(v) as lam approaches 0."""
    values = np.asarray(values, dtype=float)
    if abs(lam) < 1e-6:
        return np.log(values)
    return (values**lam - 1.0) / lam


def _boxcox_loglik(values: np.ndarray, lam: float) -> float:
    transformed = boxcox_transform(values, lam)
    variance = float(np.var(transformed))
    if variance <= 0:
        return -np.inf
    n = values.size
    return -0.5 * n * math.log(variance) + (lam - 1.0) * float(np.sum(np.log(values)))


def boxcox(
    values: Sequence[float],
    search_range: tuple[float, float] = (-5.0, 5.0),
) -> BoxCoxResult:
    """Power-transform positive values toward normality.

    Lambda maximises the profile log-likelihood over the search range via
    golden-section search (the profile is unimodal in practice). Constant
    input keeps lambda 1 by convention.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no values to transform")
    if np.any(values <= 0):
        raise ValueError("box-cox requires strictly positive values; shift first")
    if np.ptp(values) == 0:
        return BoxCoxResult(tuple(boxcox_transform(values, 1.0)), 1.0)

    lo, hi = search_range
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1 = _boxcox_loglik(values, x1)
    f2 = _boxcox_loglik(values, x2)
    while hi - lo > 1e-9:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = _boxcox_loglik(values, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = _boxcox_loglik(values, x1)
    lam = 0.5 * (lo + hi)
    return BoxCoxResult(tuple(float(v) for v in boxcox_transform(values, lam)), float(lam))


def shift_positive(values: Sequence[float]) -> tuple[np.ndarray, float]:
    """Shift a vector so its minimum becomes 1 when any entry is <= 0.

    Absolute errors can legitimately be zero; the applied shift is
    returned so reports can state it.
    """
    values = np.asarray(values, dtype=float)
    minimum = float(values.min())
    shift = 1.0 - minimum if minimum <= 0 else 0.0
    return values + shift, shift


@dataclass(frozen=True)
class ScottKnottResult:
    """Groups ordered worst to best; the last group has the smallest mean
    transformed error."""

    groups: tuple[tuple[str, ...], ...]
    means: dict[str, float]
    boxcox_lambda: float
    shift: float

    @property
    def group_of(self) -> dict[str, int]:
        return {name: i for i, group in enumerate(self.groups) for name in group}


_SK_SCALE = math.pi / (2.0 * (math.pi - 2.0))


def _best_split(means: np.ndarray) -> tuple[int, float]:
    # Maximise the between-group sum of squares over ordered splits.
    total = means.sum()
    k = means.size
    best_cut, best_b0 = 1, -np.inf
    for cut in range(1, k):
        t1, t2 = means[:cut].sum(), means[cut:].sum()
        b0 = t1**2 / cut + t2**2 / (k - cut) - total**2 / k
        if b0 > best_b0 + 1e-15:
            best_cut, best_b0 = cut, b0
    return best_cut, float(best_b0)


def scott_knott(
    errors_by_model: Mapping[str, Sequence[float]],
    alpha: float = ALPHA,
    apply_boxcox: bool = True,
) -> ScottKnottResult:
    """Cluster models into groups of statistically indistinct means.

    Errors are pooled, shifted positive if needed, Box-Cox transformed,
    and averaged per model. Models are ordered by mean and recursively
    cut at the split maximising the between-group sum of squares; a cut
    stands when its lambda* statistic exceeds the chi-squared critical
    value at ``alpha`` (degrees of freedom k / (pi - 2)).
    """
    names = list(errors_by_model)
    if not names:
        raise ValueError("no models given")
    lengths = {len(errors_by_model[name]) for name in names}
    if len(lengths) != 1:
        raise ValueError("all models need error vectors of equal length")
    (per_model,) = lengths
    if per_model < 1:
        raise ValueError("error vectors are empty")

    pooled = np.concatenate([np.asarray(errors_by_model[name], dtype=float) for name in names])
    shifted, shift = shift_positive(pooled)
    if apply_boxcox:
        result = boxcox(shifted)
        lam = result.lam
        transformed = np.asarray(result.transformed).reshape(len(names), per_model)
    else:
        lam = 1.0
        transformed = shifted.reshape(len(names), per_model)

    means = transformed.mean(axis=1)
    order = sorted(range(len(names)), key=lambda i: (-means[i], names[i]))
    ordered_names = [names[i] for i in order]
    ordered_means = means[order]

    # One-way ANOVA residual variance across all models, reused at every cut.
    if per_model > 1:
        mse = float(np.sum((transformed - means[:, None]) ** 2)) / (len(names) * (per_model - 1))
        dof = len(names) * (per_model - 1)
    else:
        mse, dof = 0.0, 0
    mean_variance = mse / per_model

    groups: list[tuple[str, ...]] = []

    def partition(lo: int, hi: int) -> None:
        k = hi - lo
        if k < 2:
            groups.append(tuple(ordered_names[lo:hi]))
            return
        slice_means = ordered_means[lo:hi]
        cut, b0 = _best_split(slice_means)
        centre = slice_means.mean()
        sigma0 = (float(np.sum((slice_means - centre) ** 2)) + dof * mean_variance) / (k + dof)
        if b0 <= 0 or sigma0 <= 0:
            groups.append(tuple(ordered_names[lo:hi]))
            return
        lam_star = _SK_SCALE * b0 / sigma0
        critical = float(chi2.ppf(1.0 - alpha, k / (math.pi - 2.0)))
        if lam_star > critical:
            partition(lo, lo + cut)
            partition(lo + cut, hi)
        else:
            groups.append(tuple(ordered_names[lo:hi]))

    partition(0, len(ordered_names))
    return ScottKnottResult(
        groups=tuple(groups),
        means={name: float(mean) for name, mean in zip(ordered_names, ordered_means)},
        boxcox_lambda=float(lam),
        shift=shift,
    )
