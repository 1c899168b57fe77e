"""Accuracy measures, the random-guessing baseline, and LOOCV.

All measures derive from the absolute error |actual - predicted|; the
relative variants MBRE and MIBRE divide by the smaller and larger of the
two values and are reported as percentages. Standardized accuracy and
the effect size compare a model's MAE against unguided guessing, whose
expected MAE is computed exactly by pair enumeration (the infinite-run
limit) and whose dispersion is a seeded Monte Carlo estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DEFAULT_SEED = 20571
DEFAULT_GUESS_RUNS = 1000


@dataclass(frozen=True)
class PredictionRecord:
    """One held-out prediction; values must be positive to keep the
    relative error denominators meaningful."""

    actual: float
    predicted: float
    model_name: str = ""
    fold_index: int = 0

    def __post_init__(self):
        if self.actual <= 0:
            raise ValueError(f"actual effort must be > 0, got {self.actual}")
        if self.predicted <= 0:
            raise ValueError(f"predicted effort must be > 0, got {self.predicted}")


@dataclass(frozen=True)
class MetricReport:
    """Full accuracy summary for one model on one dataset."""

    model_name: str
    n: int
    mae: float
    mbre: float
    mibre: float
    sa: float
    effect_size: float
    effect_size_abs: float
    baseline_mae: float
    baseline_sd: float


def absolute_error(actual: float, predicted: float) -> float:
    return abs(actual - predicted)


def _errors(records: Sequence[PredictionRecord]) -> np.ndarray:
    if not records:
        raise ValueError("no prediction records")
    return np.array([absolute_error(r.actual, r.predicted) for r in records])


def mae(records: Sequence[PredictionRecord]) -> float:
    """Mean absolute error."""
    return float(np.mean(_errors(records)))


def mbre(records: Sequence[PredictionRecord]) -> float:
    """Mean balanced relative error, in percent: mean AE / min(actual, predicted)."""
    errs = _errors(records)
    mins = np.array([min(r.actual, r.predicted) for r in records])
    return float(np.mean(errs / mins) * 100.0)


def mibre(records: Sequence[PredictionRecord]) -> float:
    """Mean inverted balanced relative error, in percent: mean AE / max(actual, predicted)."""
    errs = _errors(records)
    maxs = np.array([max(r.actual, r.predicted) for r in records])
    return float(np.mean(errs / maxs) * 100.0)


def baseline_mae_p0(actuals: Sequence[float]) -> float:
    """Exact expected MAE of random guessing.

    Guessing predicts the target's effort by sampling uniformly among the
    other n-1 actuals; the expectation over infinitely many runs is the
    average over all ordered (target, donor) pairs, computed here by full
    enumeration.
    """
    values = np.asarray(actuals, dtype=float)
    n = values.size
    if n < 2:
        raise ValueError("random guessing needs at least 2 actuals")
    diffs = np.abs(values[:, None] - values[None, :])
    return float(diffs.sum() / (n * (n - 1)))


def baseline_sd_sp0(
    actuals: Sequence[float],
    runs: int = DEFAULT_GUESS_RUNS,
    seed: int = DEFAULT_SEED,
) -> float:
    """Standard deviation of per-run random-guessing MAE (seeded Monte Carlo)."""
    values = np.asarray(actuals, dtype=float)
    n = values.size
    if n < 2:
        raise ValueError("random guessing needs at least 2 actuals")
    if runs < 2:
        raise ValueError("need at least 2 runs")
    rng = np.random.default_rng(seed)
    # Donor index: uniform over the other n-1 rows; draw in 0..n-2 and
    # skip past the target itself.
    draws = rng.integers(0, n - 1, size=(runs, n))
    targets = np.arange(n)
    donors = draws + (draws >= targets)
    run_maes = np.mean(np.abs(values[donors] - values), axis=1)
    return float(np.std(run_maes, ddof=1))


def standardized_accuracy(records: Sequence[PredictionRecord], actuals: Sequence[float]) -> float:
    """SA = 1 - MAE / baseline MAE; 1 is perfect, 0 is guessing-grade."""
    baseline = baseline_mae_p0(actuals)
    if baseline <= 0:
        raise ValueError("baseline MAE is zero; SA undefined")
    return 1.0 - mae(records) / baseline


def effect_size(
    records: Sequence[PredictionRecord],
    actuals: Sequence[float],
    sp0: float,
) -> float:
    """Signed effect size (MAE - baseline MAE) / sp0; negative is better."""
    if sp0 <= 0:
        raise ValueError("sp0 must be > 0")
    return (mae(records) - baseline_mae_p0(actuals)) / sp0


def metric_report(
    records: Sequence[PredictionRecord],
    actuals: Sequence[float],
    model_name: str = "",
    guess_runs: int = DEFAULT_GUESS_RUNS,
    seed: int = DEFAULT_SEED,
) -> MetricReport:
    """Compute every measure in one pass; the signed effect size is kept
    alongside its magnitude (tables print the magnitude)."""
    baseline = baseline_mae_p0(actuals)
    sd = baseline_sd_sp0(actuals, runs=guess_runs, seed=seed)
    model_mae = mae(records)
    delta = (model_mae - baseline) / sd if sd > 0 else 0.0
    return MetricReport(
        model_name=model_name or (records[0].model_name if records else ""),
        n=len(records),
        mae=model_mae,
        mbre=mbre(records),
        mibre=mibre(records),
        sa=1.0 - model_mae / baseline,
        effect_size=delta,
        effect_size_abs=abs(delta),
        baseline_mae=baseline,
        baseline_sd=sd,
    )


class FoldFailure(RuntimeError):
    """A model builder failed inside cross-validation; carries the fold."""

    def __init__(self, fold_index: int, cause: Exception):
        super().__init__(f"fold {fold_index} failed: {cause}")
        self.fold_index = fold_index
        self.cause = cause


def loocv(
    dataset: Sequence,
    model_builder: Callable[[Sequence], Callable],
    model_name: str = "",
) -> list[PredictionRecord]:
    """Leave-one-out cross-validation over the dataset rows.

    ``model_builder(train_rows)`` must return a callable mapping one
    held-out row to a predicted effort. Folds run in dataset order; any
    builder or predictor failure aborts the whole run with the fold index
    (silently skipping folds would bias every downstream measure).
    """
    rows = list(dataset)
    if len(rows) < 3:
        raise ValueError("LOOCV needs at least 3 rows")
    records = []
    for fold, held_out in enumerate(rows):
        train_rows = rows[:fold] + rows[fold + 1:]
        try:
            predictor = model_builder(train_rows)
            predicted = float(predictor(held_out))
        except Exception as exc:
            raise FoldFailure(fold, exc) from exc
        records.append(
            PredictionRecord(
                actual=float(held_out.effort),
                predicted=predicted,
                model_name=model_name,
                fold_index=fold,
            )
        )
    return records
