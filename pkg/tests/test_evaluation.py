from dataclasses import dataclass
from itertools import product

import numpy as np
import pytest

from ucpest.evaluation import (
    DEFAULT_SEED,
    FoldFailure,
    PredictionRecord,
    absolute_error,
    baseline_mae_p0,
    baseline_sd_sp0,
    effect_size,
    loocv,
    mae,
    mbre,
    metric_report,
    mibre,
    standardized_accuracy,
)


def recs(pairs, name="m"):
    return [PredictionRecord(a, p, name, i) for i, (a, p) in enumerate(pairs)]


def test_absolute_error_examples():
    assert absolute_error(100.0, 80.0) == 20.0
    assert absolute_error(50.0, 50.0) == 0.0
    assert absolute_error(80.0, 100.0) == 20.0


def test_mae_examples():
    assert mae(recs([(100, 100), (50, 50)])) == 0.0
    assert mae(recs([(100, 80)])) == 20.0
    assert mae(recs([(100, 80), (100, 120)])) == 20.0
    with pytest.raises(ValueError):
        mae([])


def test_mbre_mibre_examples():
    assert mbre(recs([(100, 50)])) == pytest.approx(100.0)
    assert mbre(recs([(50, 100)])) == pytest.approx(100.0)  # symmetric under swap
    assert mbre(recs([(100, 100)])) == 0.0
    assert mibre(recs([(100, 50)])) == pytest.approx(50.0)
    assert mibre(recs([(100, 100)])) == 0.0


def test_mibre_never_exceeds_mbre():
    rng = np.random.default_rng(12)
    for _ in range(100):
        pairs = [(float(a), float(p)) for a, p in rng.uniform(1, 1000, size=(10, 2))]
        r = recs(pairs)
        assert mibre(r) <= mbre(r) + 1e-12


def test_positive_value_guard():
    with pytest.raises(ValueError):
        PredictionRecord(0.0, 10.0)
    with pytest.raises(ValueError):
        PredictionRecord(10.0, -1.0)


def test_baseline_mae_p0_enumeration():
    assert baseline_mae_p0([1.0, 2.0, 3.0]) == pytest.approx(4.0 / 3.0)
    assert baseline_mae_p0([7.0, 7.0, 7.0]) == 0.0
    assert baseline_mae_p0([0.0, 10.0]) == 10.0
    with pytest.raises(ValueError):
        baseline_mae_p0([5.0])


def test_baseline_mae_p0_matches_pair_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 11))
        values = rng.uniform(0, 100, size=n)
        expected = np.mean(
            [np.mean([abs(values[t] - values[r]) for r in range(n) if r != t]) for t in range(n)]
        )
        assert baseline_mae_p0(values) == pytest.approx(expected, rel=1e-12)


def test_baseline_sd_deterministic_and_zero_for_constant():
    assert baseline_sd_sp0([5.0, 5.0, 5.0, 5.0]) == 0.0
    values = [10.0, 20.0, 35.0, 70.0, 15.0]
    assert baseline_sd_sp0(values, runs=500, seed=7) == baseline_sd_sp0(values, runs=500, seed=7)
    assert baseline_sd_sp0(values, runs=500, seed=7) != baseline_sd_sp0(values, runs=500, seed=8)


def test_baseline_sd_matches_exact_distribution_for_n3():
    # n = 3: every run draws one donor per target, 8 equally likely runs
    values = [1.0, 2.0, 3.0]
    run_maes = []
    for donors in product(*[[r for r in range(3) if r != t] for t in range(3)]):
        run_maes.append(np.mean([abs(values[t] - values[d]) for t, d in enumerate(donors)]))
    exact_sd = float(np.std(run_maes))
    estimate = baseline_sd_sp0(values, runs=10000, seed=DEFAULT_SEED)
    assert abs(estimate - exact_sd) / exact_sd < 0.05


def test_standardized_accuracy_anchors():
    actuals = [10.0, 20.0, 30.0, 40.0]
    perfect = recs([(a, a) for a in actuals])
    assert standardized_accuracy(perfect, actuals) == 1.0
    p0 = baseline_mae_p0(actuals)
    guessing_grade = recs([(a, a + p0) for a in actuals])
    assert standardized_accuracy(guessing_grade, actuals) == pytest.approx(0.0, abs=1e-12)
    twice_bad = recs([(a, a + 2 * p0) for a in actuals])
    assert standardized_accuracy(twice_bad, actuals) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(ValueError):
        standardized_accuracy(perfect, [5.0, 5.0])


def test_sa_scale_free():
    rng = np.random.default_rng(5)
    actuals = list(rng.uniform(10, 100, size=12))
    predicted = list(rng.uniform(10, 100, size=12))
    base = standardized_accuracy(recs(list(zip(actuals, predicted))), actuals)
    scaled = standardized_accuracy(
        recs([(a * 7.5, p * 7.5) for a, p in zip(actuals, predicted)]),
        [a * 7.5 for a in actuals],
    )
    assert scaled == pytest.approx(base, rel=1e-12)


def test_effect_size_signs():
    actuals = [10.0, 20.0, 30.0, 40.0]
    p0 = baseline_mae_p0(actuals)
    matched = recs([(a, a + p0) for a in actuals])
    assert effect_size(matched, actuals, sp0=2.0) == pytest.approx(0.0, abs=1e-12)
    perfect = recs([(a, a) for a in actuals])
    assert effect_size(perfect, actuals, sp0=2.0) == pytest.approx(-p0 / 2.0)
    with pytest.raises(ValueError):
        effect_size(perfect, actuals, sp0=0.0)


def test_metric_report_bundles_everything():
    rng = np.random.default_rng(9)
    actuals = list(rng.uniform(100, 1000, size=15))
    predicted = [a * rng.uniform(0.8, 1.2) for a in actuals]
    report = metric_report(recs(list(zip(actuals, predicted)), "demo"), actuals)
    assert report.model_name == "demo"
    assert report.n == 15
    assert report.mibre <= report.mbre
    assert report.effect_size_abs == abs(report.effect_size)
    assert report.baseline_mae == pytest.approx(baseline_mae_p0(actuals))
    assert report.sa == pytest.approx(1.0 - report.mae / report.baseline_mae)


# ---------------------------------------------------------------------------
# LOOCV


@dataclass
class Row:
    ucp: float
    effort: float


def test_loocv_constant_builder():
    rows = [Row(10.0, 100.0), Row(20.0, 200.0), Row(30.0, 300.0)]
    records = loocv(rows, lambda train: (lambda r: 42.0), "const")
    assert [r.predicted for r in records] == [42.0, 42.0, 42.0]
    assert [r.fold_index for r in records] == [0, 1, 2]
    assert [r.actual for r in records] == [100.0, 200.0, 300.0]


def test_loocv_karner_ignores_training():
    rows = [Row(10.0, 123.0), Row(20.0, 456.0), Row(30.0, 789.0)]
    records = loocv(rows, lambda train: (lambda r: 20.0 * r.ucp), "karner")
    assert [r.predicted for r in records] == [200.0, 400.0, 600.0]


def test_loocv_leakage_probe():
    # A memorising builder can never reproduce the held-out effort: the
    # test row must not appear in its training rows.
    rows = [Row(float(i + 1), float((i + 1) * 100)) for i in range(6)]

    def memorizer(train_rows):
        table = {r.ucp: r.effort for r in train_rows}
        return lambda r: table.get(r.ucp, 1.0)

    records = loocv(rows, memorizer, "memo")
    for record, row in zip(records, rows):
        assert record.predicted == 1.0
        assert record.predicted != row.effort


def test_loocv_failure_carries_fold_index():
    rows = [Row(10.0, 100.0), Row(20.0, 200.0), Row(30.0, 300.0), Row(40.0, 400.0)]

    def builder(train_rows):
        def predict(r):
            if r.ucp == 30.0:
                raise RuntimeError("boom")
            return 100.0

        return predict

    with pytest.raises(FoldFailure) as info:
        loocv(rows, builder, "fragile")
    assert info.value.fold_index == 2
    assert "fold 2" in str(info.value)


def test_loocv_needs_three_rows():
    with pytest.raises(ValueError):
        loocv([Row(1.0, 10.0), Row(2.0, 20.0)], lambda t: (lambda r: 1.0))


def test_loocv_reproducible():
    rng = np.random.default_rng(10)
    rows = [Row(float(u), float(u) * 21.0) for u in rng.uniform(10, 100, size=8)]

    def builder(train_rows):
        ratio = np.mean([r.effort / r.ucp for r in train_rows])
        return lambda r: ratio * r.ucp

    first = loocv(rows, builder, "ratio")
    second = loocv(rows, builder, "ratio")
    assert first == second
