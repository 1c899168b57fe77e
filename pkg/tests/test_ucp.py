import math

import numpy as np
import pytest

from ucpest.ucp import (
    ActorCounts,
    DEFAULT_WEIGHTS,
    FactorRatings,
    UseCaseCounts,
    WeightTable,
    classify_use_case,
    compute_ef,
    compute_tcf,
    compute_uaw,
    compute_ucp,
    compute_uuc,
    compute_uucp,
    load_weights,
)


def test_uaw_examples():
    assert compute_uaw(ActorCounts(1, 1, 1)) == 6
    assert compute_uaw(ActorCounts(0, 0, 0)) == 0
    assert compute_uaw(ActorCounts(4, 2, 3)) == 17


def test_uuc_examples():
    assert compute_uuc(UseCaseCounts(1, 1, 1)) == 30
    assert compute_uuc(UseCaseCounts(2, 1, 0)) == 20
    assert compute_uuc(UseCaseCounts(0, 0, 0)) == 0


def test_use_case_classification_boundaries():
    assert classify_use_case(0) == "simple"
    assert classify_use_case(3) == "simple"
    assert classify_use_case(4) == "average"
    assert classify_use_case(7) == "average"
    assert classify_use_case(8) == "complex"
    assert classify_use_case(100) == "complex"


def test_tcf_examples():
    zeros = [0] * 13
    assert compute_tcf(zeros) == 0.6
    # all ratings 5 with the default table (weight sum 14)
    assert compute_tcf([5] * 13) == pytest.approx(1.3, abs=1e-12)
    custom = WeightTable((2.0,) + (0.0,) * 12, DEFAULT_WEIGHTS.environmental)
    assert compute_tcf([3] + [0] * 12, custom) == pytest.approx(0.66, abs=1e-12)


def test_ef_examples():
    assert compute_ef([0] * 8) == 1.4
    custom = WeightTable(DEFAULT_WEIGHTS.technical, (1.5,) + (0.0,) * 7)
    assert compute_ef([5] + [0] * 7, custom) == pytest.approx(1.175, abs=1e-12)
    # all ratings 5 with the default table (weight sum 4.5)
    assert compute_ef([5] * 8) == pytest.approx(0.725, abs=1e-12)


def test_ucp_composition_example():
    breakdown = compute_ucp(
        ActorCounts(1, 1, 1),
        UseCaseCounts(1, 1, 1),
        FactorRatings((0,) * 13, (0,) * 8),
    )
    assert breakdown.uaw == 6
    assert breakdown.uuc == 30
    assert breakdown.uucp == 36
    assert breakdown.tcf == 0.6
    assert breakdown.ef == 1.4
    assert breakdown.ucp == pytest.approx(30.24, abs=1e-12)


def test_empty_model_rejected():
    with pytest.raises(ValueError):
        compute_ucp(
            ActorCounts(0, 0, 0),
            UseCaseCounts(0, 0, 0),
            FactorRatings((0,) * 13, (0,) * 8),
        )


def test_golden_table_matches_direct_formula_evaluation():
    # Independent oracle: the published formulas evaluated inline, term by
    # term, in fixed left-to-right order.
    rng = np.random.default_rng(91)
    for _ in range(20):
        sa, aa, ca = (int(v) for v in rng.integers(0, 9, size=3))
        suc, auc, cuc = (int(v) for v in rng.integers(0, 9, size=3))
        if sa + aa + ca + suc + auc + cuc == 0:
            suc = 1
        tech = tuple(int(v) for v in rng.integers(0, 6, size=13))
        env = tuple(int(v) for v in rng.integers(0, 6, size=8))

        uaw = 1 * sa + 2 * aa + 3 * ca
        uuc = 5 * suc + 10 * auc + 15 * cuc
        tcf_sum = 0.0
        for i in range(13):
            tcf_sum += tech[i] * DEFAULT_WEIGHTS.technical[i]
        ef_sum = 0.0
        for i in range(8):
            ef_sum += env[i] * DEFAULT_WEIGHTS.environmental[i]
        tcf = 0.6 + 0.01 * tcf_sum
        ef = 1.4 - 0.03 * ef_sum
        expected_ucp = (uaw + uuc) * tcf * ef

        breakdown = compute_ucp(
            ActorCounts(sa, aa, ca), UseCaseCounts(suc, auc, cuc), FactorRatings(tech, env)
        )
        assert breakdown.uaw == uaw
        assert breakdown.uuc == uuc
        assert breakdown.uucp == uaw + uuc
        assert breakdown.tcf == tcf
        assert breakdown.ef == ef
        assert breakdown.ucp == expected_ucp


def test_counts_monotonicity():
    rng = np.random.default_rng(17)
    for _ in range(50):
        sa, aa, ca = (int(v) for v in rng.integers(0, 6, size=3))
        base = compute_uaw(ActorCounts(sa, aa, ca))
        assert compute_uaw(ActorCounts(sa + 1, aa, ca)) >= base
        assert compute_uaw(ActorCounts(sa, aa + 1, ca)) >= base
        assert compute_uaw(ActorCounts(sa, aa, ca + 1)) >= base


def test_factor_monotonicity_with_nonnegative_weights():
    weights = WeightTable((1.0,) * 13, (1.0,) * 8)
    rng = np.random.default_rng(18)
    for _ in range(30):
        tech = [int(v) for v in rng.integers(0, 5, size=13)]
        env = [int(v) for v in rng.integers(0, 5, size=8)]
        i = int(rng.integers(0, 13))
        j = int(rng.integers(0, 8))
        tech_up = list(tech)
        tech_up[i] += 1
        env_up = list(env)
        env_up[j] += 1
        assert compute_tcf(tech_up, weights) >= compute_tcf(tech, weights)
        assert compute_ef(env_up, weights) <= compute_ef(env, weights)


def test_breakdown_identities():
    rng = np.random.default_rng(19)
    for _ in range(30):
        actors = ActorCounts(*(int(v) for v in rng.integers(0, 7, size=3)))
        usecases = UseCaseCounts(*(int(v) for v in rng.integers(1, 7, size=3)))
        ratings = FactorRatings(
            tuple(int(v) for v in rng.integers(0, 6, size=13)),
            tuple(int(v) for v in rng.integers(0, 6, size=8)),
        )
        b = compute_ucp(actors, usecases, ratings)
        assert b.uucp == b.uaw + b.uuc
        assert math.isclose(b.ucp, b.uucp * b.tcf * b.ef, rel_tol=1e-15)
        # no hidden rounding: exact recomposition from the parts
        assert b.ucp == compute_uucp(actors, usecases) * compute_tcf(ratings) * compute_ef(ratings)


def test_rating_validation():
    with pytest.raises(ValueError):
        FactorRatings((0,) * 12, (0,) * 8)  # wrong length
    with pytest.raises(ValueError):
        FactorRatings((0,) * 13, (6,) + (0,) * 7)  # out of range
    with pytest.raises(ValueError):
        FactorRatings((0.5,) + (0,) * 12, (0,) * 8)  # fractional
    with pytest.raises(ValueError):
        ActorCounts(-1, 0, 0)


def test_integral_floats_accepted():
    table = WeightTable((2.0,) + (0.0,) * 12, (0.0,) * 8)
    assert compute_tcf([3.0] + [0] * 12, table) == pytest.approx(0.66, abs=1e-12)


def test_weight_table_validation():
    with pytest.raises(ValueError):
        WeightTable((1.0,) * 12, (1.0,) * 8)
    with pytest.raises(ValueError):
        WeightTable((float("nan"),) + (1.0,) * 12, (1.0,) * 8)


def test_load_weights_roundtrip(tmp_path):
    path = tmp_path / "weights.json"
    path.write_text(
        '{"technical": [1,1,1,1,1,1,1,1,1,1,1,1,1], "environmental": [2,2,2,2,2,2,2,2]}'
    )
    table = load_weights(path)
    assert table.technical == (1.0,) * 13
    assert table.environmental == (2.0,) * 8
    assert compute_tcf([5] * 13, table) == pytest.approx(0.6 + 0.01 * 65)


def test_load_weights_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"technical": [1,2,3]}')
    with pytest.raises(ValueError):
        load_weights(bad)
    notjson = tmp_path / "notjson.json"
    notjson.write_text("weights: nope")
    with pytest.raises(ValueError):
        load_weights(notjson)
