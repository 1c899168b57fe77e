import numpy as np
import pytest

from ucpest.clustering import (
    BisectConfig,
    bisect,
    cluster_variance,
    kmedoids_split,
    label_assignments,
    make_labels,
    ordered_leaves,
)

# ---------------------------------------------------------------------------
# brute-force oracles (independent of the implementation)


def oracle_medoid(values, member_indices):
    best = None
    for i in member_indices:
        cost = sum(abs(values[i] - values[j]) for j in member_indices)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, i)
    return best[1]


def oracle_partition_cost(values, part):
    medoid = oracle_medoid(values, part)
    return sum(abs(values[j] - values[medoid]) for j in part)


def oracle_best_split(values, member_indices):
    """Minimum-cost 2-partition over ALL nonempty splits."""
    members = sorted(member_indices)
    n = len(members)
    best = None
    for mask in range(1, 2 ** (n - 1)):
        a = [members[0]] + [members[i] for i in range(1, n) if not (mask >> (i - 1)) & 1]
        b = [members[i] for i in range(1, n) if (mask >> (i - 1)) & 1]
        cost = oracle_partition_cost(values, a) + oracle_partition_cost(values, b)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, tuple(sorted(a)), tuple(sorted(b)))
    return best


def oracle_variance(values, part):
    medoid = oracle_medoid(values, part)
    return float(np.mean([(values[j] - values[medoid]) ** 2 for j in part]))


def oracle_tree_leaves(values, member_indices, min_leaf=2, threshold=1.0):
    """The growth rule applied on top of exhaustive-search splits."""
    members = tuple(sorted(member_indices))
    if len(members) < max(2, 2 * min_leaf):
        return [members]
    _, a, b = oracle_best_split(values, members)
    parent_var = oracle_variance(values, members)
    child_max = max(oracle_variance(values, a), oracle_variance(values, b))
    if min(len(a), len(b)) >= min_leaf and child_max < threshold * parent_var:
        return oracle_tree_leaves(values, a, min_leaf, threshold) + oracle_tree_leaves(
            values, b, min_leaf, threshold
        )
    return [members]


# ---------------------------------------------------------------------------


def test_variance_examples():
    assert cluster_variance([7.0], 7.0) == 0.0
    assert cluster_variance([1.0, 3.0], 1.0) == 2.0
    assert cluster_variance([5.0, 5.0, 5.0], 5.0) == 0.0
    with pytest.raises(ValueError):
        cluster_variance([], 1.0)


def test_split_two_blobs():
    first, second = kmedoids_split([10, 10, 10, 30, 30, 30])
    assert first.member_indices == (0, 1, 2)
    assert second.member_indices == (3, 4, 5)
    assert first.medoid_value == 10
    assert second.medoid_value == 30


def test_split_pair_and_ties():
    first, second = kmedoids_split([1.0, 2.0])
    assert (first.member_indices, second.member_indices) == ((0,), (1,))
    # all-equal cluster: both medoids carry the same value at zero cost
    a, b = kmedoids_split([4.0, 4.0, 4.0, 4.0])
    assert a.medoid_value == b.medoid_value == 4.0
    assert a.variance == b.variance == 0.0
    assert sorted(a.member_indices + b.member_indices) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        kmedoids_split([1.0])


def test_split_matches_exhaustive_oracle():
    rng = np.random.default_rng(427)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        values = rng.uniform(0, 100, size=n)
        first, second = kmedoids_split(values)
        cost, a, b = oracle_best_split(values, range(n))
        got = sorted([first.member_indices, second.member_indices])
        assert got == sorted([a, b])
        got_cost = oracle_partition_cost(values, first.member_indices) + oracle_partition_cost(
            values, second.member_indices
        )
        assert got_cost == pytest.approx(cost, abs=1e-9)


def test_bisect_degenerate_datasets():
    assert len(bisect([5.0] * 8).leaves) == 1  # equal values never improve
    assert len(bisect([3.0]).leaves) == 1  # singleton
    tree = bisect([10.0] * 6 + [30.0] * 6)
    assert sorted(leaf.medoid_value for leaf in tree.leaves) == [10.0, 30.0]


def test_bisect_leaves_partition_rows():
    rng = np.random.default_rng(5)
    values = rng.uniform(10, 40, size=60)
    tree = bisect(values)
    all_members = sorted(i for leaf in tree.leaves for i in leaf.member_indices)
    assert all_members == list(range(60))


def test_bisect_retained_splits_strictly_improve():
    rng = np.random.default_rng(6)
    values = rng.uniform(10, 40, size=80)
    tree = bisect(values)

    def walk(node):
        if node.is_leaf:
            return
        assert (
            max(node.left.cluster.variance, node.right.cluster.variance) < node.cluster.variance
        )
        walk(node.left)
        walk(node.right)

    walk(tree.root)


def test_bisect_medoids_minimise_member_distance():
    rng = np.random.default_rng(7)
    values = rng.uniform(0, 50, size=40)
    tree = bisect(values)
    for leaf in tree.leaves:
        assert leaf.medoid_index == oracle_medoid(values, leaf.member_indices)


def test_bisect_matches_oracle_on_small_datasets():
    rng = np.random.default_rng(23571)
    for _ in range(60):
        n = int(rng.integers(1, 9))
        values = rng.uniform(0, 60, size=n)
        got = sorted(leaf.member_indices for leaf in bisect(values).leaves)
        want = sorted(oracle_tree_leaves(values, range(n)))
        assert got == want


def test_bisect_determinism():
    rng = np.random.default_rng(8)
    values = list(rng.uniform(10, 40, size=50))
    first = bisect(values)
    second = bisect(values)
    assert [l.member_indices for l in first.leaves] == [l.member_indices for l in second.leaves]
    assert [l.medoid_index for l in first.leaves] == [l.medoid_index for l in second.leaves]


def test_min_leaf_rule():
    values = [1.0, 1.1, 9.0, 9.1, 20.0, 20.1]
    wide_open = bisect(values, BisectConfig(min_leaf=1))
    conservative = bisect(values, BisectConfig(min_leaf=3))
    assert len(wide_open.leaves) >= len(conservative.leaves)
    for leaf in conservative.leaves:
        assert leaf.size >= 3 or leaf is conservative.root.cluster


def test_improvement_threshold_restricts_splits():
    rng = np.random.default_rng(12)
    values = rng.uniform(10, 40, size=60)
    plain = bisect(values, BisectConfig(improvement_threshold=1.0))
    strict = bisect(values, BisectConfig(improvement_threshold=0.3))
    assert len(strict.leaves) <= len(plain.leaves)


def test_labels_single_leaf_named_fair():
    labels = make_labels(bisect([5.0, 5.0, 5.0]))
    assert len(labels) == 1
    assert labels[0].label_id == 0
    assert labels[0].linguistic_name == "fair"


def test_labels_ordering_and_contiguity():
    tree = bisect([18.0] * 4 + [30.0] * 4)
    labels = make_labels(tree)
    assert [l.label_id for l in labels] == [0, 1]
    assert labels[0].medoid_productivity < labels[1].medoid_productivity
    # three-band data gives three contiguous ids
    tree3 = bisect([10.0] * 4 + [20.0] * 4 + [30.0] * 4)
    labels3 = make_labels(tree3)
    assert [l.label_id for l in labels3] == [0, 1, 2]
    assert [l.medoid_productivity for l in labels3] == sorted(
        l.medoid_productivity for l in labels3
    )


def test_label_names_extend_below_very_low():
    rng = np.random.default_rng(9)
    # six well-separated bands force at least six leaves
    values = np.concatenate([rng.normal(loc, 0.1, size=6) for loc in (5, 15, 25, 35, 45, 55)])
    labels = make_labels(bisect(values))
    if len(labels) > 5:
        assert labels[5].linguistic_name == "extra-low-1"


def test_label_assignments_cover_all_rows():
    rng = np.random.default_rng(10)
    values = rng.uniform(10, 40, size=30)
    tree = bisect(values)
    assignment = label_assignments(tree)
    assert sorted(assignment) == list(range(30))
    labels = make_labels(tree)
    by_id = {l.label_id: l for l in labels}
    for leaf, label in zip(ordered_leaves(tree), labels):
        for row in leaf.member_indices:
            assert assignment[row] == label.label_id
            assert by_id[assignment[row]].medoid_productivity == leaf.medoid_value
