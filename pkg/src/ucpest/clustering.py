"""Productivity label discovery by bisecting 2-medoids.

Works on one-dimensional productivity values (person-hours per UCP). The
tree is grown breadth-first: every open cluster is split with a
two-medoid partition, and the split is kept only when both children are
strictly more homogeneous than their parent and large enough to stand
alone; otherwise the cluster is finalised as a leaf. Leaves become
ordinal labels named from a fixed vocabulary, ordered by medoid
productivity.

On a line the optimal two-medoid partition is contiguous in value order,
so the 2-split is solved exactly by scanning all contiguous boundaries
instead of running the usual alternating heuristic (which stalls in
local optima even on tiny inputs). Everything is deterministic for a
fixed input ordering; all ties break toward the lowest row index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Cluster:
    """One cluster over dataset row indices.

    ``medoid_index`` is the member minimising the summed absolute distance
    to all members; ``medoid_value`` is its productivity. ``variance`` is
    the mean squared distance of members to the medoid.
    """

    member_indices: tuple[int, ...]
    medoid_index: int
    medoid_value: float
    variance: float

    def __post_init__(self):
        if self.medoid_index not in self.member_indices:
            raise ValueError("medoid must be a cluster member")
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")

    @property
    def size(self) -> int:
        return len(self.member_indices)


@dataclass
class ClusterNode:
    """Binary tree node; children are both None (leaf) or both set."""

    cluster: Cluster
    left: Optional["ClusterNode"] = None
    right: Optional["ClusterNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass(frozen=True)
class ClusterTree:
    root: ClusterNode
    leaves: tuple[Cluster, ...]


@dataclass(frozen=True)
class ProductivityLabel:
    """Ordinal productivity class; ids are contiguous and ordered by medoid."""

    label_id: int
    linguistic_name: str
    medoid_productivity: float


@dataclass(frozen=True)
class BisectConfig:
    """Knobs for tree growth.

    ``min_leaf`` is the smallest admissible leaf; clusters below
    ``2 * min_leaf`` members are never split (otherwise strictly
    decreasing child variance recurses to singletons on any
    distinct-valued data). ``improvement_threshold`` scales the parent
    variance in the acceptance test ``max(child variances) < threshold *
    parent variance``; 1.0 is the plain rule, below 1.0 demands a
    markedly better split.
    """

    min_leaf: int = 2
    improvement_threshold: float = 1.0

    def __post_init__(self):
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0 < self.improvement_threshold <= 1.0:
            raise ValueError("improvement_threshold must be in (0, 1]")


def cluster_variance(values: Sequence[float], medoid_value: float) -> float:
    """Mean squared distance of cluster members to the medoid value."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("variance of an empty cluster is undefined")
    return float(np.mean((values - medoid_value) ** 2))


def _medoid_position(member_values: np.ndarray) -> int:
    # Member minimising summed absolute distance; first position on ties.
    costs = np.abs(member_values[:, None] - member_values[None, :]).sum(axis=1)
    return int(np.argmin(costs))


def _make_cluster(values: np.ndarray, indices: Sequence[int]) -> Cluster:
    indices = tuple(sorted(int(i) for i in indices))
    member_values = values[list(indices)]
    medoid = indices[_medoid_position(member_values)]
    medoid_value = float(values[medoid])
    return Cluster(
        member_indices=indices,
        medoid_index=medoid,
        medoid_value=medoid_value,
        variance=cluster_variance(member_values, medoid_value),
    )


def _segment_cost(sorted_vals: np.ndarray, prefix: np.ndarray, lo: int, hi: int) -> float:
    # Summed |v - median| over the half-open slice [lo, hi) of the sorted
    # values; the lower median is a cost-minimising medoid.
    mid = lo + (hi - lo - 1) // 2
    med = sorted_vals[mid]
    left = med * (mid - lo) - (prefix[mid] - prefix[lo])
    right = (prefix[hi] - prefix[mid + 1]) - med * (hi - mid - 1)
    return float(left + right)


def kmedoids_split(
    values: Sequence[float],
    indices: Optional[Sequence[int]] = None,
) -> tuple[Cluster, Cluster]:
    """Split one cluster into two, minimising total distance to medoids.

    Solved exactly: members are ordered by (value, row index) and every
    contiguous boundary is scored; the earliest boundary with minimal
    cost wins. Returns the two clusters ordered by ascending medoid
    value (ties by lowest row index).
    """
    values = np.asarray(values, dtype=float)
    if indices is None:
        indices = range(values.size)
    idx = np.asarray(sorted(int(i) for i in indices), dtype=int)
    if idx.size < 2:
        raise ValueError("cannot split a cluster with fewer than 2 members")

    vals = values[idx]
    order = np.lexsort((idx, vals))
    sorted_idx = idx[order]
    sorted_vals = vals[order]
    prefix = np.concatenate(([0.0], np.cumsum(sorted_vals)))

    n = idx.size
    best_boundary, best_cost = 1, np.inf
    for boundary in range(1, n):
        cost = _segment_cost(sorted_vals, prefix, 0, boundary) + _segment_cost(
            sorted_vals, prefix, boundary, n
        )
        if cost < best_cost - 1e-12:
            best_boundary, best_cost = boundary, cost

    first = _make_cluster(values, sorted_idx[:best_boundary])
    second = _make_cluster(values, sorted_idx[best_boundary:])
    if (second.medoid_value, second.medoid_index) < (first.medoid_value, first.medoid_index):
        first, second = second, first
    return first, second


def _splittable(cluster: Cluster, config: BisectConfig) -> bool:
    return cluster.size >= max(2, 2 * config.min_leaf)


def bisect(values: Sequence[float], config: BisectConfig = BisectConfig()) -> ClusterTree:
    """Grow the full bisection tree over all rows of ``values``.

    A split is retained when both children have at least ``min_leaf``
    members and the larger child variance is strictly below
    ``improvement_threshold`` times the parent variance; rejected splits
    finalise the parent as a leaf.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("dataset must be nonempty")
    if not np.all(np.isfinite(values)):
        raise ValueError("productivity values must be finite")

    root = ClusterNode(_make_cluster(values, range(values.size)))
    leaves: list[Cluster] = []
    level = [root]
    while level:
        next_level: list[ClusterNode] = []
        for node in level:
            cluster = node.cluster
            if not _splittable(cluster, config):
                leaves.append(cluster)
                continue
            first, second = kmedoids_split(values, cluster.member_indices)
            acceptable_sizes = min(first.size, second.size) >= config.min_leaf
            improved = (
                max(first.variance, second.variance)
                < config.improvement_threshold * cluster.variance
            )
            if acceptable_sizes and improved:
                node.left = ClusterNode(first)
                node.right = ClusterNode(second)
                next_level.extend((node.left, node.right))
            else:
                leaves.append(cluster)
        level = next_level
    return ClusterTree(root=root, leaves=tuple(leaves))


_BASE_NAMES = ("very high", "high", "fair", "low", "very low")


def _label_names(count: int) -> list[str]:
    # Center the window on "fair" so a lone label reads neutrally; past
    # the five base names, continue with extra-low-1, extra-low-2, ...
    start = max(0, (len(_BASE_NAMES) - count) // 2)
    names = []
    for rank in range(count):
        slot = start + rank
        if slot < len(_BASE_NAMES):
            names.append(_BASE_NAMES[slot])
        else:
            names.append(f"extra-low-{slot - len(_BASE_NAMES) + 1}")
    return names


def ordered_leaves(tree: ClusterTree) -> tuple[Cluster, ...]:
    """Leaves sorted by ascending medoid productivity (ties by first member)."""
    return tuple(
        sorted(tree.leaves, key=lambda c: (c.medoid_value, c.member_indices[0]))
    )


def make_labels(tree: ClusterTree) -> tuple[ProductivityLabel, ...]:
    """One label per leaf, ids contiguous from 0 in ascending medoid order."""
    leaves = ordered_leaves(tree)
    names = _label_names(len(leaves))
    return tuple(
        ProductivityLabel(label_id=i, linguistic_name=names[i], medoid_productivity=leaf.medoid_value)
        for i, leaf in enumerate(leaves)
    )


def label_assignments(tree: ClusterTree) -> dict[int, int]:
    """Map every dataset row index to its leaf's label id."""
    assignment: dict[int, int] = {}
    for label_id, leaf in enumerate(ordered_leaves(tree)):
        for row in leaf.member_indices:
            assignment[row] = label_id
    return assignment
