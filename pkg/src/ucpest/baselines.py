"""Comparison estimators: fixed-ratio, three-ratio, and log-linear.

Three well-known ways of turning UCP into person-hours. The fixed-ratio
model applies 20 ph/UCP to everything. The three-ratio model picks 20,
28, or 36 ph/UCP by counting unfavourable environmental ratings. The
log-linear model fits ``effort = (alpha / productivity) * ucp^beta`` on
the training set and reads productivity off a four-level map of the
weighted environmental sum; the level map here is a crisp
quartile-breakpoint approximation of the original fuzzy scheme, so
results against it are labelled approximate.
"""

from __future__ import annotations

import bisect as _bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ucp import (
    DEFAULT_WEIGHTS,
    ENVIRONMENTAL_FACTOR_COUNT,
    WeightTable,
    check_ratings,
)

FIXED_RATIO = 20.0

#: Ratio schedule keyed by the unfavourable-factor count: up to 2 factors
#: keep the fair ratio, 3..4 use the low ratio, 5+ the very-low ratio.
SW_RATIOS = (20.0, 28.0, 36.0)


def karner_estimate(ucp: float) -> float:
    """Effort at the fixed 20 person-hours per UCP."""
    if ucp <= 0:
        raise ValueError(f"ucp must be > 0, got {ucp}")
    return FIXED_RATIO * ucp


def sw_count(env_ratings: Sequence[int]) -> int:
    """Count unfavourable environmental factors.

    A factor counts when its rating is strictly below 3 among the first
    six, or strictly above 3 among the last two. A rating of exactly 3
    never counts.
    """
    ratings = check_ratings(env_ratings, ENVIRONMENTAL_FACTOR_COUNT, "env_ratings")
    low_first_six = sum(1 for r in ratings[:6] if r < 3)
    high_last_two = sum(1 for r in ratings[6:] if r > 3)
    return low_first_six + high_last_two


def sw_ratio(count: int) -> float:
    """Productivity ratio for an unfavourable-factor count."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if count <= 2:
        return SW_RATIOS[0]
    if count <= 4:
        return SW_RATIOS[1]
    return SW_RATIOS[2]


def sw_estimate(ucp: float, env_ratings: Sequence[int]) -> float:
    """Effort at 20/28/36 person-hours per UCP, chosen by the factor count."""
    if ucp <= 0:
        raise ValueError(f"ucp must be > 0, got {ucp}")
    return sw_ratio(sw_count(env_ratings)) * ucp


@dataclass(frozen=True)
class ProductivityLevelMap:
    """Crisp four-level productivity lookup over the weighted rating sum.

    Breakpoints are ordered; a sum equal to a breakpoint falls in the
    lower interval (half-open intervals, closed above).
    """

    breakpoints: tuple[float, float, float]
    levels: tuple[float, float, float, float]

    def __post_init__(self):
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be ordered")
        if any(v <= 0 for v in self.levels):
            raise ValueError("productivity levels must be > 0")

    def level_for(self, prod_sum: float) -> float:
        return self.levels[_bisect.bisect_left(self.breakpoints, prod_sum)]


@dataclass(frozen=True)
class NassifModel:
    """Log-linear effort model with a four-level productivity map."""

    alpha: float
    beta: float
    productivity_map: ProductivityLevelMap

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")


def prod_sum(env_ratings: Sequence[int], weights: WeightTable = DEFAULT_WEIGHTS) -> float:
    """Weighted sum of the environmental ratings."""
    ratings = check_ratings(env_ratings, ENVIRONMENTAL_FACTOR_COUNT, "env_ratings")
    return float(sum(r * w for r, w in zip(ratings, weights.environmental)))


def nassif_fit(rows: Sequence[tuple[float, float, float]]) -> tuple[float, float]:
    """Fit (alpha, beta) of effort = (alpha / productivity) * ucp^beta.

    ``rows`` are (ucp, productivity, effort) triples. Taking logs turns
    the model into the line ln(effort) + ln(productivity) =
    ln(alpha) + beta * ln(ucp), solved by plain least squares.
    """
    if len(rows) < 3:
        raise ValueError("fit needs at least 3 rows")
    ucps = np.array([r[0] for r in rows], dtype=float)
    prods = np.array([r[1] for r in rows], dtype=float)
    efforts = np.array([r[2] for r in rows], dtype=float)
    if np.any(ucps <= 0) or np.any(prods <= 0) or np.any(efforts <= 0):
        raise ValueError("ucp, productivity, and effort must all be > 0")

    x = np.log(ucps)
    target = np.log(efforts) + np.log(prods)
    if np.ptp(x) == 0:
        raise ValueError("beta is unidentifiable: all ucp values are equal")
    beta, log_alpha = np.polyfit(x, target, 1)
    return float(np.exp(log_alpha)), float(beta)


def fit_productivity_map(
    env_ratings: Sequence[Sequence[int]],
    productivities: Sequence[float],
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> ProductivityLevelMap:
    """Derive the four-level map from training data.

    Breakpoints sit at the quartiles of the weighted rating sums; each
    level value is the median productivity of its quartile (overall
    median when a quartile ends up empty).
    """
    sums = np.array([prod_sum(r, weights) for r in env_ratings])
    prods = np.asarray(productivities, dtype=float)
    if sums.size != prods.size or sums.size < 1:
        raise ValueError("need one productivity per rating row")
    if np.any(prods <= 0):
        raise ValueError("productivities must be > 0")

    breakpoints = tuple(float(q) for q in np.quantile(sums, (0.25, 0.5, 0.75)))
    overall = float(np.median(prods))
    levels = []
    for idx in range(4):
        lower = -np.inf if idx == 0 else breakpoints[idx - 1]
        upper = np.inf if idx == 3 else breakpoints[idx]
        in_level = (sums > lower) & (sums <= upper)
        levels.append(float(np.median(prods[in_level])) if np.any(in_level) else overall)
    return ProductivityLevelMap(breakpoints=breakpoints, levels=tuple(levels))


def build_nassif(
    rows: Sequence[tuple[float, float, float]],
    env_ratings: Sequence[Sequence[int]],
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> NassifModel:
    """Fit both the log-linear coefficients and the productivity map."""
    alpha, beta = nassif_fit(rows)
    prods = [r[1] for r in rows]
    return NassifModel(
        alpha=alpha,
        beta=beta,
        productivity_map=fit_productivity_map(env_ratings, prods, weights),
    )


def nassif_productivity(
    model: NassifModel,
    env_ratings: Sequence[int],
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> float:
    """Productivity level for a project's environmental ratings."""
    return model.productivity_map.level_for(prod_sum(env_ratings, weights))


def nassif_estimate(
    model: NassifModel,
    ucp: float,
    env_ratings: Sequence[int],
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> float:
    """Effort = (alpha / productivity level) * ucp^beta."""
    if ucp <= 0:
        raise ValueError(f"ucp must be > 0, got {ucp}")
    productivity = nassif_productivity(model, env_ratings, weights)
    return (model.alpha / productivity) * ucp**model.beta
