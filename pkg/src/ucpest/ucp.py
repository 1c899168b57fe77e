"""Use Case Points size computation.

Implements the classic UCP sizing chain: weighted actor and use-case
counts, the technical complexity factor (TCF) built from 13 ordinal
ratings, the environmental factor (EF) built from 8 ordinal ratings, and
the adjusted size

    UCP = (UAW + UUC) * TCF * EF

No intermediate value is rounded; formatting belongs to the caller. The
factor weights default to the customary published tables (the sizing
method itself does not fix them) and can be replaced wholesale, e.g. from
a JSON file via :func:`load_weights`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

TECHNICAL_FACTOR_COUNT = 13
ENVIRONMENTAL_FACTOR_COUNT = 8

# Literature-standard weight tables; overridable, not canonical.
DEFAULT_TECHNICAL_WEIGHTS = (
    2.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0,
)
DEFAULT_ENVIRONMENTAL_WEIGHTS = (1.5, 0.5, 1.0, 0.5, 1.0, 2.0, -1.0, -1.0)


def check_count(value, name: str) -> int:
    """Validate a nonnegative integer count."""
    if isinstance(value, bool) or value != int(value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_rating(value, name: str) -> int:
    """Validate one factor influence rating: an integer in 0..5.

    Fractional influence values are rejected outright; the rating scale is
    ordinal, not continuous.
    """
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be an integer in 0..5, got {value!r}")
    if isinstance(value, bool) or as_int != value:
        raise ValueError(f"{name} must be an integer in 0..5, got {value!r}")
    if not 0 <= as_int <= 5:
        raise ValueError(f"{name} must be in 0..5, got {value!r}")
    return as_int


def check_ratings(values: Sequence, count: int, name: str) -> tuple[int, ...]:
    """Validate a full rating vector of the expected length."""
    values = tuple(values)
    if len(values) != count:
        raise ValueError(f"{name} needs exactly {count} entries, got {len(values)}")
    return tuple(check_rating(v, f"{name}[{i + 1}]") for i, v in enumerate(values))


@dataclass(frozen=True)
class ActorCounts:
    """Numbers of simple, average, and complex actors."""

    simple: int
    average: int
    complex: int

    def __post_init__(self):
        for field_name in ("simple", "average", "complex"):
            object.__setattr__(
                self, field_name, check_count(getattr(self, field_name), f"actors.{field_name}")
            )

    @property
    def total(self) -> int:
        return self.simple + self.average + self.complex


@dataclass(frozen=True)
class UseCaseCounts:
    """Numbers of simple, average, and complex use cases."""

    simple: int
    average: int
    complex: int

    def __post_init__(self):
        for field_name in ("simple", "average", "complex"):
            object.__setattr__(
                self, field_name, check_count(getattr(self, field_name), f"usecases.{field_name}")
            )

    @property
    def total(self) -> int:
        return self.simple + self.average + self.complex


@dataclass(frozen=True)
class FactorRatings:
    """The 13 technical and 8 environmental influence ratings (each 0..5)."""

    technical: tuple[int, ...]
    environmental: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "technical", check_ratings(self.technical, TECHNICAL_FACTOR_COUNT, "technical")
        )
        object.__setattr__(
            self,
            "environmental",
            check_ratings(self.environmental, ENVIRONMENTAL_FACTOR_COUNT, "environmental"),
        )


@dataclass(frozen=True)
class WeightTable:
    """Per-factor weights: 13 technical, 8 environmental, all finite reals."""

    technical: tuple[float, ...]
    environmental: tuple[float, ...]

    def __post_init__(self):
        for name, expected in (("technical", TECHNICAL_FACTOR_COUNT),
                               ("environmental", ENVIRONMENTAL_FACTOR_COUNT)):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != expected:
                raise ValueError(f"{name} weights need exactly {expected} entries, got {len(values)}")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} weights must all be finite")
            object.__setattr__(self, name, values)


DEFAULT_WEIGHTS = WeightTable(DEFAULT_TECHNICAL_WEIGHTS, DEFAULT_ENVIRONMENTAL_WEIGHTS)


def load_weights(path) -> WeightTable:
    """Load a weight table from a JSON file.

    Expected shape: ``{"technical": [13 numbers], "environmental": [8 numbers]}``.
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"weight file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or set(raw) != {"technical", "environmental"}:
        raise ValueError(
            f"weight file {path} must contain exactly the keys 'technical' and 'environmental'"
        )
    return WeightTable(tuple(raw["technical"]), tuple(raw["environmental"]))


@dataclass(frozen=True)
class UcpBreakdown:
    """All intermediate size quantities together with the final UCP."""

    uaw: float
    uuc: float
    uucp: float
    tcf: float
    ef: float
    ucp: float


def compute_uaw(actors: ActorCounts) -> float:
    """Unadjusted actor weight: 1*simple + 2*average + 3*complex."""
    return float(1 * actors.simple + 2 * actors.average + 3 * actors.complex)


def compute_uuc(usecases: UseCaseCounts) -> float:
    """Unadjusted use-case weight: 5*simple + 10*average + 15*complex."""
    return float(5 * usecases.simple + 10 * usecases.average + 15 * usecases.complex)


def compute_uucp(actors: ActorCounts, usecases: UseCaseCounts) -> float:
    """Unadjusted use case points: UAW + UUC."""
    return compute_uaw(actors) + compute_uuc(usecases)


def classify_use_case(transactions) -> str:
    """Classify a use case by transaction count: <=3 simple, 4..7 average, >7 complex."""
    transactions = check_count(transactions, "transactions")
    if transactions <= 3:
        return "simple"
    if transactions <= 7:
        return "average"
    return "complex"


def _technical(ratings) -> tuple[int, ...]:
    values = ratings.technical if isinstance(ratings, FactorRatings) else ratings
    return check_ratings(values, TECHNICAL_FACTOR_COUNT, "technical")


def _environmental(ratings) -> tuple[int, ...]:
    values = ratings.environmental if isinstance(ratings, FactorRatings) else ratings
    return check_ratings(values, ENVIRONMENTAL_FACTOR_COUNT, "environmental")


def compute_tcf(ratings, weights: WeightTable = DEFAULT_WEIGHTS) -> float:
    """Technical complexity factor: 0.6 + 0.01 * sum(rating * weight).

    ``ratings`` may be a :class:`FactorRatings` or a plain sequence of the
    13 technical ratings.
    """
    values = _technical(ratings)
    weighted = sum(r * w for r, w in zip(values, weights.technical))
    return 0.6 + 0.01 * weighted


def compute_ef(ratings, weights: WeightTable = DEFAULT_WEIGHTS) -> float:
    """Environmental factor: 1.4 - 0.03 * sum(rating * weight).

    ``ratings`` may be a :class:`FactorRatings` or a plain sequence of the
    8 environmental ratings.
    """
    values = _environmental(ratings)
    weighted = sum(r * w for r, w in zip(values, weights.environmental))
    return 1.4 - 0.03 * weighted


def compute_ucp(
    actors: ActorCounts,
    usecases: UseCaseCounts,
    ratings: FactorRatings,
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> UcpBreakdown:
    """Compute the full UCP breakdown for one project model.

    Raises ValueError for an empty model (no actors and no use cases): the
    size of nothing is undefined, not zero.
    """
    if actors.total + usecases.total < 1:
        raise ValueError("model is empty: needs at least one actor or use case")
    uaw = compute_uaw(actors)
    uuc = compute_uuc(usecases)
    uucp = uaw + uuc
    tcf = compute_tcf(ratings, weights)
    ef = compute_ef(ratings, weights)
    return UcpBreakdown(uaw=uaw, uuc=uuc, uucp=uucp, tcf=tcf, ef=ef, ucp=uucp * tcf * ef)
