"""Dataset records, delimited-file IO, descriptive statistics, and the
seeded synthetic generator.

The on-disk dataset format is a comma-separated file with header
``id,e1..e8[,f1..f13],ucp,effort``; the technical factor columns are
optional as a block. Productivity is never stored: it is always derived
as effort / ucp at construction time, which makes the identity
productivity == effort / ucp impossible to violate.

The generator draws environmental ratings first and produces
productivity from a latent linear rule plus Gaussian noise, so the
classification stage has real signal to learn; effort is then
productivity * ucp with a small relative disturbance. Profile parameters
are calibrated so sample moments land near the target summary
statistics of the three reference datasets.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ucp import ENVIRONMENTAL_FACTOR_COUNT, TECHNICAL_FACTOR_COUNT, check_ratings

ENV_COLUMNS = tuple(f"e{i}" for i in range(1, ENVIRONMENTAL_FACTOR_COUNT + 1))
TECH_COLUMNS = tuple(f"f{i}" for i in range(1, TECHNICAL_FACTOR_COUNT + 1))
BASE_HEADER = ("id", *ENV_COLUMNS, "ucp", "effort")
FULL_HEADER = ("id", *ENV_COLUMNS, *TECH_COLUMNS, "ucp", "effort")


@dataclass(frozen=True)
class ProjectRecord:
    """One historical project; productivity is derived, never supplied."""

    id: str
    env_ratings: tuple[int, ...]
    ucp: float
    effort: float
    tech_ratings: Optional[tuple[int, ...]] = None
    productivity: float = 0.0  # filled in __post_init__

    def __post_init__(self):
        object.__setattr__(
            self,
            "env_ratings",
            check_ratings(self.env_ratings, ENVIRONMENTAL_FACTOR_COUNT, "env_ratings"),
        )
        if self.tech_ratings is not None:
            object.__setattr__(
                self,
                "tech_ratings",
                check_ratings(self.tech_ratings, TECHNICAL_FACTOR_COUNT, "tech_ratings"),
            )
        if not (math.isfinite(self.ucp) and self.ucp > 0):
            raise ValueError(f"ucp must be > 0, got {self.ucp}")
        if not (math.isfinite(self.effort) and self.effort > 0):
            raise ValueError(f"effort must be > 0, got {self.effort}")
        object.__setattr__(self, "productivity", self.effort / self.ucp)


def load_dataset(path) -> list[ProjectRecord]:
    """Read and validate a dataset file; errors carry the file row number."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(column.strip() for column in next(reader))
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        if header == FULL_HEADER:
            with_tech = True
        elif header == BASE_HEADER:
            with_tech = False
        else:
            raise ValueError(
                f"{path}: header does not match the dataset schema "
                f"(expected {','.join(BASE_HEADER)} with optional f1..f13)"
            )
        records = []
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path} row {row_number}: expected {len(header)} fields, got {len(row)}")
            try:
                env = tuple(int(v) for v in row[1:9])
                if with_tech:
                    tech = tuple(int(v) for v in row[9:22])
                    ucp_s, effort_s = row[22], row[23]
                else:
                    tech = None
                    ucp_s, effort_s = row[9], row[10]
                records.append(
                    ProjectRecord(
                        id=row[0],
                        env_ratings=env,
                        tech_ratings=tech,
                        ucp=float(ucp_s),
                        effort=float(effort_s),
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path} row {row_number}: {exc}") from exc
        return records


def save_dataset(records: Sequence[ProjectRecord], path) -> None:
    """Write records with full float precision; productivity is not stored."""
    with_tech = records and records[0].tech_ratings is not None
    header = FULL_HEADER if with_tech else BASE_HEADER
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for record in records:
            row = [record.id, *record.env_ratings]
            if with_tech:
                if record.tech_ratings is None:
                    raise ValueError(f"record {record.id}: mixed presence of technical ratings")
                row.extend(record.tech_ratings)
            row.extend((repr(record.ucp), repr(record.effort)))
            writer.writerow(row)


def dataset_fingerprint(records: Sequence[ProjectRecord]) -> str:
    """Stable content hash used to stamp trained model artifacts."""
    digest = hashlib.sha256()
    for record in records:
        parts = (
            record.id,
            ",".join(map(str, record.env_ratings)),
            ",".join(map(str, record.tech_ratings)) if record.tech_ratings else "",
            repr(record.ucp),
            repr(record.effort),
        )
        digest.update("|".join(parts).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


@dataclass(frozen=True)
class VariableStats:
    mean: float
    sd: float
    skewness: float  # NaN when the variable is constant
    kurtosis: float  # moment-based; 3 for a normal distribution


@dataclass(frozen=True)
class DatasetStats:
    n: int
    ucp: VariableStats
    effort: VariableStats
    productivity: VariableStats


def _variable_stats(values: np.ndarray) -> VariableStats:
    mean = float(values.mean())
    sd = float(values.std(ddof=1))
    centered = values - mean
    m2 = float(np.mean(centered**2))
    if m2 == 0:
        return VariableStats(mean=mean, sd=sd, skewness=float("nan"), kurtosis=float("nan"))
    skewness = float(np.mean(centered**3)) / m2**1.5
    kurtosis = float(np.mean(centered**4)) / m2**2
    return VariableStats(mean=mean, sd=sd, skewness=skewness, kurtosis=kurtosis)


def describe(records: Sequence[ProjectRecord]) -> DatasetStats:
    """Four moments for UCP, effort, and productivity."""
    if len(records) < 2:
        raise ValueError("describe needs at least 2 records")
    return DatasetStats(
        n=len(records),
        ucp=_variable_stats(np.array([r.ucp for r in records])),
        effort=_variable_stats(np.array([r.effort for r in records])),
        productivity=_variable_stats(np.array([r.productivity for r in records])),
    )


@dataclass(frozen=True)
class GeneratorProfile:
    """Latent-rule parameters and targets for the synthetic generator.

    Every profile draws its eight environmental ratings iid from
    Binomial(5, rating_p) and produces productivity through the same
    linear rule

        productivity = base - coef_scale * sum(influence_i * rating_i) + noise

    Sharing ``base`` and ``coef_scale`` across profiles matters: the
    merged heterogeneous dataset then still carries one consistent
    rating-to-productivity relationship, as a real pooled dataset would,
    while the per-profile ``rating_p`` and ``noise_sd`` place the
    productivity mean/sd on their per-dataset targets. UCP is a
    right-skewed lognormal with the given mean/sd.
    """

    name: str
    productivity_mean: float
    productivity_sd: float
    ucp_mean: float
    ucp_sd: float
    rating_p: float
    noise_sd: float
    base: float = 49.3
    coef_scale: float = 1.6
    effort_noise_sd: float = 0.01
    productivity_floor: float = 2.0

    def __post_init__(self):
        if not 0 < self.rating_p < 1:
            raise ValueError("rating_p must be in (0, 1)")
        if self.noise_sd <= 0:
            raise ValueError("noise_sd must be > 0")


#: Relative influence of each environmental factor on productivity;
#: both the sum and the sum of squares equal 7.
_RATING_INFLUENCE = np.array([1.0, 0.5, 1.0, 0.5, 1.0, 1.5, 1.0, 0.5])

# Profile calibration, solved once against the reference summary
# statistics: with s = sum(influence * rating) and E_i ~ Binomial(5, p),
# E[s] = 35 p and var(s) = 35 p (1 - p), so
#   mean  = base - coef_scale * 35 p
#   sd^2  = coef_scale^2 * 35 p (1 - p) + noise_sd^2.
# The industrial profile anchors p = 0.45; the educational profile's p
# and both noise terms follow from the target means/sds. About 75-85% of
# productivity variance rides on the ratings, so the classification
# stage has real signal. The reference ucp sd for the industrial data
# (1563.9, cv 2.1) cannot coexist with its reported skewness 3.0 in any
# lognormal; the profile keeps the mean and the mild right skew instead,
# which also keeps single extreme projects from dominating every
# benchmark split.
PROFILES = {
    "dataset1": GeneratorProfile(
        "dataset1", 24.1, 5.1, 739.3, 517.5, rating_p=0.45, noise_sd=1.9580602646496836
    ),
    "dataset2": GeneratorProfile(
        "dataset2", 20.8, 4.8, 82.6, 20.7, rating_p=0.5089285714285714, noise_sd=0.8044518985886311
    ),
}

#: The heterogeneous profile concatenates the two base profiles at the
#: 45:65 row proportion of the reference datasets.
DATASET3_MIX = (("dataset1", 45), ("dataset2", 65))

MIN_SYNTH_ROWS = 10


def _lognormal_params(mean: float, sd: float) -> tuple[float, float]:
    cv2 = (sd / mean) ** 2
    sigma2 = math.log1p(cv2)
    return math.log(mean) - sigma2 / 2.0, math.sqrt(sigma2)


def _generate_block(
    profile: GeneratorProfile, n: int, rng: np.random.Generator, start_index: int
) -> list[ProjectRecord]:
    ratings = rng.binomial(5, profile.rating_p, size=(n, ENVIRONMENTAL_FACTOR_COUNT))

    coefficients = profile.coef_scale * _RATING_INFLUENCE
    productivity = (
        profile.base - ratings @ coefficients + rng.normal(0.0, profile.noise_sd, size=n)
    )
    productivity = np.maximum(productivity, profile.productivity_floor)

    mu, sigma = _lognormal_params(profile.ucp_mean, profile.ucp_sd)
    ucp = rng.lognormal(mu, sigma, size=n)

    effort = productivity * ucp * (1.0 + rng.normal(0.0, profile.effort_noise_sd, size=n))
    effort = np.maximum(effort, 1.0)

    return [
        ProjectRecord(
            id=f"{profile.name}-{start_index + i:04d}",
            env_ratings=tuple(int(v) for v in ratings[i]),
            ucp=float(ucp[i]),
            effort=float(effort[i]),
        )
        for i in range(n)
    ]


def synth_generate(profile, n: int, seed: int) -> list[ProjectRecord]:
    """Deterministic synthetic dataset for a named or custom profile.

    ``profile`` is "dataset1", "dataset2", "dataset3", or a
    :class:`GeneratorProfile`. The dataset3 profile interleaves the two
    base profiles proportionally to their reference sizes.
    """
    if n < MIN_SYNTH_ROWS:
        raise ValueError(f"n must be >= {MIN_SYNTH_ROWS}, got {n}")
    rng = np.random.default_rng(seed)

    if isinstance(profile, GeneratorProfile):
        return _generate_block(profile, n, rng, 0)
    if profile in PROFILES:
        return _generate_block(PROFILES[profile], n, rng, 0)
    if profile == "dataset3":
        total_weight = sum(weight for _, weight in DATASET3_MIX)
        records: list[ProjectRecord] = []
        produced = 0
        for position, (name, weight) in enumerate(DATASET3_MIX):
            if position == len(DATASET3_MIX) - 1:
                block = n - produced
            else:
                block = round(n * weight / total_weight)
            records.extend(_generate_block(PROFILES[name], block, rng, produced))
            produced += block
        return records
    raise ValueError(f"unknown profile {profile!r}; choose from dataset1/dataset2/dataset3")
