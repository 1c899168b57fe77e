"""The two-stage hybrid effort model.

Training: per-row productivity (effort / ucp) is clustered into labels,
a multiclass SVM learns the label from the eight environmental ratings,
and the RBF network learns effort from (ucp, actual productivity) - the
regressor always sees real productivity values, never label ids.

Estimation: the classifier picks a label from the ratings, the label's
medoid productivity stands in for the unknown true productivity, and the
regressor turns (ucp, medoid productivity) into effort. Every estimate
carries its intermediate quantities so the path is auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import clustering, rbfnn, svm
from .data import ProjectRecord, dataset_fingerprint


class StageError(RuntimeError):
    """Training failed inside one named stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class HybridConfig:
    bisect: clustering.BisectConfig = field(default_factory=clustering.BisectConfig)
    svm: svm.SvmConfig = field(default_factory=svm.SvmConfig)
    rbf: rbfnn.RbfTrainConfig = field(default_factory=rbfnn.RbfTrainConfig)

    def as_dict(self) -> dict:
        return {
            "bisect": {
                "min_leaf": self.bisect.min_leaf,
                "improvement_threshold": self.bisect.improvement_threshold,
            },
            "svm": {
                "penalty_c": self.svm.penalty_c,
                "gamma": self.svm.gamma,
                "epsilon": self.svm.epsilon,
                "max_iterations": self.svm.max_iterations,
                "kernel_cache_entries": self.svm.kernel_cache_entries,
            },
            "rbf": {
                "max_neurons": self.rbf.max_neurons,
                "ridge": self.rbf.ridge,
                "stop_rule": self.rbf.stop_rule,
                "effort_floor": self.rbf.effort_floor,
            },
        }


def config_from_dict(raw: dict) -> HybridConfig:
    return HybridConfig(
        bisect=clustering.BisectConfig(**raw.get("bisect", {})),
        svm=svm.SvmConfig(**raw.get("svm", {})),
        rbf=rbfnn.RbfTrainConfig(**raw.get("rbf", {})),
    )


@dataclass(frozen=True)
class HybridModel:
    labels: tuple[clustering.ProductivityLabel, ...]
    classifier: svm.MulticlassSvmModel
    regressor: rbfnn.RbfnnModel
    config: HybridConfig
    dataset_fingerprint: str
    tree: clustering.ClusterTree | None = None

    def __post_init__(self):
        label_ids = {label.label_id for label in self.labels}
        if set(self.classifier.class_labels) != label_ids:
            raise ValueError("classifier classes must match the label set")


@dataclass(frozen=True)
class EffortEstimate:
    """Prediction plus the intermediate quantities that produced it."""

    effort: float
    label_id: int
    label_name: str
    medoid_productivity: float
    raw_regressor_output: float


def train_hybrid(records: Sequence[ProjectRecord], config: HybridConfig = HybridConfig()) -> HybridModel:
    """Fit all three stages on the given project records."""
    records = list(records)
    if len(records) < 2:
        raise ValueError("training needs at least 2 records")

    productivities = [r.productivity for r in records]

    try:
        tree = clustering.bisect(productivities, config.bisect)
        labels = clustering.make_labels(tree)
        assignments = clustering.label_assignments(tree)
    except Exception as exc:
        raise StageError("clustering", exc) from exc

    try:
        classifier = svm.train_multiclass(
            [r.env_ratings for r in records],
            [assignments[i] for i in range(len(records))],
            config.svm,
        )
    except Exception as exc:
        raise StageError("classification", exc) from exc

    try:
        regressor = rbfnn.train(
            [r.ucp for r in records],
            productivities,
            [r.effort for r in records],
            config.rbf,
        )
    except Exception as exc:
        raise StageError("regression", exc) from exc

    return HybridModel(
        labels=labels,
        classifier=classifier,
        regressor=regressor,
        config=config,
        dataset_fingerprint=dataset_fingerprint(records),
        tree=tree,
    )


def predict_effort(model: HybridModel, env_ratings: Sequence[int], ucp: float) -> EffortEstimate:
    """Estimate effort for a new project; see the module docstring for the path."""
    if ucp <= 0:
        raise ValueError(f"ucp must be > 0, got {ucp}")
    label_id = svm.predict_label(model.classifier, env_ratings)
    label = next(l for l in model.labels if l.label_id == label_id)
    raw = model.regressor.regress(ucp, label.medoid_productivity)
    effort = max(raw, model.regressor.effort_floor)
    return EffortEstimate(
        effort=effort,
        label_id=label.label_id,
        label_name=label.linguistic_name,
        medoid_productivity=label.medoid_productivity,
        raw_regressor_output=raw,
    )
