"""Versioned model artifact persistence.

A trained hybrid model serialises to a sectioned JSON document with
sorted keys, so save -> load -> save is byte-identical and benchmark
runs stay replayable. Floats round-trip through their shortest repr;
nothing is truncated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import clustering, pipeline, rbfnn, svm

ARTIFACT_VERSION = "ucpest-model/1"
SECTIONS = ("labels", "tree", "classifier", "regressor", "config", "dataset_fingerprint")


@dataclass(frozen=True)
class ModelArtifact:
    version: str
    payload: dict

    def __post_init__(self):
        missing = [s for s in SECTIONS if s not in self.payload]
        if missing:
            raise ValueError(f"artifact is missing sections: {', '.join(missing)}")


def _encode_tree(node: clustering.ClusterNode) -> dict:
    encoded = {
        "members": list(node.cluster.member_indices),
        "medoid_index": node.cluster.medoid_index,
        "medoid_value": node.cluster.medoid_value,
        "variance": node.cluster.variance,
    }
    if not node.is_leaf:
        encoded["children"] = [_encode_tree(node.left), _encode_tree(node.right)]
    return encoded


def _decode_tree(raw: dict) -> clustering.ClusterNode:
    cluster = clustering.Cluster(
        member_indices=tuple(raw["members"]),
        medoid_index=raw["medoid_index"],
        medoid_value=raw["medoid_value"],
        variance=raw["variance"],
    )
    node = clustering.ClusterNode(cluster)
    if "children" in raw:
        node.left = _decode_tree(raw["children"][0])
        node.right = _decode_tree(raw["children"][1])
    return node


def _leaves(node: clustering.ClusterNode) -> list[clustering.Cluster]:
    if node.is_leaf:
        return [node.cluster]
    return _leaves(node.left) + _leaves(node.right)


def _encode_classifier(model: svm.MulticlassSvmModel) -> dict:
    return {
        "class_labels": list(model.class_labels),
        "gamma": model.gamma,
        "scaler": {
            "offsets": list(model.scaler.offsets),
            "divisors": list(model.scaler.divisors),
        },
        "penalty_c": model.config.penalty_c,
        "epsilon": model.config.epsilon,
        "max_iterations": model.config.max_iterations,
        "kernel_cache_entries": model.config.kernel_cache_entries,
        "pairs": [
            {
                "a": a,
                "b": b,
                "support_vectors": [[float(v) for v in row] for row in pair.support_vectors],
                "dual_coefficients": [float(v) for v in pair.dual_coefficients],
                "bias": pair.bias,
                "converged": pair.converged,
            }
            for (a, b), pair in sorted(model.pair_models.items())
        ],
    }


def _decode_classifier(raw: dict) -> svm.MulticlassSvmModel:
    config = svm.SvmConfig(
        penalty_c=raw["penalty_c"],
        gamma=None,
        epsilon=raw["epsilon"],
        max_iterations=raw["max_iterations"],
        kernel_cache_entries=raw["kernel_cache_entries"],
    )
    pair_models = {}
    for pair in raw["pairs"]:
        pair_models[(pair["a"], pair["b"])] = svm.BinarySvmModel(
            support_vectors=np.array(pair["support_vectors"], dtype=float).reshape(
                len(pair["support_vectors"]), -1
            )
            if pair["support_vectors"]
            else np.zeros((0, 8)),
            dual_coefficients=np.array(pair["dual_coefficients"], dtype=float),
            bias=pair["bias"],
            gamma=raw["gamma"],
            penalty_c=raw["penalty_c"],
            converged=pair["converged"],
        )
    return svm.MulticlassSvmModel(
        class_labels=tuple(raw["class_labels"]),
        pair_models=pair_models,
        scaler=svm.FeatureScaler(
            offsets=tuple(raw["scaler"]["offsets"]),
            divisors=tuple(raw["scaler"]["divisors"]),
        ),
        gamma=raw["gamma"],
        config=config,
    )


def _encode_regressor(model: rbfnn.RbfnnModel) -> dict:
    return {
        "neurons": [
            {"center": [neuron.center[0], neuron.center[1]], "spread": neuron.spread}
            for neuron in model.neurons
        ],
        "output_weights": list(model.output_weights),
        "output_bias": model.output_bias,
        "normalizer": {
            "means": list(model.normalizer.means),
            "deviations": list(model.normalizer.deviations),
        },
        "effort_floor": model.effort_floor,
    }


def _decode_regressor(raw: dict) -> rbfnn.RbfnnModel:
    return rbfnn.RbfnnModel(
        neurons=tuple(
            rbfnn.RbfNeuron(center=(n["center"][0], n["center"][1]), spread=n["spread"])
            for n in raw["neurons"]
        ),
        output_weights=tuple(raw["output_weights"]),
        output_bias=raw["output_bias"],
        normalizer=rbfnn.InputNormalizer(
            means=tuple(raw["normalizer"]["means"]),
            deviations=tuple(raw["normalizer"]["deviations"]),
        ),
        effort_floor=raw["effort_floor"],
    )


def to_artifact(model: pipeline.HybridModel) -> ModelArtifact:
    """Serialise a trained hybrid model, clustering tree included."""
    payload = {
        "labels": [
            {
                "label_id": label.label_id,
                "linguistic_name": label.linguistic_name,
                "medoid_productivity": label.medoid_productivity,
            }
            for label in model.labels
        ],
        "tree": _encode_tree(model.tree.root) if model.tree is not None else None,
        "classifier": _encode_classifier(model.classifier),
        "regressor": _encode_regressor(model.regressor),
        "config": model.config.as_dict(),
        "dataset_fingerprint": model.dataset_fingerprint,
    }
    return ModelArtifact(version=ARTIFACT_VERSION, payload=payload)


def from_artifact(artifact: ModelArtifact) -> pipeline.HybridModel:
    """Rebuild the in-memory model; predictions match the original exactly."""
    payload = artifact.payload
    labels = tuple(
        clustering.ProductivityLabel(
            label_id=raw["label_id"],
            linguistic_name=raw["linguistic_name"],
            medoid_productivity=raw["medoid_productivity"],
        )
        for raw in payload["labels"]
    )
    tree = None
    if payload.get("tree") is not None:
        root = _decode_tree(payload["tree"])
        tree = clustering.ClusterTree(root=root, leaves=tuple(_leaves(root)))
    return pipeline.HybridModel(
        labels=labels,
        classifier=_decode_classifier(payload["classifier"]),
        regressor=_decode_regressor(payload["regressor"]),
        config=pipeline.config_from_dict(payload["config"]),
        dataset_fingerprint=payload["dataset_fingerprint"],
        tree=tree,
    )


def save_model(artifact: ModelArtifact, path) -> None:
    document = {"version": artifact.version, **artifact.payload}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True, indent=2)
        handle.write("\n")


def load_model(path) -> ModelArtifact:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: corrupted artifact ({exc})") from exc
    version = document.pop("version", None)
    if version != ARTIFACT_VERSION:
        raise ValueError(f"{path}: artifact version {version!r} is not {ARTIFACT_VERSION!r}")
    try:
        return ModelArtifact(version=version, payload=document)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
