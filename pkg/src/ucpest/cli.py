"""Command-line interface.

Commands: size, train, estimate, benchmark, synth, describe. Every
command is a thin wrapper over the library; the fully resolved
configuration is echoed to stderr as a reproducibility header before any
work happens. Exit codes: 0 success, 1 validation or usage error, 2
internal failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import traceback

from . import artifacts, baselines, clustering, evaluation, harness, pipeline, rbfnn, svm
from .data import PROFILES, describe, load_dataset, save_dataset, synth_generate
from .ucp import (
    ActorCounts,
    DEFAULT_WEIGHTS,
    FactorRatings,
    UseCaseCounts,
    compute_ucp,
    load_weights,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the CLI contract wants 1.
    def error(self, message):
        raise UsageError(message)


def _ratings(text: str, count: int, flag: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise UsageError(f"{flag} needs {count} comma-separated integers, got {len(parts)}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _load_config_file(path):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return raw


def _resolve(args, config_file: dict, name: str, default):
    """Precedence: command-line flag > config file > built-in default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config_file:
        return config_file[name]
    return default


def _hybrid_config(args, config_file) -> pipeline.HybridConfig:
    return pipeline.HybridConfig(
        bisect=clustering.BisectConfig(
            min_leaf=int(_resolve(args, config_file, "min_leaf", 6)),
            improvement_threshold=float(_resolve(args, config_file, "improvement_threshold", 1.0)),
        ),
        svm=svm.SvmConfig(
            penalty_c=float(_resolve(args, config_file, "penalty_c", 10.0)),
            gamma=_resolve(args, config_file, "gamma", None),
            epsilon=float(_resolve(args, config_file, "epsilon", 1e-3)),
            max_iterations=int(_resolve(args, config_file, "max_iterations", 1000)),
        ),
        rbf=rbfnn.RbfTrainConfig(
            max_neurons=int(_resolve(args, config_file, "max_neurons", 12)),
            ridge=float(_resolve(args, config_file, "ridge", 1e-8)),
            stop_rule=str(_resolve(args, config_file, "stop_rule", "loo_no_improvement")),
            effort_floor=float(_resolve(args, config_file, "effort_floor", 1.0)),
        ),
    )


def _weights(args, config_file):
    path = _resolve(args, config_file, "weights", None)
    return load_weights(path) if path else DEFAULT_WEIGHTS


def _header(command: str, resolved: dict) -> None:
    print(f"# ucpest {command} config: {json.dumps(resolved, sort_keys=True)}", file=sys.stderr)


def _cmd_size(args, config_file) -> int:
    weights = _weights(args, config_file)
    actors = ActorCounts(args.simple_actors, args.average_actors, args.complex_actors)
    usecases = UseCaseCounts(args.simple_usecases, args.average_usecases, args.complex_usecases)
    ratings = FactorRatings(
        technical=_ratings(args.tech_ratings, 13, "--tech-ratings"),
        environmental=_ratings(args.env_ratings, 8, "--env-ratings"),
    )
    _header("size", {"weights": _resolve(args, config_file, "weights", None) or "default"})
    breakdown = compute_ucp(actors, usecases, ratings, weights)
    for label, value in (
        ("UAW", breakdown.uaw),
        ("UUC", breakdown.uuc),
        ("UUCP", breakdown.uucp),
        ("TCF", breakdown.tcf),
        ("EF", breakdown.ef),
        ("UCP", breakdown.ucp),
    ):
        print(f"{label:5s} {value:.4f}")
    return EXIT_OK


def _cmd_train(args, config_file) -> int:
    config = _hybrid_config(args, config_file)
    _header("train", {"data": args.data, "out": args.out, **config.as_dict()})
    records = load_dataset(args.data)
    model = pipeline.train_hybrid(records, config)
    artifacts.save_model(artifacts.to_artifact(model), args.out)

    labels = [assignment for assignment in clustering.label_assignments(model.tree).items()]
    accuracy = svm.training_accuracy(
        model.classifier,
        [r.env_ratings for r in records],
        [dict(labels)[i] for i in range(len(records))],
    )
    final_loo = (
        model.regressor.selection_log[-1].loo_mse
        if model.regressor.selection_log
        else model.regressor.baseline_loo_mse
    )
    print(f"trained on {len(records)} projects -> {args.out}")
    print(f"productivity labels: {len(model.labels)} "
          f"({', '.join(l.linguistic_name for l in model.labels)})")
    print(f"classifier training accuracy: {accuracy:.3f}")
    print(f"regressor hidden neurons: {len(model.regressor.neurons)} (LOO MSE {final_loo:.4f})")
    return EXIT_OK


def _cmd_estimate(args, config_file) -> int:
    _header("estimate", {"model": args.model, "ucp": args.ucp})
    model = artifacts.from_artifact(artifacts.load_model(args.model))
    ratings = _ratings(args.env_ratings, 8, "--env-ratings")
    estimate = pipeline.predict_effort(model, ratings, args.ucp)
    if args.json:
        print(
            json.dumps(
                {
                    "effort": estimate.effort,
                    "label_id": estimate.label_id,
                    "label_name": estimate.label_name,
                    "medoid_productivity": estimate.medoid_productivity,
                    "raw_regressor_output": estimate.raw_regressor_output,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"estimated effort: {estimate.effort:.2f} person-hours")
        print(f"productivity label: {estimate.label_id} ({estimate.label_name})")
        print(f"medoid productivity: {estimate.medoid_productivity:.4f} ph/UCP")
        print(f"raw regressor output: {estimate.raw_regressor_output:.2f}")
    return EXIT_OK


def _cmd_benchmark(args, config_file) -> int:
    models = tuple(m.strip() for m in args.models.split(",") if m.strip())
    for model in models:
        if model not in harness.MODEL_NAMES:
            raise UsageError(
                f"unknown model {model!r}; choose from {', '.join(harness.MODEL_NAMES)}"
            )
    if not models:
        raise UsageError("--models must name at least one model")
    seed = int(_resolve(args, config_file, "seed", evaluation.DEFAULT_SEED))
    config = _hybrid_config(args, config_file)
    _header(
        "benchmark",
        {"data": args.data, "models": list(models), "seed": seed, "out": args.out, **config.as_dict()},
    )
    records = load_dataset(args.data)
    result = harness.run_benchmark(
        records, models, config=config, weights=_weights(args, config_file), seed=seed
    )

    report = harness.full_report(result)
    if args.format == "delimited":
        print(harness.metrics_csv(result), end="")
    else:
        print(report, end="")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        outputs = {
            "report.txt": report,
            "metrics.csv": harness.metrics_csv(result),
            "significance.csv": harness.significance_csv(result),
            "scott_knott.csv": harness.scott_knott_csv(result),
            "sk_plot.csv": harness.scott_knott_csv(result),
            "predictions.csv": harness.predictions_csv(result),
        }
        for filename, content in outputs.items():
            with open(os.path.join(args.out, filename), "w", encoding="utf-8") as handle:
                handle.write(content)
        print(f"# wrote {', '.join(outputs)} to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_synth(args, config_file) -> int:
    seed = int(_resolve(args, config_file, "seed", evaluation.DEFAULT_SEED))
    _header("synth", {"profile": args.profile, "n": args.n, "seed": seed, "out": args.out})
    records = synth_generate(args.profile, args.n, seed)
    save_dataset(records, args.out)
    print(f"wrote {len(records)} projects to {args.out}")
    return EXIT_OK


def _cmd_describe(args, config_file) -> int:
    _header("describe", {"data": args.data})
    stats = describe(load_dataset(args.data))

    def fmt(x):
        return "n/a" if math.isnan(x) else f"{x:.4f}"

    print(f"{'variable':<14}{'mean':>12}{'sd':>12}{'skewness':>12}{'kurtosis':>12}")
    for name, vs in (("ucp", stats.ucp), ("effort", stats.effort), ("productivity", stats.productivity)):
        print(f"{name:<14}{fmt(vs.mean):>12}{fmt(vs.sd):>12}{fmt(vs.skewness):>12}{fmt(vs.kurtosis):>12}")
    print(f"n = {stats.n}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ucpest", description="UCP-based software effort estimation")
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    size = sub.add_parser("size", help="compute the UCP breakdown", add_help=True)
    size.add_argument("--simple-actors", type=int, required=True)
    size.add_argument("--average-actors", type=int, required=True)
    size.add_argument("--complex-actors", type=int, required=True)
    size.add_argument("--simple-usecases", type=int, required=True)
    size.add_argument("--average-usecases", type=int, required=True)
    size.add_argument("--complex-usecases", type=int, required=True)
    size.add_argument("--tech-ratings", required=True, help="13 comma-separated ratings 0..5")
    size.add_argument("--env-ratings", required=True, help="8 comma-separated ratings 0..5")
    size.add_argument("--weights", help="JSON weight table overriding the defaults")

    train = sub.add_parser("train", help="train the hybrid model")
    train.add_argument("--data", required=True)
    train.add_argument("--out", required=True, help="model artifact path")
    _add_hybrid_flags(train)

    estimate = sub.add_parser("estimate", help="estimate effort with a trained model")
    estimate.add_argument("--model", required=True)
    estimate.add_argument("--ucp", type=float, required=True)
    estimate.add_argument("--env-ratings", required=True)
    estimate.add_argument("--json", action="store_true", help="one-line JSON output")

    benchmark = sub.add_parser("benchmark", help="LOOCV comparison of estimation models")
    benchmark.add_argument("--data", required=True)
    benchmark.add_argument("--models", default=",".join(harness.MODEL_NAMES))
    benchmark.add_argument("--out", help="directory for report files")
    benchmark.add_argument("--seed", type=int)
    benchmark.add_argument("--format", choices=("table", "delimited"), default="table")
    benchmark.add_argument("--weights")
    _add_hybrid_flags(benchmark)

    synth = sub.add_parser("synth", help="generate a synthetic dataset")
    synth.add_argument("--profile", required=True, choices=sorted(PROFILES) + ["dataset3"])
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--seed", type=int)
    synth.add_argument("--out", required=True)

    desc = sub.add_parser("describe", help="descriptive statistics of a dataset")
    desc.add_argument("--data", required=True)
    return parser


def _add_hybrid_flags(parser) -> None:
    parser.add_argument("--min-leaf", dest="min_leaf", type=int)
    parser.add_argument("--improvement-threshold", dest="improvement_threshold", type=float)
    parser.add_argument("--penalty-c", dest="penalty_c", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--max-iterations", dest="max_iterations", type=int)
    parser.add_argument("--max-neurons", dest="max_neurons", type=int)
    parser.add_argument("--ridge", type=float)
    parser.add_argument("--stop-rule", dest="stop_rule", choices=rbfnn.STOP_RULES)
    parser.add_argument("--effort-floor", dest="effort_floor", type=float)
    if not any(a.dest == "weights" for a in parser._actions):
        parser.add_argument("--weights")


_COMMANDS = {
    "size": _cmd_size,
    "train": _cmd_train,
    "estimate": _cmd_estimate,
    "benchmark": _cmd_benchmark,
    "synth": _cmd_synth,
    "describe": _cmd_describe,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config_file = _load_config_file(args.config)
        return _COMMANDS[args.command](args, config_file)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except evaluation.FoldFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug, not bad input
        traceback.print_exc()
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
