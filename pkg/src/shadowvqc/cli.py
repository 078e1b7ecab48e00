"""Command-line surface: generate, preprocess, train, evaluate, report.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Every command is deterministic given its config and seed; outputs are
byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, config as cfgmod, features as feat, reporting, shadows, training
from .data import generate_synthetic, parse_dataset, write_dataset
from .errors import DataError, NumericalError


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits 1 (not argparse's default 2) on misuse."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (DataError, ValueError) as exc:
        raise DataError(f"{name}: {exc}") from exc
    except OSError as exc:
        raise DataError(f"{name}: {exc}") from exc


def _load_config(args) -> cfgmod.RunConfig:
    overrides = {
        "seed": getattr(args, "seed", None),
        "dataset": getattr(args, "dataset", None),
        "mode": getattr(args, "mode", None),
    }
    if getattr(args, "exact_eval", False):
        overrides["eval_shots"] = 0
    cfg = cfgmod.load_config(getattr(args, "config", None), overrides)
    out_dir = getattr(args, "out", None)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    return cfgmod.rebase_paths(cfg, out_dir)


def _require(path: str, hint: str) -> str:
    if not os.path.exists(path):
        raise DataError(f"missing input file {path} ({hint})")
    return path


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    dataset = _stage("generate", generate_synthetic, cfg.gen_config())
    _stage("write", write_dataset, dataset, cfg.dataset)
    print(
        f"wrote {cfg.dataset}: {len(dataset)} samples "
        f"({cfg.n_samples_per_class} per class), "
        f"{dataset.n_shots} shots x {dataset.n_qubits} qubits"
    )
    return 0


def cmd_preprocess(args) -> int:
    cfg = _load_config(args)
    dataset = _stage("parse", parse_dataset, _require(cfg.dataset, "run `generate` first"))
    table = _stage("shadow", shadows.shadow_features, dataset, cfg.mode)
    model = _stage("pipeline-fit", feat.pipeline_fit, table, cfg.n_components)
    matrix = _stage("pipeline-apply", feat.pipeline_apply, model, table)
    _stage("write", feat.save_pipeline, model, cfg.model)
    _stage("write", feat.write_features_csv, cfg.features, table.sample_ids,
           dataset.labels, matrix)
    if cfg.dump_expectations:
        csv_path = os.path.join(os.path.dirname(cfg.features) or ".", "expectations.csv")
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(shadows.expectations_csv(table))
    ratios = " ".join(f"{r:.4f}" for r in model.pca.explained_ratio)
    print(f"wrote {cfg.features} and {cfg.model}")
    print(f"explained variance ratios: {ratios} (sum {model.pca.explained_ratio.sum():.4f})")
    return 0


def cmd_train(args) -> int:
    cfg = _load_config(args)
    ids, labels, matrix = _stage(
        "read-features", feat.read_features_csv,
        _require(cfg.features, "run `preprocess` first"),
    )
    report = _stage(
        "train", training.train_evaluate,
        matrix, labels, ids,
        spsa=cfg.spsa_config(),
        split=cfg.split_spec(),
        eval_shots=cfg.eval_shots or None,
        config_echo={"mode": cfg.mode, "n_components": cfg.n_components, "seed": cfg.seed},
    )
    _stage("write", reporting.write_report, report, cfg.report)
    epochs_path = os.path.join(os.path.dirname(cfg.report) or ".", "epochs.csv")
    with open(epochs_path, "w", encoding="utf-8") as fh:
        fh.write(reporting.epoch_table_csv([row.to_dict() for row in report.epochs]))
    print(f"wrote {cfg.report} and {epochs_path}")
    print(
        f"accuracy train={report.train_metrics.accuracy:.4f} "
        f"val={report.val_metrics.accuracy:.4f} "
        f"test={report.test_metrics.accuracy:.4f}"
    )
    print(f"efficiency score: {report.efficiency:.4f}")
    return 0


def _metrics_block(name: str, metrics: training.ClassificationMetrics, loss: float) -> str:
    lines = [
        f"{name}: accuracy {metrics.accuracy:.4f}, loss {loss:.4f}",
        f"  confusion [[{metrics.confusion[0, 0]}, {metrics.confusion[0, 1]}],"
        f" [{metrics.confusion[1, 0]}, {metrics.confusion[1, 1]}]]",
    ]
    for phase in ("Z2", "Z3"):
        lines.append(
            f"  {phase}: precision {metrics.precision[phase]:.4f}, "
            f"recall {metrics.recall[phase]:.4f}, f1 {metrics.f1[phase]:.4f}"
        )
    lines.append(f"  macro F1 {metrics.macro_f1:.4f}, weighted F1 {metrics.weighted_f1:.4f}")
    return "\n".join(lines)


def cmd_evaluate(args) -> int:
    cfg = _load_config(args)
    ids, labels, matrix = _stage(
        "read-features", feat.read_features_csv,
        _require(cfg.features, "run `preprocess` first"),
    )
    model = _stage("read-model", feat.load_pipeline, _require(cfg.model, "run `preprocess` first"))
    if matrix.shape[1] != model.n_components:
        raise DataError(
            f"dimension mismatch: features have width {matrix.shape[1]}, "
            f"pipeline model expects {model.n_components}"
        )
    doc = _stage("read-report", reporting.load_report,
                 _require(cfg.report, "run `train` first"))
    weights = doc["final_weights"]
    by_id = {sid: i for i, sid in enumerate(ids)}
    eval_shots = cfg.eval_shots or None
    for split_tag, name in enumerate(("train", "val", "test")):
        split_ids = doc["split_ids"][name]
        missing = [sid for sid in split_ids if sid not in by_id]
        if missing:
            raise DataError(f"feature file lacks report samples: {missing}")
        rows = np.asarray([matrix[by_id[sid]] for sid in split_ids])
        codes = np.asarray([training.label_code(labels[by_id[sid]]) for sid in split_ids])
        loss, _, metrics = training.evaluate_split(
            weights, rows, codes, eval_shots, cfg.seed, doc["config"]["spsa"]["max_iters"],
            split_tag,
        )
        print(_metrics_block(name, metrics, loss))
    print(f"efficiency score: {doc['efficiency_score']!r}")
    return 0


def cmd_report(args) -> int:
    cfg = _load_config(args)
    doc = _stage("read-report", reporting.load_report,
                 _require(cfg.report, "run `train` first"))
    model = _stage("read-model", feat.load_pipeline,
                   _require(cfg.model, "run `preprocess` first"))
    out_dir = os.path.dirname(cfg.report) or "."
    tables = {
        "epochs.csv": reporting.epoch_table_csv(doc["epochs"]),
        "loss_trace.csv": reporting.loss_trace_csv(doc["trace"]),
        "pca_variance.csv": reporting.pca_variance_csv(model),
        "confusion_matrix.csv": reporting.confusion_csv(doc["metrics"]["test"]),
    }
    for name, text in tables.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {path}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="shadowvqc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dataset=True, mode=False, exact=False):
        p.add_argument("--config", help="flat TOML config file")
        p.add_argument("--seed", type=int, help="global seed override")
        p.add_argument("--out", help="directory onto which relative paths are rebased")
        if dataset:
            p.add_argument("--dataset", help="dataset path override")
        if mode:
            p.add_argument("--mode", choices=("paper", "unbiased"),
                           help="density reconstruction mode")
        if exact:
            p.add_argument("--exact-eval", action="store_true",
                           help="force exact (infinite-shot) final evaluation")

    p = sub.add_parser("generate", help="write a synthetic measurement dataset")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("preprocess", help="shadow expectations -> encoded features + model")
    common(p, mode=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="SPSA-train the classifier and write the report")
    common(p, mode=True, exact=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="print metrics of a trained model")
    common(p, exact=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="emit plot-ready CSV tables from a report")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"shadowvqc: data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"shadowvqc: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
