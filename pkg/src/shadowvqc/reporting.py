"""Report serialization: JSON report files and plot-ready CSV tables.

All writers are byte-deterministic for equal inputs (fixed key order, no
timestamps, shortest round-trip float formatting), which makes repeated
runs with equal seeds bit-reproducible.
"""

from __future__ import annotations

import io
import json

from .errors import DataError
from .features import FeaturePipelineModel
from .training import TrainReport


def write_report(report: TrainReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=1)
        fh.write("\n")


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: malformed report JSON ({exc.msg})") from exc
    for key in ("config", "epochs", "final_weights", "metrics", "trace"):
        if key not in doc:
            raise DataError(f"{path}: report is missing field {key!r}")
    return doc


def epoch_table_csv(epochs: list[dict]) -> str:
    """Per-epoch training table; fixed column order for external plotting."""
    out = io.StringIO()
    out.write("epoch,train_loss,val_loss,train_acc,precision,f1\n")
    for row in epochs:
        out.write(
            f"{row['epoch']},{row['train_loss']!r},{row['val_loss']!r},"
            f"{row['train_acc']!r},{row['precision']!r},{row['f1']!r}\n"
        )
    return out.getvalue()


def loss_trace_csv(trace: dict) -> str:
    out = io.StringIO()
    out.write("iteration,c,loss_plus,loss_minus,w0,w1\n")
    for k in range(len(trace["c"])):
        w0, w1 = trace["weights"][k + 1]
        out.write(
            f"{k},{trace['c'][k]!r},{trace['loss_plus'][k]!r},"
            f"{trace['loss_minus'][k]!r},{w0!r},{w1!r}\n"
        )
    return out.getvalue()


def pca_variance_csv(model: FeaturePipelineModel) -> str:
    out = io.StringIO()
    out.write("component,eigenvalue,explained_ratio\n")
    for j in range(model.n_components):
        out.write(
            f"{j + 1},{float(model.pca.eigenvalues[j])!r},"
            f"{float(model.pca.explained_ratio[j])!r}\n"
        )
    return out.getvalue()


def confusion_csv(metrics: dict) -> str:
    """Test-split confusion matrix, rows true class, columns predicted."""
    confusion = metrics["confusion"]
    out = io.StringIO()
    out.write("true,pred_Z2,pred_Z3\n")
    for name, row in zip(("Z2", "Z3"), confusion):
        out.write(f"{name},{row[0]},{row[1]}\n")
    return out.getvalue()
