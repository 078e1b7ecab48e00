"""Feature pipeline: expectation tables to 4 normalized rotation angles.

Per sample, the per-qubit X/Z expectations become angles in [0, pi], the X
and Z angle blocks are concatenated into one row, PCA reduces the rows to
``n_components`` scores, and a fitted min-max map rescales every score
dimension to [0, pi].

The PCA fit is deterministic: components are taken from an SVD of the
centered data (eigenvalues are squared singular values over ``n - 1``),
sorted by decreasing eigenvalue, and each component's sign is fixed so its
largest-magnitude entry is positive.  Explained ratios are taken against
the total variance of all input columns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .shadows import ExpectationTable

PIPELINE_FORMAT = "fp-v1"
HALF_PI = math.pi / 2.0


def angle_map(e):
    """Map an expectation value to a rotation angle: (clip(e,-1,1)+1)*pi/2."""
    return (np.clip(e, -1.0, 1.0) + 1.0) * HALF_PI


def assemble_features(angles: np.ndarray) -> np.ndarray:
    """Flatten an angle table (n, q, 2) into rows [x-block | z-block] of width 2q."""
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim != 3 or angles.shape[2] != 2:
        raise ValueError(f"expected an (n, q, 2) angle table, got shape {angles.shape}")
    return np.concatenate([angles[:, :, 0], angles[:, :, 1]], axis=1)


@dataclass
class PCAModel:
    mean: np.ndarray          # (width,)
    components: np.ndarray    # (k, width), orthonormal rows
    eigenvalues: np.ndarray   # (k,), non-increasing
    explained_ratio: np.ndarray  # (k,)


@dataclass
class MinMaxModel:
    mins: np.ndarray
    maxs: np.ndarray


@dataclass
class FeaturePipelineModel:
    pca: PCAModel
    minmax: MinMaxModel
    n_components: int


def _check_finite(X: np.ndarray, what: str) -> None:
    if not np.isfinite(X).all():
        raise ValueError(f"{what} contains non-finite entries")


def pca_fit(X: np.ndarray, k: int) -> PCAModel:
    """Fit a k-component PCA of the rows of X (covariance divisor n-1)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    n, width = X.shape
    if n < 2:
        raise ValueError("PCA fit needs at least 2 rows")
    if not 1 <= k <= min(n, width):
        raise ValueError(f"k={k} out of range for a {n}x{width} matrix")
    _check_finite(X, "PCA input")

    mean = X.mean(axis=0)
    centered = X - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    eigenvalues = svals[:k] ** 2 / (n - 1)
    components = vt[:k].copy()
    # Deterministic orientation: largest-|entry| coordinate made positive.
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    total_variance = centered.var(axis=0, ddof=1).sum()
    if total_variance > 0:
        ratio = eigenvalues / total_variance
    else:
        ratio = np.zeros(k)
    return PCAModel(mean=mean, components=components, eigenvalues=eigenvalues,
                    explained_ratio=ratio)


def pca_transform(model: PCAModel, X: np.ndarray) -> np.ndarray:
    """Project rows of X onto the fitted components: (X - mean) @ components.T."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.mean.shape[0]:
        raise ValueError(
            f"width mismatch: model fitted on width {model.mean.shape[0]}, "
            f"got {X.shape[1] if X.ndim == 2 else X.shape}"
        )
    return (X - model.mean) @ model.components.T


def minmax_fit(X: np.ndarray) -> MinMaxModel:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("min-max fit needs a non-empty 2-D matrix")
    _check_finite(X, "min-max input")
    return MinMaxModel(mins=X.min(axis=0), maxs=X.max(axis=0))


def minmax_apply(model: MinMaxModel, X: np.ndarray) -> np.ndarray:
    """Rescale each column to [0, pi]; a degenerate column maps to pi/2."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.mins.shape[0]:
        raise ValueError("width mismatch in min-max apply")
    _check_finite(X, "min-max input")
    span = model.maxs - model.mins
    degenerate = span == 0
    safe = np.where(degenerate, 1.0, span)
    out = (X - model.mins) / safe * math.pi
    out[:, degenerate] = HALF_PI
    return out


def pipeline_fit(expectations: ExpectationTable | np.ndarray, k: int = 4) -> FeaturePipelineModel:
    """Fit angle -> PCA -> min-max on a full expectation table."""
    X = _expectations_matrix(expectations)
    pca = pca_fit(X, k)
    scores = pca_transform(pca, X)
    return FeaturePipelineModel(pca=pca, minmax=minmax_fit(scores), n_components=k)


def pipeline_apply(model: FeaturePipelineModel, expectations: ExpectationTable | np.ndarray) -> np.ndarray:
    """Transform an expectation table into (n, k) angle features in [0, pi]."""
    X = _expectations_matrix(expectations)
    return minmax_apply(model.minmax, pca_transform(model.pca, X))


def _expectations_matrix(expectations) -> np.ndarray:
    values = expectations.values if isinstance(expectations, ExpectationTable) else expectations
    return assemble_features(angle_map(np.asarray(values, dtype=np.float64)))


def save_pipeline(model: FeaturePipelineModel, path) -> None:
    """Persist a fitted pipeline as JSON (format tag fp-v1, full precision)."""
    doc = {
        "format": PIPELINE_FORMAT,
        "n_components": model.n_components,
        "pca": {
            "mean": model.pca.mean.tolist(),
            "components": model.pca.components.tolist(),
            "eigenvalues": model.pca.eigenvalues.tolist(),
            "explained_ratio": model.pca.explained_ratio.tolist(),
        },
        "minmax": {
            "min": model.minmax.mins.tolist(),
            "max": model.minmax.maxs.tolist(),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_features_csv(path, sample_ids, labels, matrix: np.ndarray) -> None:
    """Persist encoded features: header ``sample_id,label,f0..f{k-1}``."""
    matrix = np.asarray(matrix, dtype=np.float64)
    k = matrix.shape[1]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("sample_id,label," + ",".join(f"f{j}" for j in range(k)) + "\n")
        for sid, lab, row in zip(sample_ids, labels, matrix):
            fh.write(f"{sid},{lab}," + ",".join(repr(float(v)) for v in row) + "\n")


def read_features_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Read a feature file back into (sample_ids, labels, matrix)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or not lines[0]:
        raise DataError(f"{path}: empty feature file")
    header = lines[0].split(",")
    if header[:2] != ["sample_id", "label"] or len(header) < 3:
        raise DataError(f"{path}: bad feature header {lines[0]!r}")
    width = len(header) - 2
    ids: list[str] = []
    labels: list[str] = []
    rows: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != width + 2:
            raise DataError(f"{path}: line {lineno}: expected {width + 2} fields")
        try:
            rows.append([float(v) for v in parts[2:]])
        except ValueError:
            raise DataError(f"{path}: line {lineno}: non-numeric feature value") from None
        ids.append(parts[0])
        labels.append(parts[1])
    if not rows:
        raise DataError(f"{path}: no feature rows")
    if len(set(ids)) != len(ids):
        raise DataError(f"{path}: duplicate sample ids")
    return ids, labels, np.asarray(rows, dtype=np.float64)


def load_pipeline(path) -> FeaturePipelineModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: malformed pipeline JSON ({exc.msg})") from exc
    if doc.get("format") != PIPELINE_FORMAT:
        raise DataError(f"{path}: unsupported pipeline format {doc.get('format')!r}")
    try:
        pca = PCAModel(
            mean=np.asarray(doc["pca"]["mean"], dtype=np.float64),
            components=np.asarray(doc["pca"]["components"], dtype=np.float64),
            eigenvalues=np.asarray(doc["pca"]["eigenvalues"], dtype=np.float64),
            explained_ratio=np.asarray(doc["pca"]["explained_ratio"], dtype=np.float64),
        )
        minmax = MinMaxModel(
            mins=np.asarray(doc["minmax"]["min"], dtype=np.float64),
            maxs=np.asarray(doc["minmax"]["max"], dtype=np.float64),
        )
        return FeaturePipelineModel(pca=pca, minmax=minmax, n_components=int(doc["n_components"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: invalid pipeline document ({exc})") from exc
