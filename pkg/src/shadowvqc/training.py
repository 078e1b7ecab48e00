"""Classifier training: SPSA over the two circuit weights, hinge loss,
stratified splitting, classification metrics, and the resource-efficiency
score.

Label coding is fixed: Z2 -> -1, Z3 -> +1, and a sample is classified by
the sign of the circuit's average Z expectation (ties go to +1).

The SPSA recursion, per iteration k with loss L:

    delta_k  ~ Uniform({-1,+1}^2)
    c_k      = c0 / (k+1)^gamma
    g_j      = (L(theta + c_k delta) - L(theta - c_k delta)) * delta_j / (2 c_k)
    theta   <- theta - alpha * g

Training losses are evaluated with finite-shot readout per the configured
shot schedule; logged epoch metrics and the final evaluation use exact
expectations so reported numbers carry no shot noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import rng
from .circuit import CircuitParams, circuit_metrics, run_circuit, z_mean_exact, z_mean_sampled
from .data import Dataset, PHASE_Z2, PHASE_Z3, PHASES
from .errors import DataError, NumericalError

LABEL_CODES = {PHASE_Z2: -1, PHASE_Z3: +1}
CODE_LABELS = {-1: PHASE_Z2, +1: PHASE_Z3}

EPOCH_STRIDE = 20


def label_code(label: str) -> int:
    try:
        return LABEL_CODES[label]
    except KeyError:
        raise DataError(f"unknown phase label {label!r}") from None


def decision(z_mean: float) -> int:
    """Classify by sign of <Z>; the measure-zero tie at 0 goes to +1 (Z3)."""
    return 1 if z_mean >= 0 else -1


def hinge_loss(margins: Sequence[float]) -> float:
    """Mean of max(0, 1 - m) over the margins m_i = y_i * <Z>_i."""
    m = np.asarray(margins, dtype=np.float64)
    if m.size == 0:
        raise ValueError("hinge loss of an empty margin list")
    if not np.isfinite(m).all():
        raise ValueError("non-finite margin")
    return float(np.maximum(0.0, 1.0 - m).mean())


def dataset_loss(
    weights: Sequence[float],
    features: np.ndarray,
    labels: Sequence[int],
    shots: int | None = None,
    rngs: Sequence[np.random.Generator] | None = None,
) -> float:
    """Hinge loss of the circuit over a feature matrix.

    ``shots=None`` evaluates exact expectations; otherwise each sample is
    read out with ``shots`` Born-rule draws from its own generator in
    ``rngs`` (one per sample, pre-assigned so evaluation order is
    irrelevant).
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != 4:
        raise ValueError(f"expected an (n, 4) feature matrix, got {features.shape}")
    if features.shape[0] != len(labels):
        raise ValueError("features/labels length mismatch")
    if shots is not None and (rngs is None or len(rngs) != features.shape[0]):
        raise ValueError("sampled evaluation needs one generator per sample")
    margins = np.empty(features.shape[0])
    for i, row in enumerate(features):
        state = run_circuit(CircuitParams(features=tuple(row), weights=tuple(weights)))
        z = z_mean_exact(state) if shots is None else z_mean_sampled(state, shots, rngs[i])
        margins[i] = labels[i] * z
    return hinge_loss(margins)


@dataclass(frozen=True)
class SpsaConfig:
    """SPSA hyperparameters and the iteration-indexed shot schedule."""

    learning_rate: float = 0.50
    perturbation: float = 0.40
    decay: float = 0.02
    max_iters: int = 120
    shot_schedule: tuple[tuple[tuple[int, int], int], ...] = (
        ((0, 50), 256),
        ((50, 120), 512),
    )
    seed: int = 7

    def __post_init__(self):
        if self.learning_rate <= 0 or self.perturbation <= 0:
            raise ValueError("learning_rate and perturbation must be positive")
        if self.decay < 0 or self.max_iters < 1:
            raise ValueError("decay must be >= 0 and max_iters >= 1")
        edges = sorted(self.shot_schedule, key=lambda item: item[0][0])
        cursor = 0
        for (start, stop), shots in edges:
            if start != cursor or stop <= start or shots < 1:
                raise ValueError(
                    f"shot schedule must partition [0, {self.max_iters}) "
                    f"with positive shot counts, got {self.shot_schedule}"
                )
            cursor = stop
        if cursor != self.max_iters:
            raise ValueError(
                f"shot schedule covers [0, {cursor}), expected [0, {self.max_iters})"
            )

    def shots_at(self, k: int) -> int:
        for (start, stop), shots in self.shot_schedule:
            if start <= k < stop:
                return shots
        raise ValueError(f"iteration {k} outside the shot schedule")


@dataclass
class SpsaTrace:
    """Iterate and two-sided loss record of one SPSA run."""

    thetas: np.ndarray       # (K+1, d); row 0 is the initial point
    c: np.ndarray            # (K,)
    loss_plus: np.ndarray    # (K,)
    loss_minus: np.ndarray   # (K,)

    @property
    def final_theta(self) -> np.ndarray:
        return self.thetas[-1]


def draw_initial_weights(seed: int, n: int = 2, scale: float = 0.01) -> np.ndarray:
    """Initial weights ~ Normal(0, scale^2) from the INIT substream."""
    return rng.stream(seed, rng.INIT).normal(0.0, scale, size=n)


def spsa_run(
    loss_fn: Callable[[np.ndarray, int, int], float],
    theta0: Sequence[float],
    config: SpsaConfig,
    callback: Callable[[int, np.ndarray], None] | None = None,
) -> SpsaTrace:
    """Run the SPSA recursion (module docstring) for ``config.max_iters`` steps.

    ``loss_fn(theta, k, side)`` is evaluated twice per iteration with side
    0 for the positive and 1 for the negative perturbation.  Perturbation
    signs come from the DELTA substream of ``config.seed``.  ``callback``,
    if given, observes (k, theta) after each update.  Raises
    :class:`NumericalError` on a non-finite loss value.
    """
    theta = np.asarray(theta0, dtype=np.float64).copy()
    d = theta.shape[0]
    K = config.max_iters
    delta_stream = rng.stream(config.seed, rng.DELTA)

    thetas = np.empty((K + 1, d))
    cs = np.empty(K)
    lps = np.empty(K)
    lms = np.empty(K)
    thetas[0] = theta
    for k in range(K):
        delta = delta_stream.integers(0, 2, size=d) * 2 - 1
        ck = config.perturbation / (k + 1) ** config.decay
        lp = float(loss_fn(theta + ck * delta, k, 0))
        lm = float(loss_fn(theta - ck * delta, k, 1))
        if not (np.isfinite(lp) and np.isfinite(lm)):
            raise NumericalError(
                f"non-finite SPSA loss at iteration {k}: L+={lp}, L-={lm}, theta={theta.tolist()}"
            )
        grad = (lp - lm) / (2.0 * ck) * delta
        theta = theta - config.learning_rate * grad
        thetas[k + 1] = theta
        cs[k], lps[k], lms[k] = ck, lp, lm
        if callback is not None:
            callback(k, theta)
    return SpsaTrace(thetas=thetas, c=cs, loss_plus=lps, loss_minus=lms)


@dataclass(frozen=True)
class SplitSpec:
    """Per-class sample counts of the train/val/test splits."""

    train_z2: int = 7
    train_z3: int = 7
    val_z2: int = 1
    val_z3: int = 2
    test_z2: int = 2
    test_z3: int = 1
    seed: int = 7

    def __post_init__(self):
        counts = (self.train_z2, self.train_z3, self.val_z2,
                  self.val_z3, self.test_z2, self.test_z3)
        if any(c < 1 for c in counts):
            raise ValueError("every split needs at least one sample of each class")

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (
            self.train_z2 + self.train_z3,
            self.val_z2 + self.val_z3,
            self.test_z2 + self.test_z3,
        )

    def class_counts(self, phase: str) -> tuple[int, int, int]:
        if phase == PHASE_Z2:
            return self.train_z2, self.val_z2, self.test_z2
        return self.train_z3, self.val_z3, self.test_z3


def split_indices(
    labels: Sequence[str], spec: SplitSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stratified index split: per-class seeded shuffle, then contiguous
    train/val/test slices.  Deterministic for a given (labels, seed)."""
    rand = rng.stream(spec.seed, rng.SPLIT)
    parts: dict[str, list[np.ndarray]] = {"train": [], "val": [], "test": []}
    for phase in PHASES:
        members = np.flatnonzero(np.asarray([lab == phase for lab in labels]))
        n_train, n_val, n_test = spec.class_counts(phase)
        if members.size != n_train + n_val + n_test:
            raise DataError(
                f"split infeasible: {members.size} {phase} samples, "
                f"need {n_train}+{n_val}+{n_test}"
            )
        order = rand.permutation(members)
        parts["train"].append(order[:n_train])
        parts["val"].append(order[n_train:n_train + n_val])
        parts["test"].append(order[n_train + n_val:])
    return tuple(np.sort(np.concatenate(parts[name])) for name in ("train", "val", "test"))


def stratified_split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Split a dataset into stratified train/val/test datasets."""
    out = []
    for idx in split_indices(dataset.labels, spec):
        subset = [dataset.samples[i] for i in idx]
        out.append(Dataset(subset, n_qubits=dataset.n_qubits, n_shots=dataset.n_shots))
    return tuple(out)


@dataclass
class ClassificationMetrics:
    confusion: np.ndarray            # rows true (Z2, Z3), cols predicted (Z2, Z3)
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    macro_f1: float
    weighted_f1: float
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "confusion": self.confusion.tolist(),
            "precision": dict(self.precision),
            "recall": dict(self.recall),
            "f1": dict(self.f1),
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "accuracy": self.accuracy,
        }


def classification_metrics(preds: Sequence[int], labels: Sequence[int]) -> ClassificationMetrics:
    """Confusion matrix and derived metrics for +-1 coded predictions.

    A class with zero predicted positives gets precision 0; the analogous
    rule applies to recall and F1.
    """
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if preds.shape != labels.shape or preds.ndim != 1:
        raise ValueError("preds and labels must be equal-length 1-D sequences")
    if preds.size == 0:
        raise ValueError("empty prediction list")
    for arr, what in ((preds, "prediction"), (labels, "label")):
        if not np.isin(arr, (-1, 1)).all():
            raise ValueError(f"{what} codes must be -1 or +1")

    codes = (-1, +1)
    confusion = np.zeros((2, 2), dtype=np.int64)
    for i, true_code in enumerate(codes):
        for j, pred_code in enumerate(codes):
            confusion[i, j] = int(np.sum((labels == true_code) & (preds == pred_code)))

    precision, recall, f1 = {}, {}, {}
    for pos, name in ((-1, PHASE_Z2), (+1, PHASE_Z3)):
        tp = int(np.sum((labels == pos) & (preds == pos)))
        predicted = int(np.sum(preds == pos))
        actual = int(np.sum(labels == pos))
        p = tp / predicted if predicted else 0.0
        r = tp / actual if actual else 0.0
        precision[name] = p
        recall[name] = r
        f1[name] = 2 * p * r / (p + r) if (p + r) else 0.0

    support = {PHASE_Z2: int(np.sum(labels == -1)), PHASE_Z3: int(np.sum(labels == +1))}
    total = labels.size
    macro_f1 = (f1[PHASE_Z2] + f1[PHASE_Z3]) / 2.0
    weighted_f1 = sum(f1[c] * support[c] for c in PHASES) / total
    accuracy = float(np.trace(confusion)) / total
    return ClassificationMetrics(
        confusion=confusion,
        precision=precision,
        recall=recall,
        f1=f1,
        macro_f1=macro_f1,
        weighted_f1=weighted_f1,
        accuracy=accuracy,
    )


def efficiency_score(A: float, P: float, D: float, W: float) -> float:
    """Resource-efficiency score A - 0.1*P - 0.0002*D - 0.1*W."""
    if not 0.0 <= A <= 1.0:
        raise ValueError(f"accuracy must be in [0, 1], got {A}")
    if min(P, D, W) < 0:
        raise ValueError("parameter, depth and width counts must be >= 0")
    return A - 0.1 * P - 0.0002 * D - 0.1 * W


@dataclass
class EpochRow:
    epoch: int
    iteration: int
    train_loss: float
    val_loss: float
    train_acc: float
    val_acc: float
    precision: float   # positive-class (Z3) precision on the training split
    f1: float          # positive-class (Z3) F1 on the training split

    def to_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "iteration": self.iteration,
            "train_loss": self.train_loss,
            "val_loss": self.val_loss,
            "train_acc": self.train_acc,
            "val_acc": self.val_acc,
            "precision": self.precision,
            "f1": self.f1,
        }


@dataclass
class TrainReport:
    config: dict
    split_ids: dict[str, list[str]]
    weights_trace: list[list[float]]
    c_trace: list[float]
    loss_plus_trace: list[float]
    loss_minus_trace: list[float]
    epochs: list[EpochRow]
    final_weights: list[float]
    train_metrics: ClassificationMetrics
    val_metrics: ClassificationMetrics
    test_metrics: ClassificationMetrics
    train_loss: float
    val_loss: float
    test_loss: float
    efficiency: float
    notes: str

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "split_ids": self.split_ids,
            "epochs": [row.to_dict() for row in self.epochs],
            "final_weights": self.final_weights,
            "metrics": {
                "train": {"loss": self.train_loss, **self.train_metrics.to_dict()},
                "val": {"loss": self.val_loss, **self.val_metrics.to_dict()},
                "test": {"loss": self.test_loss, **self.test_metrics.to_dict()},
            },
            "efficiency_score": self.efficiency,
            "trace": {
                "weights": self.weights_trace,
                "c": self.c_trace,
                "loss_plus": self.loss_plus_trace,
                "loss_minus": self.loss_minus_trace,
            },
            "notes": self.notes,
        }


def epoch_iterations(max_iters: int, stride: int = EPOCH_STRIDE) -> list[int]:
    """Iteration indices at which epoch rows are logged: every ``stride``
    updates starting at 0, plus the final iteration."""
    iters = list(range(0, max_iters, stride))
    if iters[-1] != max_iters - 1:
        iters.append(max_iters - 1)
    return iters


_LEAKAGE_NOTE = (
    "Feature pipeline (PCA, min-max) is fitted on the full dataset before "
    "splitting; split metrics are therefore not leakage-free."
)


def evaluate_split(weights, features, codes, eval_shots, seed, k_tag, split_tag):
    """Loss, predictions and metrics of one split; exact unless eval_shots."""
    zs = []
    for i, row in enumerate(features):
        state = run_circuit(CircuitParams(features=tuple(row), weights=tuple(weights)))
        if eval_shots:
            rand = rng.stream(seed, rng.SHOTS, k_tag, 2 + split_tag, i)
            zs.append(z_mean_sampled(state, eval_shots, rand))
        else:
            zs.append(z_mean_exact(state))
    zs = np.asarray(zs)
    loss = hinge_loss(codes * zs)
    preds = [decision(z) for z in zs]
    return loss, preds, classification_metrics(preds, codes)


def train_evaluate(
    features: np.ndarray,
    labels: Sequence[str],
    sample_ids: Sequence[str],
    spsa: SpsaConfig,
    split: SplitSpec,
    eval_shots: int | None = None,
    config_echo: dict | None = None,
) -> TrainReport:
    """Full training pass over a preprocessed (n, 4) feature matrix.

    Splits stratified by class, optimizes the two weights with SPSA under
    the finite-shot schedule, logs exact-expectation metrics after
    iterations ``epoch_iterations(K)``, and evaluates the final weights on
    all three splits (exact unless ``eval_shots`` is set).  The efficiency
    score uses the test accuracy and the fixed circuit metrics.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != 4:
        raise DataError(f"expected an (n, 4) feature matrix, got {features.shape}")
    if features.shape[0] != len(labels) or len(labels) != len(sample_ids):
        raise DataError("features, labels and sample ids must align")
    codes = np.asarray([label_code(lab) for lab in labels], dtype=np.int64)

    idx_train, idx_val, idx_test = split_indices(labels, split)
    f_train, y_train = features[idx_train], codes[idx_train]
    f_val, y_val = features[idx_val], codes[idx_val]
    f_test, y_test = features[idx_test], codes[idx_test]

    def loss_fn(theta, k, side):
        shots = spsa.shots_at(k)
        rngs = [
            rng.stream(spsa.seed, rng.SHOTS, k, side, i)
            for i in range(len(idx_train))
        ]
        return dataset_loss(theta, f_train, y_train, shots=shots, rngs=rngs)

    log_at = set(epoch_iterations(spsa.max_iters))
    epochs: list[EpochRow] = []

    def on_iteration(k, theta):
        if k not in log_at:
            return
        tr_loss, _, tr_metrics = evaluate_split(theta, f_train, y_train, None, spsa.seed, k, 0)
        va_loss, _, va_metrics = evaluate_split(theta, f_val, y_val, None, spsa.seed, k, 1)
        epochs.append(
            EpochRow(
                epoch=len(epochs) + 1,
                iteration=k,
                train_loss=tr_loss,
                val_loss=va_loss,
                train_acc=tr_metrics.accuracy,
                val_acc=va_metrics.accuracy,
                precision=tr_metrics.precision[PHASE_Z3],
                f1=tr_metrics.f1[PHASE_Z3],
            )
        )

    theta0 = draw_initial_weights(spsa.seed)
    trace = spsa_run(loss_fn, theta0, spsa, callback=on_iteration)
    final = trace.final_theta

    K = spsa.max_iters
    tr_loss, _, tr_metrics = evaluate_split(final, f_train, y_train, eval_shots, spsa.seed, K, 0)
    va_loss, _, va_metrics = evaluate_split(final, f_val, y_val, eval_shots, spsa.seed, K, 1)
    te_loss, _, te_metrics = evaluate_split(final, f_test, y_test, eval_shots, spsa.seed, K, 2)

    cm = circuit_metrics()
    score = efficiency_score(te_metrics.accuracy, cm.n_params, cm.depth, cm.width)

    config = {
        "spsa": {
            "learning_rate": spsa.learning_rate,
            "perturbation": spsa.perturbation,
            "decay": spsa.decay,
            "max_iters": spsa.max_iters,
            "shot_schedule": [[list(rg), sh] for rg, sh in spsa.shot_schedule],
            "seed": spsa.seed,
        },
        "split": {
            "train": {PHASE_Z2: split.train_z2, PHASE_Z3: split.train_z3},
            "val": {PHASE_Z2: split.val_z2, PHASE_Z3: split.val_z3},
            "test": {PHASE_Z2: split.test_z2, PHASE_Z3: split.test_z3},
            "seed": split.seed,
        },
        "eval_shots": eval_shots,
    }
    if config_echo:
        config.update(config_echo)

    ids = list(sample_ids)
    return TrainReport(
        config=config,
        split_ids={
            "train": [ids[i] for i in idx_train],
            "val": [ids[i] for i in idx_val],
            "test": [ids[i] for i in idx_test],
        },
        weights_trace=[list(map(float, row)) for row in trace.thetas],
        c_trace=[float(v) for v in trace.c],
        loss_plus_trace=[float(v) for v in trace.loss_plus],
        loss_minus_trace=[float(v) for v in trace.loss_minus],
        epochs=epochs,
        final_weights=[float(w) for w in final],
        train_metrics=tr_metrics,
        val_metrics=va_metrics,
        test_metrics=te_metrics,
        train_loss=tr_loss,
        val_loss=va_loss,
        test_loss=te_loss,
        efficiency=score,
        notes=_LEAKAGE_NOTE,
    )
