"""Measurement records: data model, JSON-Lines file format, synthetic generator.

A sample is a grid of single-qubit measurement outcomes, one row per
repeated measurement (shot) and one column per qubit, where each cell is
one of the six Pauli eigenstate symbols.  The synthetic generator emits
product states with period-2 or period-3 excitation ordering, optionally
corrupted by independent site flips, and measures every site in a random
Pauli basis.

File format (one sample per line)::

    {"id": "Z2-000", "label": "Z2", "shots": ["rg+j...", ...]}

Shot strings use the alphabet ``g r + - i j`` (``i`` = +i eigenstate,
``j`` = -i eigenstate).  Optional per-sample fields ``detuning`` and
``blockade_radius`` carry experiment metadata and take no part in any
computation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import IO, Iterable, Sequence

import numpy as np

from . import _kernels, rng
from .errors import ConfigError, DataError

PHASE_Z2 = "Z2"
PHASE_Z3 = "Z3"
PHASES = (PHASE_Z2, PHASE_Z3)

BASIS_X = 0
BASIS_Y = 1
BASIS_Z = 2

_SYMBOL_CHARS = "gr+-ij"
_CHAR_TO_CODE = {c: k for k, c in enumerate(_SYMBOL_CHARS)}


class OutcomeSymbol(IntEnum):
    """Single-qubit measurement outcome, one per Pauli eigenstate."""

    G = 0
    R = 1
    PLUS = 2
    MINUS = 3
    PLUS_I = 4
    MINUS_I = 5

    @property
    def basis(self) -> int:
        """Pauli basis this outcome belongs to (BASIS_X/Y/Z)."""
        return _SYMBOL_BASIS[self.value]

    @property
    def char(self) -> str:
        """One-character file representation."""
        return _SYMBOL_CHARS[self.value]


_SYMBOL_BASIS = (BASIS_Z, BASIS_Z, BASIS_X, BASIS_X, BASIS_Y, BASIS_Y)

# Eigenstate vectors, indexed by symbol code.
_SQ2 = 1.0 / math.sqrt(2.0)
OUTCOME_STATES = np.array(
    [
        [1.0, 0.0],
        [0.0, 1.0],
        [_SQ2, _SQ2],
        [_SQ2, -_SQ2],
        [_SQ2, _SQ2 * 1j],
        [_SQ2, -_SQ2 * 1j],
    ],
    dtype=np.complex128,
)

# (first, second) outcome per basis; the generic sampler picks `first`
# when the uniform draw is below its Born probability, matching the bulk
# kernel's comparisons exactly.
_BASIS_OUTCOMES = {
    BASIS_X: (OutcomeSymbol.PLUS, OutcomeSymbol.MINUS),
    BASIS_Y: (OutcomeSymbol.PLUS_I, OutcomeSymbol.MINUS_I),
    BASIS_Z: (OutcomeSymbol.G, OutcomeSymbol.R),
}


@dataclass(eq=False)
class Sample:
    """One labeled measurement record: a (n_shots, n_qubits) grid of outcomes."""

    id: str
    label: str
    shots: np.ndarray  # uint8 symbol codes, shape (n_shots, n_qubits)
    detuning: float | None = None
    blockade_radius: float | None = None

    def __post_init__(self):
        self.shots = np.ascontiguousarray(self.shots, dtype=np.uint8)
        if self.label not in PHASES:
            raise DataError(f"sample {self.id!r}: unknown label {self.label!r}")
        if self.shots.ndim != 2 or self.shots.shape[0] < 1 or self.shots.shape[1] < 1:
            raise DataError(f"sample {self.id!r}: shots grid must be 2-D and non-empty")
        if self.shots.max(initial=0) > 5:
            raise DataError(f"sample {self.id!r}: invalid outcome code in shots grid")

    @property
    def n_shots(self) -> int:
        return self.shots.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.shots.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return (
            self.id == other.id
            and self.label == other.label
            and self.detuning == other.detuning
            and self.blockade_radius == other.blockade_radius
            and self.shots.shape == other.shots.shape
            and bool(np.array_equal(self.shots, other.shots))
        )


@dataclass(eq=False)
class Dataset:
    """Ordered collection of samples sharing one (n_shots, n_qubits) shape."""

    samples: list[Sample]
    n_qubits: int
    n_shots: int

    def __post_init__(self):
        seen: set[str] = set()
        for s in self.samples:
            if s.n_qubits != self.n_qubits or s.n_shots != self.n_shots:
                raise DataError(
                    f"sample {s.id!r}: grid {s.n_shots}x{s.n_qubits} does not match "
                    f"dataset shape {self.n_shots}x{self.n_qubits}"
                )
            if s.id in seen:
                raise DataError(f"duplicate sample id {s.id!r}")
            seen.add(s.id)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.samples]

    def __len__(self) -> int:
        return len(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.n_shots == other.n_shots
            and self.samples == other.samples
        )


@dataclass(frozen=True)
class GenConfig:
    """Synthetic generator settings."""

    n_samples_per_class: int = 10
    n_qubits: int = 51
    n_shots: int = 500
    flip_noise: float = 0.05
    seed: int = 7

    def __post_init__(self):
        if self.n_samples_per_class < 1 or self.n_qubits < 1 or self.n_shots < 1:
            raise ConfigError("generator counts must all be >= 1")
        if not 0.0 <= self.flip_noise <= 1.0:
            raise ConfigError(f"flip_noise must be in [0, 1], got {self.flip_noise}")


def ideal_pattern(phase: str, n_qubits: int) -> np.ndarray:
    """Ideal site occupation for an ordered phase, truncated at ``n_qubits``.

    Returns a uint8 array with 1 at excited (r) sites and 0 at ground (g)
    sites: period-2 ``r,g`` repetition for Z2 and period-3 ``r,g,g`` for Z3,
    both starting from an excited site.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if phase == PHASE_Z2:
        unit = [1, 0]
    elif phase == PHASE_Z3:
        unit = [1, 0, 0]
    else:
        raise DataError(f"unknown phase tag {phase!r}")
    reps = -(-n_qubits // len(unit))
    return np.array((unit * reps)[:n_qubits], dtype=np.uint8)


def sample_pauli_measurement(
    local_state: np.ndarray, basis: int, rand: np.random.Generator
) -> OutcomeSymbol:
    """Draw one outcome of a Pauli-basis measurement on a single-qubit state.

    The outcome is an eigenstate symbol of ``basis``, drawn with Born
    probability ``|<outcome|state>|^2``.  Consumes exactly one uniform from
    ``rand``.
    """
    state = np.asarray(local_state, dtype=np.complex128)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"local state must be normalized, |state| = {norm}")
    first, second = _BASIS_OUTCOMES[basis]
    p_first = abs(np.vdot(OUTCOME_STATES[first.value], state)) ** 2
    return first if rand.random() < p_first else second


def generate_synthetic(config: GenConfig, force_basis: int | None = None) -> Dataset:
    """Generate a labeled synthetic dataset of noisy ordered product states.

    For every (shot, qubit) cell: flip the ideal local state with
    probability ``config.flip_noise``, pick a basis uniformly from
    {X, Y, Z}, and sample the outcome by the Born rule.  Each sample draws
    its uniforms from the substream ``(seed, GENERATE, sample_index)`` in a
    fixed (flip, basis, outcome) layer order, so output is fully
    deterministic given the seed.

    ``force_basis`` pins every cell to one basis (test hook); the basis
    draws are still consumed so the remaining stream is unchanged.
    """
    fb = -1 if force_basis is None else int(force_basis)
    if fb not in (-1, BASIS_X, BASIS_Y, BASIS_Z):
        raise ValueError(f"invalid forced basis {force_basis!r}")
    samples: list[Sample] = []
    index = 0
    for phase in PHASES:
        pattern = ideal_pattern(phase, config.n_qubits)
        for j in range(config.n_samples_per_class):
            rand = rng.stream(config.seed, rng.GENERATE, index)
            uniforms = rand.random((3, config.n_shots, config.n_qubits))
            codes = _kernels.sample_outcomes(pattern, uniforms, config.flip_noise, fb)
            samples.append(Sample(id=f"{phase}-{j:03d}", label=phase, shots=codes))
            index += 1
    return Dataset(samples, n_qubits=config.n_qubits, n_shots=config.n_shots)


def _parse_sample_line(line: str, lineno: int, expect_shape: tuple[int, int] | None) -> Sample:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"line {lineno}: malformed JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: expected a JSON object")
    for key in ("id", "label", "shots"):
        if key not in obj:
            raise DataError(f"line {lineno}: missing field {key!r}")
    shots = obj["shots"]
    if not isinstance(shots, list) or not shots:
        raise DataError(f"line {lineno}: 'shots' must be a non-empty array of strings")
    width = len(shots[0])
    if width < 1:
        raise DataError(f"line {lineno}: empty shot string")
    grid = np.empty((len(shots), width), dtype=np.uint8)
    for t, row in enumerate(shots):
        if not isinstance(row, str) or len(row) != width:
            raise DataError(f"line {lineno}: ragged shots grid (row {t})")
        for q, ch in enumerate(row):
            code = _CHAR_TO_CODE.get(ch)
            if code is None:
                raise DataError(f"line {lineno}: unknown outcome symbol {ch!r} (row {t})")
            grid[t, q] = code
    if expect_shape is not None and grid.shape != expect_shape:
        raise DataError(
            f"line {lineno}: grid {grid.shape[0]}x{grid.shape[1]} does not match "
            f"dataset shape {expect_shape[0]}x{expect_shape[1]}"
        )
    try:
        return Sample(
            id=str(obj["id"]),
            label=obj["label"],
            shots=grid,
            detuning=obj.get("detuning"),
            blockade_radius=obj.get("blockade_radius"),
        )
    except DataError as exc:
        raise DataError(f"line {lineno}: {exc}") from exc


def parse_dataset(path) -> Dataset:
    """Parse a JSON-Lines dataset file; inverse of :func:`write_dataset`."""
    samples: list[Sample] = []
    ids: dict[str, int] = {}
    shape: tuple[int, int] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            sample = _parse_sample_line(line, lineno, shape)
            if sample.id in ids:
                raise DataError(
                    f"line {lineno}: duplicate sample id {sample.id!r} "
                    f"(first seen on line {ids[sample.id]})"
                )
            ids[sample.id] = lineno
            if shape is None:
                shape = sample.shots.shape
            samples.append(sample)
    if not samples:
        raise DataError(f"{path}: no samples")
    return Dataset(samples, n_qubits=shape[1], n_shots=shape[0])


def _sample_to_json(sample: Sample) -> str:
    rows = ["".join(_SYMBOL_CHARS[c] for c in row) for row in sample.shots]
    obj: dict = {"id": sample.id, "label": sample.label}
    if sample.detuning is not None:
        obj["detuning"] = sample.detuning
    if sample.blockade_radius is not None:
        obj["blockade_radius"] = sample.blockade_radius
    obj["shots"] = rows
    return json.dumps(obj, separators=(",", ":"))


def write_dataset(dataset: Dataset, path) -> None:
    """Write a dataset as JSON Lines; byte-deterministic for equal inputs."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in dataset.samples:
            fh.write(_sample_to_json(sample))
            fh.write("\n")
