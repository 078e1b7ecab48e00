"""Single-qubit shadow estimation from randomized Pauli measurement records.

Each outcome symbol maps to the operator ``3|psi><psi| - I`` (trace 1,
eigenvalues {2, -1}).  Averaging these over the shots of one qubit gives
the per-qubit shadow ``S``; a density matrix is then reconstructed in one
of two modes:

* ``paper``:    ``rho = (S + I)/3`` — positive semidefinite by construction,
  but its expectation is ``(rho_true + I)/3`` (Bloch vector shrunk by 3).
* ``unbiased``: ``rho = S`` — the standard estimator with expectation
  ``rho_true``; individual estimates may have negative eigenvalues.

All accumulations are over exactly representable matrix entries (integer
multiples of 1/2), so shadow averages are exact up to the single final
division by the shot count, independent of summation order.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import OUTCOME_STATES, Dataset, OutcomeSymbol, Sample

MODE_PAPER = "paper"
MODE_UNBIASED = "unbiased"
MODES = (MODE_PAPER, MODE_UNBIASED)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
_EYE2 = np.eye(2, dtype=np.complex128)

# 3|psi><psi| - I for each of the six outcome symbols.  Entries are exact
# binary fractions (the 1/2 factors of the X/Y projectors cancel the
# irrational eigenvector amplitudes), so they are written out literally;
# building them from OUTCOME_STATES would leave 1-ulp rounding residue and
# break the exact-accumulation guarantee of the shadow averages.
SHADOW_OPS = np.array(
    [
        [[2.0, 0.0], [0.0, -1.0]],
        [[-1.0, 0.0], [0.0, 2.0]],
        [[0.5, 1.5], [1.5, 0.5]],
        [[0.5, -1.5], [-1.5, 0.5]],
        [[0.5, -1.5j], [1.5j, 0.5]],
        [[0.5, 1.5j], [-1.5j, 0.5]],
    ],
    dtype=np.complex128,
)
SHADOW_OPS.setflags(write=False)

HERMITIAN_ATOL = 1e-9


@dataclass
class ExpectationTable:
    """Pauli X/Z expectations per (sample, qubit); channel 0 = <x>, 1 = <z>."""

    values: np.ndarray  # float64, shape (n_samples, n_qubits, 2)
    sample_ids: list[str]

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.values.shape[1]


def outcome_state(symbol: OutcomeSymbol | int) -> np.ndarray:
    """Eigenstate vector for an outcome symbol (copy)."""
    return OUTCOME_STATES[int(symbol)].copy()


def shadow_operator(symbol: OutcomeSymbol | int) -> np.ndarray:
    """Shadow operator ``3|psi><psi| - I`` for an outcome symbol (copy)."""
    return SHADOW_OPS[int(symbol)].copy()


def _shadow_from_counts(counts: np.ndarray, n_shots: int) -> np.ndarray:
    # counts @ ops summed over the six symbols; exact until the division.
    s = np.tensordot(counts.astype(np.float64), SHADOW_OPS, axes=([counts.ndim - 1], [0]))
    return s / n_shots


def average_shadow(sample: Sample, qubit: int) -> np.ndarray:
    """Per-qubit shadow: mean of the shadow operators over all shots."""
    if not 0 <= qubit < sample.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {sample.n_qubits}-qubit sample")
    counts = _kernels.count_symbols(sample.shots)[qubit]
    return _shadow_from_counts(counts, sample.n_shots)


def _check_hermitian(m: np.ndarray, what: str) -> None:
    if m.shape != (2, 2):
        raise ValueError(f"{what} must be a 2x2 matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_ATOL:
        raise ValueError(f"{what} is not Hermitian within {HERMITIAN_ATOL}")


def reconstruct_density(S: np.ndarray, mode: str = MODE_PAPER) -> np.ndarray:
    """Density-matrix estimate from an averaged shadow (see module docs)."""
    S = np.asarray(S, dtype=np.complex128)
    _check_hermitian(S, "averaged shadow")
    if mode == MODE_PAPER:
        return (S + _EYE2) / 3.0
    if mode == MODE_UNBIASED:
        return S.copy()
    raise ValueError(f"unknown reconstruction mode {mode!r}")


def pauli_expectations(rho: np.ndarray) -> tuple[float, float]:
    """(Re Tr(rho X), Re Tr(rho Z)) for a single-qubit density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    _check_hermitian(rho, "density matrix")
    ex = float(np.trace(rho @ SIGMA_X).real)
    ez = float(np.trace(rho @ SIGMA_Z).real)
    return ex, ez


def shadow_features(dataset: Dataset, mode: str = MODE_PAPER) -> ExpectationTable:
    """Pauli X/Z expectations for every (sample, qubit) cell of a dataset.

    Equivalent to composing :func:`average_shadow`,
    :func:`reconstruct_density` and :func:`pauli_expectations` per cell.
    """
    if mode not in MODES:
        raise ValueError(f"unknown reconstruction mode {mode!r}")
    values = np.empty((len(dataset), dataset.n_qubits, 2), dtype=np.float64)
    for i, sample in enumerate(dataset.samples):
        counts = _kernels.count_symbols(sample.shots)
        shadows = _shadow_from_counts(counts, sample.n_shots)  # (n_qubits, 2, 2)
        if mode == MODE_PAPER:
            rhos = (shadows + _EYE2) / 3.0
        else:
            rhos = shadows
        values[i, :, 0] = 2.0 * rhos[:, 0, 1].real
        values[i, :, 1] = (rhos[:, 0, 0] - rhos[:, 1, 1]).real
    return ExpectationTable(values=values, sample_ids=[s.id for s in dataset.samples])


def expectations_csv(table: ExpectationTable) -> str:
    """CSV dump: header ``sample_id,qubit,ex,ez``, full decimal precision."""
    out = io.StringIO()
    out.write("sample_id,qubit,ex,ez\n")
    for i, sid in enumerate(table.sample_ids):
        for q in range(table.n_qubits):
            ex, ez = table.values[i, q]
            out.write(f"{sid},{q},{float(ex)!r},{float(ez)!r}\n")
    return out.getvalue()
