"""Exact 4-amplitude simulation of the fixed two-qubit classifier circuit.

Basis order is |00>, |01>, |10>, |11> with qubit 0 as the most significant
bit.  The circuit applies, to |00>: RY(f0) RZ(f1) on qubit 0 and
RY(f2) RZ(f3) on qubit 1 (encoding), one CZ (entanglement), then the
shared-weight ansatz RX(w0) on both qubits, CZ, RZ(w1) on both qubits.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class CircuitParams:
    """4 encoded features and 2 trainable weights (radians)."""

    features: tuple[float, float, float, float]
    weights: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(float(f) for f in self.features))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.features) != 4:
            raise ValueError(f"expected 4 features, got {len(self.features)}")
        if len(self.weights) != 2:
            raise ValueError(f"expected 2 weights, got {len(self.weights)}")


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    width: int
    n_params: int


def gate_ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def gate_rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]],
        dtype=np.complex128,
    )


def gate_rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def gate_cz() -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, -1.0]).astype(np.complex128)


def _is_unitary(gate: np.ndarray) -> bool:
    eye = np.eye(gate.shape[0])
    return np.abs(gate @ gate.conj().T - eye).max() <= 1e-12


def apply_1q(state: np.ndarray, gate: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a single-qubit gate to qubit 0 or 1 of a 4-amplitude state."""
    assert _is_unitary(gate), "gate is not unitary"
    m = state.reshape(2, 2)
    if qubit == 0:
        m = gate @ m
    elif qubit == 1:
        m = m @ gate.T
    else:
        raise ValueError(f"qubit must be 0 or 1, got {qubit}")
    return m.reshape(4)


def apply_2q(state: np.ndarray, gate4: np.ndarray, pair: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Apply a two-qubit gate given in the (q0, q1) basis ordering."""
    assert _is_unitary(gate4), "gate is not unitary"
    if sorted(pair) != [0, 1]:
        raise ValueError(f"pair must cover qubits 0 and 1, got {pair}")
    if pair == (1, 0):
        # Reindex |ab> -> |ba| on both sides.
        perm = [0, 2, 1, 3]
        gate4 = gate4[np.ix_(perm, perm)]
    return gate4 @ state


def initial_state() -> np.ndarray:
    state = np.zeros(4, dtype=np.complex128)
    state[0] = 1.0
    return state


def run_circuit(params: CircuitParams) -> np.ndarray:
    """Final statevector of the encode / entangle / ansatz circuit."""
    f0, f1, f2, f3 = params.features
    w0, w1 = params.weights
    state = initial_state()
    state = apply_1q(state, gate_ry(f0), 0)
    state = apply_1q(state, gate_rz(f1), 0)
    state = apply_1q(state, gate_ry(f2), 1)
    state = apply_1q(state, gate_rz(f3), 1)
    state = apply_2q(state, gate_cz())
    rx = gate_rx(w0)
    state = apply_1q(state, rx, 0)
    state = apply_1q(state, rx, 1)
    state = apply_2q(state, gate_cz())
    rz = gate_rz(w1)
    state = apply_1q(state, rz, 0)
    state = apply_1q(state, rz, 1)
    return state


def _born_probabilities(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=np.complex128)
    if state.shape != (4,):
        raise ValueError(f"expected a 4-amplitude state, got shape {state.shape}")
    probs = np.abs(state) ** 2
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("state is not normalized")
    return probs


def z_mean_exact(state: np.ndarray) -> float:
    """Average Pauli-Z expectation (<Z0> + <Z1>)/2 of a two-qubit state."""
    p = _born_probabilities(state)
    z0 = p[0] + p[1] - p[2] - p[3]
    z1 = p[0] - p[1] + p[2] - p[3]
    return float((z0 + z1) / 2.0)


def z_mean_sampled(state: np.ndarray, shots: int, rand: np.random.Generator) -> float:
    """Finite-shot estimate of :func:`z_mean_exact` from Born-rule sampling.

    Draws ``shots`` computational-basis outcomes and averages (z0+z1)/2.
    Unbiased, and deterministic given the generator state.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = _born_probabilities(state)
    c1 = p[0]
    c2 = c1 + p[1]
    c3 = c2 + p[2]
    uniforms = rand.random(shots)
    return _kernels.z_mean_from_uniforms(c1, c2, c3, uniforms)


def circuit_metrics() -> CircuitMetrics:
    """Resource metrics of the fixed architecture.

    Depth is the architecture's headline gate count of 7 (4 encoding + 1
    entanglement + 2 ansatz rotation layers); it is a reporting constant of
    this fixed circuit, not the output of a generic gate scheduler.
    """
    return CircuitMetrics(depth=7, width=2, n_params=2)


def amplitudes_csv(state: np.ndarray) -> str:
    """Debug dump of final amplitudes: basis label, real part, imaginary part."""
    out = io.StringIO()
    out.write("basis,re,im\n")
    for idx, amp in enumerate(np.asarray(state, dtype=np.complex128)):
        out.write(f"{idx >> 1}{idx & 1},{float(amp.real)!r},{float(amp.imag)!r}\n")
    return out.getvalue()
