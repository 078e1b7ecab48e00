"""NumPy reference implementations of the hot kernels.

Bit-compatible with the compiled twin in ``_core.pyx``: both consume the
same pre-drawn uniforms and perform the same IEEE-754 comparisons, and all
accumulations are over exactly representable values, so results are
identical regardless of which backend is active.

Symbol codes: 0=g, 1=r, 2=plus, 3=minus, 4=plus_i, 5=minus_i.
Basis codes:  0=X, 1=Y, 2=Z.
"""

import numpy as np

ONE_THIRD = 1.0 / 3.0
TWO_THIRDS = 2.0 / 3.0

# z0*z1 average per computational-basis outcome |00>,|01>,|10>,|11>
_ZVALS = np.array([1.0, 0.0, 0.0, -1.0])


def sample_outcomes(pattern_is_r, uniforms, flip_noise, force_basis=-1):
    """Map pre-drawn uniforms to measurement outcome codes.

    Parameters
    ----------
    pattern_is_r : uint8 array, shape (n_qubits,)
        Ideal site occupation (1 = excited, 0 = ground).
    uniforms : float64 array, shape (3, n_shots, n_qubits)
        Layers: [0] site-flip draw, [1] basis draw, [2] outcome draw.
    flip_noise : float
        Probability that a site's local state is flipped before measurement.
    force_basis : int
        -1 for uniform random bases, else a basis code forced on every cell
        (test hook).  The basis-draw layer is consumed either way.

    Returns
    -------
    uint8 array, shape (n_shots, n_qubits) of outcome symbol codes.
    """
    u_flip, u_basis, u_out = uniforms[0], uniforms[1], uniforms[2]
    is_r = pattern_is_r[None, :] ^ (u_flip < flip_noise).astype(np.uint8)
    if force_basis >= 0:
        basis = np.full(u_basis.shape, force_basis, dtype=np.uint8)
    else:
        basis = (u_basis >= ONE_THIRD).astype(np.uint8)
        basis += u_basis >= TWO_THIRDS
    second = (u_out >= 0.5).astype(np.uint8)
    codes = np.where(basis == 2, is_r, np.where(basis == 0, 2 + second, 4 + second))
    return codes.astype(np.uint8)


def count_symbols(codes):
    """Per-qubit histogram of outcome codes.

    Returns an int64 array of shape (n_qubits, 6).
    """
    n_shots, n_qubits = codes.shape
    flat = codes.astype(np.int64) + 6 * np.arange(n_qubits, dtype=np.int64)[None, :]
    return np.bincount(flat.ravel(), minlength=6 * n_qubits).reshape(n_qubits, 6)


def z_mean_from_uniforms(c1, c2, c3, uniforms):
    """Average (z0+z1)/2 readout over pre-drawn uniforms.

    ``c1 <= c2 <= c3`` are cumulative Born probabilities of the outcomes
    |00>, |01>, |10|; a uniform u selects outcome ``#{thresholds <= u}``.
    The per-shot values are in {-1, 0, +1}, so the accumulated sum is exact
    and independent of summation order.
    """
    idx = (uniforms >= c1).astype(np.intp)
    idx += uniforms >= c2
    idx += uniforms >= c3
    return float(_ZVALS[idx].sum() / uniforms.shape[0])
