"""Deterministic random-stream derivation.

All randomness in the package flows from a single 64-bit seed through
named substreams.  A substream is a ``numpy.random.Generator`` backed by
PCG64, seeded with ``SeedSequence([seed, *key])`` where ``key`` is a tuple
of small non-negative integers identifying the consumer:

==================  =======================================================
key prefix          consumer
==================  =======================================================
``(GENERATE, i)``   synthetic measurement sampling for sample ``i``
``(SPLIT,)``        stratified train/val/test shuffles
``(INIT,)``         initial circuit weights
``(DELTA,)``        SPSA perturbation signs
``(SHOTS, k, side, i)``  finite-shot readout for sample ``i`` in the loss
                    evaluation at iteration ``k`` (side 0 = plus, 1 = minus)
==================  =======================================================

Substreams are statistically independent and pre-assigned, so parallel
evaluation cannot change results.  Reproduction in another environment
requires PCG64 with NumPy's SeedSequence entropy-mixing; the derivation is
deterministic per platform, not portable across RNG families.
"""

import numpy as np

GENERATE = 0
SPLIT = 1
INIT = 2
DELTA = 3
SHOTS = 4

_MASK64 = 0xFFFFFFFFFFFFFFFF


def stream(seed: int, *key: int) -> np.random.Generator:
    """Return the PCG64 generator for the substream ``(seed, *key)``."""
    entropy = [int(seed) & _MASK64, *key]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
