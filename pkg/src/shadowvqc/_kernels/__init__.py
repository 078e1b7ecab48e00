"""Hot-loop kernels with backend selection at import time.

The compiled Cython extension ``_core`` is preferred when present; the
NumPy implementation in ``_ref`` is the fallback and the behavioral
reference.  Both produce bit-identical results (see ``_ref`` module docs).
Set ``SHADOWVQC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _ref

_IMPL = _ref
_BACKEND = "python"

if os.environ.get("SHADOWVQC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core

        _IMPL = _core
        _BACKEND = "compiled"
    except ImportError:
        pass

sample_outcomes = _IMPL.sample_outcomes
count_symbols = _IMPL.count_symbols
z_mean_from_uniforms = _IMPL.z_mean_from_uniforms


def backend() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return _BACKEND
