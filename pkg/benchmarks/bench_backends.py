"""Benchmark the compiled kernels against the NumPy fallback.

The three kernels cover the pipeline's hot loops: per-cell measurement
sampling during dataset generation, per-qubit symbol counting during
shadow averaging, and per-shot readout sampling inside the SPSA loop.
Outputs of the two backends are asserted identical before timing.

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import timeit

import numpy as np

from shadowvqc._kernels import _ref

try:
    from shadowvqc._kernels import _core
except ImportError:
    _core = None


def bench(label, fn_ref, fn_core, args, repeats):
    ref_out = fn_ref(*args)
    t_ref = min(timeit.repeat(lambda: fn_ref(*args), number=1, repeat=repeats))
    line = f"{label:<28s} python {t_ref * 1e3:9.2f} ms"
    if fn_core is not None:
        core_out = fn_core(*args)
        same = (
            np.array_equal(ref_out, core_out)
            if isinstance(ref_out, np.ndarray)
            else ref_out == core_out
        )
        assert same, f"{label}: backend outputs differ"
        t_core = min(timeit.repeat(lambda: fn_core(*args), number=1, repeat=repeats))
        line += f"   compiled {t_core * 1e3:9.2f} ms   speedup {t_ref / t_core:6.1f}x"
    print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernels unavailable; timing the NumPy fallback only")

    rng = np.random.default_rng(0)

    # dataset generation workload: one 500-shot x 51-qubit sample
    pattern = rng.integers(0, 2, size=51).astype(np.uint8)
    uniforms = rng.random((3, 500, 51))
    bench(
        "sample_outcomes 500x51",
        _ref.sample_outcomes,
        _core.sample_outcomes if _core else None,
        (pattern, uniforms, 0.05, -1),
        args.repeats,
    )

    # shadow averaging workload: count symbols of the same grid
    codes = _ref.sample_outcomes(pattern, uniforms, 0.05, -1)
    bench(
        "count_symbols 500x51",
        _ref.count_symbols,
        _core.count_symbols if _core else None,
        (codes,),
        args.repeats,
    )

    # SPSA readout workload: 512-shot z estimate, batched 1000 times
    p = rng.dirichlet(np.ones(4))
    c1, c2, c3 = p[0], p[0] + p[1], p[0] + p[1] + p[2]
    shot_draws = rng.random(512 * 1000)
    bench(
        "z_mean 512k draws",
        _ref.z_mean_from_uniforms,
        _core.z_mean_from_uniforms if _core else None,
        (c1, c2, c3, shot_draws),
        args.repeats,
    )


if __name__ == "__main__":
    main()
