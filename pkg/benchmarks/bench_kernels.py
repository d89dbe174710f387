"""Time the compiled kernels against their numpy reference versions.

    python3 benchmarks/bench_kernels.py [--n 64] [--repeat 20]

Numba timings exclude the first (compiling) call. Run with
SNEWTON_DISABLE_NUMBA=1 to confirm the fallback path imports and runs;
in that mode only the numpy column is reported.
"""

import argparse
import timeit

import numpy as np

from snewton import kernels
from snewton._accel import HAVE_NUMBA, backend_name


def _cases(n, rng):
    psi = rng.standard_normal((n, n, n)) + 1j * rng.standard_normal((n, n, n))
    V = rng.standard_normal((n, n, n))
    mult = np.exp(-0.01j * rng.random((n, n, n)))
    r = np.linspace(0.0, 60.0, 12001)
    Vr = -1.0 / np.maximum(r, 1e-3)
    eps = np.linspace(-0.5, -0.01, 33)
    dr = r[1] - r[0]
    return [
        ("abs2", lambda f: f(psi), kernels.abs2_numpy, kernels.abs2),
        ("phase_kick", lambda f: f(psi.copy(), V, 0.01), kernels.phase_kick_numpy, kernels.phase_kick),
        ("scale_by", lambda f: f(psi.copy(), mult), kernels.scale_by_numpy, kernels.scale_by),
        ("numerov x33", lambda f: f(Vr, eps, dr, 0.0, dr), kernels.numerov_numpy, kernels.numerov),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=64, help="grid points per axis for field kernels")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"backend: {backend_name()}   grid {args.n}^3   best of {args.repeat}")
    print(f"{'kernel':<14}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, call, ref, fast in _cases(args.n, rng):
        t_ref = min(timeit.repeat(lambda: call(ref), number=1, repeat=args.repeat)) * 1e3
        if HAVE_NUMBA:
            call(fast)  # compile
            t_fast = min(timeit.repeat(lambda: call(fast), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<14}{t_ref:>12.3f}{t_fast:>12.3f}{t_ref / t_fast:>9.2f}x")
        else:
            print(f"{name:<14}{t_ref:>12.3f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
