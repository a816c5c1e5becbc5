"""Compare the numba-compiled kernels with their pure numpy fallbacks.

    python3 benchmarks/bench_kernels.py --points 20000 --repeat 5
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from xhermite import _accel, kernels


def best_time(fn, repeat):
    fn()  # warm up (includes jit compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--nmax", type=int, default=80)
    args = p.parse_args(argv)

    if _accel.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    x = rng.uniform(-3, 3, args.points).astype(np.complex128)
    y = rng.uniform(-3, 3, args.points).astype(np.complex128)
    a = rng.normal(size=(9, 9))
    sigma = np.array([1, 2, 3, 4], dtype=np.int64)
    ns = np.arange(10, dtype=np.int64)
    xs = x[:2000].copy()

    cases = [
        ("horner2d 9x9", lambda: kernels.horner2d_jit(a, x, y), lambda: kernels._horner2d_numpy(a, x, y)),
        (f"hermite_functions n<={args.nmax}",
         lambda: kernels.hermite_functions_jit(x, args.nmax),
         lambda: kernels._hermite_functions_numpy(x, args.nmax)),
        ("wronskian_ratios {1,2,3,4}",
         lambda: kernels.wronskian_ratios_jit(xs, sigma, ns),
         lambda: kernels._wronskian_ratios_numpy(xs, sigma, ns)),
    ]
    print(f"{'kernel':32s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, fast, slow in cases:
        assert np.allclose(fast(), slow(), rtol=1e-10, atol=1e-12), name
        tf, ts = best_time(fast, args.repeat), best_time(slow, args.repeat)
        print(f"{name:32s} {tf * 1e3:11.3f} {ts * 1e3:11.3f} {ts / tf:8.2f}")


if __name__ == "__main__":
    main()
