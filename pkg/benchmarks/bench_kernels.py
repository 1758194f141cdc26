"""Compare the compiled kernels with their plain python/numpy versions.

Run: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from torus_ends import _kernels as K


def best_of(f, *args, repeat=5):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        f(*args)
        out.append(time.perf_counter() - t0)
    return min(out)


def main():
    if not K.USE_NUMBA:
        print("numba disabled (TORUS_ENDS_NO_NUMBA set); only the fallback is timed")
    K.warmup()
    rng = np.random.default_rng(0)
    n = 1 << 16
    xs = rng.normal(size=n) + 1j * rng.normal(size=n)
    ys = rng.normal(size=n) + 1j * rng.normal(size=n)
    zs = rng.normal(size=n) + 1j * rng.normal(size=n)
    rows = []
    rows.append(("level_sweep 65536 edges", best_of(K.level_sweep, xs, ys, zs), best_of(K.level_sweep_numpy, xs, ys, zs)))
    for name, f, args in [
        ("recurrence 100000 steps", K.recurrence, (1.3 + 0j, 3.0 + 0j, 2.5 + 0j, 100000)),
        ("scan_ray 100000 steps", K.scan_ray, (1.3 + 0j, 3.0 + 0j, 2.5 + 0j, 100000, 0.0, 10.0 + 0j, 1e-9)),
        ("walk_to_sign_change 100000", K.walk_to_sign_change, (2.0, 1.0, 1.0, 100000, 1e-300)),
    ]:
        py = getattr(f, "py_func", f)
        rows.append((name, best_of(f, *args), best_of(py, *args, repeat=2)))
    print(f"{'kernel':32s} {'compiled s':>12s} {'fallback s':>12s} {'speedup':>8s}")
    for name, a, b in rows:
        print(f"{name:32s} {a:12.6f} {b:12.6f} {b / a:8.1f}")


if __name__ == "__main__":
    main()
