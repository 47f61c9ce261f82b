"""Compare the compiled and numpy enumeration kernels.

    python benchmarks/bench_kernels.py [--tmax 1e6] [--repeat 3]
"""

import argparse
import time

import numpy as np

from apollogap.kernels import backends
from apollogap.packing import DEFAULT_ROOT, root_circles


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tmax", type=float, default=1e6)
    ap.add_argument("--circles-tmax", type=float, default=1e5)
    ap.add_argument("--mu", type=float, default=3.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = backends()
    rc = root_circles(DEFAULT_ROOT).as_array()
    cases = {
        f"curvatures T={args.tmax:g}": lambda m: m.descartes_curvatures(np.array(DEFAULT_ROOT), int(args.tmax)),
        f"circles T={args.circles_tmax:g}": lambda m: m.descartes_circles(rc, int(args.circles_tmax)),
        f"hecke mu={args.mu:g}": lambda m: m.hecke_orbit_points(args.mu, 12, 500, 2.0 ** -14 / 64),
    }
    print(f"{'kernel':<24}{'backend':<10}{'seconds':>10}{'items':>12}")
    for name, fn in cases.items():
        ref = None
        for bname, mod in sorted(impls.items()):
            t, out = best_of(lambda: fn(mod), args.repeat)
            print(f"{name:<24}{bname:<10}{t:>10.3f}{len(out):>12}")
            key = np.sort(out, axis=0) if out.ndim == 1 else out[np.lexsort(out.T[::-1])]
            if ref is not None and not np.array_equal(ref, key):
                raise SystemExit(f"backends disagree on {name}")
            ref = key


if __name__ == "__main__":
    main()
