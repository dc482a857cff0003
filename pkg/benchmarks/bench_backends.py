"""Compare the compiled and pure-Python dual-number backends.

Times scalar micro-kernels (a fixed expression in Dual6 and NestedDual6)
and whole Hessian paths on the default benchmark problem.

    python3 benchmarks/bench_backends.py [--repeats N] [--json]
"""

import argparse
import json
import statistics
import time

from se3ad import scalars as sc
from se3ad.bench import BenchConfig, compare_backends


def _kernel(x, y):
    # mix of ring ops, division and elementary functions
    z = x * y + x / (y + 3.0)
    return (z.sin() * z.cos() + (z * z + 1.0).sqrt()) * x


def time_kernel(impl, nested, n=2000, repeats=5):
    if nested:
        x = impl.NestedDual6(impl.Dual6(0.3, [1, 0, 0, 0, 0, 0]), [impl.Dual6(1.0)] + [impl.Dual6(0.0)] * 5)
        y = impl.NestedDual6(impl.Dual6(0.7, [0, 1, 0, 0, 0, 0]), [impl.Dual6(0.0), impl.Dual6(1.0)] + [impl.Dual6(0.0)] * 4)
    else:
        x = impl.Dual6(0.3, [1, 0, 0, 0, 0, 0])
        y = impl.Dual6(0.7, [0, 1, 0, 0, 0, 0])
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(n):
            _kernel(x, y)
        times.append((time.perf_counter() - t0) / n)
    return statistics.median(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--json", action="store_true", help="print raw JSON")
    args = p.parse_args(argv)

    kernels = {
        name: {
            "dual6": time_kernel(impl, False, repeats=args.repeats),
            "nested": time_kernel(impl, True, repeats=args.repeats),
        }
        for name, impl in sc.BACKENDS.items()
    }
    rows = compare_backends(BenchConfig(repeats=max(3, args.repeats)), rows=(2, 5, 7))
    result = {"default_backend": sc.BACKEND, "kernel_seconds": kernels, **rows}
    if args.json:
        print(json.dumps(result, indent=2))
        return 0

    names = list(sc.BACKENDS)
    print(f"default backend: {sc.BACKEND}")
    print(f"{'':28}" + "".join(f"{n:>12}" for n in names))
    for k in ("dual6", "nested"):
        print(f"{'kernel ' + k + ' (us)':28}" + "".join(f"{kernels[n][k] * 1e6:12.2f}" for n in names))
    for r in (2, 5, 7):
        print(f"{'row ' + str(r) + ' Hessian (ms)':28}" + "".join(f"{rows['times'][n][r] * 1e3:12.3f}" for n in names))
    if "python" in kernels and "cython" in kernels:
        ratio = rows["times"]["python"][7] / rows["times"]["cython"][7]
        print(f"row 7 speedup of the compiled backend: {ratio:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
