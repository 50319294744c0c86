"""Numba kernels against the numpy fallback.

Times the three series kernels on random F_p vectors, then one end-to-end
workload (ramification numbers up to level 2 at p=7) in a subprocess per
backend, since the backend is fixed at import time.

    python3 benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from wildseries import kernels

END_TO_END = """
import json, time
from wildseries import kernels
from wildseries.acceptance import Context, criterion_vs_direct
kernels.warmup()
t = time.perf_counter()
ok, _ = criterion_vs_direct(Context())
print(json.dumps({"backend": kernels.ACTIVE.name, "ok": ok, "seconds": time.perf_counter() - t}))
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_kernels(sizes, p, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        a = rng.integers(0, p, size=n).astype(np.int64)
        b = rng.integers(0, p, size=n).astype(np.int64)
        g = b.copy()
        g[0] = 0
        u = a.copy()
        u[0] = 1
        short = a[: min(n, 16)]
        cases = {
            "mul_trunc": lambda k: k.mul_trunc(a, b, n, p),
            "compose": lambda k: k.compose(short, g, n, p),
            "inverse": lambda k: k.inverse(u, n, p),
        }
        for name, call in cases.items():
            assert np.array_equal(call(kernels.NUMBA), call(kernels.NUMPY))
            t_nb = best_of(lambda: call(kernels.NUMBA), repeat)
            t_np = best_of(lambda: call(kernels.NUMPY), repeat)
            rows.append((name, n, t_nb, t_np))
    return rows


def end_to_end(flag):
    env = dict(os.environ)
    env.pop("WILDSERIES_NO_NUMBA", None)
    if flag:
        env["WILDSERIES_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()

    kernels.NUMBA.mul_trunc(np.zeros(2, np.int64), np.zeros(2, np.int64), 2, args.p)
    kernels.warmup()
    print(f"{'kernel':<10} {'n':>6} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, n, t_nb, t_np in bench_kernels(args.sizes, args.p, args.repeat):
        print(f"{name:<10} {n:>6} {t_nb * 1e3:>10.3f} {t_np * 1e3:>10.3f} {t_np / t_nb:>8.1f}")

    if not args.skip_end_to_end:
        print("\nresit criterion vs direct ramification, p = 3, 5, 7:")
        for flag in (False, True):
            r = end_to_end(flag)
            print(f"  {r['backend']:<6} {r['seconds']:.2f} s  ok={r['ok']}")


if __name__ == "__main__":
    main()
