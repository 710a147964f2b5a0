#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--n 10000000] [--repeat 3]

Times the four hot kernels (SPF sieve, completely multiplicative fill,
prime-power fill, compensated power-weighted sums) on both backends and
prints a table with the speedup.  The Dirichlet convolution is timed at
n/100 since it is O(N log N) with a bigger constant.
"""

import argparse
import time

import numpy as np

import cmolab._kernels_py as kpy

try:
    import cmolab._kernels as kc
except ImportError:
    kc = None


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10**7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    n = args.n

    if kc is None:
        print("compiled extension not built; run "
              "`pip install -e . --no-build-isolation` first")
        return 1

    spf, primes = kc.spf_sieve(n)
    rng = np.random.default_rng(0)
    fmap = np.zeros(n + 1, dtype=np.complex128)
    fmap[primes] = np.exp(2j * np.pi * rng.random(len(primes)))
    fmap_mu = np.zeros(n + 1, dtype=np.complex128)
    fmap_mu[primes] = -1.0
    values = kc.cm_fill(spf, fmap)
    cps = np.array([n // 100, n // 10, n], dtype=np.int64)
    nc = n // 100
    a = rng.standard_normal(nc + 1) + 1j * rng.standard_normal(nc + 1)
    b = rng.standard_normal(nc + 1) + 1j * rng.standard_normal(nc + 1)

    rows = [
        ("spf_sieve(n)", (kc.spf_sieve, n), (kpy.spf_sieve, n)),
        ("cm_fill", (kc.cm_fill, spf, fmap), (kpy.cm_fill, spf, fmap)),
        ("mult_fill (mobius)", (kc.mult_fill, spf, fmap_mu),
         (kpy.mult_fill, spf, fmap_mu)),
        ("power_sums s=0", (kc.power_sums, values, 0j, cps),
         (kpy.power_sums, values, 0j, cps)),
        ("power_sums s=1+i", (kc.power_sums, values, 1 + 1j, cps),
         (kpy.power_sums, values, 1 + 1j, cps)),
        ("convolve (n/100)", (kc.convolve, a, b), (kpy.convolve, a, b)),
    ]

    print(f"n = {n:,}  (best of {args.repeat})")
    print(f"{'kernel':<22}{'compiled':>12}{'numpy':>12}{'speedup':>10}")
    for name, (cf, *cargs), (pf, *pargs) in rows:
        tc, out_c = best_of(args.repeat, cf, *cargs)
        tp, out_p = best_of(args.repeat, pf, *pargs)
        if isinstance(out_c, tuple):
            agree = all(np.array_equal(x, y) for x, y in zip(out_c, out_p))
        else:
            agree = np.allclose(out_c, out_p, rtol=1e-12, atol=1e-12)
        flag = "" if agree else "  MISMATCH"
        print(f"{name:<22}{tc:>10.3f}s{tp:>10.3f}s{tp / tc:>9.1f}x{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
