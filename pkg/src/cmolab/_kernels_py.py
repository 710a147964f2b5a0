"""Pure-numpy implementations of the hot kernels.

This module mirrors the API of the compiled extension ``cmolab._kernels``
and is selected at import time when the extension is unavailable (see
``cmolab.backend``).  The sequence fills use pointer-doubling over the
smallest-prime-factor parent chains so they stay vectorized; the compiled
twin does the same work with plain sequential loops and is faster by a
small constant factor (see ``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import numpy as np

#: Chunk length for compensated chunked summation.  Fixed so results are
#: deterministic and reproducible across runs.
_SUM_CHUNK = 1 << 16


def spf_sieve(n: int):
    """Smallest-prime-factor table and prime list for 2..n.

    Returns ``(spf, primes)`` where ``spf`` is uint32 of length n+1 with
    spf[0] = spf[1] = 0 and spf[p] = p exactly at primes.  Memory: 4 bytes
    per entry, i.e. ~400 MB at the documented ceiling n = 10**8.
    """
    if n < 2:
        raise ValueError("sieve limit must be >= 2")
    spf = np.zeros(n + 1, dtype=np.uint32)
    for i in range(2, int(n**0.5) + 1):
        if spf[i] == 0:
            sl = spf[i * i:: i]
            sl[sl == 0] = i
    # everything still unmarked above 1 is prime
    idx = np.arange(n + 1, dtype=np.uint32)
    unmarked = (spf == 0) & (idx >= 2)
    spf[unmarked] = idx[unmarked]
    primes = (np.flatnonzero(spf[2:] == idx[2:]) + 2).astype(np.int64)
    return spf, primes


def _parent_dtype(n: int):
    return np.int32 if n <= np.iinfo(np.int32).max else np.int64


def cm_fill(spf: np.ndarray, fmap: np.ndarray) -> np.ndarray:
    """Completely multiplicative fill: values[n] = prod f(p) over the
    full prime factorization of n (with multiplicity).

    ``fmap`` is a dense complex array with f(p) stored at prime indices.
    Uses pointer doubling on the chain n -> n // spf(n), which reaches 1
    in at most log2(n) steps.
    """
    n = len(spf) - 1
    dt = _parent_dtype(n)
    parent = np.ones(n + 1, dtype=dt)
    idx = np.arange(2, n + 1, dtype=dt)
    parent[2:] = idx // spf[2:].astype(dt)
    acc = np.ones(n + 1, dtype=np.complex128)
    acc[2:] = fmap[spf[2:]]
    while (parent > 1).any():
        acc *= acc[parent]
        parent = parent[parent]
    acc[0] = 0.0
    return acc


def mult_fill(spf: np.ndarray, fmap: np.ndarray) -> np.ndarray:
    """Multiplicative fill from prime-power values: values[n] = prod f(p^k)
    over the prime-power decomposition of n.

    ``fmap`` holds f(p^k) at every prime-power index p^k <= n.  Two
    pointer-doubling passes: first a segmented product computing the
    spf-power part pp(n) = p^{v_p(n)}, then a plain product of f(pp) over
    the chain n -> n // pp(n) (length omega(n)).
    """
    n = len(spf) - 1
    dt = _parent_dtype(n)
    idx = np.arange(n + 1, dtype=dt)
    parent = np.ones(n + 1, dtype=dt)
    parent[2:] = idx[2:] // spf[2:].astype(dt)

    # segmented doubling: pp[n] = spf(n)^{v_spf(n)}
    pp = np.ones(n + 1, dtype=np.int64)
    pp[2:] = spf[2:]
    seg = np.zeros(n + 1, dtype=bool)
    seg[2:] = spf[parent[2:]] == spf[2:]
    par = parent.copy()
    while seg.any():
        step = np.where(seg, pp[par], 1)
        pp *= step
        seg &= seg[par]
        par = par[par]

    # product of f(pp) over the squarefree-kernel chain
    parent2 = np.ones(n + 1, dtype=dt)
    parent2[2:] = idx[2:] // pp[2:].astype(dt)
    acc = np.ones(n + 1, dtype=np.complex128)
    acc[2:] = fmap[pp[2:]]
    while (parent2 > 1).any():
        acc *= acc[parent2]
        parent2 = parent2[parent2]
    acc[0] = 0.0
    return acc


def _neumaier_add(s: complex, c: complex, x: complex):
    t = s + x
    if abs(s.real) >= abs(x.real):
        cr = (s.real - t.real) + x.real
    else:
        cr = (x.real - t.real) + s.real
    if abs(s.imag) >= abs(x.imag):
        ci = (s.imag - t.imag) + x.imag
    else:
        ci = (x.imag - t.imag) + s.imag
    return t, c + complex(cr, ci)


def power_sums(values: np.ndarray, s: complex, checkpoints: np.ndarray) -> np.ndarray:
    """Compensated partial sums sum_{n<=x} values[n] * n^{-s} at each
    checkpoint x (ascending).  values is indexed 0..N with slot 0 ignored.

    Chunked left-to-right: each fixed-size chunk is reduced with numpy's
    pairwise sum, chunk totals are combined with Neumaier compensation,
    so the result is deterministic and accurate to ~1e-15 relative.
    """
    s = complex(s)
    cps = np.asarray(checkpoints, dtype=np.int64)
    out = np.empty(len(cps), dtype=np.complex128)
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    pos = 1  # next unsummed index
    for i, cp in enumerate(cps):
        end = int(cp)
        while pos <= end:
            hi = min(pos + _SUM_CHUNK, end + 1)
            chunk = values[pos:hi]
            if s != 0:
                ns = np.arange(pos, hi, dtype=np.float64)
                chunk = chunk * np.exp(-s * np.log(ns))
            total, comp = _neumaier_add(total, comp, complex(chunk.sum()))
            pos = hi
        out[i] = total + comp
    return out


def convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dirichlet convolution (a*b)[n] = sum_{d|n} a[d] b[n/d] for
    n <= min(len(a), len(b)) - 1, via the O(N log N) multiples loop."""
    n = min(len(a), len(b)) - 1
    out = np.zeros(n + 1, dtype=np.complex128)
    for d in range(1, n + 1):
        ad = a[d]
        if ad != 0:
            k = n // d
            out[d:: d] += ad * b[1: k + 1]
    return out
