# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: linear SPF sieve, multiplicative sequence fills,
compensated power-weighted partial sums, Dirichlet convolution.

API mirrors ``cmolab._kernels_py`` exactly; ``cmolab.backend`` picks one
of the two at import time.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, exp, cos, sin

cnp.import_array()


def spf_sieve(n):
    """Linear (Euler) sieve: each composite is struck exactly once, by its
    smallest prime factor.  Returns (spf uint32[n+1], primes int64)."""
    if n < 2:
        raise ValueError("sieve limit must be >= 2")
    cdef long long N = n
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] spf_arr = np.zeros(N + 1, dtype=np.uint32)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] primes_arr = np.empty(N // 2 + 1, dtype=np.int64)
    cdef unsigned int[::1] spf = spf_arr
    cdef long long[::1] primes = primes_arr
    cdef long long i, j, p, np_count = 0
    for i in range(2, N + 1):
        if spf[i] == 0:
            spf[i] = <unsigned int> i
            primes[np_count] = i
            np_count += 1
        for j in range(np_count):
            p = primes[j]
            if p > spf[i] or i * p > N:
                break
            spf[i * p] = <unsigned int> p
    return spf_arr, primes_arr[:np_count].copy()


def cm_fill(spf, fmap):
    """values[n] = prod f(p)^{v_p(n)} via the one-pass recurrence
    values[n] = values[n / spf(n)] * fmap[spf(n)]."""
    cdef const unsigned int[::1] spf_v = spf
    cdef const double complex[::1] fmap_v = fmap
    cdef long long N = spf_v.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(N + 1, dtype=np.complex128)
    cdef double complex[::1] vals = out
    cdef long long i
    vals[0] = 0
    if N >= 1:
        vals[1] = 1
    for i in range(2, N + 1):
        vals[i] = vals[i / spf_v[i]] * fmap_v[spf_v[i]]
    return out


def mult_fill(spf, fmap):
    """values[n] = prod f(p^{v_p(n)}) with fmap holding f(p^k) at
    prime-power indices; pp tracks the spf-power part of each n."""
    cdef const unsigned int[::1] spf_v = spf
    cdef const double complex[::1] fmap_v = fmap
    cdef long long N = spf_v.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(N + 1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pp_arr = np.zeros(N + 1, dtype=np.int64)
    cdef double complex[::1] vals = out
    cdef long long[::1] pp = pp_arr
    cdef long long i, p, q
    vals[0] = 0
    if N >= 1:
        vals[1] = 1
        pp[1] = 1
    for i in range(2, N + 1):
        p = spf_v[i]
        q = i / p
        if spf_v[q] == p:
            pp[i] = pp[q] * p
        else:
            pp[i] = p
        vals[i] = vals[i / pp[i]] * fmap_v[pp[i]]
    return out


cdef inline double _neum(double s, double x, double t) noexcept nogil:
    # compensation term of one Neumaier step s + x = t
    if fabs(s) >= fabs(x):
        return (s - t) + x
    return (x - t) + s


def power_sums(values, s, checkpoints):
    """Neumaier-compensated sum_{n<=x} values[n] * n^{-s}, strictly left to
    right, reported at each ascending checkpoint x."""
    cdef const double complex[::1] vals = values
    cdef const long long[::1] cps = checkpoints
    cdef long long N = vals.shape[0] - 1
    cdef double complex sc = s
    cdef double sr = sc.real, si = sc.imag
    cdef bint unweighted = (sr == 0.0 and si == 0.0)
    cdef bint harmonic = (sr == 1.0 and si == 0.0)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(cps.shape[0], dtype=np.complex128)
    cdef double tot_r = 0.0, tot_i = 0.0, c_r = 0.0, c_i = 0.0
    cdef double xr, xi, t, ln, w, ph, cw
    cdef double complex v
    cdef long long n = 1, k
    for k in range(cps.shape[0]):
        while n <= cps[k] and n <= N:
            v = vals[n]
            if unweighted:
                xr = v.real
                xi = v.imag
            elif harmonic:
                xr = v.real / n
                xi = v.imag / n
            else:
                ln = log(<double> n)
                w = exp(-sr * ln)
                ph = -si * ln
                cw = cos(ph)
                t = sin(ph)
                xr = w * (v.real * cw - v.imag * t)
                xi = w * (v.real * t + v.imag * cw)
            t = tot_r + xr
            c_r += _neum(tot_r, xr, t)
            tot_r = t
            t = tot_i + xi
            c_i += _neum(tot_i, xi, t)
            tot_i = t
            n += 1
        out[k] = (tot_r + c_r) + 1j * (tot_i + c_i)
    return out


def convolve(a, b):
    """Dirichlet convolution via the multiples loop, O(N log N)."""
    cdef const double complex[::1] av = a
    cdef const double complex[::1] bv = b
    cdef long long N = min(av.shape[0], bv.shape[0]) - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(N + 1, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef long long d, k
    cdef double complex ad
    for d in range(1, N + 1):
        ad = av[d]
        if ad != 0:
            for k in range(1, N // d + 1):
                ov[d * k] = ov[d * k] + ad * bv[k]
    return out
