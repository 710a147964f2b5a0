"""Sieving, multiplicative sequence construction, and long-sum machinery.

All sequences are dense complex arrays indexed 0..n_max with slot 0 unused
(values[0] = 0, values[1] = 1) and are frozen after construction.  Long
sums run compensated and strictly left to right so reports are
deterministic and reproducible bit for bit.

Memory: the SPF table costs 4 bytes/entry and a sequence 16 bytes/entry,
so the documented sieve ceiling n = 10**8 needs ~0.4 GB for the table and
~1.6 GB per materialized sequence.
"""

from __future__ import annotations

import io
import json
import math
import struct
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .backend import kernels
from .specs import MODE_CM, MODE_PP, InvalidSpecError, PrimeValueSpec

SIEVE_LIMIT = 10**8

_CACHE_MAGIC = b"CMO1"


@dataclass(frozen=True)
class PrimeTable:
    """SPF table and prime list up to ``limit``; spf(p) = p iff p prime."""

    limit: int
    spf: np.ndarray     # uint32, length limit+1, spf[0] = spf[1] = 0
    primes: np.ndarray  # int64, ascending


@dataclass(frozen=True)
class CMSequence:
    """Completely multiplicative values f(1..n_max); f(ab) = f(a) f(b)."""

    n_max: int
    values: np.ndarray  # complex128, length n_max+1
    spec: PrimeValueSpec


@dataclass(frozen=True)
class MultSequence:
    """Multiplicative values; f(ab) = f(a) f(b) for coprime a, b."""

    n_max: int
    values: np.ndarray
    spec: PrimeValueSpec


@dataclass(frozen=True)
class SumReport:
    """Checkpointed partial sums of one sequence under one weight."""

    checkpoints: Tuple[int, ...]
    sums: Tuple[complex, ...]
    weight: str           # "1" or "1/n"
    compensated: bool = True
    spec: Optional[PrimeValueSpec] = None

    def to_json_dict(self) -> dict:
        return {
            "weight": self.weight,
            "compensated": self.compensated,
            "spec": self.spec.to_json_dict() if self.spec else None,
            "rows": [
                {"x": x, "sum": [s.real, s.imag]}
                for x, s in zip(self.checkpoints, self.sums)
            ],
        }

    def write_csv(self, fh: io.TextIOBase) -> None:
        fh.write("x,sum_re,sum_im\n")
        for x, s in zip(self.checkpoints, self.sums):
            fh.write(f"{x},{s.real!r},{s.imag!r}\n")


def sieve_primes(n: int) -> PrimeTable:
    """Linear smallest-prime-factor sieve up to n (2 <= n <= 10**8)."""
    if n < 2:
        raise ValueError(f"sieve limit must be >= 2, got {n}")
    if n > SIEVE_LIMIT:
        raise ValueError(f"sieve limit {n} exceeds the supported {SIEVE_LIMIT}")
    spf, primes = kernels.spf_sieve(int(n))
    spf.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(limit=int(n), spf=spf, primes=primes)


def _prime_value_map(spec: PrimeValueSpec, table: PrimeTable, n: int) -> np.ndarray:
    fmap = np.zeros(n + 1, dtype=np.complex128)
    primes = table.primes[table.primes <= n]
    fmap[primes] = spec.values_at_primes(primes)
    return fmap


def _prime_power_value_map(spec: PrimeValueSpec, table: PrimeTable, n: int) -> np.ndarray:
    fmap = np.zeros(n + 1, dtype=np.complex128)
    primes = table.primes[table.primes <= n]
    k = 1
    while True:
        if k == 1:
            sel = primes
        else:
            root = int(round(n ** (1.0 / k))) + 1
            sel = primes[primes <= root]
            sel = sel[sel**k <= n]
        if len(sel) == 0:
            break
        fmap[sel**k] = spec.values_at_prime_powers(sel, k)
        k += 1
    return fmap


def _ensure_table(table: Optional[PrimeTable], n: int) -> PrimeTable:
    if table is not None:
        if table.limit < n:
            raise ValueError(f"prime table limit {table.limit} < {n}")
        return table
    return sieve_primes(max(n, 2))


def build_cm_sequence(spec: PrimeValueSpec, n: int,
                      table: Optional[PrimeTable] = None) -> CMSequence:
    """Materialize f(1..n) for a completely multiplicative rule."""
    if spec.mode != MODE_CM:
        raise InvalidSpecError("build_cm_sequence needs a completely "
                               "multiplicative spec; use build_mult_sequence")
    table = _ensure_table(table, n)
    fmap = _prime_value_map(spec, table, n)
    values = kernels.cm_fill(table.spf[: n + 1], fmap)
    values.setflags(write=False)
    return CMSequence(n_max=int(n), values=values, spec=spec)


def build_mult_sequence(spec: PrimeValueSpec, n: int,
                        table: Optional[PrimeTable] = None) -> MultSequence:
    """Materialize f(1..n) from prime-power values."""
    if spec.mode != MODE_PP:
        raise InvalidSpecError("build_mult_sequence needs a prime-power spec; "
                               "use spec.tilde() or PrimeValueSpec.mobius()")
    table = _ensure_table(table, n)
    fmap = _prime_power_value_map(spec, table, n)
    values = kernels.mult_fill(table.spf[: n + 1], fmap)
    values.setflags(write=False)
    return MultSequence(n_max=int(n), values=values, spec=spec)


AnySequence = Union[CMSequence, MultSequence]


def _values_of(seq) -> np.ndarray:
    if isinstance(seq, (CMSequence, MultSequence)):
        return seq.values
    return np.ascontiguousarray(seq, dtype=np.complex128)


def dirichlet_convolve(a, b, n: Optional[int] = None) -> np.ndarray:
    """(a*b)[m] = sum_{d|m} a[d] b[m/d] for m <= n, multiples loop."""
    av, bv = _values_of(a), _values_of(b)
    if n is None:
        n = min(len(av), len(bv)) - 1
    if len(av) - 1 < n or len(bv) - 1 < n:
        raise ValueError(f"sequences shorter than n={n}")
    out = kernels.convolve(av[: n + 1], bv[: n + 1])
    return out


def delta_one(n: int) -> np.ndarray:
    """Convolution identity: 1 at index 1, else 0."""
    out = np.zeros(n + 1, dtype=np.complex128)
    if n >= 1:
        out[1] = 1.0
    return out


def ones_sequence(n: int) -> np.ndarray:
    """The constant function 1 as a dense array (index 0 unused)."""
    out = np.ones(n + 1, dtype=np.complex128)
    out[0] = 0.0
    return out


def _checkpoint_array(checkpoints: Iterable, n_max: int) -> np.ndarray:
    cps = np.array([int(math.floor(float(x))) for x in checkpoints], dtype=np.int64)
    if len(cps) == 0:
        raise ValueError("need at least one checkpoint")
    if (np.diff(cps) < 0).any():
        raise ValueError("checkpoints must be ascending")
    if cps[-1] > n_max:
        raise ValueError(f"checkpoint {cps[-1]} beyond sequence length {n_max}")
    if cps[0] < 0:
        raise ValueError("checkpoints must be >= 0")
    return cps


def partial_sums(seq, weight: str, checkpoints: Iterable) -> SumReport:
    """Compensated partial sums at each checkpoint.

    weight "1" sums f(n); weight "1/n" sums f(n)/n.
    """
    if weight not in ("1", "1/n"):
        raise ValueError('weight must be "1" or "1/n"')
    values = _values_of(seq)
    cps = _checkpoint_array(checkpoints, len(values) - 1)
    s = 0.0 if weight == "1" else 1.0
    sums = kernels.power_sums(values, complex(s), cps)
    spec = seq.spec if isinstance(seq, (CMSequence, MultSequence)) else None
    return SumReport(checkpoints=tuple(int(c) for c in cps),
                     sums=tuple(complex(z) for z in sums),
                     weight=weight, compensated=True, spec=spec)


def power_weighted_sums(seq, s: complex, checkpoints: Iterable) -> np.ndarray:
    """sum_{n<=x} f(n) n^{-s} at each checkpoint, compensated."""
    values = _values_of(seq)
    cps = _checkpoint_array(checkpoints, len(values) - 1)
    return kernels.power_sums(values, complex(s), cps)


def mobius_sequence(n: int, table: Optional[PrimeTable] = None) -> MultSequence:
    return build_mult_sequence(PrimeValueSpec.mobius(), n, table)


def twisted_mobius_sum(x: float, tau: float,
                       table: Optional[PrimeTable] = None) -> complex:
    """sum_{n<=x} mu(n) / n^{1+i tau}.

    For tau != 0 this approaches 1/zeta(1+i tau) as x grows, with an
    O(1/log x) error; at tau = 0 it is the harmonic Möbius sum.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if x < 2:
        return 1.0 + 0.0j  # single term n = 1
    n = int(math.floor(x))
    seq = mobius_sequence(n, table)
    out = kernels.power_sums(seq.values, complex(1.0, float(tau)),
                             np.array([n], dtype=np.int64))
    return complex(out[0])


# ----------------------------------------------------------------------
# binary sequence cache format
#
# magic "CMO1" | n_max as u64 LE | spec-JSON byte length as u64 LE |
# canonical spec JSON (utf-8) | values for n = 1..n_max as little-endian
# float64 (re, im) pairs.

def save_sequence(seq: AnySequence, path) -> None:
    blob = seq.spec.canonical_json().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<Q", seq.n_max))
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(seq.values[1:], dtype="<c16").tobytes())


def load_sequence(path) -> AnySequence:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CACHE_MAGIC:
            raise ValueError(f"bad cache magic {magic!r}")
        n_max = struct.unpack("<Q", fh.read(8))[0]
        blen = struct.unpack("<Q", fh.read(8))[0]
        spec = PrimeValueSpec.from_json_dict(json.loads(fh.read(blen)))
        raw = fh.read(16 * n_max)
        if len(raw) != 16 * n_max:
            raise ValueError("truncated sequence cache file")
        values = np.empty(n_max + 1, dtype=np.complex128)
        values[0] = 0.0
        values[1:] = np.frombuffer(raw, dtype="<c16")
        values.setflags(write=False)
    cls = CMSequence if spec.mode == MODE_CM else MultSequence
    return cls(n_max=int(n_max), values=values, spec=spec)
