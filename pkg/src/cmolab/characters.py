"""Dirichlet characters mod q as dense value tables.

The unit group (Z/qZ)* is split by CRT into cyclic factors with explicit
generators: the smallest primitive root for odd prime powers, and {-1, 5}
for powers of two (just {-1} for q-part 4).  Characters are enumerated
lexicographically in their exponent tuples over these factors, most
significant factor first, so index 0 is always the principal character
and indices are stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True)
class DirichletCharacter:
    q: int
    index: int
    values: np.ndarray  # complex128, length q; 0 on non-coprime residues
    principal: bool

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.q])

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "index": self.index,
            "values": [[z.real, z.imag] for z in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "DirichletCharacter":
        vals = np.array([complex(re, im) for re, im in d["values"]],
                        dtype=np.complex128)
        vals.setflags(write=False)
        chi = cls(q=int(d["q"]), index=int(d["index"]), values=vals,
                  principal=int(d["index"]) == 0)
        return chi


def _factorize(q: int) -> List[Tuple[int, int]]:
    out = []
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p == 0:
            a = 0
            while q % p == 0:
                q //= p
                a += 1
            out.append((p, a))
    if q > 1:
        out.append((q, 1))
    return out


def _primitive_root_mod_pp(p: int, a: int) -> int:
    """Smallest primitive root mod p, lifted to p^a."""
    phi = p - 1
    facs = [f for f, _ in _factorize(phi)]
    g = 2
    while True:
        if all(pow(g, phi // f, p) != 1 for f in facs):
            break
        g += 1
    if a >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@lru_cache(maxsize=128)
def _unit_group(q: int):
    """Cyclic decomposition of (Z/qZ)*.

    Returns (orders, dlogs) where orders[j] is the order of the j-th
    cyclic factor and dlogs[j] is an int64 array over residues 0..q-1
    giving the exponent of that factor (-1 on non-coprime residues).
    """
    if q == 1:
        return (), ()
    orders: List[int] = []
    factor_tables = []  # (modulus, local dlog arrays per factor)
    for p, a in _factorize(q):
        m = p ** a
        if p == 2:
            if a == 1:
                continue
            if a == 2:
                tbl = -np.ones(m, dtype=np.int64)
                tbl[1] = 0
                tbl[3] = 1
                orders.append(2)
                factor_tables.append((m, [tbl]))
            else:
                d5 = 1 << (a - 2)
                tbl_sign = -np.ones(m, dtype=np.int64)
                tbl_five = -np.ones(m, dtype=np.int64)
                for eps in (0, 1):
                    x = (m - 1) if eps else 1
                    for k in range(d5):
                        tbl_sign[x] = eps
                        tbl_five[x] = k
                        x = (x * 5) % m
                orders.extend([2, d5])
                factor_tables.append((m, [tbl_sign, tbl_five]))
        else:
            d = (p - 1) * p ** (a - 1)
            g = _primitive_root_mod_pp(p, a)
            tbl = -np.ones(m, dtype=np.int64)
            x = 1
            for k in range(d):
                tbl[x] = k
                x = (x * g) % m
            orders.append(d)
            factor_tables.append((m, [tbl]))

    res = np.arange(q, dtype=np.int64)
    dlogs = []
    for m, tbls in factor_tables:
        r = res % m
        for tbl in tbls:
            dlogs.append(tbl[r])
    return tuple(orders), tuple(dlogs)


def euler_phi(q: int) -> int:
    phi = 1
    for p, a in _factorize(q):
        phi *= (p - 1) * p ** (a - 1)
    return phi


def _index_to_exponents(index: int, orders) -> List[int]:
    exps = []
    for d in reversed(orders):
        exps.append(index % d)
        index //= d
    if index:
        raise ValueError("character index out of range")
    return list(reversed(exps))


@lru_cache(maxsize=512)
def character(q: int, index: int) -> DirichletCharacter:
    """The character mod q at the given canonical index (0 = principal)."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    orders, dlogs = _unit_group(q)
    phi = 1
    for d in orders:
        phi *= d
    if not 0 <= index < max(phi, 1):
        raise ValueError(f"character index {index} out of range for q={q} "
                         f"(phi={phi})")
    if q == 1:
        vals = np.ones(1, dtype=np.complex128)
        vals.setflags(write=False)
        return DirichletCharacter(q=1, index=0, values=vals, principal=True)

    exps = _index_to_exponents(index, orders)
    coprime = np.array([gcd(r, q) == 1 for r in range(q)])
    phase = np.zeros(q, dtype=np.float64)
    for t, d, dl in zip(exps, orders, dlogs):
        if t:
            phase[coprime] += t * dl[coprime] / d
    vals = np.where(coprime, np.exp(2j * np.pi * phase), 0.0 + 0.0j)
    vals.setflags(write=False)
    return DirichletCharacter(q=q, index=index, values=vals,
                              principal=index == 0)


def enumerate_characters(q: int) -> List[DirichletCharacter]:
    """All phi(q) characters mod q in canonical index order."""
    return [character(q, i) for i in range(euler_phi(q))]


def char_value(chi: DirichletCharacter, n: int) -> complex:
    """chi(n) for any n >= 1, by periodicity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return complex(chi.values[n % chi.q])


def is_principal(chi: DirichletCharacter) -> bool:
    return chi.principal
