"""Prime-value specifications.

A :class:`PrimeValueSpec` is a serializable rule assigning a complex value
f(p) to every prime (and, in prime-power mode, a value f(p^k) to every
prime power).  A completely multiplicative sequence is determined by the
f(p); a merely multiplicative one by the f(p^k).

Prime-power mode semantics: the ``mobius`` builtin uses mu(p) = -1,
mu(p^k) = 0 for k >= 2; every other kind uses the flat-tower extension
f(p^k) = f(p) for all k >= 1 (the construction that replaces a completely
multiplicative rule by its multiplicative "tilde" companion).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

import numpy as np

MODE_CM = "completely-multiplicative"
MODE_PP = "multiplicative-by-prime-powers"

_BUILTINS = ("liouville", "mobius", "unit")
_KINDS = _BUILTINS + ("constant", "character", "twisted", "random-unit-circle",
                      "table", "perturbed")


class InvalidSpecError(ValueError):
    """Raised for structurally invalid prime-value specifications."""


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def _c2pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _pair2c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass(frozen=True)
class PrimeValueSpec:
    """Rule p -> f(p), optionally (p, k) -> f(p^k).

    Instances are immutable; ``table`` and ``delta`` are stored as sorted
    tuples of (prime, value) pairs so canonical JSON is stable.
    """

    kind: str
    mode: str = MODE_CM
    c: Optional[complex] = None
    q: Optional[int] = None
    index: Optional[int] = None
    rho: Optional[complex] = None
    seed: Optional[int] = None
    table: Optional[Tuple[Tuple[int, complex], ...]] = None
    base: Optional["PrimeValueSpec"] = None
    delta: Optional[Tuple[Tuple[int, complex], ...]] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSpecError(f"unknown spec kind {self.kind!r}")
        if self.mode not in (MODE_CM, MODE_PP):
            raise InvalidSpecError(f"unknown mode {self.mode!r}")
        if self.kind == "mobius" and self.mode != MODE_PP:
            raise InvalidSpecError("mobius is not completely multiplicative; "
                                   "use prime-power mode")
        if self.kind == "constant" and self.c is None:
            raise InvalidSpecError("constant spec needs a value c")
        if self.kind == "character":
            if not (isinstance(self.q, int) and self.q >= 1):
                raise InvalidSpecError("character spec needs a modulus q >= 1")
            if self.index is None or not 0 <= self.index:
                raise InvalidSpecError("character spec needs an index >= 0")
        if self.kind == "twisted":
            if self.base is None or self.rho is None:
                raise InvalidSpecError("twisted spec needs base and rho")
        if self.kind == "random-unit-circle" and self.seed is None:
            raise InvalidSpecError("random-unit-circle spec needs an explicit seed")
        if self.kind == "table" and self.table is None:
            raise InvalidSpecError("table spec needs a prime -> value map")
        if self.kind == "perturbed" and (self.base is None or self.delta is None):
            raise InvalidSpecError("perturbed spec needs base and delta")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def liouville(cls) -> "PrimeValueSpec":
        return cls(kind="liouville")

    @classmethod
    def mobius(cls) -> "PrimeValueSpec":
        return cls(kind="mobius", mode=MODE_PP)

    @classmethod
    def unit(cls) -> "PrimeValueSpec":
        return cls(kind="unit")

    @classmethod
    def constant(cls, c: complex) -> "PrimeValueSpec":
        return cls(kind="constant", c=complex(c))

    @classmethod
    def character(cls, q: int, index: int) -> "PrimeValueSpec":
        return cls(kind="character", q=q, index=index)

    @classmethod
    def twisted(cls, base: "PrimeValueSpec", rho: complex) -> "PrimeValueSpec":
        """f(p) = base(p) * p^{-rho}; with a character base this is the
        Dirichlet-Riemann rule chi(p) p^{-rho}."""
        return cls(kind="twisted", base=base, rho=complex(rho))

    @classmethod
    def twisted_character(cls, q: int, index: int, rho: complex) -> "PrimeValueSpec":
        return cls.twisted(cls.character(q, index), rho)

    @classmethod
    def random_unit_circle(cls, seed: int) -> "PrimeValueSpec":
        """f(p) = exp(2 pi i u_p) with u_p = sm64(sm64(seed) XOR p) / 2^64,
        sm64 the SplitMix64 finalizer: one independent deterministic stream
        per prime, reproducible across runs and platforms."""
        return cls(kind="random-unit-circle", seed=int(seed))

    @classmethod
    def from_table(cls, mapping: Mapping[int, complex]) -> "PrimeValueSpec":
        items = tuple(sorted((int(p), complex(v)) for p, v in mapping.items()))
        return cls(kind="table", table=items)

    @classmethod
    def perturbed(cls, base: "PrimeValueSpec", delta: Mapping[int, complex]) -> "PrimeValueSpec":
        items = tuple(sorted((int(p), complex(v)) for p, v in delta.items()))
        return cls(kind="perturbed", base=base, delta=items)

    def tilde(self) -> "PrimeValueSpec":
        """Prime-power-mode companion with f(p^k) = f(p) for all k >= 1."""
        if self.kind == "mobius":
            raise InvalidSpecError("mobius has prime-power values already")
        return _replace_mode(self, MODE_PP)

    # ------------------------------------------------------------------
    # evaluation

    def values_at_primes(self, primes: np.ndarray) -> np.ndarray:
        """Vectorized f(p) for an int64 array of primes."""
        p = np.asarray(primes, dtype=np.int64)
        if self.kind == "liouville":
            return np.full(p.shape, -1.0 + 0.0j)
        if self.kind == "mobius":
            return np.full(p.shape, -1.0 + 0.0j)
        if self.kind == "unit":
            return np.full(p.shape, 1.0 + 0.0j)
        if self.kind == "constant":
            return np.full(p.shape, complex(self.c))
        if self.kind == "character":
            from .characters import character
            try:
                chi = character(self.q, self.index)
            except ValueError as exc:
                raise InvalidSpecError(str(exc)) from exc
            return chi.values[p % self.q]
        if self.kind == "twisted":
            base = self.base.values_at_primes(p)
            return base * np.exp(-complex(self.rho) * np.log(p.astype(np.float64)))
        if self.kind == "random-unit-circle":
            h = _splitmix64(_splitmix64(np.array([self.seed], dtype=np.uint64))[0]
                            ^ p.astype(np.uint64))
            u = h.astype(np.float64) / 2.0**64
            return np.exp(2j * np.pi * u)
        if self.kind == "table":
            lut = dict(self.table)
            return np.array([lut.get(int(pi), 0.0 + 0.0j) for pi in p],
                            dtype=np.complex128)
        if self.kind == "perturbed":
            vals = self.base.values_at_primes(p).copy()
            lut = dict(self.delta)
            for i, pi in enumerate(p):
                d = lut.get(int(pi))
                if d is not None:
                    vals[i] += d
            return vals
        raise InvalidSpecError(self.kind)

    def values_at_prime_powers(self, primes: np.ndarray, k: int) -> np.ndarray:
        """Vectorized f(p^k) for prime-power mode (k >= 1)."""
        if self.mode != MODE_PP:
            raise InvalidSpecError("prime-power values need prime-power mode")
        if k < 1:
            raise InvalidSpecError("prime-power exponent must be >= 1")
        if self.kind == "mobius":
            p = np.asarray(primes, dtype=np.int64)
            if k == 1:
                return np.full(p.shape, -1.0 + 0.0j)
            return np.zeros(p.shape, dtype=np.complex128)
        return self.values_at_primes(primes)

    # ------------------------------------------------------------------
    # serialization

    def to_json_dict(self) -> dict:
        d: dict = {"kind": self.kind, "mode": self.mode}
        if self.c is not None:
            d["c"] = _c2pair(self.c)
        if self.q is not None:
            d["q"] = self.q
        if self.index is not None:
            d["index"] = self.index
        if self.rho is not None:
            d["rho"] = _c2pair(self.rho)
        if self.seed is not None:
            d["seed"] = self.seed
        if self.table is not None:
            d["table"] = [[p, *_c2pair(v)] for p, v in self.table]
        if self.base is not None:
            d["base"] = self.base.to_json_dict()
        if self.delta is not None:
            d["delta"] = [[p, *_c2pair(v)] for p, v in self.delta]
        return d

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "PrimeValueSpec":
        def triples(key):
            if key not in d:
                return None
            return tuple((int(t[0]), complex(t[1], t[2])) for t in d[key])

        return cls(
            kind=d["kind"],
            mode=d.get("mode", MODE_CM),
            c=_pair2c(d["c"]) if "c" in d else None,
            q=d.get("q"),
            index=d.get("index"),
            rho=_pair2c(d["rho"]) if "rho" in d else None,
            seed=d.get("seed"),
            table=triples("table"),
            base=cls.from_json_dict(d["base"]) if "base" in d else None,
            delta=triples("delta"),
        )

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True,
                          separators=(",", ":"))

    def describe(self) -> str:
        """Short human-readable tag used in report metadata."""
        if self.kind in _BUILTINS + ("random-unit-circle",):
            return self.kind if self.seed is None else f"{self.kind}:{self.seed}"
        if self.kind == "constant":
            return f"constant:{self.c}"
        if self.kind == "character":
            return f"char:{self.q}:{self.index}"
        if self.kind == "twisted":
            return f"twisted({self.base.describe()}, rho={self.rho})"
        if self.kind == "table":
            return f"table[{len(self.table)}]"
        if self.kind == "perturbed":
            return f"perturbed({self.base.describe()}, {len(self.delta)} deltas)"
        return self.kind


def _replace_mode(spec: PrimeValueSpec, mode: str) -> PrimeValueSpec:
    return PrimeValueSpec(kind=spec.kind, mode=mode, c=spec.c, q=spec.q,
                          index=spec.index, rho=spec.rho, seed=spec.seed,
                          table=spec.table, base=spec.base, delta=spec.delta)


def parse_spec(text: str) -> PrimeValueSpec:
    """Parse a shorthand spec string.

    Accepted forms: ``liouville``, ``mobius``, ``unit``,
    ``const:<re>[:<im>]``, ``char:<q>:<index>``,
    ``twistchar:<q>:<index>:<re>[:<im>]``, ``small:<shorthand>`` (divides
    by n, i.e. twists by rho = 1), ``random:<seed>``, or a JSON object in
    the :meth:`PrimeValueSpec.to_json_dict` schema.
    """
    text = text.strip()
    if text.startswith("{"):
        return PrimeValueSpec.from_json_dict(json.loads(text))
    parts = text.split(":")
    head = parts[0]
    try:
        if head == "liouville":
            return PrimeValueSpec.liouville()
        if head == "mobius":
            return PrimeValueSpec.mobius()
        if head == "unit":
            return PrimeValueSpec.unit()
        if head == "const":
            re = float(parts[1])
            im = float(parts[2]) if len(parts) > 2 else 0.0
            return PrimeValueSpec.constant(complex(re, im))
        if head == "char":
            return PrimeValueSpec.character(int(parts[1]), int(parts[2]))
        if head == "twistchar":
            re = float(parts[3])
            im = float(parts[4]) if len(parts) > 4 else 0.0
            return PrimeValueSpec.twisted_character(int(parts[1]), int(parts[2]),
                                                    complex(re, im))
        if head == "small":
            return PrimeValueSpec.twisted(parse_spec(":".join(parts[1:])), 1.0)
        if head == "random":
            return PrimeValueSpec.random_unit_circle(int(parts[1]))
    except (IndexError, ValueError) as exc:
        raise InvalidSpecError(f"cannot parse spec {text!r}: {exc}") from exc
    raise InvalidSpecError(f"unknown spec shorthand {text!r}")
