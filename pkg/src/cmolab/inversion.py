"""Möbius-inversion asymptotics, verified numerically.

For arithmetic f with g = f*1 and a known rotation frequency tau such
that sum_{n<=x} g(n) = x^{1+i tau} L(log x) + o(x) for a slowly varying
bounded L, two relations tie the partial sums of f back to those of g:

  harmonic:  sum_{n<=x} f(n)/n = (1/x) [F(x) + kappa   G(x)] + o(1),
  plain:     sum_{n<=x} f(n)   =        kappa' G(x)          + o(x),

with kappa = 1/(i tau zeta(1+i tau)) and kappa' = 1/zeta(1+i tau); the
tau = 0 conventions are kappa = 1 and kappa' = 0, taken without ever
evaluating zeta at its pole.  The harness always evaluates and reports
residuals; the o(.) hypotheses are the caller's responsibility and are
only diagnosed, never enforced.

F(x) itself is recoverable from g alone through the Dirichlet hyperbola
identity with a cut at y (valid for x >= 2y >= 4):

  F(x) = sum_{m<=y} mu(m) G(x/m) + sum_{n<=x/y} g(n) M(x/n) - G(x/y) M(y).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import arith
from .analytic import zeta
from .arith import PrimeTable


@dataclass(frozen=True)
class InversionModel:
    """Rotation frequency tau plus a model for the slowly varying factor.

    kind "zero" | "constant" (with value c) | "empirical" (estimated from
    the data; carries its checkpoints and the sampled modulus of
    continuity so the slow-variation hypothesis can be eyeballed).
    """

    tau: float
    kind: str = "zero"
    c: complex = 0.0 + 0.0j
    checkpoints: Tuple[int, ...] = ()
    l_values: Tuple[complex, ...] = ()
    continuity: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "empirical"):
            raise ValueError(f"unknown L model kind {self.kind!r}")
        if not math.isfinite(abs(self.c)):
            raise ValueError("constant model needs a finite value")


@dataclass(frozen=True)
class ResidualReport:
    """Left/right sides and residuals of one inversion relation."""

    relation: str
    tau: float
    x: Tuple[int, ...]
    lhs: Tuple[complex, ...]
    rhs: Tuple[complex, ...]
    residuals: Tuple[float, ...]
    verdict: str
    rule: str
    notes: Tuple[str, ...] = ()

    def write_csv(self, fh: io.TextIOBase) -> None:
        fh.write("x,lhs_re,lhs_im,rhs_re,rhs_im,residual\n")
        for x, l, r, d in zip(self.x, self.lhs, self.rhs, self.residuals):
            fh.write(f"{x},{l.real!r},{l.imag!r},{r.real!r},{r.imag!r},{d!r}\n")

    def to_json_dict(self) -> dict:
        return {
            "relation": self.relation, "tau": self.tau,
            "verdict": self.verdict, "rule": self.rule,
            "notes": list(self.notes),
            "rows": [
                {"x": x, "lhs": [l.real, l.imag], "rhs": [r.real, r.imag],
                 "residual": d}
                for x, l, r, d in zip(self.x, self.lhs, self.rhs,
                                      self.residuals)
            ],
        }


_TREND_RULE = ("consistent-with-o iff the residual at the final checkpoint "
               "is < 1/2 of the residual at the first checkpoint >= 10; "
               "raw residuals always emitted")


def _trend_verdict(x: Sequence[int], residuals: Sequence[float]) -> str:
    pairs = [(xx, r) for xx, r in zip(x, residuals) if xx >= 10]
    if len(pairs) < 2:
        return "inconclusive"
    first, last = pairs[0][1], pairs[-1][1]
    return "consistent-with-o" if last < 0.5 * first else "not-established"


def hyperbola_F(g_seq, x: float, y: Optional[float] = None,
                table: Optional[PrimeTable] = None) -> complex:
    """F(x) = sum_{n<=x} f(n) computed from g = f*1 alone via the
    hyperbola identity.  Default cut y = ceil(sqrt(x)), clamped so that
    x >= 2y; requires x >= 2y >= 4."""
    g = arith._values_of(g_seq)
    xi = int(math.floor(x))
    if xi > len(g) - 1:
        raise ValueError(f"g defined to {len(g) - 1} < x = {xi}")
    if y is None:
        r = math.isqrt(xi)
        y = min(float(r if r * r == xi else r + 1), x / 2.0)
    if not x >= 2.0 * y >= 4.0:
        raise ValueError(f"need x >= 2y >= 4, got x={x}, y={y}")
    yi = int(math.floor(y))

    table = arith._ensure_table(table, xi)
    mu = arith.mobius_sequence(xi, table).values.real
    M = np.cumsum(mu)          # M[k] = sum_{n<=k} mu(n); exact integers
    G = np.cumsum(g[: xi + 1])

    m = np.arange(1, yi + 1)
    term1 = complex(np.sum(mu[m] * G[(x / m).astype(np.int64)]))
    n = np.arange(1, int(math.floor(x / y)) + 1)
    term2 = complex(np.sum(g[n] * M[(x / n).astype(np.int64)]))
    term3 = G[int(math.floor(x / y))] * M[yi]
    return term1 + term2 - complex(term3)


def _check_convolution_sample(f_seq, g_seq) -> None:
    f = arith._values_of(f_seq)
    g = arith._values_of(g_seq)
    n = min(len(f), len(g)) - 1
    upto = min(n, 512)
    conv = arith.dirichlet_convolve(f[: upto + 1], arith.ones_sequence(upto))
    if not np.allclose(conv[1:], g[1: upto + 1], rtol=1e-9, atol=1e-12):
        raise ValueError("g != f*1 on the verification sample")


def _kappa_harmonic(tau: float) -> complex:
    if tau == 0.0:
        return 1.0 + 0.0j
    return 1.0 / (1j * tau * zeta(1.0 + 1j * tau))


def _kappa_plain(tau: float) -> complex:
    if tau == 0.0:
        return 0.0 + 0.0j
    return 1.0 / zeta(1.0 + 1j * tau)


def verify_harmonic_inversion(f_seq, g_seq, model: InversionModel,
                              x_list: Sequence[int]) -> ResidualReport:
    """Residuals of sum f(n)/n against (1/x)[F(x) + kappa G(x)]."""
    _check_convolution_sample(f_seq, g_seq)
    xs = arith._checkpoint_array(x_list, min(len(arith._values_of(f_seq)),
                                             len(arith._values_of(g_seq))) - 1)
    kappa = _kappa_harmonic(model.tau)
    lhs = arith.power_weighted_sums(f_seq, 1.0 + 0.0j, xs)
    F = arith.power_weighted_sums(f_seq, 0.0 + 0.0j, xs)
    G = arith.power_weighted_sums(g_seq, 0.0 + 0.0j, xs)
    rhs = (F + kappa * G) / xs
    res = np.abs(lhs - rhs)
    notes = (f"kappa = {kappa}",) + (
        ("tau = 0 convention: kappa = 1, zeta(1) never evaluated",)
        if model.tau == 0.0 else ())
    return ResidualReport(
        relation="harmonic", tau=model.tau,
        x=tuple(int(v) for v in xs),
        lhs=tuple(complex(v) for v in lhs),
        rhs=tuple(complex(v) for v in rhs),
        residuals=tuple(float(v) for v in res),
        verdict=_trend_verdict(xs, res), rule=_TREND_RULE, notes=notes)


def verify_plain_inversion(f_seq, g_seq, model: InversionModel,
                           x_list: Sequence[int]) -> ResidualReport:
    """Residuals of [sum f(n) - kappa' G(x)] / x (the o(x) relation,
    reported at scale 1/x).  Also reports max |g| since the relation
    assumes g bounded."""
    _check_convolution_sample(f_seq, g_seq)
    g = arith._values_of(g_seq)
    xs = arith._checkpoint_array(x_list, min(len(arith._values_of(f_seq)),
                                             len(g)) - 1)
    kappa = _kappa_plain(model.tau)
    F = arith.power_weighted_sums(f_seq, 0.0 + 0.0j, xs)
    G = arith.power_weighted_sums(g_seq, 0.0 + 0.0j, xs)
    rhs = kappa * G
    res = np.abs(F - rhs) / xs
    gmax = float(np.abs(g[1:]).max()) if len(g) > 1 else 0.0
    notes = (f"kappa' = {kappa}", f"max |g(n)| = {gmax}") + (
        ("tau = 0 convention: kappa' = 0, zeta(1) never evaluated",)
        if model.tau == 0.0 else ())
    return ResidualReport(
        relation="plain", tau=model.tau,
        x=tuple(int(v) for v in xs),
        lhs=tuple(complex(v) for v in F),
        rhs=tuple(complex(v) for v in rhs),
        residuals=tuple(float(v) for v in res),
        verdict=_trend_verdict(xs, res), rule=_TREND_RULE, notes=notes)


def estimate_L(g_seq, tau: float, x_list: Sequence[int]) -> InversionModel:
    """Empirical slowly-varying factor L(log x) = x^{-1-i tau} G(x) at each
    checkpoint, with the sampled modulus of continuity
    sup_{x<=t<=x+1} |L(log t) - L(log x)| alongside."""
    g = arith._values_of(g_seq)
    xs = arith._checkpoint_array(x_list, len(g) - 1)
    if (np.diff(xs) <= 0).any():
        raise ValueError("x_list must be strictly ascending")
    G = np.cumsum(g)

    def lhat(t: float) -> complex:
        k = int(math.floor(t))
        return complex(G[min(k, len(G) - 1)]) * t ** (-1.0) * \
            complex(np.exp(-1j * tau * math.log(t)))

    values = []
    continuity = []
    for x in xs:
        base = lhat(float(x))
        values.append(base)
        hi = 0.0
        for frac in (0.25, 0.5, 0.75, 1.0):
            t = float(x) + frac
            if int(math.floor(t)) <= len(g) - 1:
                hi = max(hi, abs(lhat(t) - base))
        continuity.append(hi)
    return InversionModel(tau=float(tau), kind="empirical",
                          checkpoints=tuple(int(v) for v in xs),
                          l_values=tuple(values),
                          continuity=tuple(continuity))
