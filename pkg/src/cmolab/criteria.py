"""Numeric evaluation of the zero-sum criteria for small completely
multiplicative functions f(n)/n, f bounded on primes.

Every evaluator reports checkpointed partial prime sums (or ratios, or an
endpoint integral) together with a verdict from a frozen decision rule.
Divergence of an infinite sum cannot be decided numerically, so verdicts
are evidence labels, never proofs; the raw series is always emitted so
callers can apply their own rule.

Frozen rules (recorded verbatim in each report):
  * sums that should diverge to -infinity: verdict
    "diverges-toward-criterion" iff the last value is below -C and the
    value decreased at each of the last three decade checkpoints
    (C = 3.0);
  * "bounded" iff every |value| <= C and the last decade step moved by
    less than 0.05;
  * otherwise "inconclusive".
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from . import arith
from .arith import CMSequence, PrimeTable, SumReport
from .specs import PrimeValueSpec

#: frozen divergence threshold
DIVERGENCE_C = 3.0
#: frozen flatness threshold for the "bounded" verdict
FLAT_EPS = 0.05
#: default prime cutoff and decade checkpoints
DEFAULT_P = 10**7

VERDICT_DIVERGES = "diverges-toward-criterion"
VERDICT_BOUNDED = "bounded"
VERDICT_INCONCLUSIVE = "inconclusive"

_RULE_SUM = (f"diverges-toward-criterion iff last < -{DIVERGENCE_C} and the "
             "sum decreased at each of the last three decade checkpoints; "
             f"bounded iff max|value| <= {DIVERGENCE_C} and the last step "
             f"moved < {FLAT_EPS}; else inconclusive")


class InvalidPerturbationError(ValueError):
    """A perturbation pushed some |f(p)| to 1 or beyond."""


@dataclass(frozen=True)
class TauGrid:
    """Finite ascending grid of rotation frequencies; always contains 0."""

    taus: Tuple[float, ...]

    def __post_init__(self):
        if len(self.taus) == 0:
            raise ValueError("tau grid must be nonempty")
        if 0.0 not in self.taus:
            raise ValueError("tau grid must contain 0")
        if any(b <= a for a, b in zip(self.taus, self.taus[1:])):
            raise ValueError("tau grid must be strictly ascending")

    @classmethod
    def default(cls, extra: Iterable[float] = ()) -> "TauGrid":
        base = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0}
        base.update(float(t) for t in extra)
        return cls(taus=tuple(sorted(base)))


@dataclass(frozen=True)
class CriterionReport:
    """Checkpointed evidence for one criterion, plus the verdict rule."""

    criterion: str
    params: Dict[str, object]
    checkpoints: Tuple[int, ...]
    series: Dict[str, Tuple[float, ...]]
    scalars: Dict[str, float]
    verdict: str
    rule: str
    warnings: Tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "params": self.params,
            "checkpoints": list(self.checkpoints),
            "series": {k: list(v) for k, v in self.series.items()},
            "scalars": self.scalars,
            "verdict": self.verdict,
            "rule": self.rule,
            "warnings": list(self.warnings),
        }

    def write_csv(self, fh: io.TextIOBase) -> None:
        keys = sorted(self.series)
        fh.write("x," + ",".join(keys) + "\n")
        for i, x in enumerate(self.checkpoints):
            fh.write(f"{x}," + ",".join(repr(self.series[k][i]) for k in keys)
                     + "\n")


def decade_checkpoints(P: int, start: int = 100) -> Tuple[int, ...]:
    cps = []
    x = start
    while x < P:
        cps.append(x)
        x *= 10
    cps.append(P)
    return tuple(cps)


def _sum_verdict(values: Sequence[float]) -> str:
    v = list(values)
    if len(v) >= 4:
        tail = v[-4:]
        decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    else:
        decreasing = all(b < a for a, b in zip(v, v[1:])) and len(v) > 1
    if v[-1] < -DIVERGENCE_C and decreasing:
        return VERDICT_DIVERGES
    if max(abs(t) for t in v) <= DIVERGENCE_C and (
            len(v) < 2 or abs(v[-1] - v[-2]) < FLAT_EPS):
        return VERDICT_BOUNDED
    return VERDICT_INCONCLUSIVE


def _checkpointed_prime_sums(primes: np.ndarray, summand: np.ndarray,
                             checkpoints: Sequence[int]) -> Tuple[float, ...]:
    """Running sums of ``summand`` over primes <= x for each checkpoint,
    deterministic (pairwise per segment, left-to-right across segments)."""
    out = []
    total = 0.0
    lo = 0
    for x in checkpoints:
        hi = int(np.searchsorted(primes, x, side="right"))
        total += float(np.sum(summand[lo:hi]))
        out.append(total)
        lo = hi
    return tuple(out)


def _prime_data(spec: PrimeValueSpec, P: int,
                table: Optional[PrimeTable]) -> Tuple[np.ndarray, np.ndarray]:
    table = arith._ensure_table(table, P)
    primes = table.primes[table.primes <= P]
    return primes, spec.values_at_primes(primes)


def bounds_diagnostics(seq: CMSequence,
                       table: Optional[PrimeTable] = None,
                       checkpoints: Optional[Sequence[int]] = None,
                       ) -> CriterionReport:
    """Necessary-condition diagnostics for a zero-sum candidate sequence.

    Reports sup_{2<=n} |f(n)| and sup_p |f(p)| (these coincide for a
    completely multiplicative f and must stay below 1), and the
    checkpointed sums sum_{p<=x} |f(p)|, which must diverge.
    """
    n_max = seq.n_max
    table = arith._ensure_table(table, n_max)
    primes = table.primes[table.primes <= n_max]
    absvals = np.abs(seq.values)
    max_n = float(absvals[2:].max()) if n_max >= 2 else 0.0
    abs_p = absvals[primes]
    max_p = float(abs_p.max()) if len(abs_p) else 0.0
    cps = tuple(checkpoints) if checkpoints is not None else \
        decade_checkpoints(n_max, start=min(100, n_max))
    sums = _checkpointed_prime_sums(primes, abs_p, cps)
    warnings_ = []
    if max_n >= 1.0:
        warnings_.append(f"sup |f(n)| = {max_n} violates the < 1 bound")
    if abs(max_n - max_p) > 1e-12:
        warnings_.append("sup over n and sup over primes differ; sequence "
                         "is not completely multiplicative?")
    growing = all(b > a for a, b in zip(sums[-4:], sums[-3:]))
    verdict = (VERDICT_DIVERGES if max_n < 1.0 and growing
               else VERDICT_INCONCLUSIVE if max_n < 1.0 else VERDICT_BOUNDED)
    rule = ("diverges-toward-criterion iff sup|f| < 1 and sum_p |f(p)| grew "
            "at each of the last three decade checkpoints; bounded iff the "
            "sup bound fails; else inconclusive")
    return CriterionReport(
        criterion="bounds", params={"n_max": n_max},
        checkpoints=cps, series={"abs_prime_sum": sums},
        scalars={"max_abs_n": max_n, "max_abs_p": max_p},
        verdict=verdict, rule=rule, warnings=tuple(warnings_))


def negative_real_sum(spec: PrimeValueSpec, P: int = DEFAULT_P,
                      checkpoints: Optional[Sequence[int]] = None,
                      table: Optional[PrimeTable] = None) -> CriterionReport:
    """sum_{p<=x, Re f(p)<0} Re f(p)/p, which must diverge to -infinity
    for a small zero-sum function."""
    primes, fp = _prime_data(spec, P, table)
    re = fp.real
    summand = np.where(re < 0.0, re / primes, 0.0)
    cps = tuple(checkpoints) if checkpoints is not None else decade_checkpoints(P)
    sums = _checkpointed_prime_sums(primes, summand, cps)
    return CriterionReport(
        criterion="neg-real-sum", params={"P": P},
        checkpoints=cps, series={"sum": sums}, scalars={},
        verdict=_sum_verdict(sums), rule=_RULE_SUM)


def rotated_sum(spec: PrimeValueSpec, grid: Optional[TauGrid] = None,
                P: int = DEFAULT_P,
                checkpoints: Optional[Sequence[int]] = None,
                table: Optional[PrimeTable] = None) -> CriterionReport:
    """Per-tau sums sum_{p<=x} (Re[(1+f(p)) p^{-i tau}] - 1)/p.

    Under the unit-disk hypothesis |1+f(p)| <= 1 the small function f(n)/n
    has zero sum exactly when this diverges to -infinity for every real
    tau; a finite grid is only sampled evidence for that quantifier.
    Hypothesis violations (|1+f(p)| > 1, or f(2) = -2) are warned about
    and evaluation proceeds.
    """
    grid = grid or TauGrid.default()
    primes, fp = _prime_data(spec, P, table)
    cps = tuple(checkpoints) if checkpoints is not None else decade_checkpoints(P)
    warnings_ = []
    bad = np.abs(1.0 + fp) > 1.0 + 1e-12
    if bad.any():
        warnings_.append(f"|1+f(p)| > 1 at {int(bad.sum())} primes <= {P}")
    if len(primes) and primes[0] == 2 and abs(fp[0] + 2.0) < 1e-15:
        warnings_.append("f(2) = -2: f(2^k)/2^k does not tend to 0")
    logp = np.log(primes.astype(np.float64))
    series: Dict[str, Tuple[float, ...]] = {}
    verdicts = {}
    one_plus = 1.0 + fp
    for tau in grid.taus:
        rot = one_plus * np.exp(-1j * tau * logp)
        summand = (rot.real - 1.0) / primes
        sums = _checkpointed_prime_sums(primes, summand, cps)
        key = f"tau={tau:g}"
        series[key] = sums
        verdicts[key] = _sum_verdict(sums)
    if all(v == VERDICT_DIVERGES for v in verdicts.values()):
        verdict = VERDICT_DIVERGES
    elif any(v == VERDICT_BOUNDED for v in verdicts.values()):
        verdict = VERDICT_BOUNDED
    else:
        verdict = VERDICT_INCONCLUSIVE
    rule = (_RULE_SUM + "; overall: diverges iff every grid tau diverges, "
            "bounded iff some tau stays bounded (criterion fails there)")
    return CriterionReport(
        criterion="rotated-sum",
        params={"P": P, "taus": list(grid.taus)},
        checkpoints=cps, series=series,
        scalars={k + ":verdict": v == VERDICT_DIVERGES
                 for k, v in verdicts.items()},
        verdict=verdict, rule=rule, warnings=tuple(warnings_))


def real_part_sum(spec: PrimeValueSpec, P: int = DEFAULT_P,
                  checkpoints: Optional[Sequence[int]] = None,
                  table: Optional[PrimeTable] = None) -> CriterionReport:
    """sum_{p<=x} Re f(p)/p under |f(p)| <= 1, Re f(p) <= 0; divergence to
    -infinity is equivalent to the zero-sum property of f(n)/n."""
    primes, fp = _prime_data(spec, P, table)
    warnings_ = []
    if (np.abs(fp) > 1.0 + 1e-12).any():
        warnings_.append("hypothesis |f(p)| <= 1 violated")
    if (fp.real > 1e-12).any():
        warnings_.append("hypothesis Re f(p) <= 0 violated")
    summand = fp.real / primes
    cps = tuple(checkpoints) if checkpoints is not None else decade_checkpoints(P)
    sums = _checkpointed_prime_sums(primes, summand, cps)
    return CriterionReport(
        criterion="real-part-sum", params={"P": P},
        checkpoints=cps, series={"sum": sums}, scalars={},
        verdict=_sum_verdict(sums), rule=_RULE_SUM,
        warnings=tuple(warnings_))


def deviation_density(spec: PrimeValueSpec,
                      x_list: Optional[Sequence[int]] = None,
                      margin: float = 0.05,
                      table: Optional[PrimeTable] = None) -> CriterionReport:
    """Density ratio sum_{p<=x} |1+f(p)|^2 / (x / log x).

    A limsup strictly below 1 suffices for the zero-sum property (under
    |f(p)| <= 1).  The verdict is "bounded" (criterion satisfied) iff the
    ratio stays below 1 - margin at the last three checkpoints.
    """
    cps = tuple(x_list) if x_list is not None else decade_checkpoints(DEFAULT_P)
    P = max(cps)
    primes, fp = _prime_data(spec, P, table)
    if (np.abs(fp) > 1.0 + 1e-12).any():
        warn = ("hypothesis |f(p)| <= 1 violated",)
    else:
        warn = ()
    numer = _checkpointed_prime_sums(primes, np.abs(1.0 + fp) ** 2, cps)
    ratios = tuple(n / (x / math.log(x)) for n, x in zip(numer, cps))
    tail = ratios[-3:]
    passes = max(tail) < 1.0 - margin
    verdict = VERDICT_BOUNDED if passes else VERDICT_INCONCLUSIVE
    rule = (f"bounded (criterion satisfied) iff the ratio at the last three "
            f"checkpoints stays below 1 - margin with margin={margin}; else "
            "inconclusive")
    return CriterionReport(
        criterion="deviation-density", params={"margin": margin, "P": P},
        checkpoints=cps,
        series={"numerator": numer, "ratio": ratios},
        scalars={"passes": passes, "tail_max": max(tail)},
        verdict=verdict, rule=rule, warnings=warn)


def deviation_integral(spec: PrimeValueSpec, P: int = 10**6,
                       quad_tol: float = 1e-9,
                       table: Optional[PrimeTable] = None) -> float:
    """int_1^2 exp[(1/2) sum_{p<=P} |1+f(p)|^2 / p^sigma] dsigma/sqrt(sigma-1).

    Finiteness (as P -> infinity) suffices for the zero-sum property.  The
    endpoint is integrable after sigma = 1 + v^2, which is how the
    quadrature is run; the truncated inner sum makes the result finite for
    every P, so only its growth in P carries information.
    """
    primes, fp = _prime_data(spec, P, table)
    c = np.abs(1.0 + fp) ** 2
    if not c.any():
        # inner sum identically zero: the integral is exactly
        # int_0^1 2 dv = 2
        return 2.0
    mask = c > 0.0
    cp = c[mask]
    logp = np.log(primes[mask].astype(np.float64))

    def g(v: float) -> float:
        sigma = 1.0 + v * v
        s = float(np.sum(cp * np.exp(-sigma * logp)))
        return 2.0 * math.exp(0.5 * s)

    val, _err = quad(g, 0.0, 1.0, epsabs=quad_tol, epsrel=quad_tol, limit=200)
    return float(val)


def deviation_integral_report(spec: PrimeValueSpec, P: int = 10**6,
                              quad_tol: float = 1e-9,
                              table: Optional[PrimeTable] = None,
                              ) -> CriterionReport:
    """Growth of the truncated endpoint integral along a ladder of prime
    cutoffs up to P."""
    table = arith._ensure_table(table, P)
    cps = decade_checkpoints(P, start=min(1000, P))
    vals = tuple(deviation_integral(spec, p, quad_tol, table) for p in cps)
    growth = vals[-1] - vals[0]
    verdict = VERDICT_BOUNDED if growth < 0.5 else VERDICT_INCONCLUSIVE
    rule = ("bounded (criterion plausible) iff the integral grew by < 0.5 "
            "from the first to the last cutoff; divergence in P can only be "
            "observed, never certified")
    return CriterionReport(
        criterion="deviation-integral",
        params={"P": P, "quad_tol": quad_tol},
        checkpoints=cps, series={"integral": vals},
        scalars={"value": vals[-1], "growth": growth},
        verdict=verdict, rule=rule)


def build_perturbation(base: PrimeValueSpec,
                       delta: Mapping[int, complex]) -> PrimeValueSpec:
    """Finite perturbation f(p) = base(p) + delta(p).

    The zero-sum property survives a perturbation with summable prime
    deltas as long as all |f(p)| stay below 1; with finite support that
    bound is checked exactly on the support (elsewhere it is the caller's
    hypothesis on the base).
    """
    items = {int(p): complex(v) for p, v in delta.items()}
    ps = np.array(sorted(items), dtype=np.int64)
    if len(ps):
        new_vals = base.values_at_primes(ps) + np.array(
            [items[int(p)] for p in ps])
        bad = np.abs(new_vals) >= 1.0
        if bad.any():
            p0 = int(ps[bad][0])
            raise InvalidPerturbationError(
                f"perturbed |f({p0})| = {abs(new_vals[bad][0]):.6f} >= 1")
    return PrimeValueSpec.perturbed(base, items)


def compare_perturbation(f_spec: PrimeValueSpec, g_spec: PrimeValueSpec,
                         n: int, checkpoints: Sequence[int],
                         weight: str = "1",
                         table: Optional[PrimeTable] = None,
                         ) -> Tuple[SumReport, SumReport]:
    """Paired partial-sum reports of a perturbed rule and its base."""
    table = arith._ensure_table(table, n)
    f_seq = arith.build_cm_sequence(f_spec, n, table)
    g_seq = arith.build_cm_sequence(g_spec, n, table)
    return (arith.partial_sums(f_seq, weight, checkpoints),
            arith.partial_sums(g_seq, weight, checkpoints))
