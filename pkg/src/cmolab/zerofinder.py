"""Zeros of L(s, chi) in the critical strip, by the argument principle.

Counting is pure winding-number tracking along rectangle boundaries (no
functional equation, no root numbers), so complex characters work exactly
like real ones.  Each zero is boxed by bisection until its rectangle
counts exactly one, then polished by Newton steps with a finite-difference
derivative.  A located zero rho of a non-principal character mints the
completely multiplicative rule p -> chi(p) p^{-rho}, whose sequence is
chi(n)/n^rho.

Search is restricted to |t| <= 50 and q <= 100: the scalar zeta evaluator
is machine-accurate there and the first zeros of small-modulus characters
all lie well inside.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .analytic import l_function
from .characters import DirichletCharacter
from .specs import PrimeValueSpec

T_SEARCH_MAX = 50.0
Q_SEARCH_MAX = 100

#: |L| below this on a boundary sample is treated as a grazed zero
_BOUNDARY_EPS = 1e-12

_RESIDUAL_TARGET = 1e-8

#: a single-zero box must be at most this wide before Newton starts
_NEWTON_START_DIAM = 0.5


class BoundaryZeroError(ArithmeticError):
    """The boundary walk could not stabilize (suspected zero on or very
    near the contour); the caller perturbs the rectangle and retries."""


@dataclass(frozen=True)
class SearchRectangle:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not (0.0 < self.sigma_min < self.sigma_max < 1.0):
            raise ValueError("rectangle must lie inside the open strip 0 < sigma < 1")
        if not self.t_min < self.t_max:
            raise ValueError("need t_min < t_max")

    @property
    def diameter(self) -> float:
        return math.hypot(self.sigma_max - self.sigma_min,
                          self.t_max - self.t_min)

    def corners(self) -> List[complex]:
        return [complex(self.sigma_min, self.t_min),
                complex(self.sigma_max, self.t_min),
                complex(self.sigma_max, self.t_max),
                complex(self.sigma_min, self.t_max)]


@dataclass(frozen=True)
class ZeroRecord:
    q: int
    index: int
    rho: complex
    residual: float
    certified_count: int

    def to_json_dict(self) -> dict:
        return {"q": self.q, "index": self.index,
                "re": self.rho.real, "im": self.rho.imag,
                "residual": self.residual}


def _check_search_domain(chi: DirichletCharacter, rect: SearchRectangle) -> None:
    if chi.principal:
        raise ValueError("zero search needs a non-principal character")
    if chi.q > Q_SEARCH_MAX:
        raise ValueError(f"zero search restricted to q <= {Q_SEARCH_MAX}")
    if max(abs(rect.t_min), abs(rect.t_max)) > T_SEARCH_MAX:
        raise ValueError(f"zero search restricted to |t| <= {T_SEARCH_MAX}")


def _arg_increment(chi, z0, z1, L0, L1, depth: int = 0) -> float:
    """Continuous argument change of L along the segment [z0, z1],
    subdividing until each step turns by less than pi/2."""
    d = cmath.phase(L1 / L0)
    if abs(d) < math.pi / 2:
        return d
    if depth >= 48:
        raise BoundaryZeroError(
            f"argument tracking failed to stabilize near {z0} -> {z1}")
    zm = 0.5 * (z0 + z1)
    Lm = l_function(chi, zm)
    if abs(Lm) < _BOUNDARY_EPS:
        raise BoundaryZeroError(f"|L| = {abs(Lm):.2e} on the boundary at {zm}")
    return (_arg_increment(chi, z0, zm, L0, Lm, depth + 1)
            + _arg_increment(chi, zm, z1, Lm, L1, depth + 1))


def count_zeros_rectangle(chi: DirichletCharacter, rect: SearchRectangle,
                          initial_step: float = 0.25) -> int:
    """Number of zeros of L(s, chi) inside the rectangle (winding number
    of L along the positively oriented boundary)."""
    _check_search_domain(chi, rect)
    corners = rect.corners()
    total = 0.0
    for c0, c1 in zip(corners, corners[1:] + corners[:1]):
        length = abs(c1 - c0)
        nseg = max(2, int(math.ceil(length / initial_step)))
        pts = [c0 + (c1 - c0) * k / nseg for k in range(nseg + 1)]
        vals = [l_function(chi, z) for z in pts]
        for v, z in zip(vals, pts):
            if abs(v) < _BOUNDARY_EPS:
                raise BoundaryZeroError(f"|L| = {abs(v):.2e} at boundary point {z}")
        for k in range(nseg):
            total += _arg_increment(chi, pts[k], pts[k + 1], vals[k], vals[k + 1])
    winding = total / (2.0 * math.pi)
    count = int(round(winding))
    if abs(winding - count) > 1e-6:
        raise BoundaryZeroError(
            f"winding number {winding} did not stabilize to an integer")
    if count < 0:
        raise ArithmeticError(f"negative winding number {count} for a "
                              "holomorphic function; rectangle invalid")
    return count


def _count_with_dilation(chi, rect: SearchRectangle,
                         initial_step: float = 0.25) -> Tuple[int, SearchRectangle]:
    """Count zeros, dilating the rectangle height deterministically when a
    boundary sample grazes a zero (factor 1.0001, at most 10 attempts)."""
    attempt = rect
    for _ in range(10):
        try:
            return count_zeros_rectangle(chi, attempt, initial_step), attempt
        except BoundaryZeroError:
            mid = 0.5 * (attempt.t_min + attempt.t_max)
            half = 0.5 * (attempt.t_max - attempt.t_min) * 1.0001
            attempt = SearchRectangle(attempt.sigma_min, attempt.sigma_max,
                                      mid - half, mid + half)
    raise BoundaryZeroError(
        f"boundary zeros persisted after 10 dilations of {rect}")


def _newton_refine(chi, z0: complex, tol: float) -> Tuple[Optional[complex], float]:
    """Newton iteration on L with a central finite-difference derivative
    (step 1e-6); returns (zero, |L(zero)|), or (None, inf) on escape."""
    h = 1e-6
    z = z0
    for _ in range(60):
        if (not cmath.isfinite(z) or not -0.5 < z.real < 1.5
                or abs(z.imag - z0.imag) > 5.0):
            return None, math.inf
        L = l_function(chi, z)
        if abs(L) < _RESIDUAL_TARGET * 1e-3:
            break
        dL = (l_function(chi, z + h) - l_function(chi, z - h)) / (2.0 * h)
        if dL == 0 or not cmath.isfinite(dL):
            break
        step = L / dL
        z = z - step
        if abs(step) < 1e-14:
            break
    if not cmath.isfinite(z) or not -0.5 < z.real < 1.5:
        return None, math.inf
    return z, abs(l_function(chi, z))


def locate_zeros(chi: DirichletCharacter, t_range: Tuple[float, float],
                 tol: float = 1e-6,
                 sigma_bounds: Tuple[float, float] = (0.05, 0.95),
                 ) -> List[ZeroRecord]:
    """All zeros of L(s, chi) with Im rho in t_range, boxed by bisection
    and polished to residual < 1e-8.  Records are sorted by (Im, Re)."""
    t0, t1 = float(t_range[0]), float(t_range[1])
    if t0 >= t1:
        raise ValueError("empty t range")
    root = SearchRectangle(sigma_bounds[0], sigma_bounds[1], t0, t1)
    _check_search_domain(chi, root)

    records: List[ZeroRecord] = []
    failures: List[str] = []
    stack = [root]
    while stack:
        rect = stack.pop()
        count, rect = _count_with_dilation(chi, rect)
        if count == 0:
            continue
        if count == 1 and rect.diameter <= _NEWTON_START_DIAM:
            zero, residual, cert = _refine_and_certify(chi, rect, tol)
            if zero is not None:
                records.append(ZeroRecord(q=chi.q, index=chi.index, rho=zero,
                                          residual=residual,
                                          certified_count=cert))
            elif rect.diameter > 10.0 * tol:
                _split_into(stack, rect)
            else:
                failures.append(f"refinement stalled in {rect}")
            continue
        # several zeros (or one in a still-large box): split along the
        # longer side
        _split_into(stack, rect)
    if failures:
        import warnings
        warnings.warn("; ".join(failures), stacklevel=2)
    records.sort(key=lambda r: (r.rho.imag, r.rho.real))
    return records


def _split_into(stack: List[SearchRectangle], rect: SearchRectangle) -> None:
    """Bisect along the longer side.  The sigma cut uses a golden-ratio
    point, never the midpoint: zeros of real characters sit on the
    symmetric line sigma = 1/2 and a midpoint cut of the full strip would
    run straight through them."""
    if (rect.t_max - rect.t_min) >= (rect.sigma_max - rect.sigma_min):
        mid = 0.5 * (rect.t_min + rect.t_max)
        stack.append(SearchRectangle(rect.sigma_min, rect.sigma_max,
                                     rect.t_min, mid))
        stack.append(SearchRectangle(rect.sigma_min, rect.sigma_max,
                                     mid, rect.t_max))
    else:
        cut = rect.sigma_min + 0.6180339887498949 * (rect.sigma_max
                                                     - rect.sigma_min)
        stack.append(SearchRectangle(rect.sigma_min, cut,
                                     rect.t_min, rect.t_max))
        stack.append(SearchRectangle(cut, rect.sigma_max,
                                     rect.t_min, rect.t_max))


def _refine_and_certify(chi, rect: SearchRectangle, tol: float):
    """Newton-polish the single zero counted in ``rect`` and certify it by
    re-counting a box of diameter < 10 tol around the refined point; the
    certifying count must also survive one boundary-step halving."""
    center = complex(0.5 * (rect.sigma_min + rect.sigma_max),
                     0.5 * (rect.t_min + rect.t_max))
    zero, residual = _newton_refine(chi, center, tol)
    if zero is None or residual >= _RESIDUAL_TARGET or not 0.0 < zero.real < 1.0:
        return None, residual, 0
    half = 9.0 * tol / (2.0 * math.sqrt(2.0))
    box = SearchRectangle(max(zero.real - half, 1e-12),
                          min(zero.real + half, 1.0 - 1e-12),
                          zero.imag - half, zero.imag + half)
    step = min(0.25, 4.0 * half)
    cert, box = _count_with_dilation(chi, box, step)
    recount = count_zeros_rectangle(chi, box, initial_step=step / 2.0)
    if recount != cert:
        raise ArithmeticError(
            f"winding count changed under step halving on {box}")
    if cert != 1:
        return None, residual, cert
    return zero, residual, cert


def cmo_from_zero(chi: DirichletCharacter, rho: complex) -> PrimeValueSpec:
    """Spec with f(p) = chi(p) p^{-rho}, so the sequence is chi(n)/n^rho."""
    return PrimeValueSpec.twisted_character(chi.q, chi.index, complex(rho))
