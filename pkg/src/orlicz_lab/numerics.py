"""Log-domain arithmetic, monotone root finding, and log-substituted quadrature.

Every magnitude in this package is tracked as a base-2 logarithm so that
doubly exponential quantities (values near 2**4096, masses near 2**-16000)
stay finite and, for dyadic inputs, exactly representable.  This module owns
the shared primitives:

* :class:`LogScalar` -- signed magnitudes in log2 form with exact dyadic
  round trips and max-factored summation (:func:`log_sum`);
* :func:`bisect_monotone` -- bracketed bisection for monotone maps, the
  workhorse behind norm infima and functional inverses;
* :func:`quad_log` -- composite quadrature after the substitution s = 2**u,
  which turns integrable power singularities at 0 into decaying integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

LN2 = math.log(2.0)
# log2(1 + r) ~= r / ln 2 for small r; used to convert relative tolerances
# on values into absolute tolerances on base-2 logarithms.
_REL_TO_LOG2 = 1.0 / LN2

NEG_INF = float("-inf")


class BracketError(ValueError):
    """The supplied bracket does not straddle the requested target."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget before reaching tolerance."""


@dataclass(frozen=True, slots=True)
class LogScalar:
    """A real number stored as a sign and the base-2 log of its magnitude.

    ``sign`` is -1, 0, or +1; ``log2`` is ``-inf`` exactly when ``sign == 0``.
    Dyadic rationals have integer ``log2`` and round-trip exactly.  Ordinary
    floats round-trip through :meth:`from_float` / :meth:`to_float` to within
    one ulp of the log, far inside the 2**-40 relative contract.
    """

    sign: int
    log2: float

    @staticmethod
    def from_float(value: float) -> "LogScalar":
        if value == 0.0:
            return ZERO
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        sign = 1 if value > 0 else -1
        return LogScalar(sign, math.log2(abs(value)))

    @staticmethod
    def from_log2(log2: float, sign: int = 1) -> "LogScalar":
        if sign == 0:
            return ZERO
        if sign not in (-1, 1):
            raise ValueError("sign must be -1, 0, or +1")
        if math.isnan(log2):
            raise ValueError("log2 magnitude is NaN")
        return LogScalar(sign, log2)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * 2.0 ** self.log2

    __float__ = to_float

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        s = self.sign * other.sign
        if s == 0:
            return ZERO
        return LogScalar(s, self.log2 + other.log2)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        if other.sign == 0:
            raise ZeroDivisionError("division by zero LogScalar")
        if self.sign == 0:
            return ZERO
        return LogScalar(self.sign * other.sign, self.log2 - other.log2)

    def __neg__(self) -> "LogScalar":
        if self.sign == 0:
            return self
        return LogScalar(-self.sign, self.log2)

    def __abs__(self) -> "LogScalar":
        if self.sign < 0:
            return LogScalar(1, self.log2)
        return self

    def __pow__(self, r: float) -> "LogScalar":
        if self.sign == 0:
            if r > 0:
                return ZERO
            raise ZeroDivisionError("0 raised to a non-positive power")
        if self.sign < 0:
            raise ValueError("powers of negative LogScalars are not defined")
        return LogScalar(1, self.log2 * r)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        return log_sum((self, other))

    def __sub__(self, other: "LogScalar") -> "LogScalar":
        return log_sum((self, -other))

    def times_pow2(self, shift: float) -> "LogScalar":
        """Multiply by 2**shift.  Exact whenever the log stays representable."""
        if self.sign == 0:
            return self
        return LogScalar(self.sign, self.log2 + shift)

    def compare(self, other: "LogScalar") -> int:
        """Total-order comparison: -1, 0, or +1."""
        if self.sign != other.sign:
            return -1 if self.sign < other.sign else 1
        if self.sign == 0:
            return 0
        if self.log2 == other.log2:
            return 0
        mag = -1 if self.log2 < other.log2 else 1
        return mag if self.sign > 0 else -mag

    def __lt__(self, other: "LogScalar") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "LogScalar") -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: "LogScalar") -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: "LogScalar") -> bool:
        return self.compare(other) >= 0

    def isclose(self, other: "LogScalar", rel: float = 1e-12) -> bool:
        """Relative comparison; exact dyadic values compare exactly."""
        if self.sign != other.sign:
            return False
        if self.sign == 0:
            return True
        if self.log2 == other.log2:
            return True
        return abs(self.log2 - other.log2) <= rel * _REL_TO_LOG2

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.sign == 0:
            return "LogScalar(0)"
        pre = "-" if self.sign < 0 else ""
        return f"LogScalar({pre}2**{self.log2:g})"


ZERO = LogScalar(0, NEG_INF)
ONE = LogScalar(1, 0.0)


def log_sum(terms: Iterable[LogScalar]) -> LogScalar:
    """Sum of LogScalars by max-factoring in base 2.

    Same-sign sums are exact to a relative n * 2**-48; mixed signs may cancel,
    see :func:`log_sum_with_condition` for the cancellation diagnostic.
    """
    value, _ = log_sum_with_condition(terms)
    return value


def log_sum_with_condition(terms: Iterable[LogScalar]) -> tuple[LogScalar, float]:
    """Like :func:`log_sum`, also reporting how many bits cancelled.

    The condition flag is ``peak_log2 - result_log2``: 0.0 for same-sign
    input, positive when opposite signs cancelled, ``inf`` for an exact zero.
    ``math.fsum`` makes the result independent of term order.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("log_sum of an empty sequence")
    peak = NEG_INF
    for t in terms:
        if t.sign != 0 and t.log2 > peak:
            peak = t.log2
    if peak == NEG_INF:
        return ZERO, 0.0
    total = math.fsum(t.sign * 2.0 ** (t.log2 - peak) for t in terms if t.sign != 0)
    if total == 0.0:
        return ZERO, math.inf
    result = LogScalar(1 if total > 0 else -1, peak + math.log2(abs(total)))
    return result, peak - result.log2


def bisect_monotone(
    g: Callable[[float], float],
    target: float,
    bracket: tuple[float, float],
    tol: float = 1e-10,
    max_iter: int = 256,
) -> float:
    """Root of ``g(x) = target`` for monotone ``g`` on a straddling bracket.

    Terminates when both ``|g(x) - target| <= tol`` and the bracket width is
    at most ``tol * max(1, |x|)``, so the result is bracket-independent to
    within ``tol``.  Raises :class:`BracketError` when the endpoint values do
    not straddle the target and :class:`ConvergenceError` when the budget runs
    out (monotone continuous inputs converge in well under 256 steps).
    """
    lo, hi = bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise ValueError(f"invalid bracket {bracket!r}")
    glo = g(lo)
    ghi = g(hi)
    if not (math.isfinite(glo) and math.isfinite(ghi)):
        raise ValueError("non-finite evaluation at a bracket endpoint")
    if not (min(glo, ghi) <= target <= max(glo, ghi)):
        raise BracketError(
            f"g({lo}) = {glo} and g({hi}) = {ghi} do not straddle {target}"
        )
    increasing = ghi >= glo
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if not math.isfinite(gm):
            raise ValueError(f"non-finite evaluation at {mid}")
        if (gm < target) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)) and abs(gm - target) <= tol:
            return mid
    if abs(g(mid) - target) <= tol:
        return mid
    raise ConvergenceError(f"bisection did not reach tol={tol} in {max_iter} steps")


def _simpson_weights(panels: int, h: float) -> np.ndarray:
    w = np.full(panels + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def quad_log(
    g: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-8,
    max_refine: int = 14,
) -> float:
    """Integral of a positive ``g`` over ``[a, b]`` via the s = 2**u substitution.

    Composite Simpson in the u variable, doubling the panel count until two
    successive estimates agree to a relative ``tol``.  The substitution
    absorbs integrable power singularities at 0: the transformed integrand
    ``g(2**u) * 2**u * ln 2`` decays where ``s**r * g(s)`` does.
    """
    if not (0.0 < a < b):
        raise ValueError(f"require 0 < a < b, got a={a}, b={b}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    u_lo = math.log2(a)
    u_hi = math.log2(b)
    panels = 8
    previous = None
    for _ in range(max_refine + 1):
        u = np.linspace(u_lo, u_hi, panels + 1)
        vals = np.array([g(2.0 ** ui) * 2.0 ** ui for ui in u]) * LN2
        if not np.all(np.isfinite(vals)):
            raise ValueError("integrand evaluated to a non-finite value")
        h = (u_hi - u_lo) / panels
        estimate = float(_simpson_weights(panels, h) @ vals)
        if previous is not None and abs(estimate - previous) <= tol * max(
            abs(estimate), 1e-300
        ):
            return estimate
        previous = estimate
        panels *= 2
    raise ConvergenceError(f"quadrature did not converge to rel tol {tol}")


def quad_log2(
    h_log2: Callable[[np.ndarray], np.ndarray],
    u_lo: float,
    u_hi: float,
    rel_tol: float = 1e-9,
    panels: int = 8,
    max_refine: int = 12,
) -> float:
    """log2 of the integral of ``2**h_log2(u)`` du over ``[u_lo, u_hi]``.

    The integrand is supplied as a vectorized base-2 log so values like
    2**-5000 participate without underflow; the peak is factored out before
    the Simpson sum.  Returns ``-inf`` for an identically vanishing integrand.
    """
    if u_hi <= u_lo:
        raise ValueError("require u_lo < u_hi")
    previous = None
    for _ in range(max_refine + 1):
        u = np.linspace(u_lo, u_hi, panels + 1)
        lv = np.asarray(h_log2(u), dtype=float)
        peak = float(np.max(lv))
        if peak == NEG_INF:
            return NEG_INF
        h = (u_hi - u_lo) / panels
        s = float(_simpson_weights(panels, h) @ np.exp2(lv - peak))
        estimate = peak + math.log2(s)
        if previous is not None:
            if abs(2.0 ** (estimate - previous) - 1.0) <= rel_tol:
                return estimate
        previous = estimate
        panels *= 2
    raise ConvergenceError(f"log-domain quadrature did not reach rel tol {rel_tol}")


@dataclass(frozen=True)
class Grid:
    """Strictly increasing evaluation points stored as base-2 logarithms."""

    log2_points: tuple[float, ...]
    descriptor: str

    def __post_init__(self) -> None:
        pts = self.log2_points
        if len(pts) == 0:
            raise ValueError("grid must contain at least one point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("grid points must be strictly increasing")
        if any(not math.isfinite(p) for p in pts):
            raise ValueError("grid points must be finite")

    @classmethod
    def dyadic(cls, lo_log2: int, hi_log2: int) -> "Grid":
        """Integer powers of two: t = 2**k for k in [lo_log2, hi_log2]."""
        if hi_log2 < lo_log2:
            raise ValueError("empty dyadic range")
        pts = tuple(float(k) for k in range(lo_log2, hi_log2 + 1))
        return cls(pts, f"dyadic[{lo_log2}..{hi_log2}]")

    @classmethod
    def log_uniform(cls, lo_log2: float, hi_log2: float, count: int) -> "Grid":
        if count < 2:
            raise ValueError("log-uniform grid needs at least two points")
        pts = tuple(float(p) for p in np.linspace(lo_log2, hi_log2, count))
        return cls(pts, f"log-uniform[{lo_log2:g}..{hi_log2:g},n={count}]")

    @classmethod
    def explicit(cls, log2_points: Sequence[float]) -> "Grid":
        return cls(tuple(float(p) for p in log2_points), "explicit")

    def __len__(self) -> int:
        return len(self.log2_points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.log2_points, dtype=float)

    @property
    def lo_log2(self) -> float:
        return self.log2_points[0]

    @property
    def hi_log2(self) -> float:
        return self.log2_points[-1]

    def span_log2(self) -> float:
        return self.hi_log2 - self.lo_log2
