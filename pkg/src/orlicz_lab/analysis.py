"""Rearrangement functionals and the head/tail spanning machinery.

The central objects are power integrals of a decreasing profile g on (0, 1]:

* head integrals ``int_0^t g(s)**r ds``, improper at 0;
* tail integrals ``int_t^1 g(s)**r ds``, always proper;
* the combined two-exponent functional
  ``((1/t) int_0^t g**p)**(1/p) + ((1/t) int_t^1 g**2)**(1/2)``
  whose boundedness relative to g(t) itself is the spanning criterion for
  the sequence-space geometry tools in this package.

Step functions are integrated exactly through their atoms.  Canonical
profiles of Orlicz functions are integrated by dyadic-block quadrature with
a per-(exponent, block) cache; heads stop once the geometric tail estimate
of the remaining blocks is negligible.  A head whose blocks keep growing
raises :class:`DivergenceError`; a head whose blocks decay too slowly to
converge (the borderline log-type profiles) is truncated at a deterministic
depth so results stay reproducible run to run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .measure import StepFunction
from .numerics import NEG_INF, LN2, Grid, LogScalar, ZERO, ONE, quad_log2
from .orlicz import CanonicalProfile, MarginReport, OrliczFunction, epsilon_margin

ProfileLike = Union[StepFunction, CanonicalProfile, OrliczFunction, Callable]

_LOG2_LN2 = math.log2(LN2)

#: blocks per decade of depth added beyond the cut point before a
#: non-convergent head sum is truncated (kept deterministic on purpose)
_SPAN_SLACK = 64
_GROWTH_RATIO = 1.02
_GROWTH_STRIKES = 4


class DivergenceError(RuntimeError):
    """A head integral whose dyadic blocks keep growing has no finite value."""


def head_span_cap(x: float) -> int:
    """Deepest dyadic block index summed for a head cut at t = 2**x."""
    return int(math.ceil(2.0 * max(abs(x), 1.0))) + _SPAN_SLACK


class QuadProfile:
    """Dyadic-block integrator for the canonical profile of an Orlicz function.

    Block j holds ``int m(t)**r dt`` over ``[2**-(j+1), 2**-j]``; full blocks
    are cached per (r, j) so heads and tails at many cut points share work.
    All arithmetic is on base-2 logs.
    """

    def __init__(self, M: OrliczFunction) -> None:
        self.M = M
        self.profile = M.profile()
        self._blocks: dict[tuple[float, int], float] = {}

    def _integrand(self, r: float) -> Callable[[np.ndarray], np.ndarray]:
        prof = self.profile

        def h(u: np.ndarray) -> np.ndarray:
            # log2 of m(2**u)**r * 2**u * ln 2, the du-substituted integrand
            return r * np.asarray(prof.log2_value(u), dtype=float) + u + _LOG2_LN2

        return h

    def block_log2(self, r: float, j: int) -> float:
        key = (float(r), int(j))
        got = self._blocks.get(key)
        if got is None:
            got = quad_log2(self._integrand(r), -(j + 1.0), -float(j), rel_tol=1e-10)
            self._blocks[key] = got
        return got

    def segment_log2(self, r: float, u_lo: float, u_hi: float) -> float:
        """Partial-block integral, not cached."""
        return quad_log2(self._integrand(r), u_lo, u_hi, rel_tol=1e-10)

    def tail_log2(self, r: float, x: float) -> float:
        """log2 of the integral of m**r over [2**x, 1]; proper, no cap."""
        if not x < 0.0:
            raise ValueError("tail cut must satisfy t < 1")
        j0 = int(math.floor(-x + 1e-12))
        parts = [self.block_log2(r, j) for j in range(j0)]
        if x < -float(j0) - 1e-12:
            parts.append(self.segment_log2(r, x, -float(j0)))
        total = NEG_INF
        for term in parts:
            total = float(np.logaddexp2(total, term))
        return total

    def head_log2(self, r: float, x: float, rel_tol: float = 1e-8) -> float:
        """log2 of the integral of m**r over (0, 2**x], x <= 0.

        The block sum stops early once the geometric estimate of the
        remaining mass is below ``rel_tol`` of the running total.  Growing
        blocks raise :class:`DivergenceError`; blocks that shrink too slowly
        for the estimate to ever trigger are cut off at
        :func:`head_span_cap` and the truncated value is returned.
        """
        if x > 0.0:
            raise ValueError("head cut must satisfy t <= 1")
        j_first = int(math.ceil(-x - 1e-12))
        total = NEG_INF
        if j_first > -x:
            total = self.segment_log2(r, -float(j_first), x)
        prev = None
        strikes = 0
        for j in range(j_first, head_span_cap(x)):
            term = self.block_log2(r, j)
            total = float(np.logaddexp2(total, term))
            if prev is not None and term > NEG_INF:
                ratio = 2.0 ** (term - prev)
                if ratio > _GROWTH_RATIO:
                    strikes += 1
                    if strikes >= _GROWTH_STRIKES:
                        raise DivergenceError(
                            f"head blocks grow (ratio {ratio:.3f} at depth {j}); "
                            "the profile power is not integrable near 0"
                        )
                else:
                    strikes = 0
                if ratio < 1.0:
                    remaining = term + math.log2(ratio / (1.0 - ratio))
                    if remaining <= total + math.log2(rel_tol):
                        return total
            prev = term
        return total


def profile_quadrature(M: OrliczFunction) -> QuadProfile:
    """The memoized block integrator attached to this function instance."""
    got = getattr(M, "_quad_profile", None)
    if got is None:
        got = QuadProfile(M)
        M._quad_profile = got
    return got


# ---------------------------------------------------------------------------
# sum-space norm of a step function


def log2_lp_l2_norm(f: StepFunction, p: float) -> LogScalar:
    """Sum-space norm ``(int_0^1 f*^p)**(1/p) + (int_1^len f*^2)**(1/2)``.

    Exact through the atoms of f; the second term vanishes when the support
    fits inside the unit interval.
    """
    if not p >= 1.0:
        raise ValueError("the head exponent must satisfy p >= 1")
    if len(f) == 0:
        return ZERO
    head_hi = f.total if f.total < ONE else ONE
    head = f.power_integral(p, ZERO, head_hi)
    out = head ** (1.0 / p)
    if f.total > ONE:
        tail = f.power_integral(2.0, ONE, f.total)
        out = out + tail ** 0.5
    return out


def lp_l2_norm(f: StepFunction, p: float) -> float:
    return float(log2_lp_l2_norm(f, p))


# ---------------------------------------------------------------------------
# head/tail functional and Cesaro ratios


def _step_head_tail_log2(g: StepFunction, p: float, x: float) -> float:
    t = LogScalar.from_log2(x)
    head = g.power_integral(p, ZERO, t)
    out = (head.times_pow2(-x)) ** (1.0 / p)
    if t < ONE:
        tail = g.power_integral(2.0, t, ONE)
        out = out + (tail.times_pow2(-x)) ** 0.5
    return out.log2


def _quad_head_tail_log2(M: OrliczFunction, p: float, x: float, rel_tol: float) -> float:
    quad = profile_quadrature(M)
    head = (quad.head_log2(p, x, rel_tol=rel_tol) - x) / p
    if x < 0.0:
        tail = (quad.tail_log2(2.0, x) - x) / 2.0
        return float(np.logaddexp2(head, tail))
    return head


def log2_head_tail_norm(
    g: ProfileLike, p: float, log2_t: float, rel_tol: float = 1e-8
) -> float:
    """log2 of ``((1/t) int_0^t g**p)**(1/p) + ((1/t) int_t^1 g**2)**(1/2)``.

    ``g`` may be a step function (integrated exactly) or an Orlicz function /
    canonical profile (dyadic-block quadrature).
    """
    if not p >= 1.0:
        raise ValueError("the head exponent must satisfy p >= 1")
    if log2_t > 0.0:
        raise ValueError("the cut point must satisfy t <= 1")
    if isinstance(g, StepFunction):
        return _step_head_tail_log2(g, p, log2_t)
    if isinstance(g, CanonicalProfile):
        return _quad_head_tail_log2(g.M, p, log2_t, rel_tol)
    raise TypeError("g must be a step function or a canonical profile view")


def head_tail_norm(g: ProfileLike, p: float, log2_t: float, rel_tol: float = 1e-8) -> float:
    return float(2.0 ** log2_head_tail_norm(g, p, log2_t, rel_tol=rel_tol))


def cesaro_head(M: OrliczFunction, p: float, log2_t: float, rel_tol: float = 1e-8) -> float:
    """Dimensionless head ratio ``(1/t) int_0^t m**p ds / m(t)**p``.

    Bounded iff the profile power stays Cesaro-controlled toward 0; for the
    borderline log-type profiles the value grows without bound as t drops
    (subject to the deterministic span cap of :class:`QuadProfile`).
    """
    quad = profile_quadrature(M)
    head = quad.head_log2(p, log2_t, rel_tol=rel_tol)
    ref = p * float(quad.profile.log2_value(log2_t))
    return float(2.0 ** (head - log2_t - ref))


def cesaro_tail(M: OrliczFunction, q: float, log2_t: float, rel_tol: float = 1e-8) -> float:
    """Dimensionless tail ratio ``(1/t) int_t^1 m**q ds / m(t)**q``."""
    quad = profile_quadrature(M)
    tail = quad.tail_log2(q, log2_t)
    ref = q * float(quad.profile.log2_value(log2_t))
    return float(2.0 ** (tail - log2_t - ref))


# ---------------------------------------------------------------------------
# pointwise equivalence of two profiles


def _log2_map(obj: ProfileLike) -> tuple[Callable[[np.ndarray], np.ndarray], str]:
    """Uniform (vectorized log2 map, descriptor) view of comparable objects.

    Step functions compare through their rearrangement, profile views
    through the profile height, and Orlicz functions through their values;
    raw callables are taken verbatim as log2 maps.
    """
    if isinstance(obj, StepFunction):
        def step_map(xs: np.ndarray) -> np.ndarray:
            return np.array([obj.log2_rearrangement(float(x)) for x in np.atleast_1d(xs)])

        return step_map, "step_function"
    if isinstance(obj, CanonicalProfile):
        return (lambda xs: np.asarray(obj.log2_value(xs), dtype=float)), f"profile[{obj.M.name}]"
    if isinstance(obj, OrliczFunction):
        return (lambda xs: np.asarray(obj.log2_value(xs), dtype=float)), f"function[{obj.name}]"
    if callable(obj):
        return (lambda xs: np.asarray(obj(xs), dtype=float)), "callable"
    raise TypeError(f"cannot interpret {type(obj).__name__} as a profile")


@dataclass(frozen=True)
class EquivalenceReport:
    """Two-sided pointwise comparison of profiles f and g on a grid.

    ``constant`` is the smallest C with ``g/C <= f <= C*g`` across the grid;
    ``worst_over``/``worst_under`` give the log2 of the points where f/g is
    largest and smallest.
    """

    log2_constant: float
    worst_over_log2_t: float
    worst_under_log2_t: float
    grid_descriptor: str
    cap: float
    left_descriptor: str
    right_descriptor: str
    #: per grid point (log2 t, log2 of the f/g ratio)
    rows: tuple[tuple[float, float], ...] = ()

    @property
    def constant(self) -> float:
        return float(2.0 ** self.log2_constant)

    @property
    def verdict(self) -> bool:
        return self.log2_constant <= math.log2(self.cap)

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "log2_constant": self.log2_constant,
            "worst_over": self.worst_over_log2_t,
            "worst_under": self.worst_under_log2_t,
            "grid_descriptor": self.grid_descriptor,
            "cap": self.cap,
            "verdict": self.verdict,
            "left": self.left_descriptor,
            "right": self.right_descriptor,
        }


def equivalence_constant(
    f: ProfileLike, g: ProfileLike, grid: Grid, cap: float = 10.0
) -> EquivalenceReport:
    """Smallest grid-wise constant C with g/C <= f <= C*g, as a report.

    A vanishing value on either side at some grid point makes the constant
    infinite (the report then fails any finite cap).
    """
    if cap < 1.0:
        raise ValueError("cap must be at least 1")
    fmap, fdesc = _log2_map(f)
    gmap, gdesc = _log2_map(g)
    xs = grid.as_array()
    with np.errstate(invalid="ignore"):
        delta = fmap(xs) - gmap(xs)
    if np.any(np.isnan(delta)):
        # 0/0 at matching supports counts as agreement
        both_zero = np.isneginf(fmap(xs)) & np.isneginf(gmap(xs))
        delta = np.where(both_zero, 0.0, delta)
    hi = int(np.argmax(delta))
    lo = int(np.argmin(delta))
    log2_c = float(max(delta[hi], -delta[lo]))
    rows = tuple((float(x), float(d)) for x, d in zip(xs, delta))
    return EquivalenceReport(
        log2_c, float(xs[hi]), float(xs[lo]), grid.descriptor, cap, fdesc, gdesc, rows
    )


def uniqueness_check(
    M: OrliczFunction, f: ProfileLike, grid: Grid, cap: float = 10.0
) -> EquivalenceReport:
    """Compare a candidate spanning profile against the canonical one for M."""
    return equivalence_constant(f, M.profile(), grid, cap=cap)


# ---------------------------------------------------------------------------
# the spanning condition itself


@dataclass(frozen=True)
class SpanningReport:
    """Grid supremum of head/tail functional against the profile height."""

    constant: float
    worst_log2_t: float
    rows: tuple[tuple[float, float], ...]
    grid_descriptor: str
    cap: float
    p: float

    @property
    def verdict(self) -> bool:
        return self.constant <= self.cap

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "worst_log2_t": self.worst_log2_t,
            "grid_descriptor": self.grid_descriptor,
            "cap": self.cap,
            "p": self.p,
            "verdict": self.verdict,
        }


def check_spanning_condition(
    M: OrliczFunction,
    g: ProfileLike,
    p: float,
    grid: Grid,
    cap: float = 10.0,
    rel_tol: float = 1e-8,
) -> SpanningReport:
    """sup over the grid of head_tail_norm(g, p, t) / g(t), with verdict.

    When the ratio stays bounded the profile g generates, inside the span of
    its disjoint translates, the same geometry as the p + 2 sum space.
    """
    gmap, _ = _log2_map(g)
    rows = []
    worst = -math.inf
    worst_x = grid.lo_log2
    for x in grid.log2_points:
        num = log2_head_tail_norm(g, p, x, rel_tol=rel_tol)
        den = float(gmap(np.array([x]))[0])
        ratio = 2.0 ** (num - den)
        rows.append((x, ratio))
        if ratio > worst:
            worst = ratio
            worst_x = x
    return SpanningReport(worst, worst_x, tuple(rows), grid.descriptor, cap, p)


@dataclass(frozen=True)
class CriteriaAgreement:
    """Joint verdict of the integral criterion and the exponent margins."""

    spanning: SpanningReport
    margins: MarginReport

    @property
    def agree(self) -> bool:
        return self.spanning.verdict == self.margins.verdict

    def to_dict(self) -> dict:
        return {
            "spanning": self.spanning.to_dict(),
            "margins": self.margins.to_dict(),
            "agree": self.agree,
        }


def criteria_agreement(
    M: OrliczFunction,
    p: float,
    grid: Grid,
    cap: float = 10.0,
    margin: float = 0.02,
) -> CriteriaAgreement:
    """Run the spanning check and the exponent-window check side by side.

    The two are different finite surrogates for the same dividing line (the
    profile criterion is exact in the limit; the exponent window is
    sufficient), so the expected outcome on clear-cut inputs is agreement.
    """
    spanning = check_spanning_condition(M, M.profile(), p, grid, cap=cap)
    margins = epsilon_margin(M, p, grid, margin=margin, cap=cap)
    return CriteriaAgreement(spanning, margins)


# ---------------------------------------------------------------------------
# canonical profile as a step function


def profile_step_function(M: OrliczFunction, levels: int) -> StepFunction:
    """Dyadic-block staircase of the canonical profile.

    Block j in [2**-(j+1), 2**-j] contributes one atom whose value is the
    profile height at the deep end and whose measure is the block width, so
    the staircase dominates m pointwise and matches it to within one
    dilation step.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    prof = M.profile()
    pairs = []
    for j in range(levels):
        x = -(j + 1.0)
        pairs.append((float(prof.log2_value(x)), x))
    return StepFunction.from_log2_atoms(pairs, ambient=ONE)
