"""Doubly exponential tower functions and the sharpness checks built on them.

The two protagonists are step functions on (0, 1) whose k-th atom has value
``base**(base**k)`` and measure ``base**(-k - base**k)`` (base 2 and base 4
here).  Their growth is tuned so that

* ``int_0^1 min(f, t * f**2)`` is comparable to ``1 / log2(1/t)`` for both,
  with explicit envelope [1/L, 6/L] for the dyadic tower (L = log2(1/t));
* their distribution functions are nevertheless *not* equivalent: for any
  C >= 1 there is a threshold where ``n_dyadic(C t) > C * n_quartic(t)``;
* the Orlicz function induced by the dyadic tower through the
  quadratic-linear kernel is equivalent to ``t / log(e/t)`` near 0.

Together these show the comparability of the min-integrals is strictly
weaker than equimeasurability, yet still strong enough to pin the induced
sequence-space geometry.  All atom data are dyadic, so log-domain sums are
exact.  The infinite series are truncated at a configured level, but the
discarded remainder is not dropped: every omitted atom lies in the linear
branch of both evaluators for any t the truncation serves, so its aggregate
closed form rejoins the sums and the reported values match the untruncated
series exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .analysis import lp_l2_norm
from .measure import StepFunction, TowerFunction, scaled_disjoint_union
from .numerics import ONE, LogScalar, log_sum
from .orlicz import (
    InducedFunction,
    PowerLogFunction,
    luxemburg_norm,
    quad_linear_log2,
)


class TruncationError(ValueError):
    """The configured truncation level cannot serve the requested range."""


@dataclass(frozen=True)
class TowerConfig:
    """Truncation policy for the infinite tower series.

    ``levels`` is the number of atoms retained; ``max_log2`` the largest
    L = log2(1/t) the truncation must serve.  The validation rule keeps the
    branch point of the min-integral strictly inside the retained atoms.
    """

    levels: int
    max_log2: float

    def __post_init__(self) -> None:
        if self.levels < 1 or int(self.levels) != self.levels:
            raise ValueError("levels must be a positive integer")
        if not self.max_log2 > 0.0:
            raise ValueError("max_log2 must be positive")
        need = math.ceil(math.log2(self.max_log2)) + 2
        if self.levels < need:
            raise TruncationError(
                f"levels={self.levels} cannot serve max_log2={self.max_log2}; "
                f"need at least {need}"
            )

    @classmethod
    def for_max_log2(cls, max_log2: float) -> "TowerConfig":
        return cls(math.ceil(math.log2(max_log2)) + 2, max_log2)


def tower(base: int, levels: int) -> TowerFunction:
    """Tower function with atoms ``(base**(base**k), base**(-k-base**k))``.

    k runs from 1 to ``levels``.  Values explode doubly exponentially while
    measures shrink to match, leaving every product v*mu = base**-k.  The
    result remembers its truncation, so affine evaluators (the min-integral,
    the induced Orlicz function) can fold the discarded remainder in exactly.
    """
    if base < 2 or int(base) != base:
        raise ValueError("base must be an integer >= 2")
    lb = math.log2(base)
    pairs = []
    for k in range(1, levels + 1):
        power = float(base) ** k
        pairs.append((power * lb, -(k + power) * lb))
    staged = StepFunction.from_log2_atoms(pairs, ambient=ONE)
    return TowerFunction(
        base, levels, staged.atoms, staged.ambient, staged.cumulative(), staged.total
    )


def dyadic_tower(cfg: TowerConfig) -> TowerFunction:
    return tower(2, cfg.levels)


def quartic_tower(cfg: TowerConfig) -> TowerFunction:
    return tower(4, cfg.levels)


def min_integral(f: StepFunction, t: LogScalar) -> LogScalar:
    """Exact atom-wise ``int min(f, t * f**2)``: branch at value 1/t.

    Atoms with v < 1/t contribute the quadratic term t*v**2*mu, the rest the
    linear term v*mu; each term is a single dyadic product, so the sum is a
    plain log-domain reduction with no rounding surprises.

    A :class:`~orlicz_lab.measure.TowerFunction` stands for its infinite
    series: the discarded atoms all sit in the linear branch (their values
    dwarf 1/t for any t the truncation serves), so their aggregate linear
    mass joins the sum as one exact closed-form term.
    """
    if t.sign <= 0:
        raise ValueError("the weight t must be positive")
    terms = []
    for v, mu in f.atoms:
        if t.log2 + v.log2 < 0.0:
            terms.append(LogScalar.from_log2(t.log2 + 2.0 * v.log2 + mu.log2))
        else:
            terms.append(v * mu)
    if isinstance(f, TowerFunction):
        if t.log2 + f.log2_tail_min_value < 0.0:
            raise TruncationError(
                "t is so small that discarded atoms would fall in the"
                " quadratic branch; raise the truncation level"
            )
        terms.append(LogScalar.from_log2(f.log2_tail_linear_mass))
    return log_sum(terms)


@dataclass(frozen=True)
class BoundsRow:
    L: float
    log2_value: float
    log2_lower: float
    log2_upper: float
    passed: bool

    @property
    def value(self) -> float:
        return float(2.0 ** self.log2_value)

    @property
    def scaled(self) -> float:
        """integral * L, the quantity the envelope brackets; never underflows."""
        return float(2.0 ** (self.log2_value + math.log2(self.L)))


@dataclass(frozen=True)
class BoundsReport:
    """Per-L envelope check of the min-integral against c/L .. C/L."""

    flavor: str
    rows: tuple[BoundsRow, ...]
    ratio_min: float
    ratio_max: float
    passed: bool

    def to_rows(self) -> list[dict]:
        # deep L values underflow doubles (2**-4096), so the delimited form
        # carries log2 columns plus the always-representable integral * L
        return [
            {
                "L": r.L,
                "log2_integral": r.log2_value,
                "log2_lower": r.log2_lower,
                "log2_upper": r.log2_upper,
                "integral_times_L": r.scaled,
                "pass": r.passed,
            }
            for r in self.rows
        ]

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "passed": self.passed,
            "rows": self.to_rows(),
        }


_ENVELOPES = {"dyadic": (1.0, 6.0), "quartic": None}


def verify_min_integral_bounds(
    flavor: str, cfg: TowerConfig, L_list: Sequence[float]
) -> BoundsReport:
    """Check ``min_integral(tower, 2**-L) ~ 1/L`` over a list of L values.

    The dyadic flavor asserts the explicit envelope [1/L, 6/L] by pure
    log-domain comparison (rows fail individually).  For the quartic flavor
    only the shape transfers, so the report carries the empirical envelope
    (min and max of value*L) and rows pass whenever the value is positive
    and finite.
    """
    if flavor not in _ENVELOPES:
        raise ValueError("flavor must be 'dyadic' or 'quartic'")
    envelope = _ENVELOPES[flavor]
    f = dyadic_tower(cfg) if flavor == "dyadic" else quartic_tower(cfg)
    rows = []
    ratios = []
    for L in L_list:
        if not L > 2.0:
            raise ValueError("each L must exceed 2 (the bounds assume t < 1/4)")
        if L > cfg.max_log2:
            raise TruncationError(f"L={L} exceeds the configured max_log2={cfg.max_log2}")
        value = min_integral(f, LogScalar.from_log2(-float(L)))
        ratios.append(float(2.0 ** (value.log2 + math.log2(float(L)))))
        if envelope is None:
            lo, hi = -math.inf, math.inf
            ok = value.sign > 0 and math.isfinite(value.log2)
        else:
            lo = math.log2(envelope[0]) - math.log2(L)
            hi = math.log2(envelope[1]) - math.log2(L)
            ok = lo <= value.log2 <= hi
        rows.append(BoundsRow(float(L), value.log2, lo, hi, ok))
    return BoundsReport(
        flavor, tuple(rows), min(ratios), max(ratios), all(r.passed for r in rows)
    )


def truncation_shift(flavor: str, cfg: TowerConfig, L_list: Sequence[float]) -> float:
    """Largest relative change of the min-integral when one level is added.

    The added atom always sits in the linear branch for the L values a valid
    config serves, so the shift is essentially ``2**-(levels+1)`` against a
    value of order 1/L.
    """
    f_lo = tower(2 if flavor == "dyadic" else 4, cfg.levels)
    f_hi = tower(2 if flavor == "dyadic" else 4, cfg.levels + 1)
    worst = 0.0
    for L in L_list:
        t = LogScalar.from_log2(-float(L))
        v_lo = min_integral(f_lo, t)
        v_hi = min_integral(f_hi, t)
        shift = float((v_hi - v_lo) / v_lo)
        worst = max(worst, abs(shift))
    return worst


@dataclass(frozen=True)
class Witness:
    """A threshold where the two tower distributions refuse C-equivalence."""

    k: int
    log2_C: float
    log2_t: float
    log2_lhs: float
    log2_rhs: float

    @property
    def gap_log2(self) -> float:
        return self.log2_lhs - self.log2_rhs

    @property
    def verified(self) -> bool:
        return self.log2_lhs > self.log2_rhs

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "log2_C": self.log2_C,
            "log2_t": self.log2_t,
            "log2_lhs": self.log2_lhs,
            "log2_rhs": self.log2_rhs,
            "gap_log2": self.gap_log2,
            "verified": self.verified,
        }


def find_nonequiv_witness(log2_C: float, cfg: TowerConfig) -> Witness:
    """Threshold t with ``n_dyadic(C t) > C * n_quartic(t)`` for a given C.

    The index rule picks the smallest k >= 1 with ``2**(2k+1) > log2(C)+1``;
    the threshold is the midpoint (in log2) of the band where both t and Ct
    sit between the (2k+1)-th and (2k+2)-th dyadic tower values, which is
    exactly where the quartic tower has no atoms to offer.
    """
    if log2_C < 0.0:
        raise ValueError("the constant C must be at least 1")
    k = 1
    while not 2.0 ** (2 * k + 1) > log2_C + 1.0:
        k += 1
    if cfg.levels < 2 * k + 2:
        raise TruncationError(
            f"need levels >= {2 * k + 2} to witness non-equivalence at log2_C={log2_C}"
        )
    lo = 2.0 ** (2 * k + 1)
    hi = 2.0 ** (2 * k + 2)
    log2_t = math.floor((lo + hi - log2_C) / 2.0)
    x = dyadic_tower(cfg)
    y = quartic_tower(cfg)
    lhs = x.distribution(LogScalar.from_log2(log2_C + log2_t))
    rhs = y.distribution(LogScalar.from_log2(float(log2_t))).times_pow2(log2_C)
    return Witness(k, log2_C, float(log2_t), lhs.log2, rhs.log2)


def induced_orlicz(f: StepFunction, t: float, log2_t: Optional[float] = None) -> float:
    """Raw induced value ``sum N(t * v_k) * mu_k`` with the quadratic-linear N.

    Not normalized; wrap the step function in the induced Orlicz family for
    the M(1) = 1 convention.  Pass ``log2_t`` to reach depths where t itself
    underflows.

    For a :class:`~orlicz_lab.measure.TowerFunction` the discarded atoms all
    have t*v >= 1, where N is affine, so their aggregate reduces to
    ``2*t*(linear mass) - (discarded measure)``; the measure term sits around
    base**-(base**levels) and is far below double resolution, so only the
    linear-mass term is added.
    """
    if log2_t is None:
        if not 0.0 < t <= 1.0:
            raise ValueError("t must lie in (0, 1]")
        log2_t = math.log2(t)
    elif log2_t > 0.0:
        raise ValueError("log2_t must be <= 0")
    terms = [
        LogScalar.from_log2(float(quad_linear_log2(log2_t + v.log2)) + mu.log2)
        for v, mu in f.atoms
    ]
    if isinstance(f, TowerFunction):
        if log2_t + f.log2_tail_min_value < 0.0:
            raise TruncationError(
                "t is so small that discarded atoms would leave the affine"
                " branch; raise the truncation level"
            )
        terms.append(LogScalar.from_log2(log2_t + 1.0 + f.log2_tail_linear_mass))
    return float(log_sum(terms))


@dataclass(frozen=True)
class CorrespondenceRow:
    flavor: str
    scheme: str
    size: int
    lhs: float
    rhs_induced: float
    rhs_powerlog: float

    @property
    def ratio_induced(self) -> float:
        return self.lhs / self.rhs_induced

    @property
    def ratio_powerlog(self) -> float:
        return self.lhs / self.rhs_powerlog

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "scheme": self.scheme,
            "size": self.size,
            "lhs": self.lhs,
            "rhs_induced": self.rhs_induced,
            "rhs_powerlog": self.rhs_powerlog,
            "ratio_induced": self.ratio_induced,
            "ratio_powerlog": self.ratio_powerlog,
        }


@dataclass(frozen=True)
class CorrespondenceReport:
    """Sum-space norms of tower combinations against sequence-space norms."""

    rows: tuple[CorrespondenceRow, ...]
    constant_induced: float
    constant_powerlog: float
    cap: float

    @property
    def verdict(self) -> bool:
        return max(self.constant_induced, self.constant_powerlog) <= self.cap

    def to_dict(self) -> dict:
        return {
            "constant_induced": self.constant_induced,
            "constant_powerlog": self.constant_powerlog,
            "cap": self.cap,
            "verdict": self.verdict,
            "rows": [r.to_dict() for r in self.rows],
        }


def _two_sided(ratios: Sequence[float]) -> float:
    worst = 1.0
    for r in ratios:
        worst = max(worst, r, 1.0 / r if r > 0.0 else math.inf)
    return worst


def verify_norm_correspondence(
    cfg: TowerConfig,
    p: float = 1.0,
    n_log2_list: Sequence[int] = tuple(range(17)),
    cap: float = 32.0,
    geometric_sizes: Sequence[int] = (4, 64, 1024),
) -> CorrespondenceReport:
    """Compare sum-space norms of tower sums with Luxemburg sequence norms.

    For each tower flavor and each coefficient family (single unit vector,
    flat vectors of dyadic lengths, geometric vectors with ratio 1/2), the
    row holds the exact sum-space norm of the disjoint combination next to
    the Luxemburg norm of the coefficients under the induced function and
    under the explicit log-type function it mimics.  The report's constants
    are the worst two-sided ratios.
    """
    if p != 1.0:
        raise ValueError("the construction is calibrated in the p = 1 sum space")
    powerlog = PowerLogFunction()
    rows: list[CorrespondenceRow] = []
    for flavor in ("dyadic", "quartic"):
        f = dyadic_tower(cfg) if flavor == "dyadic" else quartic_tower(cfg)
        induced = InducedFunction(f)
        norm_f = lp_l2_norm(f, p)
        rows.append(CorrespondenceRow(flavor, "unit", 1, norm_f, 1.0, 1.0))
        for j in n_log2_list:
            n = 2 ** int(j)
            lhs = lp_l2_norm(f.disjoint_sum(n), p)
            rhs_i = float(2.0 ** -induced.log2_inverse(-float(j)))
            rhs_l = float(2.0 ** -powerlog.log2_inverse(-float(j)))
            rows.append(CorrespondenceRow(flavor, "flat", n, lhs, rhs_i, rhs_l))
        for size in geometric_sizes:
            coeffs = [2.0 ** -i for i in range(size)]
            lhs = lp_l2_norm(scaled_disjoint_union(f, coeffs), p)
            rhs_i = luxemburg_norm(induced, coeffs)
            rhs_l = luxemburg_norm(powerlog, coeffs)
            rows.append(CorrespondenceRow(flavor, "geometric", size, lhs, rhs_i, rhs_l))
    const_i = _two_sided([r.ratio_induced for r in rows])
    const_l = _two_sided([r.ratio_powerlog for r in rows])
    return CorrespondenceReport(tuple(rows), const_i, const_l, cap)
