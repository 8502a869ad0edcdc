"""Step functions, distribution functions, and decreasing rearrangements.

A :class:`StepFunction` is a nonnegative simple function described by atoms
``(value, measure)`` in strictly decreasing value order, together with the
length of the ambient interval it lives on (1 for probability-space
rearrangements, unbounded for disjoint sums on the half line).  Values beyond
the listed atoms are zero.  All magnitudes are :class:`~orlicz_lab.numerics.LogScalar`
so that towers like value 2**256 on measure 2**-267 behave exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .numerics import NEG_INF, ONE, ZERO, Grid, LogScalar, log_sum

Atom = tuple[LogScalar, LogScalar]


def _coerce(x) -> LogScalar:
    if isinstance(x, LogScalar):
        return x
    return LogScalar.from_float(float(x))


class StepFunction:
    """Nonnegative simple function with atoms sorted by decreasing value."""

    __slots__ = ("atoms", "ambient", "_cumulative", "total")

    def __init__(
        self,
        atoms: Sequence[Atom],
        ambient: Optional[LogScalar],
        _cumulative: Optional[tuple[LogScalar, ...]] = None,
        _total: Optional[LogScalar] = None,
    ) -> None:
        self.atoms = tuple(atoms)
        self.ambient = ambient
        if _cumulative is None:
            running: list[LogScalar] = []
            acc = ZERO
            for _, mu in self.atoms:
                acc = acc + mu
                running.append(acc)
            _cumulative = tuple(running)
            _total = log_sum([mu for _, mu in self.atoms]) if self.atoms else ZERO
        self._cumulative = _cumulative
        self.total = _total if _total is not None else ZERO
        if ambient is not None and self.total > ambient and not self.total.isclose(ambient):
            raise ValueError("atom measures exceed the ambient interval")

    @classmethod
    def from_atoms(
        cls, pairs: Iterable[tuple], ambient: Optional[LogScalar] = ONE
    ) -> "StepFunction":
        """Normalize raw (value, measure) pairs.

        Sorts by decreasing value, merges equal values (relative 1e-12;
        exact dyadic inputs compare exactly), drops zero values and zero
        measures, and rejects negative entries.
        """
        staged: list[Atom] = []
        for value, measure in pairs:
            v = _coerce(value)
            mu = _coerce(measure)
            if v.sign < 0:
                raise ValueError("step function values must be nonnegative")
            if mu.sign < 0:
                raise ValueError("atom measures must be nonnegative")
            if v.sign == 0 or mu.sign == 0:
                continue
            staged.append((v, mu))
        staged.sort(key=lambda a: (-a[0].sign, -a[0].log2))
        merged: list[Atom] = []
        for v, mu in staged:
            if merged and merged[-1][0].isclose(v):
                merged[-1] = (merged[-1][0], merged[-1][1] + mu)
            else:
                merged.append((v, mu))
        return cls(merged, ambient)

    @classmethod
    def from_log2_atoms(
        cls,
        pairs: Iterable[tuple[float, float]],
        ambient: Optional[LogScalar] = ONE,
    ) -> "StepFunction":
        """Build from (log2_value, log2_measure) rows."""
        return cls.from_atoms(
            [
                (LogScalar.from_log2(lv), LogScalar.from_log2(lm))
                for lv, lm in pairs
            ],
            ambient,
        )

    def __len__(self) -> int:
        return len(self.atoms)

    def cumulative(self) -> tuple[LogScalar, ...]:
        return self._cumulative

    # -- measure-theoretic queries -------------------------------------

    def distribution(self, tau: LogScalar) -> LogScalar:
        """n_f(tau): measure of the set where the function exceeds tau."""
        if tau.sign < 0:
            raise ValueError("distribution threshold must be nonnegative")
        count = 0
        for v, _ in self.atoms:
            if v > tau:
                count += 1
            else:
                break
        if count == 0:
            return ZERO
        return self._cumulative[count - 1]

    def rearrangement(self, s: LogScalar) -> LogScalar:
        """Decreasing rearrangement f*(s), right-continuous in s.

        ``s`` must lie in (0, ambient); beyond the atoms the value is 0.
        """
        if s.sign <= 0:
            raise ValueError("rearrangement argument must be positive")
        if self.ambient is not None and not s < self.ambient:
            raise ValueError("rearrangement argument exceeds the ambient interval")
        for (v, _), c in zip(self.atoms, self._cumulative):
            if s < c:
                return v
        return ZERO

    def log2_rearrangement(self, log2_s: float) -> float:
        """Convenience wrapper: log2 f*(2**log2_s), -inf when the value is 0."""
        return self.rearrangement(LogScalar.from_log2(log2_s)).log2

    def disjoint_sum(self, n: int) -> "StepFunction":
        """The rearrangement of n disjoint copies: same values, measures * n.

        Cached cumulative sums are shifted by log2(n) rather than re-summed,
        which keeps ``(sum of copies)*(s) == f*(s/n)`` exact for dyadic data
        and power-of-two n.
        """
        if n < 1 or int(n) != n:
            raise ValueError("n must be a positive integer")
        shift = math.log2(n)
        atoms = tuple((v, mu.times_pow2(shift)) for v, mu in self.atoms)
        cumulative = tuple(c.times_pow2(shift) for c in self._cumulative)
        total = self.total.times_pow2(shift)
        ambient = None if self.ambient is None else self.ambient.times_pow2(shift)
        return StepFunction(atoms, ambient, cumulative, total)

    def power_integral(self, r: float, a: LogScalar, b: LogScalar) -> LogScalar:
        """Integral of f*(s)**r over the interval (a, b), exact per atom."""
        if a.sign < 0:
            raise ValueError("lower integration bound must be nonnegative")
        if not a < b:
            raise ValueError("require a < b")
        if self.ambient is not None and b > self.ambient and not b.isclose(self.ambient):
            raise ValueError("upper integration bound exceeds the ambient interval")
        terms: list[LogScalar] = []
        prev = ZERO
        for (v, _), c in zip(self.atoms, self._cumulative):
            lo = prev if prev > a else a
            hi = c if c < b else b
            prev = c
            if lo < hi:
                terms.append((v ** r) * (hi - lo))
            if not c < b:
                break
        if not terms:
            return ZERO
        return log_sum(terms)

    def equimeasurable(self, other: "StepFunction", rel: float = 1e-12) -> bool:
        """Whether both functions share every (value, measure) pair and ambient."""
        if (self.ambient is None) != (other.ambient is None):
            return False
        if self.ambient is not None and not self.ambient.isclose(other.ambient, rel):
            return False
        if len(self.atoms) != len(other.atoms):
            return False
        return all(
            v1.isclose(v2, rel) and m1.isclose(m2, rel)
            for (v1, m1), (v2, m2) in zip(self.atoms, other.atoms)
        )

    def scale_values(self, factor: LogScalar) -> "StepFunction":
        """Pointwise multiple |factor| * f; measures are untouched."""
        if factor.sign == 0:
            return StepFunction((), self.ambient)
        f = abs(factor)
        atoms = tuple((v * f, mu) for v, mu in self.atoms)
        return StepFunction(atoms, self.ambient, self._cumulative, self.total)

    # -- serialization ---------------------------------------------------

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["log2_value", "log2_measure"])
            for v, mu in self.atoms:
                writer.writerow([repr(v.log2), repr(mu.log2)])

    @classmethod
    def from_csv(cls, path: str, ambient: Optional[LogScalar] = ONE) -> "StepFunction":
        rows: list[tuple[float, float]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != ["log2_value", "log2_measure"]:
                raise ValueError("expected header log2_value,log2_measure")
            for row in reader:
                if not row:
                    continue
                rows.append((float(row[0]), float(row[1])))
        return cls.from_log2_atoms(rows, ambient)


class TowerFunction(StepFunction):
    """Truncation of a doubly exponential atom series that knows its remainder.

    Materializes ``levels`` atoms (base**(base**k), base**-(k + base**k)) for
    k = 1..levels.  Every discarded atom k > levels carries linear mass
    value * measure = base**-k, so the remainder holds total linear mass
    base**-levels / (base - 1), concentrated on values at or above
    base**(base**(levels + 1)).  Evaluators that are affine in the function
    over that range fold the remainder in exactly; set-level queries
    (distribution, rearrangement) see the materialized atoms only, which
    omits a measure of order base**-(base**levels), far below the log-domain
    resolution of a double.
    """

    __slots__ = ("base", "levels")

    def __init__(
        self,
        base: int,
        levels: int,
        atoms: Sequence[Atom],
        ambient: Optional[LogScalar],
        _cumulative: Optional[tuple[LogScalar, ...]] = None,
        _total: Optional[LogScalar] = None,
    ) -> None:
        super().__init__(atoms, ambient, _cumulative, _total)
        self.base = int(base)
        self.levels = int(levels)

    @property
    def log2_tail_linear_mass(self) -> float:
        """log2 of sum over k > levels of value_k * measure_k (a geometric series)."""
        return -self.levels * math.log2(self.base) - math.log2(self.base - 1)

    @property
    def log2_tail_min_value(self) -> float:
        """log2 of the smallest discarded value, base**(base**(levels + 1))."""
        return float(self.base ** (self.levels + 1)) * math.log2(self.base)


def scaled_disjoint_union(f: StepFunction, coefficients: Sequence[float]) -> StepFunction:
    """Rearrangement of disjoint copies of ``a_k * f`` placed side by side.

    This is the exact right-hand object of the sum-space comparison: one copy
    of f per nonzero coefficient, each scaled by |a_k|, supported on disjoint
    intervals of the half line.
    """
    pairs: list[Atom] = []
    for a in coefficients:
        if a == 0.0:
            continue
        la = math.log2(abs(a))
        for v, mu in f.atoms:
            pairs.append((v.times_pow2(la), mu))
    return StepFunction.from_atoms(pairs, ambient=None)


@dataclass(frozen=True)
class DistributionComparisonFailure:
    log2_tau: float
    side: str
    log2_lhs: float
    log2_rhs: float


@dataclass(frozen=True)
class DistributionComparisonReport:
    passed: bool
    log2_C: float
    grid_descriptor: str
    failures: tuple[DistributionComparisonFailure, ...]

    def worst(self) -> Optional[DistributionComparisonFailure]:
        if not self.failures:
            return None
        return max(self.failures, key=lambda w: w.log2_lhs - w.log2_rhs)


def distribution_equivalence(
    f: StepFunction, g: StepFunction, log2_C: float, tau_grid: Grid
) -> DistributionComparisonReport:
    """Two-sided C-equivalence of distribution functions on a threshold grid.

    Checks ``n_f(C * tau) <= C * n_g(tau)`` and the mirrored inequality at
    every grid threshold; failures carry the witness tau and both sides.
    """
    if log2_C < 0:
        raise ValueError("the comparison constant must be at least 1")
    failures: list[DistributionComparisonFailure] = []
    for x in tau_grid.log2_points:
        tau = LogScalar.from_log2(x)
        tau_scaled = LogScalar.from_log2(x + log2_C)
        for side, (lhs_f, rhs_f) in (
            ("f_vs_g", (f, g)),
            ("g_vs_f", (g, f)),
        ):
            lhs = lhs_f.distribution(tau_scaled)
            rhs = rhs_f.distribution(tau).times_pow2(log2_C)
            if lhs > rhs and not lhs.isclose(rhs):
                failures.append(
                    DistributionComparisonFailure(x, side, lhs.log2, rhs.log2)
                )
    return DistributionComparisonReport(
        not failures, log2_C, tau_grid.descriptor, tuple(failures)
    )
