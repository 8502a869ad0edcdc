"""Orlicz function families, Luxemburg norms, and dilation-based indices.

An Orlicz function here is increasing and convex on its domain with
``M(0) = 0`` and the normalization ``M(1) = 1``.  Four families are
implemented:

* :class:`PowerFunction` -- ``t**q`` (domain all of (0, inf));
* :class:`PowerLogFunction` -- ``t / log(e/t)`` on (0, 1], the borderline
  function whose canonical profile is not integrable near 0;
* :class:`InducedFunction` -- ``t -> mean of N(t * f(s))`` for a step
  function f and the quadratic-linear kernel N (quadratic below 1, linear
  above), normalized at 1;
* :class:`TabulatedFunction` -- monotone log-log interpolation of sampled
  values, loadable from CSV.

Evaluation and inversion run on base-2 logarithms (vectorized over numpy
arrays) so arguments like 2**-4096 are first-class citizens.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .measure import StepFunction, TowerFunction
from .numerics import LN2, Grid, bisect_monotone

ArrayLike = Union[float, np.ndarray]

_LOG2_10 = math.log2(10.0)
_MIN_INDEX_SPAN = 6.0 * _LOG2_10  # six decades, in log2 units


class DomainError(ValueError):
    """Evaluation outside the declared domain of an Orlicz function."""


def _vector_bisect(predicate, lo: np.ndarray, hi: np.ndarray, iters: int = 80) -> np.ndarray:
    """Vectorized bisection: predicate(mid) True moves lo up, else hi down."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        take = predicate(mid)
        lo = np.where(take, mid, lo)
        hi = np.where(take, hi, mid)
    return 0.5 * (lo + hi)


class OrliczFunction:
    """Base class: increasing convex function with M(0)=0 and M(1)=1."""

    name: str = "abstract"
    #: log2 of the right end of the domain (0.0 when the family is only
    #: defined up to t = 1, +inf for entire functions).
    domain_hi_log2: float = math.inf
    #: log2 of the left end of the domain; finite only for tabulated data.
    domain_lo_log2: float = -math.inf

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        """log2 M(2**x).  No domain validation; scalar or ndarray."""
        raise NotImplementedError

    def log2_inverse(self, y: ArrayLike) -> ArrayLike:
        """log2 of the inverse function at 2**y."""
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def describe(self) -> dict:
        d = {"family": self.name}
        d.update(self.params())
        return d

    # -- ordinary-scale conveniences ------------------------------------

    def value(self, t: float) -> float:
        if t == 0.0:
            return 0.0
        if t < 0.0:
            raise DomainError("Orlicz functions are evaluated at t >= 0")
        x = math.log2(t)
        if x > self.domain_hi_log2 or x < self.domain_lo_log2:
            raise DomainError(f"t={t} outside the domain of {self.name}")
        return float(2.0 ** self.log2_value(x))

    def inverse(self, y: float) -> float:
        if y == 0.0:
            return 0.0
        if y < 0.0:
            raise DomainError("inverse arguments must be nonnegative")
        ly = math.log2(y)
        hi = self.log2_value(self.domain_hi_log2) if math.isfinite(self.domain_hi_log2) else math.inf
        if ly > hi:
            raise DomainError(f"y={y} exceeds the range of {self.name}")
        return float(2.0 ** self.log2_inverse(ly))

    # -- derivatives ------------------------------------------------------

    _FD_STEP = 1e-5  # relative central-difference step

    def derivative(self, u: float) -> float:
        h = u * self._FD_STEP
        return (self.value(u + h) - self.value(u - h)) / (2.0 * h)

    def second_derivative(self, u: float) -> float:
        h = u * self._FD_STEP
        return (self.value(u + h) - 2.0 * self.value(u) + self.value(u - h)) / (h * h)

    def profile(self) -> "CanonicalProfile":
        cached = getattr(self, "_profile", None)
        if cached is None:
            cached = CanonicalProfile(self)
            self._profile = cached
        return cached


class PowerFunction(OrliczFunction):
    """M(t) = t**q for q >= 1; closed-form inverse and derivatives."""

    name = "power"

    def __init__(self, q: float) -> None:
        if not (q >= 1.0 and math.isfinite(q)):
            raise ValueError("power exponent must satisfy q >= 1")
        self.q = float(q)

    def params(self) -> dict:
        return {"q": self.q}

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        return self.q * x

    def log2_inverse(self, y: ArrayLike) -> ArrayLike:
        return y / self.q

    def derivative(self, u: float) -> float:
        return self.q * u ** (self.q - 1.0)

    def second_derivative(self, u: float) -> float:
        return self.q * (self.q - 1.0) * u ** (self.q - 2.0)


class PowerLogFunction(OrliczFunction):
    """M(t) = t / log(e/t) on (0, 1]; M(1) = 1.

    Writing w = 1 - ln t, the function is t/w with derivative (w+1)/w**2 and
    second derivative (w+2)/(t*w**3), both positive on the domain, so M is
    increasing and convex.  The inverse has no closed form and is computed by
    monotone bisection on the log2 axis.
    """

    name = "powerlog"
    domain_hi_log2 = 0.0

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        w = 1.0 - np.asarray(x, dtype=float) * LN2
        out = np.asarray(x, dtype=float) - np.log2(w)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def log2_inverse(self, y: ArrayLike) -> ArrayLike:
        scalar = np.ndim(y) == 0
        ly = np.asarray(y, dtype=float)
        # Solve F(x) = x - log2(1 - x ln 2) - y = 0.  F is convex increasing
        # with F' = 1 + 1/(1 - x ln 2); starting at x = y (where F <= 0) the
        # first Newton step lands on the F >= 0 side without leaving (y, 0],
        # after which the iteration decreases monotonically to the root.
        x = ly.copy()
        for _ in range(16):
            w = 1.0 - x * LN2
            f = x - np.log2(w) - ly
            x = x - f / (1.0 + 1.0 / w)
        out = x
        if scalar:
            return float(out)
        return out

    def derivative(self, u: float) -> float:
        w = 1.0 - math.log(u)
        return (w + 1.0) / (w * w)

    def second_derivative(self, u: float) -> float:
        w = 1.0 - math.log(u)
        return (w + 2.0) / (u * w * w * w)


def quad_linear_log2(log2_u: ArrayLike) -> ArrayLike:
    """log2 N(2**log2_u) for the kernel N(u) = u**2 if u < 1 else 2u - 1.

    N is C1 at the knee (both sides have value 1 and slope 2), convex, and
    squeezed between min(u, u**2) and 2*min(u, u**2).
    """
    x = np.asarray(log2_u, dtype=float)
    # linear branch: log2(2**(x+1) - 1) = (x+1) + log1p(-2**-(x+1))/ln 2
    with np.errstate(over="ignore"):
        linear = (x + 1.0) + np.log1p(-np.exp2(-(x + 1.0))) / LN2
    out = np.where(x < 0.0, 2.0 * x, linear)
    if np.ndim(log2_u) == 0:
        return float(out)
    return out


class InducedFunction(OrliczFunction):
    """Orlicz function induced by a step function through the kernel N.

    ``M(t) = (sum_k N(t * v_k) * mu_k) / (sum_k N(v_k) * mu_k)`` where
    ``(v_k, mu_k)`` are the atoms of the source.  The normalization makes
    M(1) = 1; the domain is (0, 1].

    A :class:`~orlicz_lab.measure.TowerFunction` source stands for its
    infinite series.  Its discarded atoms stay in the affine branch of N
    throughout the valid domain, so they enter as the single closed-form
    term ``2 * t * (tail linear mass)``; the accompanying constant part of
    the affine branch is a discarded measure of order base**-(base**levels),
    far below double resolution, and is dropped.  The domain floor is where
    that affine-branch guarantee would break.
    """

    name = "induced"
    domain_hi_log2 = 0.0

    def __init__(self, source: StepFunction) -> None:
        if len(source) == 0:
            raise ValueError("induced function needs a nonempty step function")
        self.source = source
        self._lv = np.array([v.log2 for v, _ in source.atoms], dtype=float)
        self._lm = np.array([mu.log2 for _, mu in source.atoms], dtype=float)
        if isinstance(source, TowerFunction):
            self._log2_tail_mass = source.log2_tail_linear_mass
            self.domain_lo_log2 = -source.log2_tail_min_value
        else:
            self._log2_tail_mass = None
        self._log2_norm = self._log2_unnormalized(0.0)

    def params(self) -> dict:
        return {"atoms": len(self._lv), "log2_norm": self._log2_norm}

    def _log2_unnormalized(self, x: ArrayLike) -> ArrayLike:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        args = xs[:, None] + self._lv[None, :]
        terms = quad_linear_log2(args) + self._lm[None, :]
        peak = terms.max(axis=1)
        out = peak + np.log2(np.exp2(terms - peak[:, None]).sum(axis=1))
        if self._log2_tail_mass is not None:
            out = np.logaddexp2(out, xs + 1.0 + self._log2_tail_mass)
        if np.ndim(x) == 0:
            return float(out[0])
        return out

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        return self._log2_unnormalized(x) - self._log2_norm

    def log2_inverse(self, y: ArrayLike) -> ArrayLike:
        scalar = np.ndim(y) == 0
        ly = np.atleast_1d(np.asarray(y, dtype=float))
        lo = ly.copy()  # M(t) <= t by convexity and the normalization
        hi = np.zeros_like(ly)

        def below(mid: np.ndarray) -> np.ndarray:
            return self.log2_value(mid) < ly

        root = _vector_bisect(below, lo, hi)
        return float(root[0]) if scalar else root


class TabulatedFunction(OrliczFunction):
    """Monotone interpolation of (log2 t, log2 M) samples.

    Interpolation is piecewise linear in log-log coordinates, which keeps the
    interpolant increasing whenever the table is.  The final row must be
    (0, 0) so the normalization M(1) = 1 holds.
    """

    name = "tabulated"
    domain_hi_log2 = 0.0

    def __init__(self, log2_t: Sequence[float], log2_m: Sequence[float]) -> None:
        xs = np.asarray(log2_t, dtype=float)
        ys = np.asarray(log2_m, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
            raise ValueError("need matching 1-d sample arrays with >= 2 rows")
        if np.any(np.diff(xs) <= 0.0) or np.any(np.diff(ys) <= 0.0):
            raise ValueError("tabulated samples must be strictly increasing")
        if abs(xs[-1]) > 1e-9 or abs(ys[-1]) > 1e-9:
            raise ValueError("tabulated functions must end at (log2 1, log2 1) = (0, 0)")
        self._xs = xs
        self._ys = ys
        self.domain_lo_log2 = float(xs[0])

    def params(self) -> dict:
        return {"rows": len(self._xs), "domain_lo_log2": self.domain_lo_log2}

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        out = np.interp(np.asarray(x, dtype=float), self._xs, self._ys)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def log2_inverse(self, y: ArrayLike) -> ArrayLike:
        out = np.interp(np.asarray(y, dtype=float), self._ys, self._xs)
        if np.ndim(y) == 0:
            return float(out)
        return out

    def _knots_near(self, u: float) -> int:
        x = math.log2(u)
        return int(np.sum((self._xs >= x - 1.0) & (self._xs <= x + 1.0)))

    def derivative(self, u: float) -> float:
        if self._knots_near(u) < 3:
            raise DomainError("tabulated grid too coarse for derivatives near this point")
        return super().derivative(u)

    def second_derivative(self, u: float) -> float:
        if self._knots_near(u) < 3:
            raise DomainError("tabulated grid too coarse for derivatives near this point")
        return super().second_derivative(u)

    @classmethod
    def from_csv(cls, path: str) -> "TabulatedFunction":
        xs: list[float] = []
        ys: list[float] = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    x, y = float(row[0]), float(row[1])
                except ValueError:
                    continue  # header row
                xs.append(x)
                ys.append(y)
        return cls(xs, ys)


class CanonicalProfile:
    """The decreasing profile t -> 1 / M^{-1}(t) attached to M.

    This is the shape every spanning rearrangement must be equivalent to; it
    is nonincreasing on (0, 1] and equals 1 at t = 1.
    """

    def __init__(self, M: OrliczFunction) -> None:
        self.M = M

    def log2_value(self, x: ArrayLike) -> ArrayLike:
        out = -np.asarray(self.M.log2_inverse(x), dtype=float)
        if np.ndim(x) == 0:
            return float(out)
        return out

    __call__ = log2_value

    def value(self, t: float) -> float:
        if not t > 0.0:
            raise DomainError("profile arguments must be positive")
        return float(2.0 ** self.log2_value(math.log2(t)))


def validate_convexity(M: OrliczFunction, grid: Grid, tol: float = 1e-9) -> bool:
    """Midpoint convexity of M on consecutive grid pairs, to tolerance tol."""
    ts = np.exp2(grid.as_array())
    for t1, t2 in zip(ts, ts[1:]):
        mid = 0.5 * (t1 + t2)
        if M.value(mid) > 0.5 * (M.value(t1) + M.value(t2)) + tol * M.value(t2):
            return False
    return True


def growth_gap(M: OrliczFunction, p: float, u: float) -> float:
    """Second-order diagnostic -2p*M(u) + (p+1)*u*M'(u) - u**2*M''(u).

    For the pure power t**q this equals (q - p) * (2 - q) * u**q: positive
    exactly when the growth exponent sits strictly between p and 2.
    """
    if u <= 0.0:
        raise DomainError("the diagnostic is evaluated at u > 0")
    return (
        -2.0 * p * M.value(u)
        + (p + 1.0) * u * M.derivative(u)
        - u * u * M.second_derivative(u)
    )


def luxemburg_norm(M: OrliczFunction, coefficients: Sequence[float], tol: float = 1e-10) -> float:
    """Luxemburg norm of a finitely supported sequence in the space of M.

    inf { rho > 0 : sum_k M(|a_k| / rho) <= 1 }, computed by bisection after
    rescaling by max |a_k| so every evaluation stays inside the domain even
    for families that live on (0, 1].
    """
    a = np.abs(np.asarray(coefficients, dtype=float))
    if a.ndim != 1:
        raise ValueError("coefficients must form a 1-d sequence")
    a = a[a > 0.0]
    if a.size == 0:
        return 0.0
    amax = float(a.max())
    if a.size == 1:
        return amax  # M(1) = 1 makes unit vectors have norm 1
    log2_b = np.log2(a / amax)

    def residual(rho: float) -> float:
        return float(np.exp2(M.log2_value(log2_b - math.log2(rho))).sum())

    rho_hi = float(2.0 ** -M.log2_inverse(-math.log2(a.size)))
    rho_hi *= 1.0 + 16.0 * tol  # cushion so the root stays strictly inside
    rho = bisect_monotone(residual, 1.0, (1.0, rho_hi), tol=tol)
    return amax * rho


def log2_dilation_sup(M: OrliczFunction, log2_s: float, grid: Grid) -> float:
    """log2 of sup over grid t of M(s*t) / M(t)."""
    xs = grid.as_array()
    keep = (xs + log2_s <= M.domain_hi_log2) & (xs + log2_s >= M.domain_lo_log2)
    keep &= (xs <= M.domain_hi_log2) & (xs >= M.domain_lo_log2)
    if not np.any(keep):
        raise DomainError("no grid point keeps s*t inside the domain")
    xs = xs[keep]
    return float(np.max(M.log2_value(xs + log2_s) - M.log2_value(xs)))


def log2_dilation_inf(M: OrliczFunction, log2_s: float, grid: Grid) -> float:
    """log2 of inf over grid t of M(s*t) / M(t)."""
    xs = grid.as_array()
    keep = (xs + log2_s <= M.domain_hi_log2) & (xs + log2_s >= M.domain_lo_log2)
    keep &= (xs <= M.domain_hi_log2) & (xs >= M.domain_lo_log2)
    if not np.any(keep):
        raise DomainError("no grid point keeps s*t inside the domain")
    xs = xs[keep]
    return float(np.min(M.log2_value(xs + log2_s) - M.log2_value(xs)))


def dilation_sup(M: OrliczFunction, log2_s: float, grid: Grid) -> float:
    return float(2.0 ** log2_dilation_sup(M, log2_s, grid))


def dilation_inf(M: OrliczFunction, log2_s: float, grid: Grid) -> float:
    return float(2.0 ** log2_dilation_inf(M, log2_s, grid))


def weighted_profile_dilation(
    M: OrliczFunction,
    r: float,
    n: int,
    grid: Grid,
    direction: str = "up",
) -> float:
    """Weighted dilation of the canonical profile m(t) = 1/M^{-1}(t).

    direction "up":   n * sup_t m(n*t)**r / m(t)**r   (grid restricted so
    n*t stays in (0, 1]); direction "down": (1/n) * sup_t m(t/n)**r / m(t)**r.
    Both tend to 0 as n grows exactly when the profile has the needed
    integrability margin.
    """
    if n < 1 or int(n) != n:
        raise ValueError("the weight n must be a positive integer")
    shift = math.log2(n)
    profile = M.profile()
    xs = grid.as_array()
    hi = M.log2_value(M.domain_hi_log2) if math.isfinite(M.domain_hi_log2) else math.inf
    if direction == "up":
        keep = xs + shift <= hi
        if not np.any(keep):
            raise DomainError("no grid point keeps n*t inside the profile domain")
        xs = xs[keep]
        gap = profile.log2_value(xs + shift) - profile.log2_value(xs)
        return float(2.0 ** (shift + r * np.max(gap)))
    if direction == "down":
        gap = profile.log2_value(xs - shift) - profile.log2_value(xs)
        return float(2.0 ** (-shift + r * np.max(gap)))
    raise ValueError("direction must be 'up' or 'down'")


@dataclass(frozen=True)
class ExponentEstimates:
    """Dilation-exponent estimates with the constant capped at ``cap``.

    ``alpha_lower`` is the largest p with M(s*t) <= cap * s**p * M(t) on the
    sampled pairs; ``beta_upper`` the smallest q with M(s*t) >= s**q * M(t)/cap.
    The least-squares slopes of the two dilation logs and their worst-fit
    residuals are reported alongside.
    """

    alpha_lower: float
    beta_upper: float
    slope_upper: float
    slope_lower: float
    residual_upper: float
    residual_lower: float
    cap: float
    t_descriptor: str
    s_descriptor: str

    def to_dict(self) -> dict:
        return {
            "alpha_lower": self.alpha_lower,
            "beta_upper": self.beta_upper,
            "slope_upper": self.slope_upper,
            "slope_lower": self.slope_lower,
            "residual_upper": self.residual_upper,
            "residual_lower": self.residual_lower,
            "cap": self.cap,
            "t_grid": self.t_descriptor,
            "s_grid": self.s_descriptor,
        }


def _fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), resid


def exponent_estimates(
    M: OrliczFunction,
    t_grid: Grid,
    s_grid: Optional[Grid] = None,
    cap: float = 10.0,
) -> ExponentEstimates:
    """Convexity/concavity exponent window of M from its dilation functions.

    Requires both grids to span at least six decades; wider grids tighten the
    estimates since the cap contributes log2(cap)/|log2 s| of slack.
    """
    if cap < 1.0:
        raise ValueError("cap must be at least 1")
    if s_grid is None:
        lo = min(t_grid.lo_log2, -_MIN_INDEX_SPAN)
        s_grid = Grid.log_uniform(lo, -1.0, 33)
    if t_grid.span_log2() < _MIN_INDEX_SPAN or (-s_grid.lo_log2) < _MIN_INDEX_SPAN:
        raise ValueError("index estimation needs grids spanning at least six decades")
    if s_grid.hi_log2 >= 0.0:
        raise ValueError("dilation factors must satisfy s < 1")
    xs = t_grid.as_array()
    xt = xs[(xs <= M.domain_hi_log2) & (xs >= M.domain_lo_log2)]
    if xt.size == 0:
        raise DomainError("t grid misses the domain entirely")
    ss = s_grid.as_array()
    pair = xt[None, :] + ss[:, None]
    ok = (pair >= M.domain_lo_log2) & (pair <= M.domain_hi_log2)
    base = M.log2_value(xt)[None, :]
    ratio = np.where(ok, M.log2_value(pair) - base, np.nan)
    rows = np.any(ok, axis=1)
    if not np.any(rows):
        raise DomainError("no admissible (s, t) pair stays inside the domain")
    ss = ss[rows]
    ratio = ratio[rows]
    D = np.nanmax(ratio, axis=1)
    L = np.nanmin(ratio, axis=1)
    lc = math.log2(cap)
    alpha_lower = float(np.min((D - lc) / ss))
    beta_upper = float(np.max((L + lc) / ss))
    slope_upper, resid_upper = _fit_line(ss, D)
    slope_lower, resid_lower = _fit_line(ss, L)
    return ExponentEstimates(
        alpha_lower,
        beta_upper,
        slope_upper,
        slope_lower,
        resid_upper,
        resid_lower,
        cap,
        t_grid.descriptor,
        s_grid.descriptor,
    )


@dataclass(frozen=True)
class MarginReport:
    """Distance of the exponent window to the endpoints p and 2."""

    eps_convex: float
    eps_concave: float
    margin: float
    verdict: bool
    estimates: ExponentEstimates

    def to_dict(self) -> dict:
        return {
            "eps_convex": self.eps_convex,
            "eps_concave": self.eps_concave,
            "margin": self.margin,
            "verdict": self.verdict,
            "estimates": self.estimates.to_dict(),
        }


def epsilon_margin(
    M: OrliczFunction,
    p: float,
    t_grid: Grid,
    margin: float = 0.02,
    cap: float = 10.0,
    s_grid: Optional[Grid] = None,
) -> MarginReport:
    """Margins eps_convex = alpha_lower - p and eps_concave = 2 - beta_upper.

    The verdict is True when both margins clear ``margin``: M is then
    (p + eps)-convex and (2 - eps)-concave with constant at most ``cap`` on
    the sampled pairs.
    """
    if not (1.0 <= p < 2.0):
        raise ValueError("the convexity exponent must satisfy 1 <= p < 2")
    est = exponent_estimates(M, t_grid, s_grid=s_grid, cap=cap)
    eps_convex = est.alpha_lower - p
    eps_concave = 2.0 - est.beta_upper
    verdict = eps_convex > margin and eps_concave > margin
    return MarginReport(eps_convex, eps_concave, margin, verdict, est)


def make_family(name: str, q: Optional[float] = None, source=None, csv_path: Optional[str] = None) -> OrliczFunction:
    """Family factory used by the CLI: power, powerlog, induced, tabulated."""
    key = name.lower()
    if key == "power":
        if q is None:
            raise ValueError("the power family needs an exponent q")
        return PowerFunction(q)
    if key == "powerlog":
        return PowerLogFunction()
    if key == "induced":
        if source is None:
            raise ValueError("the induced family needs a step-function source")
        return InducedFunction(source)
    if key == "tabulated":
        if csv_path is None:
            raise ValueError("the tabulated family needs a CSV path")
        return TabulatedFunction.from_csv(csv_path)
    raise ValueError(f"unknown family {name!r}")
